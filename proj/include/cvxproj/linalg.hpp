#pragma once

#include "cvxproj/scalar.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

namespace cvxproj {

template <class T> using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T> using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
using MatQ = Mat<Rational>;
using MatS = Mat<QuadSqrt2>;
using VecQ = Vec<Rational>;
using VecS = Vec<QuadSqrt2>;

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class Derived>
Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> embed(const Eigen::MatrixBase<Derived>& m) {
    Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

template <class T> Mat<T> identity(Eigen::Index n) {
    Mat<T> m = Mat<T>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
}

template <class T> bool is_zero(const T& x) { return sign(x) == 0; }

inline bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

struct SingularProfile {
    Eigen::VectorXd sigmas;   // descending
    Eigen::VectorXd ratios;   // sigma_k / sigma_{k+1}
    Eigen::MatrixXd left;     // columns are left singular vectors
    Eigen::MatrixXd right;    // columns are right singular vectors
};

SingularProfile svd(const Eigen::MatrixXd& m);

// Moduli of all complex eigenvalues, descending. Floats go through a block
// triangular split along the sparsity graph before the dense solver, so
// triangular and block-triangular group elements keep exact diagonal data.
std::vector<double> eigen_moduli(const Eigen::MatrixXd& m);
std::vector<double> eigen_moduli(const MatQ& m);
std::vector<double> eigen_moduli(const MatS& m);

// Exact Gauss-Jordan elimination over Q or Q(sqrt 2).
template <class T> struct Echelon {
    Mat<T> reduced;
    std::vector<Eigen::Index> pivots;
};

template <class T> Echelon<T> reduced_row_echelon(Mat<T> a) {
    static_assert(is_exact_v<T>, "exact elimination needs an exact field");
    Echelon<T> out;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index piv = -1;
        for (Eigen::Index r = row; r < a.rows(); ++r)
            if (!is_zero(a(r, col))) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != row) a.row(piv).swap(a.row(row));
        T inv = T(1) / a(row, col);
        for (Eigen::Index c = col; c < a.cols(); ++c) a(row, c) *= inv;
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (r == row || is_zero(a(r, col))) continue;
            T f = a(r, col);
            for (Eigen::Index c = col; c < a.cols(); ++c) a(r, c) -= f * a(row, c);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(a);
    return out;
}

template <class T> Eigen::Index rank(const Mat<T>& a) {
    if constexpr (is_exact_v<T>) {
        return static_cast<Eigen::Index>(reduced_row_echelon(a).pivots.size());
    } else {
        if (a.size() == 0) return 0;
        Eigen::JacobiSVD<Eigen::MatrixXd> s(a);
        double top = s.singularValues().size() ? s.singularValues()(0) : 0.0;
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < s.singularValues().size(); ++i)
            if (s.singularValues()(i) > 1e-10 * std::max(1.0, top)) ++r;
        return r;
    }
}

// Columns form a basis of {v : a v = 0}.
template <class T> Mat<T> nullspace(const Mat<T>& a) {
    const Eigen::Index n = a.cols();
    if constexpr (is_exact_v<T>) {
        auto e = reduced_row_echelon(a);
        std::vector<bool> is_piv(static_cast<std::size_t>(n), false);
        for (auto p : e.pivots) is_piv[static_cast<std::size_t>(p)] = true;
        std::vector<Eigen::Index> free;
        for (Eigen::Index c = 0; c < n; ++c)
            if (!is_piv[static_cast<std::size_t>(c)]) free.push_back(c);
        Mat<T> basis = Mat<T>::Zero(n, static_cast<Eigen::Index>(free.size()));
        for (std::size_t k = 0; k < free.size(); ++k) {
            basis(free[k], static_cast<Eigen::Index>(k)) = T(1);
            for (std::size_t r = 0; r < e.pivots.size(); ++r)
                basis(e.pivots[r], static_cast<Eigen::Index>(k)) = -e.reduced(static_cast<Eigen::Index>(r), free[k]);
        }
        return basis;
    } else {
        if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
        Eigen::JacobiSVD<Eigen::MatrixXd> s(a, Eigen::ComputeFullV);
        const auto& sv = s.singularValues();
        double top = sv.size() ? sv(0) : 0.0;
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-10 * std::max(1.0, top)) ++r;
        return s.matrixV().rightCols(n - r);
    }
}

template <class T> Mat<T> inverse(const Mat<T>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
    const Eigen::Index n = a.rows();
    if constexpr (is_exact_v<T>) {
        Mat<T> aug(n, 2 * n);
        aug.leftCols(n) = a;
        aug.rightCols(n) = identity<T>(n);
        auto e = reduced_row_echelon(aug);
        if (static_cast<Eigen::Index>(e.pivots.size()) < n || e.pivots[static_cast<std::size_t>(n - 1)] != n - 1)
            throw NumericError("inverse: singular matrix");
        return e.reduced.rightCols(n);
    } else {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible()) throw NumericError("inverse: singular matrix");
        return lu.inverse();
    }
}

template <class T> T determinant(const Mat<T>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
    if constexpr (is_exact_v<T>) {
        Mat<T> m = a;
        const Eigen::Index n = m.rows();
        T det(1);
        for (Eigen::Index c = 0; c < n; ++c) {
            Eigen::Index piv = -1;
            for (Eigen::Index r = c; r < n; ++r)
                if (!is_zero(m(r, c))) { piv = r; break; }
            if (piv < 0) return T(0);
            if (piv != c) { m.row(piv).swap(m.row(c)); det = -det; }
            det *= m(c, c);
            for (Eigen::Index r = c + 1; r < n; ++r) {
                if (is_zero(m(r, c))) continue;
                T f = m(r, c) / m(c, c);
                for (Eigen::Index k = c; k < n; ++k) m(r, k) -= f * m(c, k);
            }
        }
        return det;
    } else {
        return a.determinant();
    }
}

template <class T> T abs_value(const T& x) { return sign(x) < 0 ? T(-x) : x; }

// Scale so the max-abs coordinate is 1 and the first nonzero coordinate is positive.
template <class T> Vec<T> normalize_projective(const Vec<T>& v) {
    Eigen::Index arg = -1;
    T best(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        T a = abs_value(v(i));
        if (arg < 0 || a > best) { best = a; arg = i; }
    }
    if (arg < 0 || is_zero(best)) throw std::invalid_argument("normalize: zero vector");
    Vec<T> out = v;
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = out(i) / best;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if constexpr (is_exact_v<T>) {
            if (is_zero(out(i))) continue;
        } else {
            if (std::abs(out(i)) <= 1e-300) continue;
        }
        if (sign(out(i)) < 0) out = -out;
        break;
    }
    return out;
}

// Positive rescaling only: the max-abs coordinate becomes +1 or -1.
template <class T> Vec<T> normalize_ray(const Vec<T>& v) {
    T best(0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        T a = abs_value(v(i));
        if (a > best) best = a;
    }
    if (is_zero(best)) throw std::invalid_argument("normalize: zero vector");
    Vec<T> out = v;
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = out(i) / best;
    return out;
}

inline double sum_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().sum(); }
inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace cvxproj
