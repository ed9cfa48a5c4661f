#pragma once

#include "cvxproj/linalg.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cvxproj {

class NotSharpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Sign with a relative tolerance for floats, exact otherwise.
template <class T> int tsign(const T& v, double scale) {
    if constexpr (is_exact_v<T>) {
        (void)scale;
        return sign(v);
    } else {
        return std::abs(v) <= 1e-10 * std::max(scale, 1e-300) ? 0 : sign(v);
    }
}

template <class T> double magnitude(const Vec<T>& v) {
    double m = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(to_double(v(i))));
    return m;
}

template <class T> bool equal_vec(const Vec<T>& a, const Vec<T>& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (tsign<T>(a(i) - b(i), 1.0) != 0) return false;
    return true;
}

template <class T> bool less_vec(const Vec<T>& a, const Vec<T>& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        int s = tsign<T>(a(i) - b(i), 1.0);
        if (s != 0) return s < 0;
    }
    return false;
}

inline void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k < 0 || k > m) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

template <class T> Mat<T> columns(const std::vector<Vec<T>>& vs, const std::vector<int>& ids) {
    Mat<T> m(vs.front().size(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t j = 0; j < ids.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[static_cast<std::size_t>(ids[j])];
    return m;
}

template <class T> std::vector<Vec<T>> dedupe_rays(const std::vector<Vec<T>>& vs) {
    std::vector<Vec<T>> out;
    for (const auto& v : vs) {
        Vec<T> r = normalize_ray<T>(v);
        bool dup = false;
        for (const auto& o : out)
            if (equal_vec<T>(o, r)) { dup = true; break; }
        if (!dup) out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const Vec<T>& a, const Vec<T>& b) { return less_vec<T>(a, b); });
    return out;
}

// Facets of the full-dimensional cone generated by g in R^k, as covectors
// beta with beta(g) <= 0, each with the indices of generators lying on it.
template <class T> struct FacetData {
    Vec<T> normal;
    std::vector<int> on;
};

template <class T> std::vector<FacetData<T>> facets_of(const std::vector<Vec<T>>& g) {
    const int m = static_cast<int>(g.size());
    const int k = static_cast<int>(g.front().size());
    std::vector<FacetData<T>> out;
    if (k == 1) {
        // A half-line has the single facet {0}; its normal is -sign(g).
        int s = 0;
        for (const auto& v : g) {
            int sv = tsign<T>(v(0), magnitude(v));
            if (s == 0) s = sv;
            else if (sv != 0 && sv != s) return out;  // the whole line
        }
        Vec<T> beta(1);
        beta(0) = T(-s);
        out.push_back({beta, {}});
        return out;
    }
    for_each_subset(m, k - 1, [&](const std::vector<int>& sub) {
        Mat<T> rows = columns(g, sub).transpose();
        Mat<T> ker = nullspace<T>(rows);
        if (ker.cols() != 1) return;
        Vec<T> beta = ker.col(0);
        double bmag = magnitude(beta);
        int side = 0;
        std::vector<int> on;
        for (int i = 0; i < m; ++i) {
            const Vec<T>& gi = g[static_cast<std::size_t>(i)];
            int s = tsign<T>(beta.dot(gi), bmag * magnitude(gi));
            if (s == 0) { on.push_back(i); continue; }
            if (side == 0) side = s;
            else if (s != side) return;
        }
        if (side == 0) return;  // all generators on one hyperplane
        if (side > 0) beta = -beta;
        beta = normalize_ray<T>(beta);
        for (const auto& f : out)
            if (equal_vec<T>(f.normal, beta)) return;
        out.push_back({beta, on});
    });
    return out;
}

// Coordinates of the vectors vs (spanning an r-dimensional subspace) in a basis of that subspace.
template <class T> std::vector<Vec<T>> reduce_to_span(const std::vector<Vec<T>>& vs) {
    Mat<T> cols(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = vs[j];
    const Eigen::Index r = rank<T>(cols);
    // Pick r independent columns greedily, then r independent rows of that basis.
    std::vector<int> basis_ids;
    for (Eigen::Index j = 0; j < cols.cols() && static_cast<Eigen::Index>(basis_ids.size()) < r; ++j) {
        auto trial = basis_ids;
        trial.push_back(static_cast<int>(j));
        if (rank<T>(columns(vs, trial)) == static_cast<Eigen::Index>(trial.size())) basis_ids = trial;
    }
    Mat<T> b = columns(vs, basis_ids);
    std::vector<Eigen::Index> row_ids;
    for (Eigen::Index i = 0; i < b.rows() && static_cast<Eigen::Index>(row_ids.size()) < r; ++i) {
        Mat<T> sub(static_cast<Eigen::Index>(row_ids.size()) + 1, r);
        for (std::size_t t = 0; t < row_ids.size(); ++t) sub.row(static_cast<Eigen::Index>(t)) = b.row(row_ids[t]);
        sub.row(static_cast<Eigen::Index>(row_ids.size())) = b.row(i);
        if (rank<T>(sub) == sub.rows()) row_ids.push_back(i);
    }
    Mat<T> square(r, r);
    for (Eigen::Index t = 0; t < r; ++t) square.row(t) = b.row(row_ids[static_cast<std::size_t>(t)]);
    Mat<T> inv = inverse<T>(square);
    std::vector<Vec<T>> out;
    for (const auto& v : vs) {
        Vec<T> sel(r);
        for (Eigen::Index t = 0; t < r; ++t) sel(t) = v(row_ids[static_cast<std::size_t>(t)]);
        out.push_back(inv * sel);
    }
    return out;
}

// Pulling triangulation of the pointed full-dimensional cone generated by g:
// cone the first generator over a triangulation of every facet avoiding it.
template <class T> std::vector<std::vector<int>> pulling_triangulation(const std::vector<Vec<T>>& g,
                                                                       const std::vector<int>& ids) {
    const auto k = static_cast<std::size_t>(g.front().size());
    if (g.size() == k) return {ids};
    if (g.size() < k) throw std::logic_error("pulling_triangulation: cone not full-dimensional");
    std::vector<std::vector<int>> out;
    for (const auto& f : facets_of(g)) {
        if (std::find(f.on.begin(), f.on.end(), 0) != f.on.end()) continue;
        std::vector<Vec<T>> sub;
        std::vector<int> sub_ids;
        for (int i : f.on) {
            sub.push_back(g[static_cast<std::size_t>(i)]);
            sub_ids.push_back(ids[static_cast<std::size_t>(i)]);
        }
        for (auto s : pulling_triangulation(reduce_to_span(sub), sub_ids)) {
            s.push_back(ids[0]);
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace detail

template <class T> struct DualSimplex {
    std::vector<Vec<T>> covectors;  // n covectors generating a simplicial piece of the dual cone
    T abs_det;
};

// Polytopal convex cone C = cone(rays) = {x : beta(x) <= 0 for every facet beta}.
template <class T> class PolyCone {
public:
    static PolyCone from_rays(const std::vector<Vec<T>>& rays) {
        if (rays.empty()) throw std::invalid_argument("PolyCone: no rays");
        PolyCone c;
        c.dim_ = rays.front().size();
        for (const auto& r : rays)
            if (r.size() != c.dim_) throw std::invalid_argument("PolyCone: ray dimension mismatch");
        auto gens = detail::dedupe_rays(rays);
        Mat<T> all(c.dim_, static_cast<Eigen::Index>(gens.size()));
        for (std::size_t j = 0; j < gens.size(); ++j) all.col(static_cast<Eigen::Index>(j)) = gens[j];
        if (rank<T>(all) < c.dim_) {
            c.rays_ = gens;
            return c;  // empty interior: not sharp
        }
        auto fd = detail::facets_of(gens);
        std::vector<Vec<T>> facets;
        for (const auto& f : fd) facets.push_back(f.normal);
        c.facets_ = detail::dedupe_rays(facets);
        if (c.facets_.empty()) {
            c.rays_ = gens;
            return c;
        }
        Mat<T> fm(c.dim_, static_cast<Eigen::Index>(c.facets_.size()));
        for (std::size_t j = 0; j < c.facets_.size(); ++j) fm.col(static_cast<Eigen::Index>(j)) = c.facets_[j];
        c.sharp_ = rank<T>(fm) == c.dim_;
        // Keep extreme rays only: those lying on facets of total rank n-1.
        for (const auto& r : gens) {
            std::vector<Vec<T>> tight;
            for (const auto& f : c.facets_)
                if (detail::tsign<T>(f.dot(r), detail::magnitude(f) * detail::magnitude(r)) == 0) tight.push_back(f);
            if (tight.empty()) continue;
            Mat<T> tm(c.dim_, static_cast<Eigen::Index>(tight.size()));
            for (std::size_t j = 0; j < tight.size(); ++j) tm.col(static_cast<Eigen::Index>(j)) = tight[j];
            if (rank<T>(tm) == c.dim_ - 1 || c.dim_ == 1) c.rays_.push_back(r);
        }
        if (c.sharp_) c.triangulate();
        return c;
    }

    // C = {x : beta_i(x) <= 0}.
    static PolyCone from_facets(const std::vector<Vec<T>>& facets) {
        PolyCone dual = from_rays(facets);
        if (!dual.sharp_) {
            PolyCone c;
            c.dim_ = facets.front().size();
            c.facets_ = detail::dedupe_rays(facets);
            return c;
        }
        return from_rays(dual.facets_);
    }

    Eigen::Index dim() const { return dim_; }
    const std::vector<Vec<T>>& rays() const { return rays_; }
    const std::vector<Vec<T>>& facets() const { return facets_; }
    const std::vector<DualSimplex<T>>& dual_triangulation() const { return triangulation_; }
    bool sharp() const { return sharp_; }

    // x in the open cone: every facet strictly negative.
    bool contains(const Eigen::VectorXd& x) const {
        for (const auto& f : facets_)
            if (embed(f).dot(x) >= 0) return false;
        return sharp_;
    }

private:
    void triangulate() {
        std::vector<int> ids(facets_.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
        for (const auto& simplex : detail::pulling_triangulation(facets_, ids)) {
            DualSimplex<T> s;
            Mat<T> b(dim_, dim_);
            for (std::size_t j = 0; j < simplex.size(); ++j) {
                s.covectors.push_back(facets_[static_cast<std::size_t>(simplex[j])]);
                b.col(static_cast<Eigen::Index>(j)) = s.covectors.back();
            }
            s.abs_det = abs_value(determinant<T>(b));
            triangulation_.push_back(std::move(s));
        }
    }

    Eigen::Index dim_ = 0;
    std::vector<Vec<T>> rays_;
    std::vector<Vec<T>> facets_;
    std::vector<DualSimplex<T>> triangulation_;
    bool sharp_ = false;
};

template <class T> bool is_sharp(const PolyCone<T>& c) { return c.sharp(); }

// C* = {alpha : alpha(x) < 0 on closure(C) - 0}, recomputed from the facet covectors.
template <class T> PolyCone<T> dual_cone(const PolyCone<T>& c) {
    if (!c.sharp()) throw NotSharpError("dual_cone: cone is not sharp, dual has empty interior");
    return PolyCone<T>::from_rays(c.facets());
}

// g C for invertible g.
template <class T> PolyCone<T> transform(const PolyCone<T>& c, const Mat<T>& g) {
    std::vector<Vec<T>> rays;
    for (const auto& r : c.rays()) rays.push_back(g * r);
    return PolyCone<T>::from_rays(rays);
}

template <class T> bool same_cone(const PolyCone<T>& a, const PolyCone<T>& b) {
    if (a.dim() != b.dim() || a.rays().size() != b.rays().size()) return false;
    for (std::size_t i = 0; i < a.rays().size(); ++i)
        if (!detail::equal_vec<T>(a.rays()[i], b.rays()[i])) return false;
    return true;
}

// f_C(x) = sum_j |det B_j| / prod_i (-beta_{j,i}(x)).
template <class T> double characteristic_function(const PolyCone<T>& c, const Eigen::VectorXd& x) {
    if (!c.sharp()) throw NotSharpError("characteristic_function: cone is not sharp");
    if (x.size() != c.dim()) throw std::invalid_argument("characteristic_function: dimension mismatch");
    for (const auto& f : c.facets())
        if (embed(f).dot(x) >= 0) throw std::domain_error("characteristic_function: point not interior");
    double total = 0;
    for (const auto& s : c.dual_triangulation()) {
        double term = to_double(s.abs_det);
        for (const auto& b : s.covectors) term /= -embed(b).dot(x);
        total += term;
    }
    return total;
}

template <class T> Eigen::VectorXd characteristic_gradient(const PolyCone<T>& c, const Eigen::VectorXd& x) {
    (void)characteristic_function(c, x);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(c.dim());
    for (const auto& s : c.dual_triangulation()) {
        double term = to_double(s.abs_det);
        Eigen::VectorXd inner = Eigen::VectorXd::Zero(c.dim());
        for (const auto& b : s.covectors) {
            Eigen::VectorXd bd = embed(b);
            double v = -bd.dot(x);
            term /= v;
            inner += bd / v;
        }
        grad += term * inner;
    }
    return grad;
}

}  // namespace cvxproj
