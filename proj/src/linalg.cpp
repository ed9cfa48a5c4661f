#include "cvxproj/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

namespace cvxproj {

SingularProfile svd(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("svd: matrix not square");
    if (!m.allFinite()) throw std::invalid_argument("svd: non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXd> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SingularProfile p;
    p.sigmas = s.singularValues();
    p.left = s.matrixU();
    p.right = s.matrixV();
    const Eigen::Index n = p.sigmas.size();
    p.ratios.resize(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index k = 0; k + 1 < n; ++k)
        p.ratios(k) = p.sigmas(k + 1) > 0 ? p.sigmas(k) / p.sigmas(k + 1)
                                          : std::numeric_limits<double>::infinity();
    return p;
}

namespace {

// Tarjan strongly connected components of the graph i -> j when m(i,j) != 0.
std::vector<std::vector<Eigen::Index>> sparsity_components(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> stack;
    std::vector<std::vector<Eigen::Index>> comps;
    Eigen::Index counter = 0;
    std::function<void(Eigen::Index)> visit = [&](Eigen::Index v) {
        auto uv = static_cast<std::size_t>(v);
        index[uv] = low[uv] = counter++;
        stack.push_back(v);
        on_stack[uv] = true;
        for (Eigen::Index w = 0; w < n; ++w) {
            if (w == v || m(v, w) == 0.0) continue;
            auto uw = static_cast<std::size_t>(w);
            if (index[uw] < 0) {
                visit(w);
                low[uv] = std::min(low[uv], low[uw]);
            } else if (on_stack[uw]) {
                low[uv] = std::min(low[uv], index[uw]);
            }
        }
        if (low[uv] == index[uv]) {
            std::vector<Eigen::Index> comp;
            Eigen::Index w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[static_cast<std::size_t>(w)] = false;
                comp.push_back(w);
            } while (w != v);
            comps.push_back(std::move(comp));
        }
    };
    for (Eigen::Index v = 0; v < n; ++v)
        if (index[static_cast<std::size_t>(v)] < 0) visit(v);
    return comps;
}

// A defective eigenvalue of multiplicity s is computed as a ring of radius about
// (u * n)^(1/s) around the true value, while the ring's centroid stays accurate.
// Collapse such rings to their centroid, largest multiplicity first.
double defect_radius(std::size_t s, Eigen::Index n) {
    return 4 * std::pow(1e-14 * static_cast<double>(n), 1.0 / static_cast<double>(s));
}

std::vector<double> clustered_moduli(const std::vector<std::complex<double>>& ev) {
    const std::size_t n = ev.size();
    std::vector<double> out(n);
    std::vector<bool> done(n, false);
    for (std::size_t s = n; s >= 2; --s) {
        const double rho = defect_radius(s, static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            std::vector<std::size_t> near;
            for (std::size_t j = 0; j < n; ++j)
                if (!done[j] && std::abs(ev[j] - ev[i]) <= 2 * rho * std::max(1.0, std::abs(ev[i]))) near.push_back(j);
            if (near.size() < s) continue;
            std::complex<double> c = 0;
            for (std::size_t j : near) c += ev[j];
            c /= static_cast<double>(near.size());
            bool tight = true;
            for (std::size_t j : near) tight = tight && std::abs(ev[j] - c) <= rho * std::max(1.0, std::abs(c));
            if (!tight) continue;
            for (std::size_t j : near) {
                out[j] = std::abs(c);
                done[j] = true;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!done[i]) out[i] = std::abs(ev[i]);
    return out;
}

std::vector<double> dense_moduli(const Eigen::MatrixXd& block) {
    std::vector<double> out;
    if (block.rows() == 1) {
        out.push_back(std::abs(block(0, 0)));
        return out;
    }
    if (block.rows() == 2) {
        // Closed form keeps rotation-like blocks at full precision.
        double tr = block.trace(), det = block.determinant();
        double disc = tr * tr / 4 - det;
        if (disc < 0) {
            double mod = std::sqrt(std::abs(det));
            out.assign(2, mod);
        } else {
            double r = std::sqrt(disc);
            if (r <= defect_radius(2, 2) * std::max(1.0, std::abs(tr / 2))) {
                out.assign(2, std::sqrt(std::abs(det)));
                return out;
            }
            double big = tr / 2 + (tr >= 0 ? r : -r);
            double small = big != 0 ? det / big : tr / 2 - (tr >= 0 ? r : -r);
            out.push_back(std::abs(big));
            out.push_back(std::abs(small));
        }
        return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(block, false);
    if (es.info() != Eigen::Success) throw NumericError("eigen_moduli: eigen solver failed");
    std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return clustered_moduli(ev);
}

template <class T> using Poly = std::vector<T>;  // coefficients, lowest degree first

template <class T> void trim(Poly<T>& p) {
    while (!p.empty() && is_zero(p.back())) p.pop_back();
}

template <class T> Poly<T> derivative(const Poly<T>& p) {
    Poly<T> d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * T(static_cast<long>(i)));
    trim(d);
    return d;
}

template <class T> std::pair<Poly<T>, Poly<T>> divmod(Poly<T> a, const Poly<T>& b) {
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    trim(a);
    Poly<T> q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, T(0));
    while (!a.empty() && a.size() >= b.size()) {
        std::size_t shift = a.size() - b.size();
        T f = a.back() / b.back();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

template <class T> Poly<T> monic(Poly<T> p) {
    trim(p);
    if (p.empty()) return p;
    T lead = p.back();
    for (auto& c : p) c = c / lead;
    return p;
}

template <class T> Poly<T> gcd(Poly<T> a, Poly<T> b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

// Faddeev-LeVerrier; exact over a field of characteristic zero.
template <class T> Poly<T> charpoly(const Mat<T>& a) {
    const Eigen::Index n = a.rows();
    Poly<T> c(static_cast<std::size_t>(n + 1), T(0));
    c[static_cast<std::size_t>(n)] = T(1);
    Mat<T> m = Mat<T>::Zero(n, n);
    Mat<T> id = identity<T>(n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
        Mat<T> am = a * m;
        T tr(0);
        for (Eigen::Index i = 0; i < n; ++i) tr += am(i, i);
        c[static_cast<std::size_t>(n - k)] = -tr / T(static_cast<long>(k));
    }
    return c;
}

// Yun square-free decomposition: returns (factor, multiplicity).
template <class T> std::vector<std::pair<Poly<T>, int>> squarefree(const Poly<T>& f) {
    std::vector<std::pair<Poly<T>, int>> out;
    Poly<T> p = monic(f);
    Poly<T> g = gcd(p, derivative(p));
    Poly<T> w = divmod(p, g).first;
    int mult = 1;
    while (w.size() > 1) {
        Poly<T> y = gcd(w, g);
        Poly<T> z = divmod(w, y).first;
        if (z.size() > 1) out.emplace_back(monic(z), mult);
        g = divmod(g, y).first;
        w = y;
        ++mult;
    }
    return out;
}

std::vector<double> simple_root_moduli(const std::vector<double>& monic_coeffs) {
    const std::size_t deg = monic_coeffs.size() - 1;
    std::vector<double> out;
    if (deg == 0) return out;
    if (deg == 1) {
        out.push_back(std::abs(monic_coeffs[0]));
        return out;
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
    for (std::size_t i = 1; i < deg; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i)
        comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -monic_coeffs[i];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericError("eigen_moduli: companion solver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(es.eigenvalues()(i)));
    return out;
}

template <class T> std::vector<double> exact_moduli(const Mat<T>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigen_moduli: matrix not square");
    std::vector<double> out;
    for (const auto& [factor, mult] : squarefree(charpoly(m))) {
        std::vector<double> coeffs;
        for (const auto& c : factor) coeffs.push_back(to_double(c));
        for (double r : simple_root_moduli(coeffs))
            for (int k = 0; k < mult; ++k) out.push_back(r);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace

std::vector<double> eigen_moduli(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigen_moduli: matrix not square");
    if (!m.allFinite()) throw std::invalid_argument("eigen_moduli: non-finite entries");
    std::vector<double> out;
    for (const auto& comp : sparsity_components(m)) {
        Eigen::MatrixXd block(static_cast<Eigen::Index>(comp.size()), static_cast<Eigen::Index>(comp.size()));
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t j = 0; j < comp.size(); ++j)
                block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(comp[i], comp[j]);
        auto mods = dense_moduli(block);
        out.insert(out.end(), mods.begin(), mods.end());
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> eigen_moduli(const MatQ& m) { return exact_moduli(m); }
std::vector<double> eigen_moduli(const MatS& m) { return exact_moduli(m); }

}  // namespace cvxproj
