#pragma once

#include "cvxproj/coefficients.hpp"
#include "cvxproj/convex.hpp"
#include "cvxproj/group.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvxproj {

// ---- Algebraic horosphere flow ----

namespace detail {
template <class T> bool negligible(const T& x, double) { return is_zero(x); }
inline bool negligible(const double& x, double scale) { return std::abs(x) <= 1e-9 * std::max(1.0, scale); }
}  // namespace detail

// Flow attached to a point xi and a hyperplane H through it. In the frame `basis`
// (b_1 = xi, b_1..b_{n-1} spanning H, phi(b_n) = 1) the flow is I + t E_{1n}.
template <class T> struct HoroFlow {
    Vec<T> xi;
    Vec<T> h;  // covector of H
    Mat<T> basis;
    Mat<T> basis_inv;

    Eigen::Index dim() const { return xi.size(); }
};

template <class T> HoroFlow<T> make_horoflow(const Vec<T>& xi, const Vec<T>& h) {
    const Eigen::Index n = xi.size();
    if (n < 2 || h.size() != n) throw std::invalid_argument("make_horoflow: dimension mismatch");
    if (!is_zero(T(h.dot(xi)))) {
        if constexpr (std::is_same_v<T, double>) {
            if (std::abs(h.dot(xi)) > 1e-10 * xi.norm() * h.norm())
                throw std::invalid_argument("make_horoflow: xi is not on H");
        } else {
            throw std::invalid_argument("make_horoflow: xi is not on H");
        }
    }
    auto mag = [](const T& x) { return std::abs(to_double(x)); };
    Eigen::Index q = 0;
    for (Eigen::Index j = 1; j < n; ++j)
        if (mag(h(j)) > mag(h(q))) q = j;
    if (is_zero(h(q))) throw std::invalid_argument("make_horoflow: H is zero");
    Eigen::Index drop = -1;
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != q && (drop < 0 || mag(xi(j)) > mag(xi(drop)))) drop = j;
    if (is_zero(xi(drop))) throw std::invalid_argument("make_horoflow: xi is zero");
    Mat<T> b = Mat<T>::Zero(n, n);
    b.col(0) = xi;
    Eigen::Index c = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == q || j == drop) continue;
        b(j, c) = T(1);
        b(q, c) = T(-h(j) / h(q));
        ++c;
    }
    b(q, n - 1) = T(T(1) / h(q));
    return {xi, h, b, inverse<T>(b)};
}

template <class T> Mat<T> horoflow_matrix(const HoroFlow<T>& hf, const T& t) {
    const Eigen::Index n = hf.dim();
    Mat<T> e = identity<T>(n);
    e(0, n - 1) = t;
    return Mat<T>(hf.basis * e * hf.basis_inv);
}

// Ratio of the eigenvalue of g on xi to the eigenvalue of g on the covector of H.
template <class T> T horosphere_weight(const Mat<T>& g, const HoroFlow<T>& hf) {
    const Eigen::Index n = hf.dim();
    if (g.rows() != n || g.cols() != n) throw std::invalid_argument("horosphere_weight: dimension mismatch");
    Mat<T> m = hf.basis_inv * g * hf.basis;
    double scale = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, std::abs(to_double(m(i, j))));
    for (Eigen::Index i = 1; i < n; ++i)
        if (!detail::negligible(m(i, 0), scale)) throw std::invalid_argument("horosphere_weight: g does not fix xi");
    for (Eigen::Index j = 0; j + 1 < n; ++j)
        if (!detail::negligible(m(n - 1, j), scale)) throw std::invalid_argument("horosphere_weight: g does not fix H");
    if (is_zero(m(n - 1, n - 1))) throw std::invalid_argument("horosphere_weight: singular g");
    return T(m(0, 0) / m(n - 1, n - 1));
}

template <class T> bool flow_commutation_check(const Mat<T>& g, const HoroFlow<T>& hf) {
    T tau;
    try {
        tau = horosphere_weight(g, hf);
    } catch (const std::invalid_argument&) {
        return false;
    }
    double scale = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i) scale = std::max(scale, std::abs(to_double(g(i))));
    if (!detail::negligible(T(tau - T(1)), 1.0)) return false;
    const T ts[] = {T(1), T(T(1) / T(2)), T(-3), T(T(7) / T(5))};
    for (const T& t : ts) {
        Mat<T> f = horoflow_matrix(hf, t);
        Mat<T> d = g * f - f * g;
        for (Eigen::Index i = 0; i < d.size(); ++i)
            if (!detail::negligible(d(i), scale)) return false;
    }
    return true;
}

// Time of the horosphere through x for the quadric cone {x^T j x > 0}: the t with
// phi_{-t}(x) on the boundary. Requires xi isotropic and H tangent at xi.
double horosphere_time(const Eigen::MatrixXd& j, const HoroFlow<double>& hf, const Eigen::VectorXd& x);

// ---- Generalized cusps ----

// Strictly convex graph function on a domain of R^{n-2}.
struct GraphFunction {
    std::string name;
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
    std::function<bool(const Eigen::VectorXd&)> in_domain;
    bool whole_space = true;
};

GraphFunction quadratic_graph();

struct GenCuspSpec {
    int s = 0;
    std::vector<double> psi;
    AnyGroup rho;
    GraphFunction phi = quadratic_graph();
};

// Point [U : t : V : 1] of the chart, coordinates (U, V, t).
struct CuspChartPoint {
    Eigen::VectorXd u, v;
    double t = 0;
};

class GenRepGroup {
public:
    explicit GenRepGroup(GenCuspSpec spec);

    const GenCuspSpec& spec() const { return spec_; }
    Eigen::Index dim() const { return spec_.s + n_; }
    Eigen::Index rho_dim() const { return n_; }
    const std::vector<Eigen::MatrixXd>& rho_generators() const { return gens_; }

    double psi_of(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd element(const Eigen::VectorXd& x, const Eigen::MatrixXd& rho) const;
    Eigen::MatrixXd element(const Eigen::VectorXd& x, const std::vector<int>& word) const;
    Eigen::MatrixXd rho_word(const std::vector<int>& word) const;

    CuspChartPoint act(const Eigen::MatrixXd& g, const CuspChartPoint& q) const;
    Eigen::VectorXd lift(const CuspChartPoint& q) const;
    CuspChartPoint chart(const Eigen::VectorXd& v) const;

    // Max relative residual of genRep(X+X', ww') - genRep(X,w) genRep(X',w') over random pairs.
    double homomorphism_residual(int pairs, std::uint64_t seed) const;

private:
    GenCuspSpec spec_;
    Eigen::Index n_ = 0;
    std::vector<Eigen::MatrixXd> gens_;
};

GenRepGroup build_genrep(const GenCuspSpec& spec);

double horofunction_eval(const GenCuspSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v, double t);
double horosphere_hessian_check(const GenCuspSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v);
bool domain_membership(const GenCuspSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v, double t);

struct BoundarySimplex {
    std::vector<Eigen::VectorXd> vertices;  // [e_1], ..., [e_{s+1}]
    bool c1 = false;
};

BoundarySimplex boundary_simplex(const GenCuspSpec& spec);

struct InvarianceSampleReport {
    int samples = 0;
    double max_residual = 0;
    std::vector<double> residuals;
};

// Random (X, gamma, q): X on the grid k/4 in [-2, 2], gamma a word of length <= 4,
// q with U in [1/2, 2]^s, V in [-2, 2]^{n-2}, t in [-3, 3].
InvarianceSampleReport horofunction_invariance_check(const GenRepGroup& g, int samples, std::uint64_t seed);
// Minimum horosphere Hessian eigenvalue over random (U, V).
double min_hessian_eigenvalue(const GenCuspSpec& spec, int samples, std::uint64_t seed);

// ---- Orbit hull domains ----

struct OrbitDomainOptions {
    std::optional<Eigen::VectorXd> chart;  // chart covector; default: the GP+ witness alpha
    double tolerance = 1e-9;
};

struct OrbitDomainReport {
    PolyDomain hull;
    Eigen::VectorXd chart;                 // covector of the affine chart {chart(v) = 1}
    Eigen::MatrixXd frame;                 // orthonormal basis of ker chart, chart coordinates z = frame^T v / chart(v)
    std::size_t orbit_points = 0;
    double invariance_fraction = 0;        // hull vertices whose generator images stay in the hull
    std::optional<Eigen::VectorXd> xi;     // fixed point in chart coordinates, when a fixed pair exists
    std::vector<double> far_distances;     // chart distance to xi of orbit points at maximal word length
    std::optional<ConditionVerdict> witness;

    Eigen::VectorXd to_chart(const Eigen::VectorXd& v) const;
};

class UnboundedOrbitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

OrbitDomainReport orbit_domain_from_samples(const std::vector<FloatSample>& samples,
                                            const std::vector<Eigen::MatrixXd>& generators,
                                            const std::vector<Eigen::VectorXd>& seeds,
                                            const std::optional<Eigen::VectorXd>& xi,
                                            const OrbitDomainOptions& opts);

template <class T>
OrbitDomainReport construct_invariant_orbit_domain(const MatrixGroup<T>& g, const std::vector<Eigen::VectorXd>& seeds,
                                                   int length, const OrbitDomainOptions& opts = {}) {
    auto samples = to_float(g, enumerate_words(g, length));
    std::vector<Eigen::MatrixXd> gens;
    for (const auto& gen : g.generators()) gens.push_back(embed(gen.matrix));
    FixedPairResult fp = fixed_pair(g);
    std::optional<Eigen::VectorXd> xi;
    if (fp.pair) xi = fp.pair->p.coords;
    return orbit_domain_from_samples(samples, gens, seeds, xi, opts);
}

// ---- The solvable 7x7 cusp ----

struct SolvableCuspReport {
    long radius = 0;
    std::size_t grid_size = 0;
    bool p_positive = false;
    bool bound_plus = false;   // |lambda^n (a + b sqrt2)| <= P / 2
    bool bound_minus = false;  // |lambda^-n (a - b sqrt2)| <= P / 2
    double min_p = 0;
    bool fixed_pair_ok = false;
    std::vector<std::pair<int, int>> dominating;  // zero-based
    bool pattern_ok = false;                      // dominating entries in rows 1-2 or at (3,7)

    bool passed() const { return p_positive && bound_plus && bound_minus && fixed_pair_ok && pattern_ok; }
};

QuadSqrt2 solvable_cusp_p(long a, long b, long n, long m);
SolvableCuspReport solvable_cusp_check(long radius = 8);

}  // namespace cvxproj
