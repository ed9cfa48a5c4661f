#include "cvxproj/cusps.hpp"

#include "cvxproj/gallery.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cvxproj {

double horosphere_time(const Eigen::MatrixXd& j, const HoroFlow<double>& hf, const Eigen::VectorXd& x) {
    const Eigen::Index n = hf.dim();
    if (j.rows() != n || j.cols() != n || x.size() != n) throw std::invalid_argument("horosphere_time: dimension mismatch");
    const double phi_x = hf.basis_inv.row(n - 1).dot(x);
    const double bx = hf.xi.dot(j * x);
    if (phi_x == 0 || bx == 0) throw std::invalid_argument("horosphere_time: x lies on H");
    return x.dot(j * x) / (2 * phi_x * bx);
}

GraphFunction quadratic_graph() {
    GraphFunction f;
    f.name = "quadratic";
    f.value = [](const Eigen::VectorXd& v) { return 0.5 * v.squaredNorm(); };
    f.gradient = [](const Eigen::VectorXd& v) { return Eigen::VectorXd(v); };
    f.hessian = [](const Eigen::VectorXd& v) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(v.size(), v.size())); };
    f.in_domain = [](const Eigen::VectorXd& v) { return v.allFinite(); };
    f.whole_space = true;
    return f;
}

namespace {

std::vector<Eigen::MatrixXd> float_generators(const AnyGroup& g) {
    return std::visit(
        [](const auto& grp) {
            std::vector<Eigen::MatrixXd> out;
            for (const auto& gen : grp.generators()) out.push_back(embed(gen.matrix));
            return out;
        },
        g);
}

Eigen::Index rho_dimension(const AnyGroup& g) {
    return std::visit([](const auto& grp) { return grp.dim(); }, g);
}

void check_point(const GenCuspSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v, const char* who) {
    const Eigen::Index n = rho_dimension(spec.rho);
    if (u.size() != spec.s || v.size() != n - 2) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    for (double p : spec.psi)
        if (!(p > 0)) throw std::invalid_argument(std::string(who) + ": psi must be positive");
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (!(u(i) > 0)) throw std::invalid_argument(std::string(who) + ": U must be positive");
    if (!spec.phi.in_domain(v)) throw std::invalid_argument(std::string(who) + ": V outside the domain of phi");
}

double grid_x(std::mt19937_64& rng) {
    return static_cast<double>(std::uniform_int_distribution<int>(-8, 8)(rng)) / 4.0;
}

std::vector<int> random_word(std::mt19937_64& rng, std::size_t gens, int max_len) {
    std::vector<int> w(static_cast<std::size_t>(std::uniform_int_distribution<int>(0, max_len)(rng)));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(gens) - 1);
    for (int& i : w) i = pick(rng);
    return w;
}

}  // namespace

GenRepGroup::GenRepGroup(GenCuspSpec spec) : spec_(std::move(spec)) {
    if (spec_.s < 0 || static_cast<int>(spec_.psi.size()) != spec_.s)
        throw std::invalid_argument("build_genrep: psi needs s entries");
    for (double p : spec_.psi)
        if (!(p >= 0) || !std::isfinite(p)) throw std::invalid_argument("build_genrep: psi must be nonnegative");
    n_ = rho_dimension(spec_.rho);
    if (n_ < 2) throw std::invalid_argument("build_genrep: rho needs dimension >= 2");
    gens_ = float_generators(spec_.rho);
    for (std::size_t k = 0; k < gens_.size(); ++k) {
        const auto& g = gens_[k];
        const double scale = std::max(1.0, max_abs(g));
        bool ok = std::abs(g(0, 0) - g(n_ - 1, n_ - 1)) <= 1e-12 * scale;
        for (Eigen::Index i = 1; i < n_; ++i) ok = ok && std::abs(g(i, 0)) <= 1e-12 * scale;
        for (Eigen::Index j = 0; j + 1 < n_; ++j) ok = ok && std::abs(g(n_ - 1, j)) <= 1e-12 * scale;
        if (!ok)
            throw std::invalid_argument("build_genrep: rho generator " + std::to_string(k) +
                                        " is not block unitriangular (e_1 and e_n^* must be common eigenvectors)");
    }
}

double GenRepGroup::psi_of(const Eigen::VectorXd& x) const {
    if (x.size() != spec_.s) throw std::invalid_argument("genrep: X needs s entries");
    double out = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) out += spec_.psi[static_cast<std::size_t>(i)] * x(i);
    return out;
}

Eigen::MatrixXd GenRepGroup::element(const Eigen::VectorXd& x, const Eigen::MatrixXd& rho) const {
    if (rho.rows() != n_ || rho.cols() != n_) throw std::invalid_argument("genrep: rho element has the wrong shape");
    const Eigen::Index s = spec_.s;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(s + n_, s + n_);
    for (Eigen::Index i = 0; i < s; ++i) out(i, i) = std::exp(x(i));
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n_, n_);
    phi(0, n_ - 1) = -psi_of(x);
    out.bottomRightCorner(n_, n_) = rho * phi;
    return out;
}

Eigen::MatrixXd GenRepGroup::rho_word(const std::vector<int>& word) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n_, n_);
    for (int i : word) m = m * gens_.at(static_cast<std::size_t>(i));
    return m;
}

Eigen::MatrixXd GenRepGroup::element(const Eigen::VectorXd& x, const std::vector<int>& word) const {
    return element(x, rho_word(word));
}

Eigen::VectorXd GenRepGroup::lift(const CuspChartPoint& q) const {
    const Eigen::Index s = spec_.s;
    if (q.u.size() != s || q.v.size() != n_ - 2) throw std::invalid_argument("genrep: chart point has the wrong shape");
    Eigen::VectorXd out(s + n_);
    out.head(s) = q.u;
    out(s) = q.t;
    out.segment(s + 1, n_ - 2) = q.v;
    out(s + n_ - 1) = 1;
    return out;
}

CuspChartPoint GenRepGroup::chart(const Eigen::VectorXd& w) const {
    const Eigen::Index s = spec_.s;
    if (w.size() != s + n_) throw std::invalid_argument("genrep: vector has the wrong size");
    const double last = w(s + n_ - 1);
    if (last == 0) throw std::invalid_argument("genrep: point at infinity of the chart");
    Eigen::VectorXd v = w / last;
    return {v.head(s), v.segment(s + 1, n_ - 2), v(s)};
}

CuspChartPoint GenRepGroup::act(const Eigen::MatrixXd& g, const CuspChartPoint& q) const { return chart(g * lift(q)); }

double GenRepGroup::homomorphism_residual(int pairs, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int k = 0; k < pairs; ++k) {
        Eigen::VectorXd x(spec_.s), y(spec_.s);
        for (Eigen::Index i = 0; i < spec_.s; ++i) {
            x(i) = grid_x(rng);
            y(i) = grid_x(rng);
        }
        auto w1 = random_word(rng, gens_.size(), 4);
        auto w2 = random_word(rng, gens_.size(), 4);
        std::vector<int> w12 = w1;
        w12.insert(w12.end(), w2.begin(), w2.end());
        Eigen::MatrixXd lhs = element(Eigen::VectorXd(x + y), w12);
        Eigen::MatrixXd rhs = element(x, w1) * element(y, w2);
        worst = std::max(worst, max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs)));
    }
    return worst;
}

GenRepGroup build_genrep(const GenCuspSpec& spec) {
    GenRepGroup g(spec);
    const double r = g.homomorphism_residual(1000, 1);
    if (r > 1e-10) {
        std::ostringstream os;
        os << "build_genrep: homomorphism residual " << r << " exceeds 1e-10";
        throw std::runtime_error(os.str());
    }
    return g;
}

double horofunction_eval(const GenCuspSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v, double t) {
    check_point(spec, u, v, "horofunction_eval");
    double h = spec.phi.value(v) - t;
    for (Eigen::Index i = 0; i < u.size(); ++i) h -= spec.psi[static_cast<std::size_t>(i)] * std::log(u(i));
    return h;
}

double horosphere_hessian_check(const GenCuspSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    check_point(spec, u, v, "horosphere_hessian_check");
    const Eigen::Index s = u.size(), k = v.size();
    if (s + k == 0) return std::numeric_limits<double>::infinity();
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(s + k, s + k);
    for (Eigen::Index i = 0; i < s; ++i) hess(i, i) = spec.psi[static_cast<std::size_t>(i)] / (u(i) * u(i));
    if (k > 0) hess.bottomRightCorner(k, k) = spec.phi.hessian(v);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool domain_membership(const GenCuspSpec& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& v, double t) {
    return horofunction_eval(spec, u, v, t) < 0;
}

BoundarySimplex boundary_simplex(const GenCuspSpec& spec) {
    const Eigen::Index n = rho_dimension(spec.rho);
    BoundarySimplex out;
    for (Eigen::Index i = 0; i <= spec.s; ++i) out.vertices.push_back(Eigen::VectorXd::Unit(spec.s + n, i));
    out.c1 = spec.phi.whole_space;
    return out;
}

InvarianceSampleReport horofunction_invariance_check(const GenRepGroup& g, int samples, std::uint64_t seed) {
    const auto& spec = g.spec();
    const Eigen::Index s = spec.s, k = g.rho_dim() - 2;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.5, 2.0), vd(-2.0, 2.0), td(-3.0, 3.0);
    InvarianceSampleReport rep;
    rep.samples = samples;
    for (int c = 0; c < samples; ++c) {
        Eigen::VectorXd x(s);
        for (Eigen::Index i = 0; i < s; ++i) x(i) = grid_x(rng);
        auto w = random_word(rng, g.rho_generators().size(), 4);
        CuspChartPoint q{Eigen::VectorXd(s), Eigen::VectorXd(k), td(rng)};
        for (Eigen::Index i = 0; i < s; ++i) q.u(i) = ud(rng);
        for (Eigen::Index i = 0; i < k; ++i) q.v(i) = vd(rng);
        CuspChartPoint gq = g.act(g.element(x, w), q);
        double r = std::abs(horofunction_eval(spec, gq.u, gq.v, gq.t) - horofunction_eval(spec, q.u, q.v, q.t));
        rep.residuals.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
    }
    return rep;
}

double min_hessian_eigenvalue(const GenCuspSpec& spec, int samples, std::uint64_t seed) {
    const Eigen::Index k = rho_dimension(spec.rho) - 2;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logu(-2.0, 2.0), vd(-5.0, 5.0);
    double worst = std::numeric_limits<double>::infinity();
    for (int c = 0; c < samples; ++c) {
        Eigen::VectorXd u(spec.s), v(k);
        for (Eigen::Index i = 0; i < spec.s; ++i) u(i) = std::exp(logu(rng));
        for (Eigen::Index i = 0; i < k; ++i) v(i) = vd(rng);
        worst = std::min(worst, horosphere_hessian_check(spec, u, v));
    }
    return worst;
}

// ---- Orbit hull domains ----

Eigen::VectorXd OrbitDomainReport::to_chart(const Eigen::VectorXd& v) const {
    return frame.transpose() * (v / chart.dot(v));
}

OrbitDomainReport orbit_domain_from_samples(const std::vector<FloatSample>& samples,
                                            const std::vector<Eigen::MatrixXd>& generators,
                                            const std::vector<Eigen::VectorXd>& seeds,
                                            const std::optional<Eigen::VectorXd>& xi,
                                            const OrbitDomainOptions& opts) {
    if (samples.empty() || seeds.empty()) throw std::invalid_argument("construct_invariant_orbit_domain: nothing to sample");
    const Eigen::Index n = samples.front().m.rows();
    Eigen::VectorXd alpha;
    std::optional<ConditionVerdict> witness;
    if (opts.chart) {
        alpha = *opts.chart;
    } else {
        ConditionVerdict v = find_positive_generic_coefficient(samples);
        if (v.status != VerdictStatus::certified_on_sample || !v.witness)
            throw std::invalid_argument("construct_invariant_orbit_domain: no GP+ witness (" + v.reason + ")");
        alpha = v.witness->alpha;
        witness = v;
    }
    if (alpha.size() != n) throw std::invalid_argument("construct_invariant_orbit_domain: chart covector has the wrong size");

    // Orthonormal frame of ker alpha: the trailing columns of a full QR of alpha.
    const Eigen::MatrixXd alpha_col = alpha;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(alpha_col);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd frame = q.rightCols(n - 1);

    std::vector<Eigen::VectorXd> points;
    std::vector<std::size_t> far;
    int max_len = 0;
    for (const auto& smp : samples) max_len = std::max(max_len, smp.length);
    for (const auto& smp : samples)
        for (const auto& seed : seeds) {
            if (seed.size() != n) throw std::invalid_argument("construct_invariant_orbit_domain: seed has the wrong size");
            Eigen::VectorXd w = smp.m * seed;
            const double a = alpha.dot(w);
            if (!(a > opts.tolerance * w.norm())) {
                std::ostringstream os;
                os << "construct_invariant_orbit_domain: orbit leaves the chart at word '" << smp.word
                   << "' (alpha(gamma x) = " << a << ")";
                throw UnboundedOrbitError(os.str());
            }
            if (smp.length == max_len) far.push_back(points.size());
            points.push_back(frame.transpose() * (w / a));
        }

    OrbitDomainReport rep{convex_hull_in_chart(points), alpha, frame, points.size(), 0, std::nullopt, {}, witness};
    const auto& a = rep.hull.facet_normals();
    const auto& b = rep.hull.facet_offsets();
    const Eigen::VectorXd origin = alpha / alpha.squaredNorm();
    std::size_t kept = 0, total = 0;
    for (const auto& z : rep.hull.vertices()) {
        Eigen::VectorXd v = origin + frame * z;
        for (const auto& g : generators) {
            ++total;
            Eigen::VectorXd w = g * v;
            const double aw = alpha.dot(w);
            if (!(aw > 0)) continue;
            Eigen::VectorXd zz = frame.transpose() * (w / aw);
            const double scale = std::max(1.0, zz.cwiseAbs().maxCoeff());
            if (((a * zz - b).array() <= opts.tolerance * scale).all()) ++kept;
        }
    }
    rep.invariance_fraction = total ? static_cast<double>(kept) / static_cast<double>(total) : 1.0;
    if (xi) {
        Eigen::VectorXd x = *xi;
        if (alpha.dot(x) < 0) x = -x;
        if (alpha.dot(x) > 0) {
            rep.xi = rep.to_chart(x);
            for (std::size_t i : far) rep.far_distances.push_back((points[i] - *rep.xi).norm());
        }
    }
    return rep;
}

// ---- The solvable 7x7 cusp ----

QuadSqrt2 solvable_cusp_p(long a, long b, long n, long m) {
    const QuadSqrt2 lambda(3, 2);
    const QuadSqrt2 u(a, b), ub = u.conjugate();
    const QuadSqrt2 l2n = qpow(lambda, 2 * n);
    return l2n + qpow(lambda, -2 * n) + QuadSqrt2(1) + u * u + ub * ub + QuadSqrt2(m * m);
}

SolvableCuspReport solvable_cusp_check(long radius) {
    SolvableCuspReport rep;
    rep.radius = radius;
    rep.p_positive = rep.bound_plus = rep.bound_minus = true;
    rep.min_p = std::numeric_limits<double>::infinity();
    const QuadSqrt2 lambda(3, 2);
    std::vector<Eigen::MatrixXd> samples;
    for (long n = -radius; n <= radius; ++n) {
        const QuadSqrt2 ln = qpow(lambda, n), lmn = qpow(lambda, -n);
        const QuadSqrt2 base = ln * ln + lmn * lmn + QuadSqrt2(1);
        for (long a = -radius; a <= radius; ++a)
            for (long b = -radius; b <= radius; ++b) {
                const QuadSqrt2 u(a, b), ub = u.conjugate();
                const QuadSqrt2 uu = u * u + ub * ub;
                const QuadSqrt2 plus = QuadSqrt2(2) * abs_value(QuadSqrt2(ln * u));
                const QuadSqrt2 minus = QuadSqrt2(2) * abs_value(QuadSqrt2(lmn * ub));
                for (long m = -radius; m <= radius; ++m) {
                    const QuadSqrt2 p = base + uu + QuadSqrt2(m * m);
                    ++rep.grid_size;
                    if (sign(p) <= 0) rep.p_positive = false;
                    if (plus > p) rep.bound_plus = false;
                    if (minus > p) rep.bound_minus = false;
                    rep.min_p = std::min(rep.min_p, to_double(p));
                    samples.push_back(embed(solvable_7x7_element(a, b, n, m)));
                }
            }
    }
    FixedPairResult fp = fixed_pair(solvable_7x7());
    rep.fixed_pair_ok = fp.pair && fp.pair->p.coords == Eigen::VectorXd::Unit(7, 2) &&
                        fp.pair->phi.covector == Eigen::VectorXd::Unit(7, 6);
    OrderReport order = domination_analysis(samples);
    rep.dominating = order.dominating();
    rep.pattern_ok = !order.bounded;
    for (auto [i, j] : rep.dominating)
        if (!(i <= 1 || (i == 2 && j == 6))) rep.pattern_ok = false;
    return rep;
}

}  // namespace cvxproj
