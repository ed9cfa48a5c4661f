#include "cvxproj/cusps.hpp"
#include "cvxproj/gallery.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cvxproj;

namespace {

VecQ vq(std::initializer_list<long> xs) {
    VecQ v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = Rational(x);
    return v;
}

MatQ diagq(std::initializer_list<Rational> xs) {
    MatQ m = MatQ::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) { m(i, i) = x; ++i; }
    return m;
}

GenCuspSpec cusp_spec(int d, std::vector<double> psi) {
    const int s = static_cast<int>(psi.size());
    return GenCuspSpec{s, std::move(psi), AnyGroup{hyperbolic_cusp_translations(d)}};
}

}  // namespace

TEST(HoroFlow, ZeroTimeIsIdentity) {
    auto hf = make_horoflow<Rational>(vq({1, 2, 1}), vq({1, 0, -1}));
    EXPECT_EQ(horoflow_matrix(hf, Rational(0)), identity<Rational>(3));
}

TEST(HoroFlow, AdditiveExactly) {
    auto hf = make_horoflow<Rational>(vq({1, 2, 1, 0}), vq({1, 0, -1, 3}));
    EXPECT_EQ(MatQ(horoflow_matrix(hf, Rational(1)) * horoflow_matrix(hf, Rational(2))), horoflow_matrix(hf, Rational(3)));
    Rational a = Rational(1) / 3, b = Rational(5) / 7;
    EXPECT_EQ(MatQ(horoflow_matrix(hf, a) * horoflow_matrix(hf, b)), horoflow_matrix(hf, Rational(a + b)));
}

TEST(HoroFlow, TranslatesChartTowardXi) {
    Eigen::Vector3d xi(1, 2, 1), h(1, 0, -1);
    auto hf = make_horoflow<double>(xi, h);
    Eigen::Vector3d x(0.3, -1.0, -0.7);  // h(x) = 1
    auto moved = [&](double t) {
        Eigen::VectorXd y = horoflow_matrix(hf, t) * x;
        return Eigen::VectorXd(y / h.dot(y) - x);
    };
    Eigen::VectorXd d1 = moved(1.0);
    EXPECT_LT((d1.normalized() - xi.normalized()).norm(), 1e-12);
    EXPECT_LT((moved(2.5) - 2.5 * d1).norm(), 1e-12);
    EXPECT_LT((moved(-0.5) + 0.5 * d1).norm(), 1e-12);
}

TEST(HoroFlow, RejectsPointOffHyperplane) {
    EXPECT_THROW(make_horoflow<Rational>(vq({1, 0, 0}), vq({1, 0, 0})), std::invalid_argument);
}

TEST(HorosphereWeight, Examples) {
    auto hf = make_horoflow<Rational>(vq({1, 0, 0}), vq({0, 0, 1}));
    MatQ g = diagq({Rational(4), Rational(1), Rational(1) / 4});
    EXPECT_EQ(horosphere_weight(g, hf), Rational(16));
    EXPECT_EQ(horosphere_weight(cusp_translation({3}), hf), Rational(1));
    MatQ swap = MatQ::Zero(3, 3);
    swap(0, 2) = swap(2, 0) = swap(1, 1) = Rational(1);
    EXPECT_THROW(horosphere_weight(swap, hf), std::invalid_argument);
}

TEST(HorosphereWeight, EllipsoidReadback) {
    // Cone of 2 x0 x2 - x1^2 > 0; xi = e1 is on the boundary and H = {x2 = 0} is tangent there.
    Eigen::Matrix3d j;
    j << 0, 0, 1, 0, -1, 0, 1, 0, 0;
    auto hf = make_horoflow<double>(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 1));
    Eigen::Matrix3d g = Eigen::Vector3d(4, 1, 0.25).asDiagonal();
    const double tau = horosphere_weight(Eigen::MatrixXd(g), hf);
    EXPECT_NEAR(tau, 16.0, 1e-12);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> sd(-3, 3), td(-2, 2);
    for (int k = 0; k < 200; ++k) {
        const double s = sd(rng), t = td(rng);
        Eigen::VectorXd b = Eigen::Vector3d(s * s / 2, s, 1);
        Eigen::VectorXd x = horoflow_matrix(hf, t) * b;
        EXPECT_NEAR(horosphere_time(j, hf, x), t, 1e-10);
        EXPECT_NEAR(horosphere_time(j, hf, g * x), tau * t, 1e-8 * std::max(1.0, std::abs(tau * t)));
    }
}

TEST(FlowCommutation, Examples) {
    auto hf = make_horoflow<Rational>(vq({1, 0, 0, 0}), vq({0, 0, 0, 1}));
    EXPECT_TRUE(flow_commutation_check(cusp_translation({2, -1}), hf));
    const auto cusp = hyperbolic_cusp_translations(4);
    for (const auto& gen : cusp.generators()) EXPECT_TRUE(flow_commutation_check(gen.matrix, hf));
    MatQ diag = diagq({Rational(4), Rational(1), Rational(1), Rational(1) / 4});
    EXPECT_FALSE(flow_commutation_check(diag, hf));
}

TEST(GenRep, HomomorphismAndNormalForm) {
    auto g = build_genrep(cusp_spec(4, {1.0, 0.5}));
    EXPECT_EQ(g.dim(), 6);
    EXPECT_LE(g.homomorphism_residual(1000, 3), 1e-10);

    MatrixGroup<double> bad({{"d", Eigen::Vector3d(2, 1, 0.5).asDiagonal().toDenseMatrix()}});
    EXPECT_THROW(build_genrep(GenCuspSpec{1, {1.0}, AnyGroup{bad}}), std::invalid_argument);
    EXPECT_THROW(build_genrep(GenCuspSpec{2, {1.0}, AnyGroup{hyperbolic_cusp_translations(4)}}), std::invalid_argument);
}

TEST(GenRep, TrivialCases) {
    auto g0 = build_genrep(cusp_spec(4, {0.0, 0.0}));
    Eigen::Vector2d x(0.5, -1.0);
    Eigen::MatrixXd rho = embed(cusp_translation({1, 2}));
    Eigen::MatrixXd e = g0.element(x, rho);
    EXPECT_LT(max_abs(e.bottomRightCorner(4, 4) - rho), 1e-15);
    EXPECT_NEAR(e(0, 0), std::exp(0.5), 1e-15);
    EXPECT_NEAR(e(1, 1), std::exp(-1.0), 1e-15);

    auto g = build_genrep(cusp_spec(4, {1.0, 0.5}));
    Eigen::MatrixXd e1 = g.element(Eigen::Vector2d::Zero(), rho);
    EXPECT_EQ(e1.topLeftCorner(2, 2), Eigen::Matrix2d::Identity().eval());
    EXPECT_EQ(e1.bottomRightCorner(4, 4), rho);
}

TEST(GenRep, PreservesCoordinateRays) {
    auto g = build_genrep(cusp_spec(4, {1.0, 0.5}));
    Eigen::MatrixXd e = g.element(Eigen::Vector2d(0.75, -1.25), std::vector<int>{0, 1, 1, 2});
    EXPECT_EQ(e(0, 1), 0.0);
    EXPECT_EQ(e(1, 0), 0.0);
    EXPECT_TRUE((e.topRightCorner(2, 4).array() == 0).all());
    EXPECT_TRUE((e.bottomLeftCorner(4, 2).array() == 0).all());
}

TEST(Horofunction, PlugIn) {
    auto spec = cusp_spec(3, {2.0});
    EXPECT_NEAR(horofunction_eval(spec, Eigen::VectorXd::Constant(1, std::exp(1.0)), Eigen::VectorXd::Constant(1, 1.0), 1.0),
                -2.5, 1e-14);
    EXPECT_EQ(horofunction_eval(spec, Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1), 0.0), 0.0);
    EXPECT_THROW(horofunction_eval(spec, Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Zero(1), 0.0),
                 std::invalid_argument);
}

TEST(Horofunction, InvariantUnderGenRep) {
    auto g = build_genrep(cusp_spec(4, {1.0, 0.5}));
    auto rep = horofunction_invariance_check(g, 1000, 11);
    EXPECT_EQ(rep.residuals.size(), 1000u);
    EXPECT_LE(rep.max_residual, 1e-9);
}

TEST(Horofunction, HessianExamples) {
    auto spec = cusp_spec(4, {1.0});
    EXPECT_NEAR(horosphere_hessian_check(spec, Eigen::VectorXd::Constant(1, 1.0), Eigen::Vector2d(0.3, -2)), 1.0, 1e-14);
    EXPECT_NEAR(horosphere_hessian_check(spec, Eigen::VectorXd::Constant(1, 2.0), Eigen::Vector2d(0, 0)), 0.25, 1e-14);
    EXPECT_GT(min_hessian_eigenvalue(cusp_spec(4, {1.0, 0.5}), 1000, 5), 0.0);
    auto bad = cusp_spec(4, {1.0, 0.0});
    EXPECT_THROW(horosphere_hessian_check(bad, Eigen::Vector2d(1, 1), Eigen::Vector2d(0, 0)), std::invalid_argument);
}

TEST(Membership, Examples) {
    auto spec = cusp_spec(3, {2.0});
    const Eigen::VectorXd e = Eigen::VectorXd::Constant(1, std::exp(1.0)), one = Eigen::VectorXd::Constant(1, 1.0);
    EXPECT_TRUE(domain_membership(spec, e, one, 1.0));
    EXPECT_FALSE(domain_membership(spec, one, Eigen::VectorXd::Zero(1), 0.0));
    for (double t : {1.0, 10.0, 1e6}) EXPECT_TRUE(domain_membership(spec, one, Eigen::VectorXd::Constant(1, 5.0), 12.5 + t));
}

TEST(Membership, MidpointConvexAndNested) {
    auto spec = cusp_spec(4, {1.0, 0.5});
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lu(-2, 2), vd(-3, 3), gap(0.0, 2.0);
    auto inside = [&] {
        Eigen::VectorXd u(2), v(2);
        for (int i = 0; i < 2; ++i) { u(i) = std::exp(lu(rng)); v(i) = vd(rng); }
        double t = horofunction_eval(spec, u, v, 0.0) + 1e-6 + gap(rng);
        return std::make_tuple(u, v, t);
    };
    for (int k = 0; k < 1000; ++k) {
        auto [u1, v1, t1] = inside();
        auto [u2, v2, t2] = inside();
        ASSERT_TRUE(domain_membership(spec, u1, v1, t1));
        EXPECT_TRUE(domain_membership(spec, (u1 + u2) / 2, (v1 + v2) / 2, (t1 + t2) / 2));
        EXPECT_TRUE(horofunction_eval(spec, u1, v1, t1 + 0.5) < horofunction_eval(spec, u1, v1, t1));
    }
}

TEST(Membership, NoSimplexFactorIsGraphDomain) {
    auto spec = cusp_spec(4, {});
    const Eigen::VectorXd u(0);
    Eigen::Vector2d v(1.0, -2.0);
    EXPECT_TRUE(domain_membership(spec, u, v, 2.5 + 1e-9));
    EXPECT_FALSE(domain_membership(spec, u, v, 2.5));
    EXPECT_FALSE(domain_membership(spec, u, v, 2.0));
}

TEST(BoundarySimplex, Examples) {
    auto tri = boundary_simplex(cusp_spec(4, {1.0, 0.5}));
    ASSERT_EQ(tri.vertices.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(tri.vertices[static_cast<std::size_t>(i)], Eigen::VectorXd::Unit(6, i));
    EXPECT_TRUE(tri.c1);
    EXPECT_EQ(boundary_simplex(cusp_spec(4, {})).vertices.size(), 1u);

    auto spec = cusp_spec(3, {1.0});
    spec.phi.in_domain = [](const Eigen::VectorXd& v) { return std::abs(v(0)) < 1; };
    spec.phi.whole_space = false;
    EXPECT_FALSE(boundary_simplex(spec).c1);
}

TEST(OrbitDomain, CuspOrbitShrinksTowardXi) {
    auto g = hyperbolic_cusp_translations(4);
    std::vector<Eigen::VectorXd> seeds;
    const Eigen::Vector4d center(1, 0, 0, 1);
    seeds.push_back(center);
    for (int i = 0; i < 3; ++i)
        for (double sgn : {-0.2, 0.2}) seeds.push_back(center + sgn * Eigen::Vector4d::Unit(i));
    auto r4 = construct_invariant_orbit_domain(g, seeds, 4);
    auto r8 = construct_invariant_orbit_domain(g, seeds, 8);
    ASSERT_TRUE(r8.witness.has_value());
    ASSERT_TRUE(r8.xi.has_value());
    for (const auto& v : r8.hull.vertices()) EXPECT_TRUE(v.allFinite());
    EXPECT_GT(r8.invariance_fraction, 0.0);
    EXPECT_LE(r8.invariance_fraction, 1.0);
    auto worst = [](const OrbitDomainReport& r) { return *std::max_element(r.far_distances.begin(), r.far_distances.end()); };
    // Far points approach xi like 1/L.
    EXPECT_LT(worst(r8), 0.7 * worst(r4));
}

TEST(OrbitDomain, JordanHullBounded) {
    auto g = jordan_unipotent(3);
    std::vector<Eigen::VectorXd> seeds{Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0.2, 0, 1), Eigen::Vector3d(0, 0.2, 1)};
    auto r = construct_invariant_orbit_domain(g, seeds, 30);
    ASSERT_TRUE(r.witness.has_value());
    double radius = 0;
    for (const auto& v : r.hull.vertices()) radius = std::max(radius, v.norm());
    EXPECT_TRUE(std::isfinite(radius));
    EXPECT_LT(radius, 1e3);
}

TEST(OrbitDomain, HyperbolaRegion) {
    MatrixGroup<double> g({{"d", Eigen::Vector3d(2, 0.5, 1).asDiagonal().toDenseMatrix()}});
    OrbitDomainOptions opts;
    opts.chart = Eigen::Vector3d(0, 0, 1);
    auto r = construct_invariant_orbit_domain(g, {Eigen::Vector3d(1, 1, 1)}, 6, opts);
    for (const auto& v : r.hull.vertices()) {
        Eigen::Vector3d lifted = r.frame * v + *opts.chart;
        EXPECT_NEAR(std::abs(lifted(0) * lifted(1)), 1.0, 1e-9);
    }
    auto at = [&](double x, double y) { return r.to_chart(Eigen::Vector3d(x, y, 1)); };
    EXPECT_TRUE(r.hull.contains(at(1.5, 1.5)));
    EXPECT_TRUE(r.hull.contains(at(4.0, 1.0)));
    EXPECT_FALSE(r.hull.contains(at(0.5, 0.5)));
    EXPECT_FALSE(r.hull.contains(at(-1.0, 2.0)));
}

TEST(OrbitDomain, LeavingTheChartAborts) {
    MatrixGroup<double> g({{"d", Eigen::Vector3d(2, 0.5, 1).asDiagonal().toDenseMatrix()}});
    OrbitDomainOptions opts;
    opts.chart = Eigen::Vector3d(1, -1, 0);
    EXPECT_THROW(construct_invariant_orbit_domain(g, {Eigen::Vector3d(1, 1, 1)}, 3, opts), UnboundedOrbitError);
}

TEST(SolvableCusp, PolynomialValues) {
    EXPECT_EQ(solvable_cusp_p(0, 0, 0, 0), QuadSqrt2(3));
    EXPECT_EQ(solvable_cusp_p(1, 0, 0, 0), QuadSqrt2(5));
    // lambda^2 + lambda^-2 = 34 for lambda = 3 + 2 sqrt 2.
    EXPECT_EQ(solvable_cusp_p(0, 0, 1, 0), QuadSqrt2(35));
}

TEST(SolvableCusp, SmallGrid) {
    auto rep = solvable_cusp_check(3);
    EXPECT_EQ(rep.grid_size, 7u * 7u * 7u * 7u);
    EXPECT_TRUE(rep.p_positive);
    EXPECT_TRUE(rep.bound_plus);
    EXPECT_TRUE(rep.bound_minus);
    EXPECT_DOUBLE_EQ(rep.min_p, 3.0);
    EXPECT_TRUE(rep.fixed_pair_ok);
    EXPECT_TRUE(rep.pattern_ok);
    EXPECT_FALSE(rep.dominating.empty());
}
