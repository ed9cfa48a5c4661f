#include "cvxproj/convex.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace cvxproj;

namespace {

VecQ vq(std::initializer_list<long> xs) {
    VecQ v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (long x : xs) v(i++) = Rational(x);
    return v;
}

Eigen::VectorXd v2(double a, double b) { return Eigen::Vector2d(a, b); }

PolyDomain square() { return convex_hull_in_chart({v2(-1, -1), v2(1, -1), v2(1, 1), v2(-1, 1)}); }
EllipsoidDomain unit_disk() { return EllipsoidDomain(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero()); }

double klein_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double c = (1 - x.dot(y)) / std::sqrt((1 - x.squaredNorm()) * (1 - y.squaredNorm()));
    return std::acosh(std::max(c, 1.0));
}

// Boost along the first axis preserving x^2 + y^2 < w^2, acting on the chart.
Eigen::Matrix3d lorentz_boost(double s) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = m(2, 2) = std::cosh(s);
    m(0, 2) = m(2, 0) = std::sinh(s);
    return m;
}
Eigen::Matrix3d rotation(double t) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = m(1, 1) = std::cos(t);
    m(0, 1) = -std::sin(t);
    m(1, 0) = std::sin(t);
    return m;
}
Eigen::VectorXd apply_chart(const Eigen::MatrixXd& g, const Eigen::VectorXd& z) { return dehomogenize(g * lift(z)); }

Eigen::VectorXd random_in_disk(std::mt19937_64& rng, double r) {
    std::uniform_real_distribution<double> u(-1, 1);
    while (true) {
        Eigen::VectorXd z = v2(u(rng), u(rng));
        if (z.norm() < 1) return r * z;
    }
}

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
    std::vector<double> x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = z;
        w[static_cast<std::size_t>(i)] = 2 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

// f_C(z, 1) for the cone over the square [-1,1]^2: 2 * integral over the
// diamond |a1|+|a2| <= 1 of (1 - a.z)^{-3}.
double square_cone_oracle(const Eigen::Vector2d& z) {
    auto [x, w] = gauss_legendre(60);
    double total = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
            double u = 0.5 * x[i], v = 0.5 * x[j];
            double a1 = u + v, a2 = u - v;
            total += 0.25 * w[i] * w[j] * 2.0 * std::pow(1 - a1 * z(0) - a2 * z(1), -3.0);
        }
    return 2 * total;
}

PolyCone<Rational> orthant2() { return PolyCone<Rational>::from_rays({vq({1, 0}), vq({0, 1})}); }

}  // namespace

TEST(DualCone, OrthantToNegativeOrthant) {
    PolyCone<Rational> d = dual_cone(orthant2());
    ASSERT_EQ(d.rays().size(), 2u);
    EXPECT_TRUE(same_cone(d, PolyCone<Rational>::from_rays({vq({-1, 0}), vq({0, -1})})));
}

TEST(DualCone, HandComputedWedge) {
    PolyCone<Rational> c = PolyCone<Rational>::from_rays({vq({1, 0}), vq({1, 1})});
    EXPECT_TRUE(same_cone(dual_cone(c), PolyCone<Rational>::from_rays({vq({0, -1}), vq({-1, 1})})));
}

TEST(DualCone, InvolutionOnRandomSharpCones) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coord(-5, 5), count(0, 4);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 2;
        std::vector<VecQ> rays;
        const int m = n + count(rng);
        for (int r = 0; r < m; ++r) {
            VecQ v(n);
            for (int i = 0; i < n - 1; ++i) v(i) = Rational(coord(rng));
            v(n - 1) = Rational(6 + coord(rng) + 5);
            rays.push_back(v);
        }
        PolyCone<Rational> c = PolyCone<Rational>::from_rays(rays);
        if (!c.sharp()) continue;
        PolyCone<Rational> cc = dual_cone(dual_cone(c));
        EXPECT_TRUE(same_cone(c, cc)) << "trial " << trial;
        // Every ray satisfies every facet inequality.
        for (const auto& r : c.rays())
            for (const auto& f : c.facets()) EXPECT_LE(sign(Rational(f.dot(r))), 0);
    }
}

TEST(DualCone, RejectsNonSharp) {
    PolyCone<Rational> half = PolyCone<Rational>::from_facets({vq({-1, 0})});
    EXPECT_THROW(dual_cone(half), NotSharpError);
}

TEST(IsSharp, Examples) {
    EXPECT_TRUE(is_sharp(orthant2()));
    EXPECT_FALSE(is_sharp(PolyCone<Rational>::from_facets({vq({-1, 0})})));
    EXPECT_FALSE(is_sharp(PolyCone<Rational>::from_rays({vq({1, 0}), vq({-1, 0}), vq({0, 1}), vq({0, -1})})));
    EXPECT_FALSE(is_sharp(PolyCone<Rational>::from_rays({vq({1, 0, 0}), vq({0, 1, 0})})));
}

TEST(DualTriangulation, CoversDualWithCorrectVolume) {
    // Cone over a square: the dual is the cone over a diamond, split into two simplices.
    PolyCone<Rational> c = PolyCone<Rational>::from_rays({vq({1, 1, 1}), vq({-1, 1, 1}), vq({-1, -1, 1}), vq({1, -1, 1})});
    ASSERT_TRUE(c.sharp());
    EXPECT_EQ(c.facets().size(), 4u);
    Rational total(0);
    for (const auto& s : c.dual_triangulation()) total += s.abs_det;
    // Cross-section at height 1 is the diamond of area 2, each simplex contributes |det| = 2 * area.
    EXPECT_EQ(total, Rational(4));
    EXPECT_EQ(c.dual_triangulation().size(), 2u);
}

TEST(LineBoundary, Interval) {
    PolyDomain iv = convex_hull_in_chart({Eigen::VectorXd::Constant(1, -1), Eigen::VectorXd::Constant(1, 1)});
    Chord c = line_boundary_intersect(iv, Eigen::VectorXd::Constant(1, 0), Eigen::VectorXd::Constant(1, 0.5));
    EXPECT_NEAR(c.a(0), -1, 1e-12);
    EXPECT_NEAR(c.b(0), 1, 1e-12);
}

TEST(LineBoundary, Disk) {
    Chord c = line_boundary_intersect(unit_disk(), v2(0, 0), v2(0.5, 0));
    EXPECT_LT((c.a - v2(-1, 0)).norm(), 1e-12);
    EXPECT_LT((c.b - v2(1, 0)).norm(), 1e-12);
}

TEST(LineBoundary, SquareDiagonalHitsCorners) {
    Chord c = line_boundary_intersect(square(), v2(-0.2, -0.2), v2(0.3, 0.3));
    EXPECT_LT((c.a - v2(-1, -1)).norm(), 1e-12);
    EXPECT_LT((c.b - v2(1, 1)).norm(), 1e-12);
}

TEST(LineBoundary, UnboundedDirection) {
    GraphDomain g(2);
    Chord c = line_boundary_intersect(g, v2(0, 1), v2(0, 2));
    EXPECT_TRUE(c.b_infinite);
    EXPECT_FALSE(c.a_infinite);
    EXPECT_NEAR(c.a(1), 0, 1e-12);
}

TEST(LineBoundary, Errors) {
    EXPECT_THROW(line_boundary_intersect(unit_disk(), v2(0, 0), v2(2, 0)), std::invalid_argument);
    EXPECT_THROW(line_boundary_intersect(unit_disk(), v2(0.1, 0), v2(0.1, 0)), std::invalid_argument);
    ImplicitDomain annulus(
        2, [](const Eigen::VectorXd& z) { return z.norm() < 1 && z.norm() > 0.5; }, "annulus", v2(0.75, 0));
    EXPECT_THROW(line_boundary_intersect(annulus, v2(0.6, 0), v2(0.7, 0)), NumericError);
}

TEST(Hilbert, IntervalValues) {
    PolyDomain iv = convex_hull_in_chart({Eigen::VectorXd::Constant(1, -1), Eigen::VectorXd::Constant(1, 1)});
    EXPECT_EQ(hilbert_distance(iv, Eigen::VectorXd::Constant(1, 0), Eigen::VectorXd::Constant(1, 0)), 0.0);
    EXPECT_NEAR(hilbert_distance(iv, Eigen::VectorXd::Constant(1, 0), Eigen::VectorXd::Constant(1, 0.5)),
                0.5493061443340549, 1e-12);
}

TEST(Hilbert, DiskMatchesKleinModel) {
    std::mt19937_64 rng(1);
    EllipsoidDomain disk = unit_disk();
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x = random_in_disk(rng, 0.95), y = random_in_disk(rng, 0.95);
        EXPECT_NEAR(hilbert_distance(disk, x, y), klein_distance(x, y), 1e-6);
    }
}

TEST(Hilbert, SymmetryAndTriangleInequality) {
    std::mt19937_64 rng(3);
    PolyDomain sq = square();
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd x = v2(u(rng), u(rng)), y = v2(u(rng), u(rng)), z = v2(u(rng), u(rng));
        double xy = hilbert_distance(sq, x, y), yx = hilbert_distance(sq, y, x);
        EXPECT_NEAR(xy, yx, 1e-9 * std::max(1.0, xy));
        EXPECT_LE(xy, hilbert_distance(sq, x, z) + hilbert_distance(sq, z, y) + 1e-8);
    }
}

TEST(Hilbert, ProjectiveInvariance) {
    std::mt19937_64 rng(5);
    EllipsoidDomain disk = unit_disk();
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 50; ++i) {
        Eigen::Matrix3d g = rotation(u(rng)) * lorentz_boost(u(rng)) * rotation(u(rng));
        Eigen::VectorXd x = random_in_disk(rng, 0.6), y = random_in_disk(rng, 0.6);
        EXPECT_NEAR(hilbert_distance(disk, apply_chart(g, x), apply_chart(g, y)), hilbert_distance(disk, x, y), 1e-8);
    }
}

TEST(Hilbert, ParabolicModel) {
    // The paraboloid is projectively the disk; d along the axis is half the log ratio of heights.
    GraphDomain g(2);
    EXPECT_NEAR(hilbert_distance(g, v2(0, 1), v2(0, 4)), 0.5 * std::log(4.0), 1e-10);
}

TEST(Characteristic, OrthantValues) {
    EXPECT_NEAR(characteristic_function(orthant2(), v2(1, 1)), 1.0, 1e-15);
    EXPECT_NEAR(characteristic_function(orthant2(), v2(2, 1)), 0.5, 1e-15);
    EXPECT_THROW(characteristic_function(orthant2(), v2(1, 0)), std::domain_error);
    EXPECT_THROW(characteristic_function(orthant2(), v2(-1, 1)), std::domain_error);
}

TEST(Characteristic, SquareConeMatchesQuadrature) {
    PolyCone<Rational> c = PolyCone<Rational>::from_rays({vq({1, 1, 1}), vq({-1, 1, 1}), vq({-1, -1, 1}), vq({1, -1, 1})});
    EXPECT_NEAR(characteristic_function(c, Eigen::Vector3d(0, 0, 1)), 4.0, 1e-12);
    for (const Eigen::Vector2d z : {Eigen::Vector2d(0.3, -0.2), Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(-0.1, 0.6)}) {
        double oracle = square_cone_oracle(z);
        EXPECT_NEAR(characteristic_function(c, Eigen::Vector3d(z(0), z(1), 1)), oracle, 1e-9 * oracle);
    }
}

TEST(Characteristic, DiagonalEquivarianceExample) {
    Eigen::Matrix2d g;
    g << 2, 0, 0, 0.5;
    Eigen::VectorXd x = v2(0.7, 1.9);
    PolyCone<double> c = PolyCone<double>::from_rays({v2(1, 0), v2(0, 1)});
    double lhs = characteristic_function(c, Eigen::VectorXd(g * x));
    double rhs = characteristic_function(c, x) / std::abs(g.determinant());
    EXPECT_NEAR(lhs, 1 / (x(0) * x(1)), 1e-14);
    EXPECT_NEAR(rhs, 1 / (x(0) * x(1)), 1e-14);
}

TEST(Characteristic, EquivarianceUnderRandomMaps) {
    // f_C(g x) = |det g|^{-1} f_{g^{-1} C}(x) for x in g^{-1} C.
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> e(-3, 3);
    PolyCone<Rational> c = PolyCone<Rational>::from_rays({vq({2, 1, 3}), vq({-1, 2, 3}), vq({-2, -1, 3}), vq({1, -2, 3}), vq({0, 0, 1})});
    for (int trial = 0; trial < 30; ++trial) {
        MatQ g(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = Rational(e(rng)) + (i == j ? Rational(5) : Rational(0));
        if (determinant<Rational>(g) == 0) continue;
        MatQ ginv = inverse<Rational>(g);
        PolyCone<Rational> pulled = transform(c, ginv);
        Eigen::VectorXd y = Eigen::Vector3d(0.1, -0.2, 1.0);
        Eigen::VectorXd x = embed(ginv) * y;
        double lhs = characteristic_function(c, Eigen::VectorXd(embed(g) * x));
        double rhs = characteristic_function(pulled, x) / std::abs(to_double(determinant<Rational>(g)));
        EXPECT_NEAR(lhs, rhs, 1e-9 * lhs);
    }
}

TEST(Characteristic, LogConvexAlongSegments) {
    std::mt19937_64 rng(4);
    PolyDomain sq = square();
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd a = lift(v2(u(rng), u(rng))), b = 2.0 * lift(v2(u(rng), u(rng)));
        double fa = std::log(characteristic_function(sq.cone(), a));
        double fb = std::log(characteristic_function(sq.cone(), b));
        double fm = std::log(characteristic_function(sq.cone(), Eigen::VectorXd(0.5 * (a + b))));
        EXPECT_LE(fm, 0.5 * (fa + fb) + 1e-12);
    }
}

TEST(DualMap, OrthantExample) {
    ProjHyperplane h = dual_map(orthant2(), v2(1, 1));
    EXPECT_NEAR(h.covector(0), 1.0, 1e-14);
    EXPECT_NEAR(h.covector(1), 1.0, 1e-14);
    Eigen::VectorXd g = log_characteristic_gradient(orthant2(), v2(1, 1));
    EXPECT_LT(g(0), 0);
    EXPECT_LT(g(1), 0);
}

TEST(DualMap, LandsInDualInterior) {
    PolyDomain sq = square();
    PolyCone<double> dual = dual_cone(sq.cone());
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd g = log_characteristic_gradient(sq.cone(), lift(v2(u(rng), u(rng))));
        EXPECT_TRUE(dual.contains(g));
    }
}

TEST(DualMap, Equivariance) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    PolyDomain sq = square();
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) += 0.3 * nd(rng);
        std::vector<Eigen::VectorXd> rays;
        for (const auto& r : sq.cone().rays()) rays.push_back(g * r);
        PolyCone<double> gc = PolyCone<double>::from_rays(rays);
        Eigen::VectorXd x = lift(v2(0.2, -0.4));
        ProjHyperplane lhs = dual_map(gc, g * x);
        ProjHyperplane rhs(Eigen::VectorXd(g.transpose().fullPivLu().solve(dual_map(sq.cone(), x).covector)));
        EXPECT_LT((lhs.covector - rhs.covector).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(DualMap, SymmetricPoint) {
    ProjHyperplane h = dual_map(square().cone(), Eigen::Vector3d(0, 0, 1));
    EXPECT_NEAR(h.covector(0), 0, 1e-14);
    EXPECT_NEAR(h.covector(1), 0, 1e-14);
}

TEST(CenterOfMass, SinglePoint) {
    PolyDomain sq = square();
    Eigen::VectorXd p = lift(v2(0.3, 0.1));
    Eigen::VectorXd c = center_of_mass(sq.cone(), {p}, 2.0);
    EXPECT_LT((dehomogenize(c) - v2(0.3, 0.1)).norm(), 1e-12);
}

TEST(CenterOfMass, SymmetricPairOnInterval) {
    PolyDomain iv = convex_hull_in_chart({Eigen::VectorXd::Constant(1, -1), Eigen::VectorXd::Constant(1, 1)});
    Eigen::VectorXd c = center_of_mass(iv.cone(), {lift(Eigen::VectorXd::Constant(1, -0.4)), lift(Eigen::VectorXd::Constant(1, 0.4))}, 1.0);
    EXPECT_NEAR(dehomogenize(c)(0), 0.0, 1e-12);
}

TEST(CenterOfMass, RotationOrbitOfSquare) {
    PolyDomain sq = square();
    Eigen::Matrix3d rot = rotation(M_PI / 2);
    std::vector<Eigen::VectorXd> k{lift(v2(0.3, 0.6))};
    for (int i = 0; i < 3; ++i) k.push_back(rot * k.back());
    Eigen::VectorXd c = center_of_mass(sq.cone(), k, 1.0);
    EXPECT_LT(dehomogenize(c).norm(), 1e-9);
    // A mixed, non-symmetric set: invariance under an automorphism permuting it.
    std::vector<Eigen::VectorXd> k2{lift(v2(0.3, 0.6)), lift(v2(-0.5, 0.1)), lift(v2(0.2, -0.7))};
    std::vector<Eigen::VectorXd> k2r;
    for (const auto& p : k2) k2r.push_back(rot * p);
    Eigen::VectorXd c1 = center_of_mass(sq.cone(), k2, 1.0), c2 = center_of_mass(sq.cone(), k2r, 1.0);
    EXPECT_LT((rot * c1 - c2).norm(), 1e-9 * c2.norm());
    EXPECT_THROW(center_of_mass(sq.cone(), {}, 1.0), std::invalid_argument);
}

TEST(Hull, TriangleAndAbsorbedCenter) {
    PolyDomain t = convex_hull_in_chart({v2(0, 0), v2(1, 0), v2(0, 1)});
    EXPECT_EQ(t.vertices().size(), 3u);
    EXPECT_EQ(t.facet_normals().rows(), 3);
    PolyDomain s = convex_hull_in_chart({v2(-1, -1), v2(1, -1), v2(0, 0), v2(1, 1), v2(-1, 1), v2(1, 0)});
    EXPECT_EQ(s.vertices().size(), 4u);
    EXPECT_EQ(s.facet_normals().rows(), 4);
    EXPECT_TRUE(s.contains(v2(0.99, 0.99)));
    EXPECT_FALSE(s.contains(v2(1, 0)));
}

TEST(Hull, RandomDiskAgainstOrientationOracle) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::VectorXd> pts;
        for (int i = 0; i < 20; ++i) pts.push_back(random_in_disk(rng, 1.0));
        // O(n^3) oracle: (i, j) is a hull edge iff every other point is strictly left of i -> j.
        std::set<int> oracle;
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                if (i == j) continue;
                bool edge = true;
                for (int k = 0; k < 20 && edge; ++k) {
                    if (k == i || k == j) continue;
                    Eigen::VectorXd a = pts[j] - pts[i], b = pts[k] - pts[i];
                    if (a(0) * b(1) - a(1) * b(0) <= 0) edge = false;
                }
                if (edge) { oracle.insert(i); oracle.insert(j); }
            }
        PolyDomain h = convex_hull_in_chart(pts);
        std::set<int> got;
        for (const auto& v : h.vertices())
            for (int i = 0; i < 20; ++i)
                if (v == pts[i]) got.insert(i);
        EXPECT_EQ(got, oracle);
        PolyDomain again = convex_hull_in_chart(h.vertices());
        EXPECT_EQ(again.vertices().size(), h.vertices().size());
    }
}

TEST(Hull, CubeInThreeDimensions) {
    std::vector<Eigen::VectorXd> pts;
    for (int m = 0; m < 8; ++m) pts.push_back(Eigen::Vector3d(m & 1 ? 1 : -1, m & 2 ? 1 : -1, m & 4 ? 1 : -1));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 30; ++i) pts.push_back(Eigen::Vector3d(u(rng), u(rng), u(rng)));
    pts.push_back(Eigen::Vector3d(1, 0, 0));
    PolyDomain h = convex_hull_in_chart(pts);
    EXPECT_EQ(h.vertices().size(), 8u);
    EXPECT_EQ(h.facet_normals().rows(), 6);
}

TEST(Hull, DegenerateInput) {
    EXPECT_THROW(convex_hull_in_chart({v2(0, 0), v2(1, 1), v2(2, 2)}), DegenerateHullError);
    EXPECT_THROW(convex_hull_in_chart({v2(0, 0)}), DegenerateHullError);
}

namespace {

PolyDomain triangle() { return convex_hull_in_chart({v2(0, 0), v2(1, 0), v2(0, 1)}); }

double distance_to_triangle_boundary(const Eigen::VectorXd& p) {
    return std::min({std::abs(p(0)), std::abs(p(1)), std::abs(p(0) + p(1) - 1) / std::sqrt(2.0)});
}

}  // namespace

TEST(Smoothing, TriangleStrictlyConvexAwayFromVertex) {
    PolyDomain t = triangle();
    ImplicitDomain s = smooth_domain(t, Eigen::Vector3d(1, 1, 0), 0.5);
    auto boundary = s.boundary_sample(200, 17);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, boundary.size() - 1);
    for (int i = 0; i < 1000; ++i) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        EXPECT_TRUE(s.contains(0.5 * (boundary[a] + boundary[b])));
    }
    for (const auto& p : boundary) {
        EXPECT_TRUE(t.contains(p) || distance_to_triangle_boundary(p) < 1e-12);
        if (distance_to_triangle_boundary(p) <= 1e-10) EXPECT_LT(p.norm(), 1e-6);
    }
}

TEST(Smoothing, OutputInsideOriginalAndContainsLevelSet) {
    PolyDomain t = triangle();
    ImplicitDomain s = smooth_domain(t, Eigen::Vector3d(1, 1, 0), 2.0);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.2, 1.2);
    for (int i = 0; i < 2000; ++i) {
        Eigen::VectorXd z = v2(u(rng), u(rng));
        if (s.contains(z)) EXPECT_TRUE(t.contains(z));
    }
    for (const auto& p : s.boundary_sample(50, 3)) EXPECT_NEAR(s.defining_function(p), 0.0, 1e-6);
}

TEST(Smoothing, EllipseStaysStrictlyConvex) {
    // Disk with the tangent line x = 1.
    ImplicitDomain s = smooth_domain(unit_disk(), Eigen::Vector3d(-1, 0, 1), 0.5);
    auto boundary = s.boundary_sample(200, 4);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, boundary.size() - 1);
    for (int i = 0; i < 1000; ++i) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        EXPECT_TRUE(s.contains(0.5 * (boundary[a] + boundary[b])));
    }
}

TEST(Smoothing, DiagonalAutomorphismInvariance) {
    // H contains the edge from (0,0) to (0,1); g = diag(2, 1, 1/2) in the basis of lifted
    // vertices fixes (0,0) and H, has determinant one and trivial weight on H.
    PolyDomain t = triangle();
    Eigen::Matrix3d v;
    v.col(0) = Eigen::Vector3d(0, 0, 1);
    v.col(1) = Eigen::Vector3d(1, 0, 1);
    v.col(2) = Eigen::Vector3d(0, 1, 1);
    Eigen::Matrix3d g = v * Eigen::Vector3d(2, 1, 0.5).asDiagonal() * v.inverse();
    ImplicitDomain s = smooth_domain(t, Eigen::Vector3d(1, 0, 0), 0.7);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    int inside = 0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::VectorXd z = v2(u(rng), u(rng));
        if (!s.contains(z)) continue;
        ++inside;
        EXPECT_TRUE(s.contains(apply_chart(g, z)));
        EXPECT_TRUE(s.contains(apply_chart(g.inverse(), z)));
    }
    EXPECT_GT(inside, 10);
}

TEST(Smoothing, Errors) {
    EXPECT_THROW(smooth_domain(triangle(), Eigen::Vector3d(1, -1, 0), 0.5), std::invalid_argument);
    EXPECT_THROW(smooth_domain(triangle(), Eigen::Vector3d(1, 1, 0), 0.0), std::invalid_argument);
    EXPECT_THROW(smooth_domain(unit_disk(), Eigen::Vector3d(-1, 0, 2), 0.5), std::invalid_argument);
}
