#include "cvxproj/gallery.hpp"
#include "cvxproj/group.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cvxproj;

namespace {

MatrixGroup<Rational> diag_group(std::vector<Rational> d) {
    MatQ m = MatQ::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return MatrixGroup<Rational>({{"g", m}});
}

MatrixGroup<double> rotation_group(double angle) {
    Eigen::MatrixXd r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return MatrixGroup<double>({{"r", r}});
}

Eigen::MatrixXd random_invertible(std::mt19937& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::MatrixXd h(n, n);
    do {
        for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = u(rng);
    } while (std::abs(h.determinant()) < 0.2);
    return h;
}

}  // namespace

TEST(MatrixGroup, RejectsBadGenerators) {
    MatQ two = MatQ::Identity(2, 2) * Rational(2);
    EXPECT_THROW(MatrixGroup<Rational>({{"g", two}}), std::invalid_argument);
    EXPECT_THROW(MatrixGroup<Rational>({{"a", MatQ::Identity(2, 2)}, {"b", MatQ::Identity(3, 3)}}), std::invalid_argument);
    auto g = diag_group({Rational(2), Rational(1, 2)});
    ASSERT_EQ(g.generators().size(), 2u);
    EXPECT_EQ(g.generators()[1].name, "g^-1");
    EXPECT_EQ(g.generators()[1].matrix(0, 0), Rational(1, 2));
}

TEST(EnumerateWords, ParabolicCyclicLengthFive) {
    auto s = enumerate_words(jordan_unipotent(2), 5);
    ASSERT_EQ(s.size(), 11u);
    for (const auto& w : s) EXPECT_EQ(w.element, jordan_element(2, w.element(0, 1).convert_to<long>()));
}

TEST(EnumerateWords, BfsMatchesClosedFormOnParabolic) {
    MatrixGroup<Rational> plain({{"j", jordan_element(2, 1)}});
    EXPECT_EQ(enumerate_words(plain, 5).size(), 11u);
}

TEST(EnumerateWords, TwoCommutingTranslations) {
    auto cf = enumerate_words(hyperbolic_cusp_translations(4), 3);
    EXPECT_EQ(cf.size(), 25u);
    // BFS on the same generators without the closed form.
    auto g = hyperbolic_cusp_translations(4);
    MatrixGroup<Rational> plain({g.generators()[0], g.generators()[1]});
    EXPECT_EQ(enumerate_words(plain, 3).size(), 25u);
}

TEST(EnumerateWords, LengthZeroIsIdentity) {
    auto s = enumerate_words(diag_group({Rational(2), Rational(1, 2)}), 0);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].element, MatQ::Identity(2, 2));
    EXPECT_TRUE(s[0].word.empty());
    auto c = enumerate_words(jordan_unipotent(3), 0);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].element, MatQ::Identity(3, 3));
}

TEST(EnumerateWords, BudgetAndBadLength) {
    EXPECT_THROW(enumerate_words(hyperbolic_cusp_translations(5), 10, 50), BudgetError);
    EXPECT_THROW(enumerate_words(jordan_unipotent(2), -1), std::invalid_argument);
}

TEST(EnumerateWords, WordsReplayToElements) {
    for (const auto& s : enumerate_words(hyperbolic_cusp_translations(4), 4)) {
        EXPECT_EQ(replay(hyperbolic_cusp_translations(4), s.word), s.element);
        EXPECT_EQ(static_cast<int>(s.word.size()), s.length);
    }
    auto g = solvable_7x7();
    for (const auto& s : enumerate_words(g, 2)) EXPECT_EQ(replay(g, s.word), s.element);
    auto nine = weakly_unipotent_9x9();
    for (const auto& s : enumerate_words(nine, 6)) EXPECT_LE((replay(nine, s.word) - s.element).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(EnumerateWords, ParameterGrid) {
    auto s = enumerate_parameter_grid(hyperbolic_cusp_translations(4), 2);
    EXPECT_EQ(s.size(), 25u);
    EXPECT_THROW(enumerate_parameter_grid(diag_group({Rational(2), Rational(1, 2)}), 1), std::invalid_argument);
}

TEST(Divergence, DiagonalRatiosArePowersOfFour) {
    auto g = diag_group({Rational(2), Rational(1, 2)});
    auto r = divergence_diagnostics(to_float(g, enumerate_words(g, 8)));
    ASSERT_EQ(r.lengths.size(), 9u);
    for (std::size_t i = 0; i < r.lengths.size(); ++i)
        EXPECT_NEAR(r.min_ratio[i][0] / std::pow(4.0, r.lengths[i]), 1.0, 1e-12);
    EXPECT_TRUE(r.divergent[0]);
    EXPECT_NEAR(r.exponential_rate[0], std::log(4.0), 1e-9);
}

TEST(Divergence, JordanGrowthIsQuadratic) {
    auto g = jordan_unipotent(2);
    auto r = divergence_diagnostics(to_float(g, enumerate_words(g, 30)));
    // Length one: sigma_1 is the golden ratio, so the ratio is its square.
    EXPECT_NEAR(r.min_ratio[1][0], (3 + std::sqrt(5.0)) / 2, 1e-12);
    EXPECT_GE(r.power_exponent[0], 1.8);
    EXPECT_LE(r.power_exponent[0], 2.2);
    EXPECT_TRUE(r.monotone[0]);
    EXPECT_TRUE(r.divergent[0]);
}

TEST(Divergence, RepeatedSingularValuesNotDivergent) {
    auto g = diag_group({Rational(2), Rational(2), Rational(1, 2), Rational(1, 2)});
    auto r = divergence_diagnostics(to_float(g, enumerate_words(g, 6)));
    for (const auto& row : r.min_ratio) EXPECT_NEAR(row[0], 1.0, 1e-12);
    EXPECT_FALSE(r.divergent[0]);
    EXPECT_TRUE(r.divergent[1]);
}

TEST(Divergence, FitRecoversKnownExponent) {
    std::vector<double> ls, vs;
    for (int l = 1; l <= 20; ++l) {
        ls.push_back(l);
        vs.push_back(3 * std::pow(l, 1.5) + 2);
    }
    EXPECT_NEAR(fit_power_exponent(ls, vs), 1.5, 0.011);
}

TEST(LimitFlags, JordanSingleCluster) {
    auto g = jordan_unipotent(2);
    auto rep = limit_flags(to_float(g, enumerate_words(g, 30)));
    ASSERT_TRUE(rep.conclusive);
    ASSERT_EQ(rep.clusters.size(), 1u);
    const Flag& f = rep.clusters[0].representative;
    EXPECT_LT(projective_angle(f.point.coords, Eigen::Vector2d(1, 0)), 1e-6);
    EXPECT_LT(projective_angle(f.hyperplane.covector, Eigen::Vector2d(0, 1)), 1e-6);
}

TEST(LimitFlags, DiagonalTwoClusters) {
    auto g = diag_group({Rational(4), Rational(1, 4)});
    auto rep = limit_flags(to_float(g, enumerate_words(g, 10)), {1e3, 1e-2, 0.2, 20});
    ASSERT_TRUE(rep.conclusive);
    ASSERT_EQ(rep.clusters.size(), 2u);
    double a = projective_angle(rep.clusters[0].representative.point.coords, Eigen::Vector2d(1, 0));
    double b = projective_angle(rep.clusters[1].representative.point.coords, Eigen::Vector2d(1, 0));
    EXPECT_LT(std::min(a, b), 1e-9);
    EXPECT_NEAR(std::max(a, b), M_PI / 2, 1e-9);
}

TEST(LimitFlags, CuspGroupCollapsesToOneFlag) {
    auto g = hyperbolic_cusp_translations(4);
    auto rep = limit_flags(to_float(g, enumerate_words(g, 12)));
    ASSERT_TRUE(rep.conclusive);
    EXPECT_EQ(rep.clusters.size(), 1u);
    EXPECT_LT(rep.max_radius, 1e-3);
    EXPECT_LT(projective_angle(rep.clusters[0].representative.point.coords, Eigen::Vector4d(1, 0, 0, 0)), 1e-5);
}

TEST(LimitFlags, InconclusiveWithoutDivergence) {
    auto g = rotation_group(1.0);
    auto rep = limit_flags(to_float(g, enumerate_words(g, 5)));
    EXPECT_FALSE(rep.conclusive);
    EXPECT_FALSE(rep.reason.empty());
}

TEST(LimitFlags, InverseSamplesExchangePointAndHyperplane) {
    auto g = hyperbolic_cusp_translations(4);
    for (const auto& s : enumerate_words(g, 12)) {
        if (s.length < 10) continue;
        Eigen::MatrixXd m = embed(s.element);
        auto f = attracting_flag(m);
        auto fi = attracting_flag(Eigen::MatrixXd(m.inverse()));
        ASSERT_TRUE(f && fi);
        // The attracting point of the inverse lies in the repelling hyperplane.
        EXPECT_LT(std::abs(fi->point.coords.dot(f->hyperplane.covector)), 1e-3);
        EXPECT_LT(std::abs(f->point.coords.dot(fi->hyperplane.covector)), 1e-3);
    }
}

TEST(SingularValues, InverseDuality) {
    auto g = solvable_7x7();
    for (const auto& s : enumerate_words(g, 2)) {
        Eigen::MatrixXd m = embed(s.element);
        Eigen::VectorXd a = svd(m).sigmas, b = svd(Eigen::MatrixXd(m.inverse())).sigmas;
        const Eigen::Index n = a.size();
        for (Eigen::Index i = 0; i < n; ++i) EXPECT_NEAR(b(i) * a(n - 1 - i), 1.0, 1e-9);
    }
}

TEST(Classify, Examples) {
    Eigen::MatrixXd rot(2, 2);
    rot << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
    auto c = classify_element<double>(rot);
    EXPECT_EQ(c.type, ElementType::elliptic);
    EXPECT_EQ(c.translation, 0.0);
    auto p = classify_element<Rational>(jordan_element(2, 1));
    EXPECT_EQ(p.type, ElementType::parabolic);
    EXPECT_EQ(p.translation, 0.0);
    MatQ d = MatQ::Zero(3, 3);
    d(0, 0) = 4;
    d(1, 1) = 1;
    d(2, 2) = Rational(1, 4);
    auto h = classify_element<Rational>(d);
    EXPECT_EQ(h.type, ElementType::hyperbolic);
    EXPECT_NEAR(h.translation, std::log(4.0), 1e-12);
    EXPECT_THROW(classify_element<Rational>(MatQ::Zero(2, 2)), std::invalid_argument);
}

TEST(Classify, ConjugationInvariant) {
    std::mt19937 rng(11);
    Eigen::MatrixXd rot(3, 3);
    rot << std::cos(0.7), -std::sin(0.7), 0, std::sin(0.7), std::cos(0.7), 0, 0, 0, 1;
    std::vector<Eigen::MatrixXd> cases{rot, embed(jordan_element(3, 1)), Eigen::Vector3d(3, 1, 1.0 / 3).asDiagonal().toDenseMatrix()};
    for (const auto& g : cases) {
        auto base = classify_element<double>(g);
        for (int t = 0; t < 10; ++t) {
            Eigen::MatrixXd h = random_invertible(rng, 3);
            auto c = classify_element<double>(Eigen::MatrixXd(h * g * h.inverse()));
            EXPECT_EQ(c.type, base.type);
            EXPECT_NEAR(c.translation, base.translation, 1e-9);
        }
    }
}

TEST(Classify, DefectiveClustersKeepNearbyHyperbolics) {
    std::mt19937 rng(5);
    Eigen::MatrixXd d = Eigen::Vector3d(1.001, 1.0, 1.0 / 1.001).asDiagonal();
    Eigen::MatrixXd h = random_invertible(rng, 3);
    auto c = classify_element<double>(Eigen::MatrixXd(h * d * h.inverse()));
    EXPECT_EQ(c.type, ElementType::hyperbolic);
    EXPECT_NEAR(c.translation, std::log(1.001), 1e-9);
    Eigen::MatrixXd j = embed(jordan_element(4, 1));
    Eigen::MatrixXd h4 = random_invertible(rng, 4);
    for (double m : eigen_moduli(Eigen::MatrixXd(h4 * j * h4.inverse()))) EXPECT_NEAR(m, 1.0, 1e-12);
}

TEST(WeaklyUnipotent, NineByNineCertified) {
    auto g = weakly_unipotent_9x9();
    auto v = weakly_unipotent_check(to_float(g, enumerate_words(g, 10)));
    EXPECT_TRUE(v.certified()) << v.reason;
    EXPECT_EQ(v.max_length, 10);
}

TEST(WeaklyUnipotent, DiagonalRefutedByGenerator) {
    auto g = diag_group({Rational(2), Rational(1, 2)});
    auto v = weakly_unipotent_check(to_float(g, enumerate_words(g, 3)));
    EXPECT_TRUE(v.refuted());
    ASSERT_EQ(v.offending_words.size(), 1u);
    EXPECT_EQ(v.offending_words[0], "g");
}

TEST(WeaklyUnipotent, TrivialGroupCertified) {
    MatrixGroup<Rational> g({{"e", MatQ::Identity(3, 3)}});
    EXPECT_TRUE(weakly_unipotent_check(to_float(g, enumerate_words(g, 4))).certified());
}

TEST(FixedPair, JordanThree) {
    auto r = fixed_pair(jordan_unipotent(3));
    ASSERT_TRUE(r.pair);
    EXPECT_LT(projective_angle(r.pair->p.coords, Eigen::Vector3d(1, 0, 0)), 1e-12);
    EXPECT_LT(projective_angle(r.pair->phi.covector, Eigen::Vector3d(0, 0, 1)), 1e-12);
    EXPECT_EQ(r.pair->point_residual, 0.0);
    EXPECT_EQ(r.pair->covector_residual, 0.0);
}

TEST(FixedPair, CuspTranslations) {
    auto r = fixed_pair(hyperbolic_cusp_translations(5));
    ASSERT_TRUE(r.pair);
    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(5, 0), en = Eigen::VectorXd::Unit(5, 4);
    EXPECT_LT(projective_angle(r.pair->p.coords, e1), 1e-12);
    EXPECT_LT(projective_angle(r.pair->phi.covector, en), 1e-12);
}

TEST(FixedPair, SolvableSevenBySeven) {
    auto r = fixed_pair(solvable_7x7());
    ASSERT_TRUE(r.pair);
    EXPECT_LT(projective_angle(r.pair->p.coords, Eigen::VectorXd::Unit(7, 2)), 1e-12);
    EXPECT_LT(projective_angle(r.pair->phi.covector, Eigen::VectorXd::Unit(7, 6)), 1e-12);
}

TEST(FixedPair, RotationHasNone) {
    auto r = fixed_pair(rotation_group(1.0));
    EXPECT_FALSE(r.pair);
    EXPECT_EQ(r.point_dim, 0);
}

TEST(FixedPair, HigherDimensionalSpacesDeferChoice) {
    MatrixGroup<Rational> g({{"e", MatQ::Identity(3, 3)}});
    auto r = fixed_pair(g);
    EXPECT_FALSE(r.pair);
    EXPECT_EQ(r.point_dim, 3);
    EXPECT_EQ(r.candidates.size(), 6u);
}
