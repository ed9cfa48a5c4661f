#include "cvxproj/gallery.hpp"

#include <cmath>
#include <stdexcept>

namespace cvxproj {

namespace {

Rational factorial(int j) {
    Rational f(1);
    for (int i = 2; i <= j; ++i) f *= i;
    return f;
}

long param(const std::map<std::string, long>& params, const std::string& key, long fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

MatQ cusp_translation(const std::vector<long>& y) {
    const auto k = static_cast<Eigen::Index>(y.size());
    MatQ m = identity<Rational>(k + 2);
    Rational sq(0);
    for (Eigen::Index i = 0; i < k; ++i) {
        Rational v(y[static_cast<std::size_t>(i)]);
        m(0, i + 1) = v;
        m(i + 1, k + 1) = v;
        sq += v * v;
    }
    m(0, k + 1) = sq / 2;
    return m;
}

MatrixGroup<Rational> hyperbolic_cusp_translations(int d) {
    if (d < 3) throw std::invalid_argument("hyperbolic_cusp_translations: need d >= 3");
    std::vector<Generator<Rational>> gens;
    ClosedForm<Rational> cf;
    cf.gallery = "hyperbolic_cusp_translations";
    cf.construction = {{"d", d}};
    for (int i = 0; i < d - 2; ++i) {
        std::vector<long> e(static_cast<std::size_t>(d - 2), 0);
        e[static_cast<std::size_t>(i)] = 1;
        gens.push_back({"t" + std::to_string(i + 1), cusp_translation(e)});
        cf.params.push_back("y" + std::to_string(i + 1));
    }
    cf.element = [](const std::vector<long>& p) { return cusp_translation(p); };
    return MatrixGroup<Rational>(gens, cf);
}

MatQ jordan_element(int k, long n) {
    if (k < 2) throw std::invalid_argument("jordan_unipotent: need k >= 2");
    MatQ m = MatQ::Zero(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; i + j < k; ++j) {
            Rational p(1);
            for (int r = 0; r < j; ++r) p *= n;
            m(i, i + j) = p / factorial(j);
        }
    return m;
}

MatrixGroup<Rational> jordan_unipotent(int k) {
    ClosedForm<Rational> cf;
    cf.gallery = "jordan_unipotent";
    cf.construction = {{"k", k}};
    cf.params = {"n"};
    cf.element = [k](const std::vector<long>& p) { return jordan_element(k, p.at(0)); };
    return MatrixGroup<Rational>({{"j", jordan_element(k, 1)}}, cf);
}

Eigen::MatrixXd weakly_unipotent_9x9_element(long n) {
    const double t = static_cast<double>(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(9, 9);
    m(0, 0) = m(1, 1) = m(2, 2) = 1;
    m(0, 1) = m(1, 2) = t;
    m(0, 2) = t * t / 2;
    Eigen::Matrix2d r;
    r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    const double coeff[3] = {1, t, t * t / 2};
    for (int bi = 0; bi < 3; ++bi)
        for (int bj = bi; bj < 3; ++bj) m.block(3 + 2 * bi, 3 + 2 * bj, 2, 2) = coeff[bj - bi] * r;
    return m;
}

MatrixGroup<double> weakly_unipotent_9x9() {
    ClosedForm<double> cf;
    cf.gallery = "weakly_unipotent_9x9";
    cf.params = {"n"};
    cf.element = [](const std::vector<long>& p) { return weakly_unipotent_9x9_element(p.at(0)); };
    return MatrixGroup<double>({{"g", weakly_unipotent_9x9_element(1)}}, cf);
}

MatS solvable_7x7_element(long a, long b, long n, long m) {
    const QuadSqrt2 lambda(3, 2);
    const QuadSqrt2 u(a, b), ub = u.conjugate();
    const QuadSqrt2 ln = qpow(lambda, n), lmn = qpow(lambda, -n);
    const QuadSqrt2 mm(m);
    MatS g = MatS::Zero(7, 7);
    g(0, 0) = ln * ln;
    g(0, 4) = ln * u;
    g(0, 6) = u * u;
    g(1, 1) = lmn * lmn;
    g(1, 5) = lmn * ub;
    g(1, 6) = ub * ub;
    g(2, 2) = QuadSqrt2(1);
    g(2, 3) = mm;
    g(2, 6) = mm * mm;
    g(3, 3) = QuadSqrt2(1);
    g(3, 6) = QuadSqrt2(2) * mm;
    g(4, 4) = ln;
    g(4, 6) = QuadSqrt2(2) * u;
    g(5, 5) = lmn;
    g(5, 6) = QuadSqrt2(2) * ub;
    g(6, 6) = QuadSqrt2(1);
    return g;
}

MatrixGroup<QuadSqrt2> solvable_7x7() {
    ClosedForm<QuadSqrt2> cf;
    cf.gallery = "solvable_7x7";
    cf.params = {"a", "b", "n", "m"};
    cf.element = [](const std::vector<long>& p) { return solvable_7x7_element(p.at(0), p.at(1), p.at(2), p.at(3)); };
    return MatrixGroup<QuadSqrt2>({{"a", solvable_7x7_element(1, 0, 0, 0)},
                                   {"b", solvable_7x7_element(0, 1, 0, 0)},
                                   {"n", solvable_7x7_element(0, 0, 1, 0)},
                                   {"m", solvable_7x7_element(0, 0, 0, 1)}},
                                  cf);
}

std::vector<std::string> gallery_names() {
    return {"hyperbolic_cusp_translations", "jordan_unipotent", "weakly_unipotent_9x9", "solvable_7x7"};
}

GalleryEntry gallery_entry(const std::string& name, const std::map<std::string, long>& params) {
    using C = Condition;
    using S = VerdictStatus;
    if (name == "hyperbolic_cusp_translations") {
        int d = static_cast<int>(param(params, "d", 4));
        return {name, "translations of a horosphere in H^" + std::to_string(d - 1), hyperbolic_cusp_translations(d),
                {{{C::WU, S::certified_on_sample}, {C::GPplus, S::certified_on_sample}, {C::Tr, S::certified_on_sample},
                  {C::TRe, S::certified_on_sample}},
                 "round_candidate"},
                false};
    }
    if (name == "jordan_unipotent") {
        int k = static_cast<int>(param(params, "k", 3));
        ExpectedVerdicts ev;
        ev.conditions[C::WU] = S::certified_on_sample;
        if (k % 2 == 1) {
            ev.conditions[C::GPplus] = S::certified_on_sample;
            ev.conditions[C::Tr] = S::certified_on_sample;
            ev.conditions[C::TRe] = S::certified_on_sample;
            ev.summary = "round_candidate";
        } else {
            ev.conditions[C::GPplus] = S::refuted_on_sample;
            ev.summary = "none";
        }
        return {name, "cyclic group of a unipotent Jordan block of size " + std::to_string(k), jordan_unipotent(k), ev,
                false};
    }
    if (name == "weakly_unipotent_9x9") {
        return {name, "weakly unipotent cyclic group preserving a properly convex but no strictly convex domain",
                weakly_unipotent_9x9(),
                {{{C::WU, S::certified_on_sample}, {C::GPplus, S::certified_on_sample}, {C::Tr, S::refuted_on_sample},
                  {C::TRe, S::refuted_on_sample}},
                 "preserves_domain_candidate"},
                false};
    }
    if (name == "solvable_7x7") {
        return {name, "solvable non virtually nilpotent group over Z[sqrt 2] times a parabolic block", solvable_7x7(),
                {{{C::WU, S::refuted_on_sample}, {C::GPplus, S::certified_on_sample}, {C::Tr, S::refuted_on_sample}},
                 "none"},
                true};
    }
    throw std::invalid_argument("gallery: unknown entry '" + name + "'");
}

}  // namespace cvxproj
