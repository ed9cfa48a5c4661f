#pragma once

#include "cvxproj/group.hpp"
#include "cvxproj/lp.hpp"
#include "cvxproj/verdict.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cvxproj {

// ---- Order of entries at infinity ----

enum class EntryClass { dominating, dominated, indeterminate };
std::string to_string(EntryClass c);

// Samples are bucketed by floor(log2 |gamma|_inf); the top three nonempty buckets
// stand in for the behavior at infinity.
struct OrderReport {
    Eigen::Index dim = 0;
    bool bounded = true;             // fewer than three buckets: everything indeterminate
    std::vector<int> buckets;        // top bucket exponents, ascending
    std::vector<std::vector<EntryClass>> classes;              // [i][j]
    std::vector<std::vector<std::vector<double>>> ratios;      // [i][j][bucket]: max |gamma_ij| / |gamma|_inf

    std::vector<std::pair<int, int>> dominating() const;  // zero-based, row-major order
};

OrderReport domination_analysis(const std::vector<Eigen::MatrixXd>& samples);
OrderReport domination_analysis(const std::vector<FloatSample>& samples);

int dyadic_bucket(double norm);

enum class SProperness { s_proper_up, s_proper_down, not_s_proper, inconclusive };
std::string to_string(SProperness s);

// values[i] sampled at a point of size scales[i] (any norm going to infinity).
SProperness sproper_test(const std::vector<double>& values, const std::vector<double>& scales);

// ---- Positive generic s-proper matrix coefficients ----

struct CoefficientOptions {
    double eta = 1e-3;            // componentwise perturbation radius of (alpha, x), both boxed in [-1, 1]
    double growth_floor = 0.25;   // minimal alpha(gamma x) / |gamma|_inf on the top buckets
    std::vector<double> bound_scan{1, 10, 100, 1000};
    int rounds = 20;
    std::optional<Eigen::VectorXd> alpha;  // structural shortcut: fixed covector, solve for x only
};

// Matrix coefficient gamma -> alpha(gamma x).
double coefficient_value(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& g, const Eigen::VectorXd& x);

// Recomputes margins of (alpha, x) on the samples: delta = min value, epsilon = min over
// the top buckets of value / |gamma|_inf, bound = max (epsilon |gamma|_inf - value)^+.
CoefficientWitness evaluate_witness(const Eigen::VectorXd& alpha, const Eigen::VectorXd& x,
                                    const std::vector<FloatSample>& samples, double eta);

// True when the stored margins hold on every sample and survive the eta perturbation.
bool witness_holds(const CoefficientWitness& w, const std::vector<FloatSample>& samples);

ConditionVerdict find_positive_generic_coefficient(const std::vector<FloatSample>& samples,
                                                   const CoefficientOptions& opts = {});

// ---- Top row conditions ----

// Columns form a basis with first column p.
Eigen::MatrixXd top_row_basis(const Eigen::VectorXd& p);
// Columns b_1 = p, b_1..b_{n-1} spanning ker phi, phi(b_n) = 1.
Eigen::MatrixXd top_right_basis(const Eigen::VectorXd& p, const Eigen::VectorXd& phi);

std::vector<FloatSample> change_basis(const std::vector<FloatSample>& samples, const Eigen::MatrixXd& basis);

ConditionVerdict check_condition_Tr(const FixedPairResult& fixed, const std::vector<FloatSample>& samples);
ConditionVerdict check_condition_TRe(const FixedPairResult& fixed, const std::vector<FloatSample>& samples);

// ---- Summary ----

// WU gates everything; then round > strictly convex > preserves a domain.
std::string summary_verdict(VerdictStatus wu, VerdictStatus gp, VerdictStatus gp_plus, VerdictStatus tr,
                            VerdictStatus tre);

struct HolonomyReport {
    std::string summary;  // round_candidate | strictly_convex_candidate | preserves_domain_candidate | none
    ConditionVerdict wu, gp, gp_plus, tr, tre;
    FixedPairResult fixed;
    int length = 0;
    std::size_t sample_count = 0;

    const ConditionVerdict& verdict(Condition c) const;
};

HolonomyReport holonomy_from_samples(const std::vector<FloatSample>& samples, const FixedPairResult& fixed, int length);

// Samples the group up to word length L (or the parameter box |p_i| <= L) and runs every check.
template <class T> HolonomyReport cusp_holonomy_verdict(const MatrixGroup<T>& g, int length, bool box_grid = false) {
    auto exact = box_grid ? enumerate_parameter_grid(g, length) : enumerate_words(g, length);
    return holonomy_from_samples(to_float(g, exact), fixed_pair(g), length);
}

HolonomyReport cusp_holonomy_verdict(const AnyGroup& g, int length, bool box_grid = false);

nlohmann::json to_json(const ConditionVerdict& v);
nlohmann::json to_json(const HolonomyReport& r);

}  // namespace cvxproj
