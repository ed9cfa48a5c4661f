#pragma once

#include "cvxproj/coefficients.hpp"
#include "cvxproj/convex.hpp"
#include "cvxproj/cusps.hpp"
#include "cvxproj/group.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvxproj {

// Malformed or inconsistent input files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---- Scalars and matrices ----
// rational: "p/q" strings; quad_sqrt2: {"a": "p/q", "b": "p/q"}; float64: JSON numbers.

nlohmann::json scalar_to_json(double x);
nlohmann::json scalar_to_json(const Rational& x);
nlohmann::json scalar_to_json(const QuadSqrt2& x);

template <class T> T scalar_from_json(const nlohmann::json& j);
template <> double scalar_from_json<double>(const nlohmann::json& j);
template <> Rational scalar_from_json<Rational>(const nlohmann::json& j);
template <> QuadSqrt2 scalar_from_json<QuadSqrt2>(const nlohmann::json& j);

template <class T> nlohmann::json matrix_to_json(const Mat<T>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

template <class T> Mat<T> matrix_from_json(const nlohmann::json& j, Eigen::Index n) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) throw InputError("matrix: expected " + std::to_string(n) + " rows");
    Mat<T> m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw InputError("matrix: row " + std::to_string(i) + " needs " + std::to_string(n) + " entries");
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = scalar_from_json<T>(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);

// ---- Groups ----
// {"dim", "scalar", "generators": [{"name", "matrix"}], "closed_form": {"gallery", "params"}}

std::string scalar_name(const AnyGroup& g);
nlohmann::json group_to_json(const AnyGroup& g);
// A closed_form block rebuilds the gallery family; its generators must match the listed ones.
AnyGroup group_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::string& path, const std::string& content);

// ---- Domains ----
// {"kind": "polytope" | "ellipsoid" | "graph", "dim", "vertices" | "shape_matrix" (+ "center") | "phi"}

std::unique_ptr<Domain> domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& d);

// ---- Cusp specs ----
// {"s", "psi", "rho": <group file path or inline group>, "phi": "quadratic"}

GenCuspSpec cusp_spec_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
GraphFunction graph_function(const std::string& name);

// ---- Certification reports ----

struct CertificationReport {
    nlohmann::json group;  // dim, scalar, generator names, closed_form metadata
    int length = 0;
    bool box_grid = false;
    std::uint64_t seed = 0;
    std::size_t sample_count = 0;
    std::string summary;
    std::vector<ConditionVerdict> conditions;  // WU, GP, GP+, Tr, TRe
    nlohmann::json fixed_pair;
    DivergenceReport divergence;
    LimitReport limits;
    std::map<std::string, double> timings_ms;

    // The summary agrees with the rule applied to the condition statuses.
    bool consistent() const;
};

CertificationReport certify_group(const AnyGroup& g, int length, bool box_grid = false, std::uint64_t seed = 0);

nlohmann::json to_json(const CertificationReport& r);
CertificationReport certification_report_from_json(const nlohmann::json& j);
ConditionVerdict condition_verdict_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DivergenceReport& r);
nlohmann::json to_json(const LimitReport& r);

// Rows (word_length, min sigma_1/sigma_2, max entry norm) with a header line.
std::string divergence_csv(const DivergenceReport& r);

// ---- Cusp reports ----

struct CuspBuildReport {
    GenCuspSpec spec;
    double homomorphism_residual = 0;
    InvarianceSampleReport invariance;
    int hessian_samples = 0;
    double min_hessian = 0;
    BoundarySimplex simplex;

    bool passed() const { return homomorphism_residual <= 1e-10 && invariance.max_residual <= 1e-9 && min_hessian > 0; }
};

CuspBuildReport build_cusp_report(const GenCuspSpec& spec, int samples = 1000, std::uint64_t seed = 0);
nlohmann::json to_json(const CuspBuildReport& r);

// Counts of residuals per decade [1e-k-1, 1e-k); exact zeros counted separately.
nlohmann::json residual_histogram(const std::vector<double>& residuals);

}  // namespace cvxproj
