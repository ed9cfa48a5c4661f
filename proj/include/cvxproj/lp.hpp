#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace cvxproj {

// a . x >= b over free variables x.
struct LinearConstraint {
    Eigen::VectorXd a;
    double b = 0.0;
};

enum class LpStatus { optimal, infeasible, unbounded, pivot_limit };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    int pivots = 0;
};

struct LpOptions {
    double tol = 1e-9;
    int max_pivots = 200000;
};

// Dense two-phase simplex with Bland's rule. Variables are free.
LpResult lp_maximize(const Eigen::VectorXd& objective, const std::vector<LinearConstraint>& constraints,
                     const LpOptions& opts = {});

// Witness point or nullopt when infeasible. Throws std::invalid_argument on
// malformed input and NumericError when the pivot budget runs out.
std::optional<Eigen::VectorXd> lp_feasible(const std::vector<LinearConstraint>& constraints, Eigen::Index dim,
                                           const LpOptions& opts = {});

}  // namespace cvxproj
