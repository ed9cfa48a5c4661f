#include "cvxproj/lp.hpp"

#include "cvxproj/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace cvxproj {

namespace {

class Tableau {
public:
    Tableau(Eigen::MatrixXd t, std::vector<Eigen::Index> basis, double tol)
        : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

    Eigen::Index rhs() const { return t_.cols() - 1; }

    void set_objective(const Eigen::VectorXd& cost) {
        // Reduced-cost row z_j - c_j with the rhs slot holding the objective value.
        obj_ = Eigen::VectorXd::Zero(t_.cols());
        obj_.head(cost.size()) = -cost;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            double cb = basis_[i] < cost.size() ? cost(basis_[i]) : 0.0;
            if (cb != 0.0) obj_ += cb * t_.row(static_cast<Eigen::Index>(i)).transpose();
        }
    }

    // Returns optimal, unbounded or pivot_limit.
    LpStatus optimize(Eigen::Index allowed_cols, int& pivots, int max_pivots) {
        // Dantzig pricing, switching to Bland's rule for good after a run of degenerate pivots.
        bool bland = false;
        int degenerate = 0;
        while (true) {
            Eigen::Index enter = -1;
            if (bland) {
                for (Eigen::Index j = 0; j < allowed_cols; ++j)
                    if (obj_(j) < -tol_) { enter = j; break; }
            } else {
                double most = -tol_;
                for (Eigen::Index j = 0; j < allowed_cols; ++j)
                    if (obj_(j) < most) { most = obj_(j); enter = j; }
            }
            if (enter < 0) return LpStatus::optimal;
            Eigen::Index leave = -1;
            double best = 0.0;
            for (Eigen::Index i = 0; i < t_.rows(); ++i) {
                double a = t_(i, enter);
                if (a <= tol_) continue;
                double ratio = t_(i, rhs()) / a;
                if (leave < 0 || ratio < best - tol_ ||
                    (std::abs(ratio - best) <= tol_ && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            if (best <= tol_) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
            }
            pivot(leave, enter);
            if (++pivots > max_pivots) return LpStatus::pivot_limit;
        }
    }

    void pivot(Eigen::Index r, Eigen::Index c) {
        t_.row(r) /= t_(r, c);
        for (Eigen::Index i = 0; i < t_.rows(); ++i) {
            if (i == r) continue;
            double f = t_(i, c);
            if (f != 0.0) t_.row(i) -= f * t_.row(r);
        }
        double f = obj_(c);
        if (f != 0.0) obj_ -= f * t_.row(r).transpose();
        basis_[static_cast<std::size_t>(r)] = c;
    }

    void drop_row(Eigen::Index r) {
        Eigen::MatrixXd nt(t_.rows() - 1, t_.cols());
        nt.topRows(r) = t_.topRows(r);
        nt.bottomRows(t_.rows() - r - 1) = t_.bottomRows(t_.rows() - r - 1);
        t_ = std::move(nt);
        basis_.erase(basis_.begin() + r);
    }

    double objective_value() const { return obj_(rhs()); }
    Eigen::MatrixXd& table() { return t_; }
    std::vector<Eigen::Index>& basis() { return basis_; }

private:
    Eigen::MatrixXd t_;
    Eigen::VectorXd obj_;
    std::vector<Eigen::Index> basis_;
    double tol_;
};

}  // namespace

LpResult lp_maximize(const Eigen::VectorXd& objective, const std::vector<LinearConstraint>& constraints,
                     const LpOptions& opts) {
    const Eigen::Index d = objective.size();
    const auto m = static_cast<Eigen::Index>(constraints.size());
    if (!objective.allFinite()) throw std::invalid_argument("lp: non-finite objective");
    for (const auto& c : constraints) {
        if (c.a.size() != d) throw std::invalid_argument("lp: constraint dimension mismatch");
        if (!c.a.allFinite() || !std::isfinite(c.b)) throw std::invalid_argument("lp: non-finite constraint");
    }

    // Columns: x+ (d), x- (d), slack (m), artificial (na), rhs.
    std::vector<Eigen::Index> needs_art;
    std::vector<double> scale(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& c = constraints[static_cast<std::size_t>(i)];
        double s = std::max(c.a.cwiseAbs().maxCoeff(), std::abs(c.b));
        scale[static_cast<std::size_t>(i)] = s > 0 ? s : 1.0;
        if (c.b / scale[static_cast<std::size_t>(i)] > 0) needs_art.push_back(i);
    }
    const auto na = static_cast<Eigen::Index>(needs_art.size());
    const Eigen::Index ncols = 2 * d + m + na;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, ncols + 1);
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    Eigen::Index art = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& c = constraints[static_cast<std::size_t>(i)];
        double s = scale[static_cast<std::size_t>(i)];
        Eigen::VectorXd a = c.a / s;
        double b = c.b / s;
        if (b > 0) {
            // a x+ - a x- - s + r = b
            t.block(i, 0, 1, d) = a.transpose();
            t.block(i, d, 1, d) = -a.transpose();
            t(i, 2 * d + i) = -1.0;
            t(i, 2 * d + m + art) = 1.0;
            t(i, ncols) = b;
            basis[static_cast<std::size_t>(i)] = 2 * d + m + art;
            ++art;
        } else {
            // -a x+ + a x- + s = -b >= 0
            t.block(i, 0, 1, d) = -a.transpose();
            t.block(i, d, 1, d) = a.transpose();
            t(i, 2 * d + i) = 1.0;
            t(i, ncols) = -b;
            basis[static_cast<std::size_t>(i)] = 2 * d + i;
        }
    }

    Tableau tab(std::move(t), std::move(basis), opts.tol);
    LpResult res;
    if (na > 0) {
        Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols);
        cost.segment(2 * d + m, na).setConstant(-1.0);
        tab.set_objective(cost);
        LpStatus st = tab.optimize(ncols, res.pivots, opts.max_pivots);
        if (st == LpStatus::pivot_limit) { res.status = st; return res; }
        if (tab.objective_value() < -1e3 * opts.tol) { res.status = LpStatus::infeasible; return res; }
        // Drive zero-level artificials out of the basis.
        for (Eigen::Index i = 0; i < tab.table().rows();) {
            if (tab.basis()[static_cast<std::size_t>(i)] < 2 * d + m) { ++i; continue; }
            Eigen::Index col = -1;
            for (Eigen::Index j = 0; j < 2 * d + m; ++j)
                if (std::abs(tab.table()(i, j)) > opts.tol) { col = j; break; }
            if (col >= 0) {
                tab.pivot(i, col);
                ++i;
            } else {
                tab.drop_row(i);
            }
        }
    }
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols);
    cost.head(d) = objective;
    cost.segment(d, d) = -objective;
    tab.set_objective(cost);
    LpStatus st = tab.optimize(2 * d + m, res.pivots, opts.max_pivots);
    res.status = st;
    if (st == LpStatus::pivot_limit) return res;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(ncols);
    for (std::size_t i = 0; i < tab.basis().size(); ++i)
        z(tab.basis()[i]) = tab.table()(static_cast<Eigen::Index>(i), tab.rhs());
    res.x = z.head(d) - z.segment(d, d);
    res.objective = objective.dot(res.x);
    return res;
}

std::optional<Eigen::VectorXd> lp_feasible(const std::vector<LinearConstraint>& constraints, Eigen::Index dim,
                                           const LpOptions& opts) {
    LpResult r = lp_maximize(Eigen::VectorXd::Zero(dim), constraints, opts);
    if (r.status == LpStatus::pivot_limit) throw NumericError("lp_feasible: pivot budget exhausted");
    if (r.status == LpStatus::infeasible) return std::nullopt;
    return r.x;
}

}  // namespace cvxproj
