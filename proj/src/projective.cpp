#include "cvxproj/projective.hpp"

#include <cmath>
#include <stdexcept>

namespace cvxproj {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double det2(const Eigen::Vector2d& p, const Eigen::Vector2d& q) { return p(0) * q(1) - p(1) * q(0); }

}  // namespace

bool Flag::incident(double tol) const { return std::abs(pairing(hyperplane, point)) <= tol; }

double pairing(const ProjHyperplane& h, const ProjPoint& p) {
    require_same_dim(h.dim(), p.dim(), "pairing");
    return h.covector.dot(p.coords);
}

double projective_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    require_same_dim(u.size(), v.size(), "projective_angle");
    Eigen::VectorXd a = u.normalized(), b = v.normalized();
    if (a.dot(b) < 0) b = -b;
    return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

double cross_ratio(const ProjPoint& a, const ProjPoint& x, const ProjPoint& y, const ProjPoint& b) {
    const Eigen::Index n = a.dim();
    require_same_dim(n, x.dim(), "cross_ratio");
    require_same_dim(n, y.dim(), "cross_ratio");
    require_same_dim(n, b.dim(), "cross_ratio");
    Eigen::MatrixXd stack(4, n);
    stack.row(0) = a.coords.normalized().transpose();
    stack.row(1) = x.coords.normalized().transpose();
    stack.row(2) = y.coords.normalized().transpose();
    stack.row(3) = b.coords.normalized().transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> s(stack, Eigen::ComputeFullV);
    const auto& sv = s.singularValues();
    if (sv.size() > 2 && sv(2) > 1e-10 * sv(0)) throw std::invalid_argument("cross_ratio: points not collinear");
    Eigen::MatrixXd basis = s.matrixV().leftCols(2);
    auto coord = [&](const Eigen::VectorXd& p) -> Eigen::Vector2d { return basis.transpose() * p.normalized(); };
    Eigen::Vector2d ca = coord(a.coords), cx = coord(x.coords), cy = coord(y.coords), cb = coord(b.coords);
    double ax = det2(ca, cx), by = det2(cb, cy);
    if (std::abs(ax) <= 1e-14 || std::abs(by) <= 1e-14)
        throw std::invalid_argument("cross_ratio: degenerate (a = x or b = y)");
    return std::abs(det2(ca, cy) * det2(cb, cx) / (ax * by));
}

double cross_ratio_affine(const Eigen::VectorXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& b) {
    return cross_ratio(ProjPoint(lift(a)), ProjPoint(lift(x)), ProjPoint(lift(y)), ProjPoint(lift(b)));
}

ProjPoint act(const Eigen::MatrixXd& g, const ProjPoint& p) {
    require_same_dim(g.cols(), p.dim(), "act");
    return ProjPoint(g * p.coords);
}

ProjHyperplane act(const Eigen::MatrixXd& g, const ProjHyperplane& h) {
    require_same_dim(g.cols(), h.dim(), "act");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible()) throw std::invalid_argument("act: singular matrix");
    // g^{-T} phi solves g^T y = phi.
    Eigen::VectorXd y = g.transpose().fullPivLu().solve(h.covector);
    return ProjHyperplane(y);
}

Flag act(const Eigen::MatrixXd& g, const Flag& f) { return {act(g, f.point), act(g, f.hyperplane)}; }

Transversality transversality(const Flag& f1, const Flag& f2) {
    Transversality t;
    t.pairing_12 = pairing(f2.hyperplane, f1.point);
    t.pairing_21 = pairing(f1.hyperplane, f2.point);
    const double cut = 1e-10;
    double lo = std::min(std::abs(t.pairing_12), std::abs(t.pairing_21));
    t.transverse = lo > cut;
    auto near = [&](double v) { return std::abs(v) > cut * 1e-2 && std::abs(v) < cut * 1e2; };
    t.marginal = near(t.pairing_12) || near(t.pairing_21);
    return t;
}

bool is_transverse(const Flag& f1, const Flag& f2) { return transversality(f1, f2).transverse; }

Eigen::VectorXd lift(const Eigen::VectorXd& z) {
    Eigen::VectorXd v(z.size() + 1);
    v.head(z.size()) = z;
    v(z.size()) = 1.0;
    return v;
}

Eigen::VectorXd dehomogenize(const Eigen::VectorXd& v) {
    double w = v(v.size() - 1);
    if (w == 0.0) throw std::invalid_argument("dehomogenize: point at infinity of the chart");
    return v.head(v.size() - 1) / w;
}

}  // namespace cvxproj
