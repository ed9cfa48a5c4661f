#pragma once

#include "cvxproj/linalg.hpp"

#include <Eigen/Dense>

namespace cvxproj {

struct ProjPoint {
    Eigen::VectorXd coords;  // normalized: max-abs coordinate 1, first nonzero positive

    ProjPoint() = default;
    explicit ProjPoint(const Eigen::VectorXd& v) : coords(normalize_projective<double>(v)) {}
    Eigen::Index dim() const { return coords.size(); }
};

struct ProjHyperplane {
    Eigen::VectorXd covector;

    ProjHyperplane() = default;
    explicit ProjHyperplane(const Eigen::VectorXd& v) : covector(normalize_projective<double>(v)) {}
    Eigen::Index dim() const { return covector.size(); }
};

// A point and a hyperplane; incidence is a query, not an invariant, because
// limit data pairs attracting points with repelling hyperplanes.
struct Flag {
    ProjPoint point;
    ProjHyperplane hyperplane;

    bool incident(double tol = 1e-12) const;
};

double pairing(const ProjHyperplane& h, const ProjPoint& p);

// Angle in [0, pi/2] between the lines spanned by u and v.
double projective_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Cross-ratio (|a-y|/|a-x|)(|b-x|/|b-y|) of four collinear points.
double cross_ratio(const ProjPoint& a, const ProjPoint& x, const ProjPoint& y, const ProjPoint& b);
// Same for points given in an affine chart.
double cross_ratio_affine(const Eigen::VectorXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& b);

ProjPoint act(const Eigen::MatrixXd& g, const ProjPoint& p);
ProjHyperplane act(const Eigen::MatrixXd& g, const ProjHyperplane& h);
Flag act(const Eigen::MatrixXd& g, const Flag& f);

struct Transversality {
    bool transverse = false;
    bool marginal = false;  // some pairing within two decades of the 1e-10 cutoff
    double pairing_12 = 0;  // phi_2(p_1)
    double pairing_21 = 0;  // phi_1(p_2)
};

Transversality transversality(const Flag& f1, const Flag& f2);
bool is_transverse(const Flag& f1, const Flag& f2);

// Homogeneous lift (z, 1) of a chart point and the inverse map.
Eigen::VectorXd lift(const Eigen::VectorXd& z);
Eigen::VectorXd dehomogenize(const Eigen::VectorXd& v);

}  // namespace cvxproj
