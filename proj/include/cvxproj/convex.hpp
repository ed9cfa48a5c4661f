#pragma once

#include "cvxproj/cone.hpp"
#include "cvxproj/projective.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cvxproj {

// Open properly convex domain in the affine chart {x_n = 1} of RP^{n-1}, seen through a membership oracle.
class Domain {
public:
    virtual ~Domain() = default;
    virtual Eigen::Index dim() const = 0;  // chart dimension d = n - 1
    virtual bool contains(const Eigen::VectorXd& z) const = 0;
    virtual std::string tag() const = 0;
};

// Open polytope {z : A z < b} with its vertex list.
class PolyDomain : public Domain {
public:
    PolyDomain(std::vector<Eigen::VectorXd> vertices, Eigen::MatrixXd a, Eigen::VectorXd b);

    Eigen::Index dim() const override { return dim_; }
    bool contains(const Eigen::VectorXd& z) const override;
    std::string tag() const override { return "polytope"; }

    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    const Eigen::MatrixXd& facet_normals() const { return a_; }
    const Eigen::VectorXd& facet_offsets() const { return b_; }
    // Cone over the lifted vertices (z, 1), built on first use.
    const PolyCone<double>& cone() const;
    // The chart is {x_n = 1}; its hyperplane at infinity is x_n = 0.
    ProjHyperplane chart() const;
    Eigen::VectorXd vertex_centroid() const;

private:
    Eigen::Index dim_;
    std::vector<Eigen::VectorXd> vertices_;
    Eigen::MatrixXd a_;
    Eigen::VectorXd b_;
    mutable std::shared_ptr<PolyCone<double>> cone_;
};

// Open ellipsoid {z : (z - c)^T Q (z - c) < 1} with Q positive definite.
class EllipsoidDomain : public Domain {
public:
    EllipsoidDomain(Eigen::MatrixXd q, Eigen::VectorXd center);

    Eigen::Index dim() const override { return center_.size(); }
    bool contains(const Eigen::VectorXd& z) const override;
    std::string tag() const override { return "ellipsoid"; }

    const Eigen::MatrixXd& form() const { return q_; }
    const Eigen::VectorXd& center() const { return center_; }
    // Quadratic form on R^n, positive on the cone over the domain: w^2 - (z - c w)^T Q (z - c w).
    double cone_form(const Eigen::VectorXd& y) const;

private:
    Eigen::MatrixXd q_;
    Eigen::VectorXd center_;
};

// Parabolic model {z : z_d > |z_{<d}|^2 / 2}; unbounded in the chart.
class GraphDomain : public Domain {
public:
    explicit GraphDomain(Eigen::Index dim);
    Eigen::Index dim() const override { return dim_; }
    bool contains(const Eigen::VectorXd& z) const override;
    std::string tag() const override { return "paraboloid"; }

private:
    Eigen::Index dim_;
};

// Domain given by an arbitrary membership predicate. The optional defining
// function is negative exactly on the domain when present.
class ImplicitDomain : public Domain {
public:
    ImplicitDomain(Eigen::Index dim, std::function<bool(const Eigen::VectorXd&)> member, std::string tag,
                   Eigen::VectorXd reference);

    Eigen::Index dim() const override { return dim_; }
    bool contains(const Eigen::VectorXd& z) const override { return member_(z); }
    std::string tag() const override { return tag_; }
    const Eigen::VectorXd& reference_point() const { return reference_; }

    std::function<double(const Eigen::VectorXd&)> defining_function;

    // Boundary point along the ray from the reference point in direction u.
    Eigen::VectorXd boundary_point(const Eigen::VectorXd& u) const;
    std::vector<Eigen::VectorXd> boundary_sample(int count, unsigned seed) const;

private:
    Eigen::Index dim_;
    std::function<bool(const Eigen::VectorXd&)> member_;
    std::string tag_;
    Eigen::VectorXd reference_;
};

// Intersection of the line through x and y with the boundary. An endpoint
// that escapes to infinity in the chart is flagged and left unset.
struct Chord {
    Eigen::VectorXd a;  // on the side of x
    Eigen::VectorXd b;  // on the side of y
    bool a_infinite = false;
    bool b_infinite = false;
};

Chord line_boundary_intersect(const Domain& d, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// d(x, y) = log(|a-y||b-x| / (|a-x||b-y|)) / 2 using the chord endpoints.
double hilbert_distance(const Domain& d, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Vinberg dual map: the projectivized differential of log f_C at x. The
// unnormalized covector d log f_C(x) lies in the open dual cone.
ProjHyperplane dual_map(const PolyCone<double>& c, const Eigen::VectorXd& x);
ProjHyperplane dual_map(const PolyCone<Rational>& c, const Eigen::VectorXd& x);
Eigen::VectorXd log_characteristic_gradient(const PolyCone<double>& c, const Eigen::VectorXd& x);
Eigen::VectorXd log_characteristic_gradient(const PolyCone<Rational>& c, const Eigen::VectorXd& x);

// Radially projects the points onto {f_C = level} and averages the extreme
// points of their convex hull.
Eigen::VectorXd center_of_mass(const PolyCone<double>& c, const std::vector<Eigen::VectorXd>& k, double level);
Eigen::VectorXd center_of_mass(const PolyCone<Rational>& c, const std::vector<Eigen::VectorXd>& k, double level);

class DegenerateHullError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Convex hull of chart points as an open polytope. Throws DegenerateHullError
// when the points lie in a proper affine subspace.
PolyDomain convex_hull_in_chart(const std::vector<Eigen::VectorXd>& points);

// Sublevel set {F < level * F(r)} of the degree-zero function F = f_C * phi_H^n
// inside the domain, where H supports the domain and r is the vertex centroid
// (polytope) or center (ellipsoid). Requires level > 0.
ImplicitDomain smooth_domain(const PolyDomain& omega, const Eigen::VectorXd& support_covector, double level);
ImplicitDomain smooth_domain(const EllipsoidDomain& omega, const Eigen::VectorXd& support_covector, double level);

}  // namespace cvxproj
