#include "cvxproj/convex.hpp"

#include "cvxproj/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cvxproj {

namespace {

constexpr int kBisectionSteps = 60;
constexpr double kBisectionStop = 1e-12;

void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// Largest t in (t_in, t_out) still inside along p + t u, returned as [inside, outside] pair.
std::pair<double, double> bisect(const std::function<bool(const Eigen::VectorXd&)>& inside, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& u, double t_in, double t_out) {
    for (int i = 0; i < kBisectionSteps; ++i) {
        if (t_out - t_in <= kBisectionStop * std::max(1.0, std::abs(t_out))) break;
        double mid = 0.5 * (t_in + t_out);
        if (mid <= t_in || mid >= t_out) break;
        if (inside(p + mid * u)) t_in = mid;
        else t_out = mid;
    }
    return {t_in, t_out};
}

struct RayExit {
    double t = 0;  // boundary parameter
    double outer = 0;  // smallest parameter known to be outside
    bool infinite = false;
};

// Exit parameter along x + t u; x is inside and t0 > 0 is the first trial step.
RayExit ray_exit(const Domain& d, const Eigen::VectorXd& x, const Eigen::VectorXd& u, double t0) {
    auto inside = [&](const Eigen::VectorXd& z) { return d.contains(z); };
    double t_in = 0, t_out = t0;
    const double far = 1e12 * std::max(1.0, x.cwiseAbs().maxCoeff());
    while (inside(x + t_out * u)) {
        t_in = t_out;
        t_out *= 2;
        if (t_out > far) return {0, 0, true};
    }
    auto [lo, hi] = bisect(inside, x, u, t_in, t_out);
    // Along a ray from an interior point, a convex set is entered once and left once.
    for (double k : {0.25, 0.5, 0.75})
        if (!inside(x + k * lo * u)) throw NumericError("line_boundary_intersect: membership not monotone along ray");
    for (double k : {1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0, 64.0})
        if (inside(x + k * hi * u)) throw NumericError("line_boundary_intersect: membership not monotone along ray");
    return {0.5 * (lo + hi), hi, false};
}

struct ChordParams {
    double s = 0;   // |y - x|
    double ta = 0;  // distance from x back to a
    double tb = 0;  // distance from x forward to b
    bool a_inf = false, b_inf = false;
    Eigen::VectorXd u;
};

ChordParams chord_params(const Domain& d, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    require_dim(x.size(), d.dim(), "line_boundary_intersect");
    require_dim(y.size(), d.dim(), "line_boundary_intersect");
    if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("line_boundary_intersect: non-finite point");
    if (!d.contains(x) || !d.contains(y)) throw std::invalid_argument("line_boundary_intersect: point not interior");
    ChordParams c;
    c.s = (y - x).norm();
    if (c.s == 0.0) throw std::invalid_argument("line_boundary_intersect: x equals y");
    c.u = (y - x) / c.s;
    RayExit fwd = ray_exit(d, x, c.u, c.s);
    RayExit back = ray_exit(d, x, -c.u, c.s);
    c.tb = fwd.t;
    c.b_inf = fwd.infinite;
    c.ta = back.t;
    c.a_inf = back.infinite;
    return c;
}

template <class T> Eigen::VectorXd log_gradient_impl(const PolyCone<T>& c, const Eigen::VectorXd& x) {
    double f = characteristic_function(c, x);
    Eigen::VectorXd g = characteristic_gradient(c, x) / f;
    if (!g.allFinite() || g.norm() == 0.0) throw NumericError("dual_map: degenerate gradient");
    return g;
}

template <class T>
Eigen::VectorXd center_of_mass_impl(const PolyCone<T>& c, const std::vector<Eigen::VectorXd>& k, double level) {
    if (k.empty()) throw std::invalid_argument("center_of_mass: empty point set");
    if (!(level > 0)) throw std::invalid_argument("center_of_mass: level must be positive");
    const double n = static_cast<double>(c.dim());
    std::vector<Eigen::VectorXd> q;
    for (const auto& p : k) {
        double f = characteristic_function(c, p);
        Eigen::VectorXd proj = std::pow(f / level, 1.0 / n) * p;
        bool dup = false;
        for (const auto& o : q)
            if ((o - proj).norm() <= 1e-12 * std::max(1.0, proj.norm())) { dup = true; break; }
        if (!dup) q.push_back(proj);
    }
    // Extreme points: those not in the convex hull of the others.
    std::vector<Eigen::VectorXd> extreme;
    const auto m = static_cast<Eigen::Index>(q.size());
    for (Eigen::Index i = 0; i < m; ++i) {
        if (m == 1) { extreme.push_back(q[0]); break; }
        std::vector<LinearConstraint> cons;
        const Eigen::Index vars = m - 1;
        for (Eigen::Index j = 0; j < vars; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(vars);
            e(j) = 1;
            cons.push_back({e, 0.0});
        }
        cons.push_back({Eigen::VectorXd::Ones(vars), 1.0});
        cons.push_back({-Eigen::VectorXd::Ones(vars), -1.0});
        for (Eigen::Index r = 0; r < c.dim(); ++r) {
            Eigen::VectorXd row(vars);
            Eigen::Index col = 0;
            for (Eigen::Index j = 0; j < m; ++j)
                if (j != i) row(col++) = q[static_cast<std::size_t>(j)](r);
            double target = q[static_cast<std::size_t>(i)](r);
            cons.push_back({row, target - 1e-10});
            cons.push_back({-row, -target - 1e-10});
        }
        if (!lp_feasible(cons, vars)) extreme.push_back(q[static_cast<std::size_t>(i)]);
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(c.dim());
    for (const auto& e : extreme) sum += e;
    return sum / static_cast<double>(extreme.size());
}

// Hyperplane n.x = off through d points in R^d, with unit normal; nullopt if degenerate.
std::optional<std::pair<Eigen::VectorXd, double>> hyperplane_through(const std::vector<Eigen::VectorXd>& pts,
                                                                     const std::vector<int>& ids) {
    const Eigen::Index d = pts.front().size();
    Eigen::MatrixXd m(d, d + 1);
    for (Eigen::Index i = 0; i < d; ++i) {
        m.row(i).head(d) = pts[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])].transpose();
        m(i, d) = -1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> s(m, Eigen::ComputeFullV);
    const auto& sv = s.singularValues();
    if (sv(d - 1) <= 1e-13 * std::max(1.0, sv(0))) return std::nullopt;
    Eigen::VectorXd k = s.matrixV().col(d);
    Eigen::VectorXd normal = k.head(d);
    double nn = normal.norm();
    if (nn == 0.0) return std::nullopt;
    return std::make_pair(Eigen::VectorXd(normal / nn), k(d) / nn);
}

struct HullFacet {
    std::vector<int> v;  // sorted vertex ids
    Eigen::VectorXd normal;
    double offset;
    bool alive = true;
};

double smoothing_tolerance(double scale) { return 1e-10 * std::max(1.0, scale); }

}  // namespace

PolyDomain::PolyDomain(std::vector<Eigen::VectorXd> vertices, Eigen::MatrixXd a, Eigen::VectorXd b)
    : dim_(a.cols()), vertices_(std::move(vertices)), a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != b_.size()) throw std::invalid_argument("PolyDomain: facet data mismatch");
    if (vertices_.empty()) throw std::invalid_argument("PolyDomain: no vertices");
    for (const auto& v : vertices_) require_dim(v.size(), dim_, "PolyDomain");
}

bool PolyDomain::contains(const Eigen::VectorXd& z) const {
    require_dim(z.size(), dim_, "PolyDomain::contains");
    if (!z.allFinite()) return false;
    return ((a_ * z - b_).array() < 0).all();
}

const PolyCone<double>& PolyDomain::cone() const {
    if (!cone_) {
        std::vector<Eigen::VectorXd> rays;
        for (const auto& v : vertices_) rays.push_back(lift(v));
        cone_ = std::make_shared<PolyCone<double>>(PolyCone<double>::from_rays(rays));
    }
    return *cone_;
}

ProjHyperplane PolyDomain::chart() const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_ + 1);
    e(dim_) = 1.0;
    return ProjHyperplane(e);
}

Eigen::VectorXd PolyDomain::vertex_centroid() const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(dim_);
    for (const auto& v : vertices_) s += v;
    return s / static_cast<double>(vertices_.size());
}

EllipsoidDomain::EllipsoidDomain(Eigen::MatrixXd q, Eigen::VectorXd center) : q_(std::move(q)), center_(std::move(center)) {
    if (q_.rows() != q_.cols() || q_.rows() != center_.size())
        throw std::invalid_argument("EllipsoidDomain: shape mismatch");
    if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, q_.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("EllipsoidDomain: form not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(q_);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("EllipsoidDomain: form not positive definite");
}

bool EllipsoidDomain::contains(const Eigen::VectorXd& z) const {
    require_dim(z.size(), dim(), "EllipsoidDomain::contains");
    if (!z.allFinite()) return false;
    Eigen::VectorXd d = z - center_;
    return d.dot(q_ * d) < 1.0;
}

double EllipsoidDomain::cone_form(const Eigen::VectorXd& y) const {
    require_dim(y.size(), dim() + 1, "EllipsoidDomain::cone_form");
    double w = y(dim());
    Eigen::VectorXd d = y.head(dim()) - w * center_;
    return w * w - d.dot(q_ * d);
}

GraphDomain::GraphDomain(Eigen::Index dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("GraphDomain: dimension must be positive");
}

bool GraphDomain::contains(const Eigen::VectorXd& z) const {
    require_dim(z.size(), dim_, "GraphDomain::contains");
    if (!z.allFinite()) return false;
    return z(dim_ - 1) > 0.5 * z.head(dim_ - 1).squaredNorm();
}

ImplicitDomain::ImplicitDomain(Eigen::Index dim, std::function<bool(const Eigen::VectorXd&)> member, std::string tag,
                               Eigen::VectorXd reference)
    : dim_(dim), member_(std::move(member)), tag_(std::move(tag)), reference_(std::move(reference)) {
    require_dim(reference_.size(), dim_, "ImplicitDomain");
}

Eigen::VectorXd ImplicitDomain::boundary_point(const Eigen::VectorXd& u) const {
    require_dim(u.size(), dim_, "ImplicitDomain::boundary_point");
    Eigen::VectorXd dir = u.normalized();
    RayExit e = ray_exit(*this, reference_, dir, 1e-6);
    if (e.infinite) throw std::domain_error("ImplicitDomain::boundary_point: ray does not leave the domain");
    // The outer side of the bracket, so that the sample is never inside.
    return reference_ + e.outer * dir;
}

std::vector<Eigen::VectorXd> ImplicitDomain::boundary_sample(int count, unsigned seed) const {
    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXd> out;
    if (dim_ == 2) {
        std::uniform_real_distribution<double> phase(0.0, 2 * M_PI / std::max(count, 1));
        double p0 = phase(rng);
        for (int i = 0; i < count; ++i) {
            double th = p0 + 2 * M_PI * i / count;
            out.push_back(boundary_point(Eigen::Vector2d(std::cos(th), std::sin(th))));
        }
        return out;
    }
    std::normal_distribution<double> g;
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd u(dim_);
        for (Eigen::Index j = 0; j < dim_; ++j) u(j) = g(rng);
        out.push_back(boundary_point(u));
    }
    return out;
}

Chord line_boundary_intersect(const Domain& d, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    ChordParams c = chord_params(d, x, y);
    Chord out;
    out.a_infinite = c.a_inf;
    out.b_infinite = c.b_inf;
    if (!c.a_inf) out.a = x - c.ta * c.u;
    if (!c.b_inf) out.b = x + c.tb * c.u;
    return out;
}

double hilbert_distance(const Domain& d, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    require_dim(x.size(), d.dim(), "hilbert_distance");
    require_dim(y.size(), d.dim(), "hilbert_distance");
    if (!d.contains(x) || !d.contains(y)) throw std::invalid_argument("hilbert_distance: point not interior");
    if (x == y) return 0.0;
    ChordParams c = chord_params(d, x, y);
    // log CR = log(1 + s/ta) - log(1 - s/tb); an endpoint at infinity drops its factor.
    double v = 0;
    if (!c.a_inf) v += std::log1p(c.s / c.ta);
    if (!c.b_inf) v -= std::log1p(-c.s / c.tb);
    return 0.5 * v;
}

Eigen::VectorXd log_characteristic_gradient(const PolyCone<double>& c, const Eigen::VectorXd& x) {
    return log_gradient_impl(c, x);
}
Eigen::VectorXd log_characteristic_gradient(const PolyCone<Rational>& c, const Eigen::VectorXd& x) {
    return log_gradient_impl(c, x);
}
ProjHyperplane dual_map(const PolyCone<double>& c, const Eigen::VectorXd& x) {
    return ProjHyperplane(log_gradient_impl(c, x));
}
ProjHyperplane dual_map(const PolyCone<Rational>& c, const Eigen::VectorXd& x) {
    return ProjHyperplane(log_gradient_impl(c, x));
}

Eigen::VectorXd center_of_mass(const PolyCone<double>& c, const std::vector<Eigen::VectorXd>& k, double level) {
    return center_of_mass_impl(c, k, level);
}
Eigen::VectorXd center_of_mass(const PolyCone<Rational>& c, const std::vector<Eigen::VectorXd>& k, double level) {
    return center_of_mass_impl(c, k, level);
}

PolyDomain convex_hull_in_chart(const std::vector<Eigen::VectorXd>& points) {
    if (points.empty()) throw DegenerateHullError("convex_hull_in_chart: no points");
    const Eigen::Index d = points.front().size();
    for (const auto& p : points) {
        require_dim(p.size(), d, "convex_hull_in_chart");
        if (!p.allFinite()) throw std::invalid_argument("convex_hull_in_chart: non-finite point");
    }
    double scale = 1.0;
    for (const auto& p : points) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double eps = 1e-12 * scale;

    if (d == 1) {
        double lo = points.front()(0), hi = lo;
        for (const auto& p : points) { lo = std::min(lo, p(0)); hi = std::max(hi, p(0)); }
        if (hi - lo <= eps) throw DegenerateHullError("convex_hull_in_chart: hull is lower-dimensional");
        Eigen::MatrixXd a(2, 1);
        a << 1, -1;
        return PolyDomain({Eigen::VectorXd::Constant(1, lo), Eigen::VectorXd::Constant(1, hi)}, a,
                          Eigen::Vector2d(hi, -lo));
    }

    // Initial simplex: greedily add the point farthest from the current affine span.
    std::vector<int> simplex{0};
    Eigen::MatrixXd basis(d, 0);
    while (static_cast<Eigen::Index>(simplex.size()) <= d) {
        int best = -1;
        double best_dist = eps;
        for (std::size_t i = 0; i < points.size(); ++i) {
            Eigen::VectorXd r = points[i] - points[static_cast<std::size_t>(simplex[0])];
            if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
            if (r.norm() > best_dist) { best_dist = r.norm(); best = static_cast<int>(i); }
        }
        if (best < 0) throw DegenerateHullError("convex_hull_in_chart: hull is lower-dimensional");
        Eigen::VectorXd r = points[static_cast<std::size_t>(best)] - points[static_cast<std::size_t>(simplex[0])];
        if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
        basis.conservativeResize(d, basis.cols() + 1);
        basis.col(basis.cols() - 1) = r.normalized();
        simplex.push_back(best);
    }
    Eigen::VectorXd interior = Eigen::VectorXd::Zero(d);
    for (int i : simplex) interior += points[static_cast<std::size_t>(i)];
    interior /= static_cast<double>(simplex.size());

    std::vector<HullFacet> facets;
    auto add_facet = [&](std::vector<int> ids) {
        auto h = hyperplane_through(points, ids);
        if (!h) return;
        Eigen::VectorXd nrm = h->first;
        double off = h->second;
        if (nrm.dot(interior) - off > 0) { nrm = -nrm; off = -off; }
        std::sort(ids.begin(), ids.end());
        facets.push_back({ids, nrm, off});
    };
    for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
        std::vector<int> ids;
        for (std::size_t j = 0; j < simplex.size(); ++j)
            if (j != skip) ids.push_back(simplex[j]);
        add_facet(ids);
    }

    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const int p = static_cast<int>(pi);
        if (std::find(simplex.begin(), simplex.end(), p) != simplex.end()) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < facets.size(); ++f)
            if (facets[f].alive && facets[f].normal.dot(points[pi]) - facets[f].offset > eps) visible.push_back(f);
        if (visible.empty()) continue;
        std::map<std::vector<int>, int> ridge_count;
        for (std::size_t f : visible) {
            const auto& v = facets[f].v;
            for (std::size_t skip = 0; skip < v.size(); ++skip) {
                std::vector<int> ridge;
                for (std::size_t j = 0; j < v.size(); ++j)
                    if (j != skip) ridge.push_back(v[j]);
                ++ridge_count[ridge];
            }
            facets[f].alive = false;
        }
        for (const auto& [ridge, count] : ridge_count) {
            if (count != 1) continue;
            auto ids = ridge;
            ids.push_back(p);
            add_facet(ids);
        }
    }

    // Merge coplanar simplicial facets into polytope facets.
    std::vector<Eigen::VectorXd> normals;
    std::vector<double> offsets;
    for (const auto& f : facets) {
        if (!f.alive) continue;
        bool dup = false;
        for (std::size_t j = 0; j < normals.size(); ++j)
            if ((normals[j] - f.normal).norm() <= 1e-9 && std::abs(offsets[j] - f.offset) <= 1e-9 * scale) {
                dup = true;
                break;
            }
        if (!dup) { normals.push_back(f.normal); offsets.push_back(f.offset); }
    }
    // Vertices: points whose active facets have full rank.
    std::vector<Eigen::VectorXd> verts;
    for (const auto& p : points) {
        Eigen::MatrixXd active(0, d);
        for (std::size_t j = 0; j < normals.size(); ++j) {
            if (std::abs(normals[j].dot(p) - offsets[j]) <= 1e3 * eps) {
                active.conservativeResize(active.rows() + 1, d);
                active.row(active.rows() - 1) = normals[j].transpose();
            }
        }
        if (active.rows() < d || rank<double>(active) < d) continue;
        bool dup = false;
        for (const auto& v : verts)
            if ((v - p).norm() <= eps) { dup = true; break; }
        if (!dup) verts.push_back(p);
    }
    if (d == 2) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
        for (const auto& v : verts) c += v;
        c /= static_cast<double>(verts.size());
        std::sort(verts.begin(), verts.end(), [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
        });
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(normals.size()), d);
    Eigen::VectorXd b(static_cast<Eigen::Index>(normals.size()));
    for (std::size_t j = 0; j < normals.size(); ++j) {
        a.row(static_cast<Eigen::Index>(j)) = normals[j].transpose();
        b(static_cast<Eigen::Index>(j)) = offsets[j];
    }
    return PolyDomain(std::move(verts), std::move(a), std::move(b));
}

namespace {

// Shared tail of both smoothing constructions: log F, its reference value and the touching point.
ImplicitDomain build_smoothed(std::shared_ptr<const Domain> omega, std::function<double(const Eigen::VectorXd&)> log_f,
                              const Eigen::VectorXd& reference, const Eigen::VectorXd& touch, double level) {
    const double cut = std::log(level) + log_f(reference);
    auto defining = [log_f, cut, omega](const Eigen::VectorXd& z) {
        if (!omega->contains(z)) return std::numeric_limits<double>::infinity();
        return log_f(z) - cut;
    };
    // An interior point of the sublevel set on the segment from the touching point to the reference.
    Eigen::VectorXd inner = reference;
    double s = 1.0;
    for (int i = 0; i < 400 && !(defining(inner) < std::log(0.5)); ++i) {
        s *= 0.5;
        inner = touch + s * (reference - touch);
    }
    if (!(defining(inner) < 0)) throw NumericError("smooth_domain: could not locate an interior point");
    std::ostringstream tag;
    tag << "smoothed level set, level " << level;
    ImplicitDomain out(
        reference.size(), [defining](const Eigen::VectorXd& z) { return defining(z) < 0; }, tag.str(), inner);
    out.defining_function = defining;
    return out;
}

}  // namespace

ImplicitDomain smooth_domain(const PolyDomain& omega, const Eigen::VectorXd& support_covector, double level) {
    if (!(level > 0)) throw std::invalid_argument("smooth_domain: level must be positive");
    const Eigen::Index d = omega.dim();
    const Eigen::Index n = d + 1;
    require_dim(support_covector.size(), n, "smooth_domain");
    Eigen::VectorXd phi = support_covector;
    double scale = phi.cwiseAbs().maxCoeff();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : omega.vertices()) {
        double e = phi.dot(lift(v));
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        scale = std::max(scale, std::abs(e));
    }
    const double tol = smoothing_tolerance(scale);
    if (hi <= tol) { phi = -phi; std::swap(lo, hi); lo = -lo; hi = -hi; }
    if (lo < -tol || std::abs(lo) > tol) throw std::invalid_argument("smooth_domain: hyperplane does not support the domain");
    Eigen::VectorXd touch = Eigen::VectorXd::Zero(d);
    int touching = 0;
    for (const auto& v : omega.vertices())
        if (std::abs(phi.dot(lift(v))) <= tol) { touch += v; ++touching; }
    touch /= touching;

    auto keep = std::make_shared<PolyDomain>(omega);
    const PolyCone<double>& cone = keep->cone();
    auto log_f = [keep, &cone, phi, n](const Eigen::VectorXd& z) {
        Eigen::VectorXd y = lift(z);
        return std::log(characteristic_function(cone, y)) + static_cast<double>(n) * std::log(phi.dot(y));
    };
    return build_smoothed(keep, log_f, omega.vertex_centroid(), touch, level);
}

ImplicitDomain smooth_domain(const EllipsoidDomain& omega, const Eigen::VectorXd& support_covector, double level) {
    if (!(level > 0)) throw std::invalid_argument("smooth_domain: level must be positive");
    const Eigen::Index d = omega.dim();
    const Eigen::Index n = d + 1;
    require_dim(support_covector.size(), n, "smooth_domain");
    Eigen::VectorXd phi = support_covector;
    // l(z) = a.z + a0 has extreme values a.c + a0 -/+ sqrt(a^T Q^{-1} a) on the ellipsoid.
    Eigen::VectorXd a = phi.head(d);
    Eigen::MatrixXd qinv = omega.form().inverse();
    double r = std::sqrt(a.dot(qinv * a));
    double mid = a.dot(omega.center()) + phi(d);
    if (mid < 0) { phi = -phi; a = -a; mid = -mid; }
    const double tol = smoothing_tolerance(phi.cwiseAbs().maxCoeff());
    if (r == 0.0 || std::abs(mid - r) > tol) throw std::invalid_argument("smooth_domain: hyperplane does not support the domain");
    Eigen::VectorXd touch = omega.center() - qinv * a / r;

    auto keep = std::make_shared<EllipsoidDomain>(omega);
    // f_C is proportional to q^{-n/2}; the constant cancels against the reference value.
    auto log_f = [keep, phi, n](const Eigen::VectorXd& z) {
        Eigen::VectorXd y = lift(z);
        double nd = static_cast<double>(n);
        return -0.5 * nd * std::log(keep->cone_form(y)) + nd * std::log(phi.dot(y));
    };
    return build_smoothed(keep, log_f, omega.center(), touch, level);
}

}  // namespace cvxproj
