#include "cvxproj/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace cvxproj {

std::string to_string(EntryClass c) {
    switch (c) {
        case EntryClass::dominating: return "dominating";
        case EntryClass::dominated: return "dominated";
        case EntryClass::indeterminate: return "indeterminate";
    }
    return "?";
}

std::string to_string(SProperness s) {
    switch (s) {
        case SProperness::s_proper_up: return "s_proper_up";
        case SProperness::s_proper_down: return "s_proper_down";
        case SProperness::not_s_proper: return "not_s_proper";
        case SProperness::inconclusive: return "inconclusive";
    }
    return "?";
}

int dyadic_bucket(double norm) {
    if (!(norm > 0) || !std::isfinite(norm)) throw std::invalid_argument("dyadic_bucket: norm must be positive and finite");
    return static_cast<int>(std::floor(std::log2(norm)));
}

namespace {

// Top three nonempty buckets, ascending; empty if fewer exist.
std::vector<int> top_buckets(const std::vector<int>& keys) {
    std::set<int> distinct(keys.begin(), keys.end());
    if (distinct.size() < 3) return {};
    std::vector<int> all(distinct.begin(), distinct.end());
    return {all.end() - 3, all.end()};
}

std::vector<int> sample_buckets(const std::vector<FloatSample>& samples) {
    std::vector<int> keys;
    keys.reserve(samples.size());
    for (const auto& s : samples) keys.push_back(dyadic_bucket(max_abs(s.m)));
    return keys;
}

// Indices of samples in the top three buckets, or every sample when there are fewer.
std::vector<std::size_t> far_indices(const std::vector<int>& keys, bool top_only) {
    std::vector<int> top = top_buckets(keys);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (top.empty()) out.push_back(i);
        else if (top_only ? keys[i] == top.back() : keys[i] >= top.front()) out.push_back(i);
    }
    return out;
}

}  // namespace

std::vector<std::pair<int, int>> OrderReport::dominating() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = 0; j < classes[i].size(); ++j)
            if (classes[i][j] == EntryClass::dominating) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return out;
}

OrderReport domination_analysis(const std::vector<Eigen::MatrixXd>& samples) {
    if (samples.empty()) throw std::invalid_argument("domination_analysis: no samples");
    OrderReport r;
    r.dim = samples.front().rows();
    const auto n = static_cast<std::size_t>(r.dim);
    r.classes.assign(n, std::vector<EntryClass>(n, EntryClass::indeterminate));
    std::vector<int> keys;
    for (const auto& m : samples) keys.push_back(dyadic_bucket(max_abs(m)));
    r.buckets = top_buckets(keys);
    if (r.buckets.empty()) return r;
    r.bounded = false;
    r.ratios.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(3, 0.0)));
    for (std::size_t s = 0; s < samples.size(); ++s) {
        auto it = std::find(r.buckets.begin(), r.buckets.end(), keys[s]);
        if (it == r.buckets.end()) continue;
        const auto b = static_cast<std::size_t>(it - r.buckets.begin());
        const double norm = max_abs(samples[s]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double q = std::abs(samples[s](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) / norm;
                r.ratios[i][j][b] = std::max(r.ratios[i][j][b], q);
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& q = r.ratios[i][j];
            bool decreasing = q[1] <= q[0] * (1 + 1e-12) && q[2] <= q[1] * (1 + 1e-12);
            if (decreasing && q[2] < 0.1) r.classes[i][j] = EntryClass::dominated;
            else if (*std::max_element(q.begin(), q.end()) > 0.5) r.classes[i][j] = EntryClass::dominating;
        }
    return r;
}

OrderReport domination_analysis(const std::vector<FloatSample>& samples) {
    std::vector<Eigen::MatrixXd> ms;
    ms.reserve(samples.size());
    for (const auto& s : samples) ms.push_back(s.m);
    return domination_analysis(ms);
}

SProperness sproper_test(const std::vector<double>& values, const std::vector<double>& scales) {
    if (values.size() != scales.size()) throw std::invalid_argument("sproper_test: size mismatch");
    std::vector<int> keys;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (scales[i] > 0) {
            keys.push_back(dyadic_bucket(scales[i]));
            idx.push_back(i);
        }
    std::vector<int> top = top_buckets(keys);
    if (top.empty()) return SProperness::inconclusive;
    std::vector<double> lo(3, std::numeric_limits<double>::infinity()), hi(3, -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < keys.size(); ++k) {
        auto it = std::find(top.begin(), top.end(), keys[k]);
        if (it == top.end()) continue;
        auto b = static_cast<std::size_t>(it - top.begin());
        lo[b] = std::min(lo[b], values[idx[k]]);
        hi[b] = std::max(hi[b], values[idx[k]]);
    }
    if (lo[2] < 0 && hi[2] > 0) return SProperness::not_s_proper;
    if (lo[0] > 0 && lo[1] > 0 && lo[2] > 0 && lo[0] < lo[1] && lo[1] < lo[2]) return SProperness::s_proper_up;
    if (hi[0] < 0 && hi[1] < 0 && hi[2] < 0 && hi[0] > hi[1] && hi[1] > hi[2]) return SProperness::s_proper_down;
    return SProperness::inconclusive;
}

double coefficient_value(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& g, const Eigen::VectorXd& x) {
    return alpha.dot(g * x);
}

CoefficientWitness evaluate_witness(const Eigen::VectorXd& alpha, const Eigen::VectorXd& x,
                                    const std::vector<FloatSample>& samples, double eta) {
    if (samples.empty()) throw std::invalid_argument("evaluate_witness: no samples");
    CoefficientWitness w{alpha, x, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), eta, 0.0};
    std::vector<int> keys = sample_buckets(samples);
    for (std::size_t i : far_indices(keys, false))
        w.epsilon = std::min(w.epsilon, coefficient_value(alpha, samples[i].m, x) / max_abs(samples[i].m));
    for (const auto& s : samples) {
        double v = coefficient_value(alpha, s.m, x);
        w.delta = std::min(w.delta, v);
        w.bound = std::max(w.bound, w.epsilon * max_abs(s.m) - v);
    }
    return w;
}

bool witness_holds(const CoefficientWitness& w, const std::vector<FloatSample>& samples) {
    const double amax = std::max(1.0, w.alpha.cwiseAbs().maxCoeff()), xmax = std::max(1.0, w.x.cwiseAbs().maxCoeff());
    for (const auto& s : samples) {
        double v = coefficient_value(w.alpha, s.m, w.x);
        double slack = 1e-9 * std::max(1.0, std::abs(v));
        if (v < w.delta - slack || v < w.epsilon * max_abs(s.m) - w.bound - slack) return false;
        // Worst case of alpha' (gamma x') with |alpha' - alpha|, |x' - x| <= eta componentwise.
        double spread = w.eta * (amax + xmax + w.eta) * sum_abs(s.m);
        if (!(v - spread > 0)) return false;
    }
    return true;
}

namespace {

// Maximizes over rows = fixed + pool by solving on a growing active subset of the pool.
LpResult cutting_plane_maximize(const Eigen::VectorXd& objective, const std::vector<LinearConstraint>& fixed,
                                const std::vector<LinearConstraint>& pool, std::size_t initial = 120,
                                std::size_t add = 60) {
    std::vector<char> active(pool.size(), 0);
    std::vector<LinearConstraint> rows = fixed;
    const std::size_t first = std::min(initial, pool.size());
    for (std::size_t k = 0; k < first; ++k) {
        // Evenly spaced picks so early rounds see the whole range.
        std::size_t i = pool.size() <= initial ? k : k * pool.size() / first;
        if (!active[i]) {
            active[i] = 1;
            rows.push_back(pool[i]);
        }
    }
    LpResult res;
    for (int round = 0; round < 200; ++round) {
        res = lp_maximize(objective, rows);
        if (res.status != LpStatus::optimal) return res;
        std::vector<std::pair<double, std::size_t>> viol;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (active[i]) continue;
            double scale = std::max({1.0, std::abs(pool[i].b), pool[i].a.cwiseAbs().maxCoeff()});
            double gap = pool[i].a.dot(res.x) - pool[i].b;
            if (gap < -1e-9 * scale) viol.push_back({gap / scale, i});
        }
        if (viol.empty()) return res;
        std::sort(viol.begin(), viol.end());
        for (std::size_t k = 0; k < std::min(add, viol.size()); ++k) {
            active[viol[k].second] = 1;
            rows.push_back(pool[viol[k].second]);
        }
    }
    res.status = LpStatus::pivot_limit;
    return res;
}

void add_box(std::vector<LinearConstraint>& rows, Eigen::Index vars, Eigen::Index total) {
    for (Eigen::Index i = 0; i < vars; ++i) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(total);
        a(i) = 1;
        rows.push_back({a, -1});
        a(i) = -1;
        rows.push_back({a, -1});
    }
}

struct SampleData {
    std::vector<Eigen::MatrixXd> m;
    std::vector<double> norm, l1;
    std::vector<std::size_t> far;       // top three buckets
    std::vector<std::size_t> top;       // top bucket only
};

SampleData prepare(const std::vector<FloatSample>& samples) {
    SampleData d;
    for (const auto& s : samples) {
        d.m.push_back(s.m);
        d.norm.push_back(max_abs(s.m));
        d.l1.push_back(sum_abs(s.m));
    }
    std::vector<int> keys = sample_buckets(samples);
    d.far = far_indices(keys, false);
    d.top = far_indices(keys, true);
    return d;
}

// One side of the bilinear problem: value_s = c_s . v with v boxed; maximize the growth margin.
struct SideResult {
    bool ok = false;
    Eigen::VectorXd v;
    double eps = -std::numeric_limits<double>::infinity();
};

// Soft mode maximizes the least normalized robust value over all samples instead, which is
// always feasible and steers the alternation toward positive growing coefficients.
SideResult solve_side(const SampleData& d, const std::vector<Eigen::VectorXd>& coeff, double eta, bool soft = false) {
    const Eigen::Index n = coeff.front().size();
    const double kappa = eta * (2 + eta);
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(n + 1);
    obj(n) = 1;
    std::vector<LinearConstraint> fixed, pool;
    add_box(fixed, n, n + 1);
    {
        // Keep the margin variable bounded before any growth row is active.
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
        a(n) = -1;
        fixed.push_back({a, -static_cast<double>(n * n)});
    }
    std::vector<char> is_far(d.m.size(), 0);
    for (std::size_t i : d.far) is_far[i] = 1;
    for (std::size_t s = 0; s < d.m.size(); ++s) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
        a.head(n) = coeff[s] / d.norm[s];
        if (soft) {
            a(n) = -1;
            pool.push_back({a, kappa * d.l1[s] / d.norm[s]});
            continue;
        }
        pool.push_back({a, (eta + kappa * d.l1[s]) / d.norm[s]});
        if (is_far[s]) {
            a(n) = -1;
            pool.push_back({a, kappa * d.l1[s] / d.norm[s]});
        }
    }
    LpResult r = cutting_plane_maximize(obj, fixed, pool);
    SideResult out;
    if (r.status != LpStatus::optimal) return out;
    out.ok = true;
    out.v = r.x.head(n);
    out.eps = r.x(n);
    return out;
}

SideResult solve_for_x(const SampleData& d, const Eigen::VectorXd& alpha, double eta, bool soft = false) {
    std::vector<Eigen::VectorXd> c;
    for (const auto& m : d.m) c.push_back(m.transpose() * alpha);
    return solve_side(d, c, eta, soft);
}

SideResult solve_for_alpha(const SampleData& d, const Eigen::VectorXd& x, double eta, bool soft = false) {
    std::vector<Eigen::VectorXd> c;
    for (const auto& m : d.m) c.push_back(m * x);
    return solve_side(d, c, eta, soft);
}

// Growth margin of the rank-free relaxation: alpha x^T replaced by any M with |M_ij| <= 1.
struct Relaxed {
    bool ok = false;
    double eps = 0;
    Eigen::MatrixXd m;
};

Relaxed relaxed_margin(const SampleData& d, double bound) {
    const Eigen::Index n = d.m.front().rows(), nv = n * n;
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(nv + 1);
    obj(nv) = 1;
    std::vector<LinearConstraint> fixed, pool;
    add_box(fixed, nv, nv + 1);
    {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(nv + 1);
        a(nv) = -1;
        fixed.push_back({a, -static_cast<double>(nv)});
    }
    std::vector<char> is_top(d.m.size(), 0);
    for (std::size_t i : d.top) is_top[i] = 1;
    for (std::size_t s = 0; s < d.m.size(); ++s) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(nv + 1);
        a.head(nv) = Eigen::Map<const Eigen::VectorXd>(d.m[s].data(), nv) / d.norm[s];
        pool.push_back({a, -bound / d.norm[s]});
        if (is_top[s]) {
            a(nv) = -1;
            pool.push_back({a, 0.0});
        }
    }
    LpResult r = cutting_plane_maximize(obj, fixed, pool);
    Relaxed out;
    if (r.status != LpStatus::optimal) return out;
    out.ok = true;
    out.eps = r.x(nv);
    out.m = Eigen::Map<const Eigen::MatrixXd>(r.x.data(), n, n);
    return out;
}

Eigen::VectorXd box_normalize(const Eigen::VectorXd& v) {
    double s = v.cwiseAbs().maxCoeff();
    return s > 0 ? Eigen::VectorXd(v / s) : v;
}

struct Search {
    Eigen::VectorXd alpha, x;
    double eps = -std::numeric_limits<double>::infinity();
};

void alternate(const SampleData& d, Eigen::VectorXd alpha, const CoefficientOptions& opts, Search& best) {
    Eigen::VectorXd x;
    double last = -std::numeric_limits<double>::infinity();
    for (int round = 0; round < opts.rounds; ++round) {
        SideResult sx = solve_for_x(d, alpha, opts.eta, true);
        if (!sx.ok) return;
        SideResult sa = solve_for_alpha(d, sx.v, opts.eta, true);
        if (!sa.ok) return;
        x = sx.v;
        alpha = sa.v;
        if (sa.eps <= last + 1e-9) break;
        last = sa.eps;
    }
    if (!(last > 0)) return;
    // Hard growth margin for the soft optimum, from either side.
    SideResult hx = solve_for_x(d, alpha, opts.eta);
    if (hx.ok && hx.eps > best.eps) best = {alpha, hx.v, hx.eps};
    SideResult ha = solve_for_alpha(d, x, opts.eta);
    if (ha.ok && ha.eps > best.eps) best = {ha.v, x, ha.eps};
}

nlohmann::json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

ConditionVerdict find_positive_generic_coefficient(const std::vector<FloatSample>& samples, const CoefficientOptions& opts) {
    ConditionVerdict v;
    v.condition = Condition::GPplus;
    v.sample_count = samples.size();
    for (const auto& s : samples) v.max_length = std::max(v.max_length, s.length);
    if (samples.empty()) {
        v.reason = "no samples";
        return v;
    }
    SampleData d = prepare(samples);
    if (top_buckets(sample_buckets(samples)).empty()) {
        v.reason = "samples are bounded: fewer than three dyadic norm buckets";
        return v;
    }
    v.evidence["growth_floor"] = opts.growth_floor;
    v.evidence["eta"] = opts.eta;

    auto certify = [&](const Search& s, const std::string& how) {
        CoefficientWitness w = evaluate_witness(s.alpha, s.x, samples, opts.eta);
        v.status = VerdictStatus::certified_on_sample;
        v.reason = how + ": alpha(gamma x) positive on every sample and at least " + std::to_string(w.epsilon) +
                   " |gamma|_inf on the top norm buckets, stable under eta perturbation";
        v.witness = w;
        v.evidence["lp_margin"] = s.eps;
    };

    if (opts.alpha) {
        Search s;
        Eigen::VectorXd alpha = box_normalize(*opts.alpha);
        SideResult sx = solve_for_x(d, alpha, opts.eta);
        if (sx.ok) s = {alpha, sx.v, sx.eps};
        v.evidence["shortcut_margin"] = sx.ok ? nlohmann::json(sx.eps) : nlohmann::json(nullptr);
        if (sx.ok && sx.eps >= opts.growth_floor) {
            certify(s, "fixed covector shortcut");
            return v;
        }
    }

    nlohmann::json scan = nlohmann::json::array();
    bool all_below = true;
    Relaxed widest;
    for (double b : opts.bound_scan) {
        Relaxed r = relaxed_margin(d, b);
        scan.push_back({{"B", b}, {"max_margin", r.ok ? nlohmann::json(r.eps) : nlohmann::json(nullptr)}});
        if (!r.ok || r.eps >= opts.growth_floor) all_below = false;
        if (r.ok) widest = r;
    }
    v.evidence["relaxation"] = scan;
    if (all_below) {
        v.status = VerdictStatus::refuted_on_sample;
        v.reason = "no linear combination of entries with coefficients in [-1, 1] is bounded below by -B on the sample "
                   "and grows like " + std::to_string(opts.growth_floor) +
                   " |gamma|_inf on the top norm bucket, for every scanned B; this excludes only witnesses meeting "
                   "these scanned constraints";
        for (std::size_t i : d.top) v.offending_words.push_back(samples[i].word);
        return v;
    }

    Search best;
    if (widest.ok) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(widest.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        alternate(d, box_normalize(svd.matrixU().col(0)), opts, best);
        if (best.eps < opts.growth_floor) alternate(d, box_normalize(-svd.matrixU().col(0)), opts, best);
    }
    const Eigen::Index n = d.m.front().rows();
    if (best.eps < opts.growth_floor) alternate(d, Eigen::VectorXd::Ones(n), opts, best);
    for (Eigen::Index i = 0; i < n && best.eps < opts.growth_floor; ++i) {
        alternate(d, Eigen::VectorXd::Unit(n, i), opts, best);
        if (best.eps < opts.growth_floor) alternate(d, -Eigen::VectorXd::Unit(n, i), opts, best);
    }
    if (best.eps >= opts.growth_floor) {
        certify(best, "alternating search");
        return v;
    }
    v.reason = "relaxation allows growth but no rank-one witness was found";
    v.evidence["best_margin"] = std::isfinite(best.eps) ? nlohmann::json(best.eps) : nlohmann::json(nullptr);
    return v;
}

Eigen::MatrixXd top_row_basis(const Eigen::VectorXd& p) {
    const Eigen::Index n = p.size();
    Eigen::Index piv = 0;
    p.cwiseAbs().maxCoeff(&piv);
    if (!(std::abs(p(piv)) > 0)) throw std::invalid_argument("top_row_basis: p is zero");
    Eigen::MatrixXd b(n, n);
    b.col(0) = p;
    Eigen::Index c = 1;
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != piv) b.col(c++) = Eigen::VectorXd::Unit(n, j);
    return b;
}

Eigen::MatrixXd top_right_basis(const Eigen::VectorXd& p, const Eigen::VectorXd& phi) {
    const Eigen::Index n = p.size();
    if (n < 2 || phi.size() != n) throw std::invalid_argument("top_right_basis: dimension mismatch");
    Eigen::Index q = 0;
    phi.cwiseAbs().maxCoeff(&q);
    if (!(std::abs(phi(q)) > 0)) throw std::invalid_argument("top_right_basis: phi is zero");
    if (std::abs(phi.dot(p)) > 1e-10 * p.norm() * phi.norm())
        throw std::invalid_argument("top_right_basis: phi(p) != 0");
    // ker phi is spanned by e_j - (phi_j / phi_q) e_q, j != q; drop the one p leans on most.
    Eigen::Index drop = -1;
    double best = -1;
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != q && std::abs(p(j)) > best) {
            best = std::abs(p(j));
            drop = j;
        }
    Eigen::MatrixXd b(n, n);
    b.col(0) = p;
    Eigen::Index c = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == q || j == drop) continue;
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, j);
        v(q) = -phi(j) / phi(q);
        b.col(c++) = v;
    }
    b.col(n - 1) = Eigen::VectorXd::Unit(n, q) / phi(q);
    return b;
}

std::vector<FloatSample> change_basis(const std::vector<FloatSample>& samples, const Eigen::MatrixXd& basis) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (!lu.isInvertible()) throw std::invalid_argument("change_basis: singular basis");
    Eigen::MatrixXd inv = lu.inverse();
    std::vector<FloatSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back({inv * s.m * basis, s.length, s.word});
    return out;
}

namespace {

std::vector<FixedPair> pair_choices(const FixedPairResult& fixed) {
    if (fixed.pair) return {*fixed.pair};
    return fixed.candidates;
}

ConditionVerdict base_verdict(Condition c, const std::vector<FloatSample>& samples) {
    ConditionVerdict v;
    v.condition = c;
    v.sample_count = samples.size();
    for (const auto& s : samples) v.max_length = std::max(v.max_length, s.length);
    return v;
}

nlohmann::json pairs_json(const std::vector<std::pair<int, int>>& e) {
    nlohmann::json out = nlohmann::json::array();
    for (auto [i, j] : e) out.push_back({i + 1, j + 1});
    return out;
}

}  // namespace

ConditionVerdict check_condition_Tr(const FixedPairResult& fixed, const std::vector<FloatSample>& samples) {
    ConditionVerdict v = base_verdict(Condition::Tr, samples);
    auto choices = pair_choices(fixed);
    if (choices.empty()) {
        v.reason = "no fixed pair (p, phi) with phi(p) = 0: " + fixed.note;
        return v;
    }
    if (samples.empty()) {
        v.reason = "no samples";
        return v;
    }
    nlohmann::json tried = nlohmann::json::array();
    std::optional<std::vector<std::pair<int, int>>> first_offending;
    for (std::size_t c = 0; c < choices.size(); ++c) {
        OrderReport rep = domination_analysis(change_basis(samples, top_row_basis(choices[c].p.coords)));
        if (rep.bounded) {
            v.reason = "samples are bounded: fewer than three dyadic norm buckets";
            return v;
        }
        std::vector<std::pair<int, int>> off;
        for (auto e : rep.dominating())
            if (e.first != 0) off.push_back(e);
        tried.push_back({{"p", vec_json(choices[c].p.coords)},
                         {"dominating", pairs_json(rep.dominating())},
                         {"compatible", off.empty()}});
        if (off.empty() && v.status != VerdictStatus::certified_on_sample) {
            v.status = VerdictStatus::certified_on_sample;
            v.reason = "every dominating entry lies on the top row in a basis starting with p";
        }
        if (!off.empty() && !first_offending) first_offending = off;
    }
    v.evidence["choices"] = tried;
    if (v.status != VerdictStatus::certified_on_sample) {
        v.status = VerdictStatus::refuted_on_sample;
        v.offending_entries = *first_offending;
        v.reason = "dominating entries off the top row";
    }
    return v;
}

ConditionVerdict check_condition_TRe(const FixedPairResult& fixed, const std::vector<FloatSample>& samples) {
    ConditionVerdict v = base_verdict(Condition::TRe, samples);
    auto choices = pair_choices(fixed);
    if (choices.empty()) {
        v.reason = "no fixed pair (p, phi) with phi(p) = 0: " + fixed.note;
        return v;
    }
    if (samples.empty()) {
        v.reason = "no samples";
        return v;
    }
    nlohmann::json tried = nlohmann::json::array();
    std::string first_reason;
    std::vector<std::pair<int, int>> first_offending;
    for (std::size_t c = 0; c < choices.size(); ++c) {
        auto adapted = change_basis(samples, top_right_basis(choices[c].p.coords, choices[c].phi.covector));
        OrderReport rep = domination_analysis(adapted);
        if (rep.bounded) {
            v.reason = "samples are bounded: fewer than three dyadic norm buckets";
            return v;
        }
        const int n = static_cast<int>(rep.dim);
        auto dom = rep.dominating();
        std::vector<std::pair<int, int>> off;
        for (auto e : dom)
            if (e != std::pair<int, int>{0, n - 1}) off.push_back(e);
        bool corner = std::find(dom.begin(), dom.end(), std::pair<int, int>{0, n - 1}) != dom.end();
        int pos = 0, neg = 0;
        std::vector<int> keys = sample_buckets(adapted);
        const int top = rep.buckets.back();
        for (std::size_t s = 0; s < adapted.size(); ++s) {
            if (keys[s] != top) continue;
            double e = adapted[s].m(0, n - 1);
            if (e > 0) ++pos;
            else if (e < 0) ++neg;
            else ++pos, ++neg;
        }
        bool constant_sign = pos == 0 || neg == 0;
        bool ok = corner && off.empty() && constant_sign;
        tried.push_back({{"p", vec_json(choices[c].p.coords)},
                         {"phi", vec_json(choices[c].phi.covector)},
                         {"dominating", pairs_json(dom)},
                         {"top_bucket_signs", {{"positive", pos}, {"negative", neg}}},
                         {"compatible", ok}});
        if (ok && v.status != VerdictStatus::certified_on_sample) {
            v.status = VerdictStatus::certified_on_sample;
            v.reason = "the top right entry is the only dominating entry and has constant sign on the top norm bucket";
        }
        if (!ok && first_reason.empty()) {
            first_offending = off;
            first_reason = !corner ? "top right entry is not dominating"
                           : !off.empty() ? "other dominating entries besides the top right one"
                                          : "top right entry changes sign on the top norm bucket";
        }
    }
    v.evidence["choices"] = tried;
    if (v.status != VerdictStatus::certified_on_sample) {
        v.status = VerdictStatus::refuted_on_sample;
        v.offending_entries = first_offending;
        v.reason = first_reason;
    }
    return v;
}

const ConditionVerdict& HolonomyReport::verdict(Condition c) const {
    switch (c) {
        case Condition::WU: return wu;
        case Condition::GP: return gp;
        case Condition::GPplus: return gp_plus;
        case Condition::Tr: return tr;
        case Condition::TRe: return tre;
    }
    return wu;
}

std::string summary_verdict(VerdictStatus wu, VerdictStatus gp, VerdictStatus gp_plus, VerdictStatus tr,
                            VerdictStatus tre) {
    using S = VerdictStatus;
    if (wu != S::certified_on_sample) return "none";
    if (tre == S::certified_on_sample) return "round_candidate";
    if (gp == S::certified_on_sample && tr == S::certified_on_sample) return "strictly_convex_candidate";
    if (gp_plus == S::certified_on_sample) return "preserves_domain_candidate";
    return "none";
}

HolonomyReport holonomy_from_samples(const std::vector<FloatSample>& samples, const FixedPairResult& fixed, int length) {
    HolonomyReport r;
    r.fixed = fixed;
    r.length = length;
    r.sample_count = samples.size();
    r.wu = weakly_unipotent_check(samples);
    r.tr = check_condition_Tr(fixed, samples);
    r.tre = check_condition_TRe(fixed, samples);
    CoefficientOptions opts;
    if (r.tr.certified()) {
        // alpha = first coordinate in a basis starting with p.
        auto choices = fixed.pair ? std::vector<FixedPair>{*fixed.pair} : fixed.candidates;
        Eigen::MatrixXd b = top_row_basis(choices.front().p.coords);
        opts.alpha = Eigen::VectorXd(b.inverse().row(0).transpose());
    }
    r.gp_plus = find_positive_generic_coefficient(samples, opts);
    r.gp = base_verdict(Condition::GP, samples);
    if (r.gp_plus.certified()) {
        r.gp.status = VerdictStatus::certified_on_sample;
        r.gp.reason = "implied by the positive generic coefficient found for GP+";
        r.gp.witness = r.gp_plus.witness;
    } else {
        r.gp.reason = "checked only through GP+, which was not certified";
    }
    r.summary = summary_verdict(r.wu.status, r.gp.status, r.gp_plus.status, r.tr.status, r.tre.status);
    return r;
}

HolonomyReport cusp_holonomy_verdict(const AnyGroup& g, int length, bool box_grid) {
    return std::visit([&](const auto& grp) { return cusp_holonomy_verdict(grp, length, box_grid); }, g);
}

nlohmann::json to_json(const ConditionVerdict& v) {
    nlohmann::json j;
    j["condition"] = to_string(v.condition);
    j["status"] = to_string(v.status);
    j["reason"] = v.reason;
    if (v.witness) {
        const auto& w = *v.witness;
        j["witness"] = {{"alpha", vec_json(w.alpha)}, {"x", vec_json(w.x)}, {"delta", w.delta},
                        {"epsilon", w.epsilon},       {"eta", w.eta},       {"bound", w.bound}};
    } else {
        j["witness"] = nullptr;
    }
    j["offending_entries"] = pairs_json(v.offending_entries);
    j["offending_words"] = v.offending_words;
    j["sample"] = {{"L", v.max_length}, {"count", v.sample_count}};
    j["evidence"] = v.evidence;
    return j;
}

nlohmann::json to_json(const HolonomyReport& r) {
    nlohmann::json j;
    j["summary"] = r.summary;
    j["sample"] = {{"L", r.length}, {"count", r.sample_count}};
    nlohmann::json conds = nlohmann::json::array();
    for (auto c : {Condition::WU, Condition::GP, Condition::GPplus, Condition::Tr, Condition::TRe})
        conds.push_back(to_json(r.verdict(c)));
    j["conditions"] = conds;
    if (r.fixed.pair)
        j["fixed_pair"] = {{"p", vec_json(r.fixed.pair->p.coords)}, {"phi", vec_json(r.fixed.pair->phi.covector)}};
    else
        j["fixed_pair"] = nullptr;
    return j;
}

}  // namespace cvxproj
