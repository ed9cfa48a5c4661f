#include "cvxproj/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cvxproj {

std::string to_string(Condition c) {
    switch (c) {
        case Condition::WU: return "WU";
        case Condition::GP: return "GP";
        case Condition::GPplus: return "GP+";
        case Condition::Tr: return "Tr";
        case Condition::TRe: return "TRe";
    }
    return "?";
}

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::certified_on_sample: return "certified_on_sample";
        case VerdictStatus::refuted_on_sample: return "refuted_on_sample";
        case VerdictStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(ElementType t) {
    switch (t) {
        case ElementType::elliptic: return "elliptic";
        case ElementType::parabolic: return "parabolic";
        case ElementType::hyperbolic: return "hyperbolic";
    }
    return "?";
}

double fit_power_exponent(const std::vector<double>& lengths, const std::vector<double>& values) {
    if (lengths.size() != values.size()) throw std::invalid_argument("fit_power_exponent: size mismatch");
    if (lengths.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    const auto m = static_cast<Eigen::Index>(lengths.size());
    double best_p = std::numeric_limits<double>::quiet_NaN(), best_res = std::numeric_limits<double>::infinity();
    for (int step = 0; step <= 595; ++step) {
        double p = 0.05 + 0.01 * step;
        // Weighted least squares for (c, b) with weights 1 / r.
        Eigen::MatrixXd a(m, 2);
        Eigen::VectorXd rhs(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            double w = 1.0 / std::max(std::abs(values[static_cast<std::size_t>(i)]), 1e-300);
            a(i, 0) = w * std::pow(lengths[static_cast<std::size_t>(i)], p);
            a(i, 1) = w;
            rhs(i) = w * values[static_cast<std::size_t>(i)];
        }
        Eigen::Vector2d cb = a.colPivHouseholderQr().solve(rhs);
        double res = (a * cb - rhs).squaredNorm();
        if (cb(0) > 0 && res < best_res) {
            best_res = res;
            best_p = p;
        }
    }
    return best_p;
}

DivergenceReport divergence_diagnostics(const std::vector<FloatSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("divergence_diagnostics: no samples");
    const Eigen::Index n = samples.front().m.rows();
    const std::size_t kmax = n > 1 ? static_cast<std::size_t>(n - 1) : 0;
    std::map<int, std::vector<double>> mins;
    std::map<int, double> max_entry;
    for (const auto& s : samples) {
        SingularProfile sp = svd(s.m);
        auto& row = mins.try_emplace(s.length, std::vector<double>(kmax, std::numeric_limits<double>::infinity())).first->second;
        for (std::size_t k = 0; k < kmax; ++k) row[k] = std::min(row[k], sp.ratios(static_cast<Eigen::Index>(k)));
        double& me = max_entry.try_emplace(s.length, 0.0).first->second;
        me = std::max(me, max_abs(s.m));
    }
    DivergenceReport r;
    for (const auto& [len, row] : mins) {
        r.lengths.push_back(len);
        r.min_ratio.push_back(row);
        r.max_entry.push_back(max_entry[len]);
    }
    for (std::size_t k = 0; k < kmax; ++k) {
        std::vector<double> ls, vs;
        bool mono = true;
        for (std::size_t i = 0; i < r.lengths.size(); ++i) {
            if (i > 0 && r.min_ratio[i][k] < r.min_ratio[i - 1][k] * (1 - 1e-12)) mono = false;
            if (r.lengths[i] >= 1) {
                ls.push_back(r.lengths[i]);
                vs.push_back(r.min_ratio[i][k]);
            }
        }
        r.monotone.push_back(mono);
        r.power_exponent.push_back(fit_power_exponent(ls, vs));
        double rate = std::numeric_limits<double>::quiet_NaN();
        if (ls.size() >= 2) {
            Eigen::MatrixXd a(static_cast<Eigen::Index>(ls.size()), 2);
            Eigen::VectorXd y(static_cast<Eigen::Index>(ls.size()));
            for (std::size_t i = 0; i < ls.size(); ++i) {
                a(static_cast<Eigen::Index>(i), 0) = ls[i];
                a(static_cast<Eigen::Index>(i), 1) = 1;
                y(static_cast<Eigen::Index>(i)) = std::log(vs[i]);
            }
            rate = a.colPivHouseholderQr().solve(y)(0);
        }
        r.exponential_rate.push_back(rate);
        // Sample-level divergence: the last three minima strictly increase and exceed 1.
        bool div = vs.size() >= 3;
        for (std::size_t i = vs.size() >= 3 ? vs.size() - 2 : 0; div && i < vs.size(); ++i)
            if (!(vs[i] > vs[i - 1] * (1 + 1e-9))) div = false;
        if (div && !(vs.back() > 1 + 1e-6)) div = false;
        r.divergent.push_back(div);
    }
    return r;
}

std::optional<Flag> attracting_flag(const Eigen::MatrixXd& g, double min_ratio, int max_squarings) {
    Eigen::MatrixXd m = g / std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    SingularProfile sp = svd(m);
    for (int i = 0; i < max_squarings && sp.ratios(0) < 1e12; ++i) {
        m = m * m;
        double s = m.cwiseAbs().maxCoeff();
        if (!(s > 0) || !std::isfinite(s)) break;
        m /= s;
        sp = svd(m);
    }
    if (!(sp.ratios(0) >= min_ratio)) return std::nullopt;
    return Flag{ProjPoint(sp.left.col(0)), ProjHyperplane(sp.right.col(0))};
}

double flag_distance(const Flag& a, const Flag& b) {
    return std::max(projective_angle(a.point.coords, b.point.coords),
                    projective_angle(a.hyperplane.covector, b.hyperplane.covector));
}

LimitReport limit_flags(const std::vector<FloatSample>& samples, const LimitOptions& opts) {
    LimitReport rep;
    if (samples.empty()) {
        rep.reason = "no samples";
        return rep;
    }
    std::vector<std::pair<double, std::size_t>> by_norm;
    for (std::size_t i = 0; i < samples.size(); ++i) by_norm.push_back({samples[i].m.norm(), i});
    std::sort(by_norm.begin(), by_norm.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto top = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(opts.top_fraction * static_cast<double>(samples.size()))));
    std::vector<Flag> flags;
    for (std::size_t i = 0; i < top; ++i) {
        if (auto f = attracting_flag(samples[by_norm[i].second].m, opts.min_ratio, opts.max_squarings)) flags.push_back(*f);
    }
    rep.used = flags.size();
    if (flags.empty()) {
        rep.reason = "no sample in the top norm decile reaches sigma_1/sigma_2 >= " + std::to_string(opts.min_ratio);
        return rep;
    }
    for (const auto& f : flags) {
        bool placed = false;
        for (auto& c : rep.clusters) {
            double d = flag_distance(c.representative, f);
            if (d <= opts.cluster_radius) {
                ++c.size;
                c.radius = std::max(c.radius, d);
                placed = true;
                break;
            }
        }
        if (!placed) rep.clusters.push_back({f, 1, 0.0});
    }
    for (const auto& c : rep.clusters) rep.max_radius = std::max(rep.max_radius, c.radius);
    rep.conclusive = true;
    return rep;
}

Classification classify_from_moduli(const std::vector<double>& moduli, const Eigen::MatrixXd& g, int k_pow) {
    Classification c;
    double top = moduli.front(), bottom = moduli.back();
    if (!(bottom > 0)) throw std::invalid_argument("classify_element: matrix not invertible");
    c.translation = 0.5 * std::log(top / bottom);
    if (top / bottom > 1 + 1e-9) {
        c.type = ElementType::hyperbolic;
        return c;
    }
    c.translation = 0;
    const double base = svd(g).sigmas(0);
    Eigen::MatrixXd p = g;
    c.type = ElementType::elliptic;
    for (int k = 2; k <= k_pow; ++k) {
        p = p * g;
        if (svd(p).sigmas(0) > 10 * base) {
            c.type = ElementType::parabolic;
            break;
        }
    }
    return c;
}

ConditionVerdict weakly_unipotent_check(const std::vector<FloatSample>& samples, double tol) {
    ConditionVerdict v;
    v.condition = Condition::WU;
    v.sample_count = samples.size();
    for (const auto& s : samples) v.max_length = std::max(v.max_length, s.length);
    if (samples.empty()) {
        v.reason = "no samples";
        return v;
    }
    double worst = 0;
    for (const auto& s : samples) {
        auto mod = eigen_moduli(s.m);
        double dev = 0;
        for (double x : mod) dev = std::max(dev, std::abs(x - 1.0));
        worst = std::max(worst, dev);
        if (dev > tol) {
            v.status = VerdictStatus::refuted_on_sample;
            v.offending_words.push_back(s.word);
            v.reason = "eigenvalue modulus off 1 by " + std::to_string(dev);
            v.evidence["max_modulus_deviation"] = dev;
            return v;
        }
    }
    v.status = VerdictStatus::certified_on_sample;
    v.reason = "all sampled eigenvalue moduli within tolerance of 1";
    v.evidence["max_modulus_deviation"] = worst;
    v.evidence["tolerance"] = tol;
    return v;
}

namespace detail {

FixedPair make_fixed_pair(const std::vector<Eigen::MatrixXd>& gens, const Eigen::VectorXd& p, const Eigen::VectorXd& phi) {
    FixedPair f{ProjPoint(p), ProjHyperplane(phi), 0, 0};
    for (const auto& g : gens) {
        f.point_residual = std::max(f.point_residual, (g * f.p.coords - f.p.coords).norm());
        f.covector_residual = std::max(f.covector_residual, (g.transpose() * f.phi.covector - f.phi.covector).norm());
    }
    return f;
}

}  // namespace detail

}  // namespace cvxproj
