#pragma once

#include "cvxproj/linalg.hpp"
#include "cvxproj/projective.hpp"
#include "cvxproj/verdict.hpp"

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace cvxproj {

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T> struct Generator {
    std::string name;
    Mat<T> matrix;
};

// Whole-family evaluator: element(p) = g_0^{p_0} g_1^{p_1} ... for the base generators.
template <class T> struct ClosedForm {
    std::string gallery;
    nlohmann::json construction = nlohmann::json::object();  // constructor arguments, e.g. {"k": 3}
    std::vector<std::string> params;
    std::function<Mat<T>(const std::vector<long>&)> element;
};

// Finitely generated subgroup of SL+-(n) with inverses appended after the base generators.
template <class T> class MatrixGroup {
public:
    explicit MatrixGroup(std::vector<Generator<T>> gens, std::optional<ClosedForm<T>> closed_form = std::nullopt)
        : closed_form_(std::move(closed_form)) {
        if (gens.empty()) throw std::invalid_argument("MatrixGroup: no generators");
        dim_ = gens.front().matrix.rows();
        for (const auto& g : gens) {
            if (g.matrix.rows() != dim_ || g.matrix.cols() != dim_)
                throw std::invalid_argument("MatrixGroup: generator '" + g.name + "' has the wrong shape");
            double det = to_double(determinant<T>(g.matrix));
            if (std::abs(std::abs(det) - 1.0) > 1e-9)
                throw std::invalid_argument("MatrixGroup: generator '" + g.name + "' is not in SL+-(n)");
        }
        base_ = gens.size();
        gens_ = gens;
        for (const auto& g : gens) gens_.push_back({g.name + "^-1", inverse<T>(g.matrix)});
        if (closed_form_ && closed_form_->params.size() != base_)
            throw std::invalid_argument("MatrixGroup: closed form needs one parameter per generator");
    }

    Eigen::Index dim() const { return dim_; }
    std::size_t base_count() const { return base_; }
    const std::vector<Generator<T>>& generators() const { return gens_; }
    const std::optional<ClosedForm<T>>& closed_form() const { return closed_form_; }
    int inverse_of(int i) const {
        const int b = static_cast<int>(base_);
        return i < b ? i + b : i - b;
    }

private:
    Eigen::Index dim_ = 0;
    std::size_t base_ = 0;
    std::vector<Generator<T>> gens_;
    std::optional<ClosedForm<T>> closed_form_;
};

using AnyGroup = std::variant<MatrixGroup<double>, MatrixGroup<Rational>, MatrixGroup<QuadSqrt2>>;

template <class T> struct WordSample {
    Mat<T> element;
    std::vector<int> word;  // generator indices, multiplied left to right
    int length = 0;
};

// Float view used by the diagnostics.
struct FloatSample {
    Eigen::MatrixXd m;
    int length = 0;
    std::string word;
};

template <class T> std::string word_string(const MatrixGroup<T>& g, const std::vector<int>& word) {
    if (word.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += ' ';
        out += g.generators()[static_cast<std::size_t>(word[i])].name;
    }
    return out;
}

template <class T> Mat<T> replay(const MatrixGroup<T>& g, const std::vector<int>& word) {
    Mat<T> m = identity<T>(g.dim());
    for (int i : word) m = Mat<T>(m * g.generators()[static_cast<std::size_t>(i)].matrix);
    return m;
}

template <class T>
std::vector<FloatSample> to_float(const MatrixGroup<T>& g, const std::vector<WordSample<T>>& samples) {
    std::vector<FloatSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back({embed(s.element), s.length, word_string(g, s.word)});
    return out;
}

namespace detail {

template <class T> std::string element_key(const Mat<T>& m) {
    std::ostringstream os;
    if constexpr (is_exact_v<T>) {
        for (Eigen::Index i = 0; i < m.size(); ++i) os << m(i) << ';';
    } else {
        double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < m.size(); ++i) os << std::llround(m(i) / (1e-12 * scale)) << ';';
    }
    return os.str();
}

inline void l1_ball(std::size_t k, long radius, std::vector<long>& cur, const std::function<void()>& visit) {
    if (cur.size() == k) { visit(); return; }
    long used = 0;
    for (long v : cur) used += std::labs(v);
    for (long v = -(radius - used); v <= radius - used; ++v) {
        cur.push_back(v);
        l1_ball(k, radius, cur, visit);
        cur.pop_back();
    }
}

template <class T> std::vector<int> closed_form_word(const MatrixGroup<T>& g, const std::vector<long>& p) {
    std::vector<int> word;
    for (std::size_t i = 0; i < p.size(); ++i) {
        int gen = p[i] >= 0 ? static_cast<int>(i) : g.inverse_of(static_cast<int>(i));
        for (long r = 0; r < std::labs(p[i]); ++r) word.push_back(gen);
    }
    return word;
}

template <class T>
std::vector<WordSample<T>> closed_form_samples(const MatrixGroup<T>& g, const std::vector<std::vector<long>>& params,
                                               std::size_t budget) {
    std::vector<WordSample<T>> out;
    std::unordered_set<std::string> seen;
    for (const auto& p : params) {
        Mat<T> e = g.closed_form()->element(p);
        if (!seen.insert(element_key<T>(e)).second) continue;
        int len = 0;
        for (long v : p) len += static_cast<int>(std::labs(v));
        out.push_back({std::move(e), closed_form_word(g, p), len});
        if (out.size() > budget) throw BudgetError("enumerate: sample budget exceeded");
    }
    return out;
}

}  // namespace detail

// One sample per distinct element of word length <= L, identity first, ordered by length.
// Closed-form groups are enumerated over the l1 ball of parameters instead of by products.
template <class T>
std::vector<WordSample<T>> enumerate_words(const MatrixGroup<T>& g, int max_length, std::size_t budget = 1000000) {
    if (max_length < 0) throw std::invalid_argument("enumerate_words: negative length");
    if (g.closed_form()) {
        std::vector<std::vector<long>> params;
        std::vector<long> cur;
        detail::l1_ball(g.base_count(), max_length, cur, [&] {
            params.push_back(cur);
            if (params.size() > budget) throw BudgetError("enumerate_words: sample budget exceeded");
        });
        std::stable_sort(params.begin(), params.end(), [](const auto& a, const auto& b) {
            long la = 0, lb = 0;
            for (long v : a) la += std::labs(v);
            for (long v : b) lb += std::labs(v);
            return la < lb;
        });
        return detail::closed_form_samples(g, params, budget);
    }
    std::vector<WordSample<T>> out{{identity<T>(g.dim()), {}, 0}};
    std::unordered_set<std::string> seen{detail::element_key<T>(out.front().element)};
    std::size_t frontier_begin = 0;
    for (int len = 1; len <= max_length; ++len) {
        const std::size_t frontier_end = out.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (std::size_t j = 0; j < g.generators().size(); ++j) {
                Mat<T> e = out[i].element * g.generators()[j].matrix;
                if (!seen.insert(detail::element_key<T>(e)).second) continue;
                std::vector<int> w = out[i].word;
                w.push_back(static_cast<int>(j));
                out.push_back({std::move(e), std::move(w), len});
                if (out.size() > budget) throw BudgetError("enumerate_words: sample budget exceeded");
            }
        }
        frontier_begin = frontier_end;
    }
    return out;
}

// Closed-form groups only: every parameter vector with |p_i| <= radius.
template <class T>
std::vector<WordSample<T>> enumerate_parameter_grid(const MatrixGroup<T>& g, int radius, std::size_t budget = 1000000) {
    if (!g.closed_form()) throw std::invalid_argument("enumerate_parameter_grid: group has no closed form");
    if (radius < 0) throw std::invalid_argument("enumerate_parameter_grid: negative radius");
    const std::size_t k = g.base_count();
    std::vector<std::vector<long>> params{std::vector<long>(k, -radius)};
    while (true) {
        std::vector<long> next = params.back();
        std::size_t i = 0;
        while (i < k && next[i] == radius) next[i++] = -radius;
        if (i == k) break;
        ++next[i];
        params.push_back(next);
        if (params.size() > budget) throw BudgetError("enumerate_parameter_grid: sample budget exceeded");
    }
    std::stable_sort(params.begin(), params.end(), [](const auto& a, const auto& b) {
        long la = 0, lb = 0;
        for (long v : a) la += std::labs(v);
        for (long v : b) lb += std::labs(v);
        return la < lb;
    });
    return detail::closed_form_samples(g, params, budget);
}

// ---- Cartan projection diagnostics ----

struct DivergenceReport {
    std::vector<int> lengths;                  // distinct word lengths, ascending
    std::vector<std::vector<double>> min_ratio;  // [length][k - 1]: min sigma_k / sigma_{k+1}
    std::vector<double> max_entry;             // [length]: max |gamma|_inf
    std::vector<double> power_exponent;        // [k - 1]: p in the fit c L^p + b
    std::vector<double> exponential_rate;      // [k - 1]: slope of log ratio against L
    std::vector<bool> monotone;                // [k - 1]: minima nondecreasing in L
    std::vector<bool> divergent;               // [k - 1]: sample-level P_k-divergence flag
};

DivergenceReport divergence_diagnostics(const std::vector<FloatSample>& samples);

// Exponent p minimizing the relative residual of r ~ c L^p + b over p in [0.05, 6].
double fit_power_exponent(const std::vector<double>& lengths, const std::vector<double>& values);

struct FlagCluster {
    Flag representative;
    std::size_t size = 0;
    double radius = 0;  // max angular distance to the representative
};

struct LimitReport {
    bool conclusive = false;
    std::string reason;
    std::vector<FlagCluster> clusters;
    double max_radius = 0;
    std::size_t used = 0;  // samples contributing flags
};

struct LimitOptions {
    double min_ratio = 1e3;       // powered sigma_1/sigma_2 needed to contribute
    double cluster_radius = 1e-2;
    double top_fraction = 0.1;    // largest-norm decile
    int max_squarings = 20;
};

// Attracting point and repelling hyperplane of each large sample, read off the
// SVD of a high power gamma^K, then greedily clustered.
LimitReport limit_flags(const std::vector<FloatSample>& samples, const LimitOptions& opts = {});

// Attracting flag of a single element from the SVD of its normalized power.
std::optional<Flag> attracting_flag(const Eigen::MatrixXd& g, double min_ratio = 1e3, int max_squarings = 20);
double flag_distance(const Flag& a, const Flag& b);

// ---- Elements ----

enum class ElementType { elliptic, parabolic, hyperbolic };
std::string to_string(ElementType t);

struct Classification {
    ElementType type = ElementType::elliptic;
    double translation = 0;  // log(lambda_1 / lambda_n) / 2
};

Classification classify_from_moduli(const std::vector<double>& moduli, const Eigen::MatrixXd& g, int k_pow);

template <class T> Classification classify_element(const Mat<T>& g, int k_pow = 64) {
    if (g.rows() != g.cols()) throw std::invalid_argument("classify_element: matrix not square");
    if (is_zero(determinant<T>(g))) throw std::invalid_argument("classify_element: matrix not invertible");
    return classify_from_moduli(eigen_moduli(g), embed(g), k_pow);
}

ConditionVerdict weakly_unipotent_check(const std::vector<FloatSample>& samples, double tol = 1e-7);

// ---- Fixed vectors ----

struct FixedPair {
    ProjPoint p;
    ProjHyperplane phi;
    double point_residual = 0;
    double covector_residual = 0;
};

struct FixedPairResult {
    std::optional<FixedPair> pair;     // set when both fixed spaces are lines and phi(p) = 0
    std::vector<FixedPair> candidates;  // basis choices with phi(p) = 0 when a space has dimension > 1
    Eigen::Index point_dim = 0;
    Eigen::Index covector_dim = 0;
    std::string note;
};

namespace detail {

FixedPair make_fixed_pair(const std::vector<Eigen::MatrixXd>& gens, const Eigen::VectorXd& p, const Eigen::VectorXd& phi);

}  // namespace detail

template <class T> FixedPairResult fixed_pair(const MatrixGroup<T>& g) {
    const Eigen::Index n = g.dim();
    const auto b = static_cast<Eigen::Index>(g.base_count());
    Mat<T> left(n * b, n), right(n * b, n);
    std::vector<Eigen::MatrixXd> gens;
    for (Eigen::Index i = 0; i < b; ++i) {
        const Mat<T>& m = g.generators()[static_cast<std::size_t>(i)].matrix;
        left.middleRows(i * n, n) = m - identity<T>(n);
        right.middleRows(i * n, n) = Mat<T>(m.transpose()) - identity<T>(n);
        gens.push_back(embed(m));
    }
    Mat<T> ps = nullspace<T>(left), phis = nullspace<T>(right);
    FixedPairResult out;
    out.point_dim = ps.cols();
    out.covector_dim = phis.cols();
    if (ps.cols() == 0 || phis.cols() == 0) {
        out.note = "no common fixed vector";
        return out;
    }
    for (Eigen::Index i = 0; i < ps.cols(); ++i)
        for (Eigen::Index j = 0; j < phis.cols(); ++j) {
            T pairing = Vec<T>(phis.col(j)).dot(Vec<T>(ps.col(i)));
            bool zero = is_exact_v<T> ? is_zero(pairing) : std::abs(to_double(pairing)) <= 1e-10;
            if (zero) out.candidates.push_back(detail::make_fixed_pair(gens, embed(Vec<T>(ps.col(i))), embed(Vec<T>(phis.col(j)))));
        }
    if (ps.cols() == 1 && phis.cols() == 1) {
        if (out.candidates.empty()) out.note = "fixed vector and covector do not pair to zero";
        else out.pair = out.candidates.front();
    } else {
        out.note = "fixed spaces of dimension " + std::to_string(ps.cols()) + " and " + std::to_string(phis.cols()) +
                   "; candidates list every basis pairing with phi(p) = 0";
    }
    return out;
}

}  // namespace cvxproj
