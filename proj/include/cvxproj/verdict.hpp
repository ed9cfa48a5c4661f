#pragma once

#include <Eigen/Dense>
#include "json.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cvxproj {

enum class Condition { WU, GP, GPplus, Tr, TRe };
enum class VerdictStatus { certified_on_sample, refuted_on_sample, inconclusive };

std::string to_string(Condition c);
std::string to_string(VerdictStatus s);

// Matrix coefficient gamma -> alpha(gamma x) with its sampled margins:
// alpha(gamma x) >= delta and alpha(gamma x) >= epsilon * |gamma|_inf - bound on every sample.
struct CoefficientWitness {
    Eigen::VectorXd alpha;
    Eigen::VectorXd x;
    double delta = 0;
    double epsilon = 0;
    double eta = 0;
    double bound = 0;
};

struct ConditionVerdict {
    Condition condition = Condition::WU;
    VerdictStatus status = VerdictStatus::inconclusive;
    std::string reason;
    std::optional<CoefficientWitness> witness;
    std::vector<std::string> offending_words;
    std::vector<std::pair<int, int>> offending_entries;  // zero-based (row, col)
    int max_length = 0;
    std::size_t sample_count = 0;
    nlohmann::json evidence = nlohmann::json::object();

    bool certified() const { return status == VerdictStatus::certified_on_sample; }
    bool refuted() const { return status == VerdictStatus::refuted_on_sample; }
};

}  // namespace cvxproj
