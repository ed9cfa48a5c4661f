#pragma once

#include "cvxproj/group.hpp"

#include <map>
#include <string>
#include <vector>

namespace cvxproj {

// Translations rho(Y) of a horosphere in H^{d-1}: [[1, Y^T, |Y|^2/2], [0, I, Y], [0, 0, 1]].
MatQ cusp_translation(const std::vector<long>& y);
MatrixGroup<Rational> hyperbolic_cusp_translations(int d);

// Unipotent Jordan block of size k raised to the n: entries n^j / j! on the j-th superdiagonal.
MatQ jordan_element(int k, long n);
MatrixGroup<Rational> jordan_unipotent(int k);

// Weakly unipotent 9x9 family: a 3x3 Jordan block plus a rotation-twisted 6x6 block.
Eigen::MatrixXd weakly_unipotent_9x9_element(long n);
MatrixGroup<double> weakly_unipotent_9x9();

// Solvable 7x7 family over Q(sqrt 2) with lambda = (1 + sqrt 2)^2.
MatS solvable_7x7_element(long a, long b, long n, long m);
MatrixGroup<QuadSqrt2> solvable_7x7();

struct ExpectedVerdicts {
    std::map<Condition, VerdictStatus> conditions;
    std::string summary;  // empty when not asserted
};

struct GalleryEntry {
    std::string id;
    std::string description;
    AnyGroup group;
    ExpectedVerdicts expected;
    bool box_grid = false;  // enumerate by parameter box instead of word length
};

std::vector<std::string> gallery_names();
// Parameters: "k" for jordan_unipotent, "d" for hyperbolic_cusp_translations.
GalleryEntry gallery_entry(const std::string& name, const std::map<std::string, long>& params = {});

}  // namespace cvxproj
