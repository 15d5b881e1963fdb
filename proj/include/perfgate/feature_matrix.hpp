#pragma once

#include <span>
#include <string>
#include <vector>

#include "perfgate/profile.hpp"

namespace perfgate {

/// Row-major matrix of selected attributes, one row per test input.
struct FeatureMatrix {
    std::vector<std::string> ids;
    std::vector<Attribute> features;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    /// Per column: true if the column was constant before standardization.
    std::vector<bool> constant;

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * cols, cols};
    }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }

    /// Builds a matrix from plain rows; ids default to "r0", "r1", ...
    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                   std::vector<std::string> ids = {});
};

/// Raw (unscaled) attribute values. Test-case rows are aggregated first.
FeatureMatrix raw_features(const CommitSnapshot& snapshot, const std::vector<Attribute>& features);

/// z-scores each column with the sample standard deviation. Constant
/// columns become all zeros and are flagged. Throws TooFewRecords (< 2 rows).
FeatureMatrix standardize(const CommitSnapshot& snapshot, const std::vector<Attribute>& features);
FeatureMatrix standardize(FeatureMatrix matrix);

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace perfgate
