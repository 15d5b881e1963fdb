#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "perfgate/feature_matrix.hpp"
#include "perfgate/profile.hpp"

namespace perfgate {

struct PearsonResult {
    double r = 0.0;
    double p = 1.0;
    bool defined = true;  // false when either input is constant
};

/// Product-moment correlation with a two-tailed t-test (df = n - 2).
/// |r| = 1 gives p = 0; a constant input gives defined = false, p = 1.
/// Throws TooFewRecords for n < 3.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

/// Two-tailed p-value for a correlation coefficient over n samples.
double pearson_p_value(double r, std::size_t n);

inline constexpr double kSignificanceLevel = 0.05;

struct CorrelationMatrix {
    std::vector<Attribute> attributes;
    std::vector<std::vector<double>> r;  // NaN where undefined
    std::vector<std::vector<double>> p;  // diagonal reported as 0
    std::vector<std::vector<bool>> defined;
    std::size_t n = 0;

    std::size_t index_of(Attribute a) const;
    double r_of(Attribute a, Attribute b) const { return r[index_of(a)][index_of(b)]; }
    double p_of(Attribute a, Attribute b) const { return p[index_of(a)][index_of(b)]; }
};

/// Pairwise correlations over all seven attributes (test-case rows aggregated).
CorrelationMatrix pearson_matrix(const CommitSnapshot& snapshot);

struct ElbowCurve {
    std::vector<int> k_values;
    std::vector<double> distortion;  // WCSS per k
    int knee = 1;
    /// Set when the sharpest bend is weak relative to the k = 1 distortion.
    bool low_confidence = false;
};

/// k-means (seed + k per k) for k = 1..k_max on standardized features;
/// knee = argmax of the discrete second difference over interior k.
ElbowCurve elbow_curve(const FeatureMatrix& standardized, int k_max, std::uint64_t seed);
ElbowCurve elbow_curve(const CommitSnapshot& snapshot, const std::vector<Attribute>& features,
                       int k_max, std::uint64_t seed);

/// Knee selection on an existing distortion curve (index 0 is k = 1).
void select_knee(ElbowCurve& curve);

}  // namespace perfgate
