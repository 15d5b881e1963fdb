#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "perfgate/clustering.hpp"
#include "perfgate/feature_matrix.hpp"

namespace perfgate {

inline constexpr int kDefaultPerCluster = 3;

struct SamplePlan {
    int per_cluster = kDefaultPerCluster;
    std::uint64_t seed = 0;
    bool include_noise = false;
    /// cluster label (kNoise for the noise group) -> sampled input ids
    std::map<int, std::vector<std::string>> sampled;

    std::size_t total() const;
    std::vector<std::string> ids() const;
};

/// The medoid of each non-noise cluster, ascending by label.
/// Recomputes medoids from `m` when the model carries none.
std::vector<std::string> minimized_suite(const ClusterModel& model, const FeatureMatrix& m);

/// Uniform sampling without replacement, min(per_cluster, size) ids per
/// cluster, seeded by plan.seed. Throws NoClusters when nothing is sampleable.
SamplePlan sample_per_cluster(const ClusterModel& model, SamplePlan plan);

/// Adds up to `additional` unsampled members per cluster, keeping the
/// existing samples in place.
SamplePlan escalate_sample(const ClusterModel& model, SamplePlan plan, int additional,
                           std::uint64_t seed);

}  // namespace perfgate
