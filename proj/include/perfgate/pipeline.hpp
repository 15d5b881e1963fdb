#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perfgate/clustering.hpp"
#include "perfgate/decision.hpp"
#include "perfgate/profile.hpp"
#include "perfgate/sampling.hpp"

namespace perfgate {

struct ClusterRequest {
    Algorithm algorithm = Algorithm::KMeans;
    std::vector<Attribute> features = kDefaultFeatures;
    std::uint64_t seed = 0;
    int k = 2;
    std::optional<double> eps;  // dbscan; required, no default
    int min_pts = 5;
    Linkage linkage = Linkage::Average;
    int max_iter = 300;
    double tol = 1e-8;
};

/// Standardizes the snapshot's selected features and runs the requested fit.
ClusterModel fit_model(const CommitSnapshot& snapshot, const ClusterRequest& request);

/// Sampled updated measurements evaluated against the baseline clusters.
DecisionReport decide(const ClusterModel& model, const SamplePlan& plan,
                      const CommitSnapshot& baseline, const CommitSnapshot& updated,
                      double acceptable_limit, double vote_threshold);

}  // namespace perfgate
