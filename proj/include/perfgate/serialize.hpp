#pragma once

#include <json.hpp>

#include "perfgate/clustering.hpp"
#include "perfgate/decision.hpp"
#include "perfgate/feature_matrix.hpp"
#include "perfgate/sampling.hpp"
#include "perfgate/stats.hpp"

// One serializer shared by the CLI reports, workspace files and HTTP API,
// so identical inputs give byte-identical JSON everywhere.

namespace perfgate {

using Json = nlohmann::ordered_json;

Json to_json(const CorrelationMatrix& cm);
Json to_json(const ElbowCurve& curve);
Json to_json(const ClusterModel& model);
Json to_json(const SamplePlan& plan);
Json to_json(const ThresholdResult& t);
Json to_json(const CheckResult& c);
Json to_json(const DecisionReport& report);

/// Cluster sizes, noise count and medoids without per-record assignments.
Json model_summary(const ClusterModel& model);

/// Standardized coordinates plus labels, one entry per record.
Json cluster_points(const ClusterModel& model, const FeatureMatrix& standardized);

ClusterModel model_from_json(const nlohmann::json& j);
SamplePlan plan_from_json(const nlohmann::json& j);

Json feature_names(const std::vector<Attribute>& features);

/// Canonical report text: 2-space indented JSON plus a trailing newline.
std::string render_json(const Json& j);

}  // namespace perfgate
