#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perfgate/clustering.hpp"
#include "perfgate/profile.hpp"
#include "perfgate/sampling.hpp"

namespace perfgate {

inline constexpr double kDefaultAcceptableLimit = 38.0;  // percent slowdown
inline constexpr double kDefaultVoteThreshold = 0.5;
inline constexpr double kUncertainBand = 0.1;

/// A baseline cluster member reduced to the two decision attributes.
struct BaselinePoint {
    std::uint64_t statements = 0;
    double time_ms = 0.0;
};

enum class ThresholdCase { EqualMatch, Bracket, OutlierAbove, OutlierBelow };

std::string_view threshold_case_name(ThresholdCase c);

struct ThresholdResult {
    ThresholdCase kind = ThresholdCase::EqualMatch;
    double threshold_ms = 0.0;
    std::optional<double> time_above_ms;  // bracket only
    std::optional<double> time_below_ms;  // bracket only
    /// Baseline point the reference gradient is taken through.
    double ref_statements = 0.0;
    double ref_time_ms = 0.0;

    bool operator==(const ThresholdResult&) const = default;
};

/// Locates an updated statement count within a cluster's baseline points:
///  - equal statement count exists: threshold = max time at that count;
///  - counts on both sides: midpoint of the max times at the nearest
///    distinct count above and below, referenced at (updated count, midpoint);
///  - otherwise: max time at the nearest extreme count, referenced there.
/// Throws EmptyCluster, NonPositiveStatements.
ThresholdResult resolve_threshold(std::span<const BaselinePoint> cluster_points,
                                  std::uint64_t updated_statements);

struct UpdatedPoint {
    std::string input_id;
    std::uint64_t statements = 0;
    double time_ms = 0.0;
    int cluster = 0;
};

enum class GradientCheck { False, True, Skipped };

struct CheckResult {
    std::string label;  // "C11" = first cluster, first sampled input
    std::string input_id;
    int cluster = 0;
    ThresholdResult threshold;
    bool threshold_check = false;
    GradientCheck gradient_check = GradientCheck::Skipped;
    // ms per statement, origin-anchored slopes; unset when the gradient check is skipped
    std::optional<double> baseline_gradient;
    std::optional<double> updated_gradient;
    std::optional<double> gradient_change_pct;
    bool flagged = false;
};

/// Time-threshold check first; only when it passes is the gradient change
/// 100 * (updated - baseline) / baseline compared with the acceptable limit.
/// Both comparisons are strict.
CheckResult decide_point(const UpdatedPoint& updated, const ThresholdResult& threshold,
                         double acceptable_limit);

enum class Verdict { Run, Skip };
std::string_view verdict_name(Verdict v);

struct DecisionReport {
    double acceptable_limit = kDefaultAcceptableLimit;
    double vote_threshold = kDefaultVoteThreshold;
    std::vector<CheckResult> checks;
    std::size_t flagged_count = 0;
    double flagged_fraction = 0.0;
    Verdict verdict = Verdict::Skip;
    bool uncertain = false;
};

/// Applies the vote rule: RUN iff flagged_fraction >= vote_threshold;
/// uncertain when the fraction is within kUncertainBand of the threshold.
void aggregate(DecisionReport& report);

/// Evaluates each updated point against its own cluster's baseline members,
/// cluster by cluster, then aggregates.
/// Throws UnknownInput, ClusterMismatch (plus the per-point errors).
DecisionReport evaluate_batch(const ClusterModel& model, const CommitSnapshot& baseline,
                              const std::vector<UpdatedPoint>& updated, double acceptable_limit,
                              double vote_threshold = kDefaultVoteThreshold);

/// Picks the sampled inputs out of an updated snapshot, tagging each with
/// the cluster it was sampled from. Throws UnknownInput for missing ids.
std::vector<UpdatedPoint> updated_points(const SamplePlan& plan, const CommitSnapshot& updated);

/// Tables I/II layout: rows TimeThreshold and Gradient, columns C11..Cnk.
std::string render_table(const DecisionReport& report);

}  // namespace perfgate
