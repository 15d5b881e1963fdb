#include "perfgate/decision.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "perfgate/error.hpp"

namespace perfgate {

std::string_view threshold_case_name(ThresholdCase c) {
    switch (c) {
        case ThresholdCase::EqualMatch: return "equal_match";
        case ThresholdCase::Bracket: return "bracket";
        case ThresholdCase::OutlierAbove: return "outlier_above";
        case ThresholdCase::OutlierBelow: return "outlier_below";
    }
    return "?";
}

std::string_view verdict_name(Verdict v) { return v == Verdict::Run ? "RUN" : "SKIP"; }

ThresholdResult resolve_threshold(std::span<const BaselinePoint> points,
                                  std::uint64_t updated_statements) {
    if (points.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no baseline points");
    if (updated_statements == 0) {
        throw Error(ErrorCode::NonPositiveStatements, "updated point executed 0 statements");
    }

    // max time per distinct statement count
    std::map<std::uint64_t, double> max_time;
    for (const auto& p : points) {
        if (p.statements == 0) {
            throw Error(ErrorCode::NonPositiveStatements, "baseline point executed 0 statements");
        }
        if (!(p.time_ms > 0.0)) throw Error(ErrorCode::InvalidArgument, "baseline time must be > 0");
        auto [it, inserted] = max_time.try_emplace(p.statements, p.time_ms);
        if (!inserted) it->second = std::max(it->second, p.time_ms);
    }

    ThresholdResult out;
    const double su = static_cast<double>(updated_statements);
    if (auto it = max_time.find(updated_statements); it != max_time.end()) {
        out.kind = ThresholdCase::EqualMatch;
        out.threshold_ms = it->second;
        out.ref_statements = su;
        out.ref_time_ms = it->second;
        return out;
    }

    const auto above = max_time.upper_bound(updated_statements);
    if (above != max_time.end() && above != max_time.begin()) {
        const auto below = std::prev(above);
        out.kind = ThresholdCase::Bracket;
        out.time_above_ms = above->second;
        out.time_below_ms = below->second;
        out.threshold_ms = (above->second + below->second) / 2.0;
        out.ref_statements = su;
        out.ref_time_ms = out.threshold_ms;
        return out;
    }

    // outside the cluster: use the nearest extreme on the populated side
    const auto& edge = above == max_time.end() ? *max_time.rbegin() : *max_time.begin();
    out.kind = above == max_time.end() ? ThresholdCase::OutlierAbove : ThresholdCase::OutlierBelow;
    out.threshold_ms = edge.second;
    out.ref_statements = static_cast<double>(edge.first);
    out.ref_time_ms = edge.second;
    return out;
}

CheckResult decide_point(const UpdatedPoint& updated, const ThresholdResult& threshold,
                         double acceptable_limit) {
    if (!(acceptable_limit >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "acceptable limit must be >= 0");
    }
    if (updated.statements == 0 || !(threshold.ref_statements > 0.0)) {
        throw Error(ErrorCode::NonPositiveStatements,
                    "gradient undefined for input '" + updated.input_id + "'");
    }
    if (!(updated.time_ms > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "updated time must be > 0 for '" + updated.input_id + "'");
    }

    CheckResult out;
    out.input_id = updated.input_id;
    out.cluster = updated.cluster;
    out.threshold = threshold;
    out.threshold_check = updated.time_ms > threshold.threshold_ms;
    if (out.threshold_check) {
        out.gradient_check = GradientCheck::Skipped;
        out.flagged = true;
        return out;
    }
    const double g = threshold.ref_time_ms / threshold.ref_statements;
    const double g1 = updated.time_ms / static_cast<double>(updated.statements);
    const double change = 100.0 * (g1 - g) / g;
    out.baseline_gradient = g;
    out.updated_gradient = g1;
    out.gradient_change_pct = change;
    out.gradient_check = change > acceptable_limit ? GradientCheck::True : GradientCheck::False;
    out.flagged = out.gradient_check == GradientCheck::True;
    return out;
}

void aggregate(DecisionReport& report) {
    if (!(report.vote_threshold > 0.0) || report.vote_threshold > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "vote threshold must be in (0, 1]");
    }
    if (report.checks.empty()) throw Error(ErrorCode::InvalidArgument, "no updated points to evaluate");
    report.flagged_count = static_cast<std::size_t>(std::count_if(
        report.checks.begin(), report.checks.end(), [](const CheckResult& c) { return c.flagged; }));
    report.flagged_fraction =
        static_cast<double>(report.flagged_count) / static_cast<double>(report.checks.size());
    report.verdict = report.flagged_fraction >= report.vote_threshold ? Verdict::Run : Verdict::Skip;
    report.uncertain =
        std::abs(report.flagged_fraction - report.vote_threshold) <= kUncertainBand + 1e-12;
}

DecisionReport evaluate_batch(const ClusterModel& model, const CommitSnapshot& baseline,
                              const std::vector<UpdatedPoint>& updated, double acceptable_limit,
                              double vote_threshold) {
    const CommitSnapshot base = baseline.has_test_cases() ? aggregate_by_input(baseline) : baseline;
    std::unordered_map<std::string, const ProfileRecord*> by_id;
    for (const auto& r : base.records) by_id.emplace(r.input_id, &r);

    // cluster label -> updated points in arrival order; noise group last
    std::map<int, std::vector<const UpdatedPoint*>> per_cluster;
    for (const auto& u : updated) {
        const auto label = model.label_of(u.input_id);
        if (!label) throw Error(ErrorCode::UnknownInput, u.input_id);
        if (*label != u.cluster) {
            throw Error(ErrorCode::ClusterMismatch, "input '" + u.input_id + "' is in cluster " +
                                                        std::to_string(*label) + ", not " +
                                                        std::to_string(u.cluster));
        }
        per_cluster[u.cluster].push_back(&u);
    }
    std::vector<int> order;
    for (const auto& [label, pts] : per_cluster) {
        if (label != kNoise) order.push_back(label);
    }
    if (per_cluster.count(kNoise)) order.push_back(kNoise);

    DecisionReport report;
    report.acceptable_limit = acceptable_limit;
    report.vote_threshold = vote_threshold;
    for (int label : order) {
        std::vector<BaselinePoint> points;
        for (auto idx : model.members(label)) {
            const auto& id = model.input_ids[idx];
            auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw Error(ErrorCode::UnknownInput, "baseline has no record for '" + id + "'");
            }
            points.push_back({it->second->statements, it->second->exec_time});
        }
        int j = 0;
        for (const auto* u : per_cluster[label]) {
            auto threshold = resolve_threshold(points, u->statements);
            auto check = decide_point(*u, threshold, acceptable_limit);
            ++j;
            check.label = (label == kNoise ? std::string("CN") : "C" + std::to_string(label + 1)) +
                          std::to_string(j);
            report.checks.push_back(std::move(check));
        }
    }
    aggregate(report);
    return report;
}

std::vector<UpdatedPoint> updated_points(const SamplePlan& plan, const CommitSnapshot& updated) {
    const CommitSnapshot snap = updated.has_test_cases() ? aggregate_by_input(updated) : updated;
    std::unordered_map<std::string, const ProfileRecord*> by_id;
    for (const auto& r : snap.records) by_id.emplace(r.input_id, &r);
    std::vector<UpdatedPoint> out;
    for (const auto& [label, ids] : plan.sampled) {
        for (const auto& id : ids) {
            auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw Error(ErrorCode::UnknownInput,
                            "updated snapshot '" + updated.commit_id + "' lacks sampled input '" + id + "'");
            }
            out.push_back({id, it->second->statements, it->second->exec_time, label});
        }
    }
    return out;
}

std::string render_table(const DecisionReport& report) {
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    std::size_t w = 6;
    for (const auto& c : report.checks) w = std::max(w, c.label.size() + 2);
    std::string out = pad("Checks", 15);
    std::string thr = pad("TimeThreshold", 15);
    std::string grad = pad("Gradient", 15);
    for (const auto& c : report.checks) {
        out += pad(c.label, w);
        thr += pad(c.threshold_check ? "True" : "False", w);
        const char* g = c.gradient_check == GradientCheck::Skipped ? "x"
                        : c.gradient_check == GradientCheck::True  ? "True"
                                                                   : "False";
        grad += pad(g, w);
    }
    auto rstrip = [](std::string s) {
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s;
    };
    char summary[160];
    std::snprintf(summary, sizeof summary, "flagged %zu/%zu (%.3f), vote threshold %.3f: %s%s",
                  report.flagged_count, report.checks.size(), report.flagged_fraction,
                  report.vote_threshold, std::string(verdict_name(report.verdict)).c_str(),
                  report.uncertain ? " (uncertain)" : "");
    return rstrip(out) + "\n" + rstrip(thr) + "\n" + rstrip(grad) + "\n" + summary + "\n";
}

}  // namespace perfgate
