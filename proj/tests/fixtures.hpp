#pragma once

// Scenario builders shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "perfgate/decision.hpp"
#include "perfgate/pipeline.hpp"
#include "perfgate/profile.hpp"
#include "perfgate/profile_io.hpp"
#include "perfgate/random.hpp"
#include "perfgate/sampling.hpp"
#include "perfgate/synthetic.hpp"

namespace fixtures {

using namespace perfgate;

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("perfgate-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline constexpr std::uint64_t kFixtureSeed = 42;
inline constexpr std::size_t kFixtureRecords = 4000;

inline CommitSnapshot baseline_snapshot(std::size_t records = kFixtureRecords,
                                        std::uint64_t seed = kFixtureSeed) {
    auto spec = preset_spec("two-clusters", records);
    spec.commit_id = "base";
    auto s = generate_synthetic(spec, seed);
    // Keep only what a saved snapshot keeps, so workspace copies are identical.
    for (auto& r : s.records) {
        r.exec_time = round_significant(r.exec_time);
        r.memory = round_significant(r.memory);
    }
    return s;
}

struct Scenario {
    CommitSnapshot baseline;
    ClusterModel model;
    SamplePlan plan;
    CommitSnapshot updated;
};

inline Scenario fitted_scenario(std::size_t records = kFixtureRecords, std::uint64_t seed = kFixtureSeed) {
    Scenario s;
    s.baseline = baseline_snapshot(records, seed);
    ClusterRequest req;
    req.k = 2;
    req.seed = seed;
    s.model = fit_model(s.baseline, req);
    SamplePlan plan;
    plan.seed = seed;
    s.plan = sample_per_cluster(s.model, plan);
    s.updated = s.baseline;
    s.updated.commit_id = "updated";
    return s;
}

inline std::vector<BaselinePoint> cluster_baseline(const Scenario& s, int label) {
    std::vector<BaselinePoint> pts;
    for (auto i : s.model.members(label)) {
        const auto& r = s.baseline.records[*s.baseline.find(s.model.input_ids[i])];
        pts.push_back({r.statements, r.exec_time});
    }
    return pts;
}

// Sampled ids in report column order: C11, C12, C13, C21, ...
inline std::vector<std::string> column_ids(const SamplePlan& plan) {
    std::vector<std::string> out;
    for (const auto& [label, ids] : plan.sampled) {
        if (label == kNoise) continue;
        out.insert(out.end(), ids.begin(), ids.end());
    }
    return out;
}

// Moves a sampled point below its cluster's smallest statement count while
// keeping its time at the max time there, so the time check sits exactly on
// the threshold and the gradient changes by about `change_pct`.
inline void shrink_statements(Scenario& s, const std::string& id, double change_pct) {
    const int label = *s.model.label_of(id);
    const auto pts = cluster_baseline(s, label);
    std::uint64_t s_min = UINT64_MAX;
    for (const auto& p : pts) s_min = std::min(s_min, p.statements);
    double t_max = 0.0;
    for (const auto& p : pts)
        if (p.statements == s_min) t_max = std::max(t_max, p.time_ms);
    auto& rec = s.updated.records[*s.updated.find(id)];
    rec.statements = static_cast<std::uint64_t>(std::llround(s_min / (1.0 + change_pct / 100.0)));
    rec.exec_time = t_max;
}

// Five of six sampled points regress: three by a 38% time inflation, two by
// gradient changes of ~66% and ~99% at the threshold; the sixth changes by
// ~20%, under the 38% limit.
inline Scenario regression_scenario() {
    auto s = fitted_scenario();
    const auto cols = column_ids(s.plan);
    s.updated = apply_slowdown(s.updated, {cols[0], cols[3], cols[4]}, 0.38);
    for (auto& r : s.updated.records) r.exec_time = round_significant(r.exec_time);
    shrink_statements(s, cols[1], 66.0);
    shrink_statements(s, cols[5], 99.0);
    shrink_statements(s, cols[2], 20.0);
    return s;
}

// Every sampled time moves by at most +-0.5%.
inline Scenario steady_scenario(std::uint64_t seed = kFixtureSeed) {
    auto s = fitted_scenario();
    Rng rng(derive_seed(seed, 7));
    for (const auto& id : column_ids(s.plan)) {
        auto& rec = s.updated.records[*s.updated.find(id)];
        rec.exec_time = round_significant(rec.exec_time * (1.0 + (rng.uniform() * 2.0 - 1.0) * 0.00499));
    }
    return s;
}

// Updated snapshot restricted to the sampled inputs, as a re-profiling run
// of only those inputs would produce.
inline CommitSnapshot sampled_only(const Scenario& s) {
    CommitSnapshot out;
    out.commit_id = s.updated.commit_id;
    out.captured_at = s.updated.captured_at;
    for (const auto& id : column_ids(s.plan)) out.records.push_back(s.updated.records[*s.updated.find(id)]);
    return out;
}

// Straight re-derivation: scan every point for each quantity.
inline ThresholdResult naive_threshold(const std::vector<BaselinePoint>& pts, std::uint64_t su) {
    auto max_time_at = [&](std::uint64_t s) {
        double t = 0;
        for (const auto& p : pts)
            if (p.statements == s) t = std::max(t, p.time_ms);
        return t;
    };
    bool equal = false, above = false, below = false;
    std::uint64_t s_a = std::numeric_limits<std::uint64_t>::max(), s_b = 0;
    std::uint64_t lo = std::numeric_limits<std::uint64_t>::max(), hi = 0;
    for (const auto& p : pts) {
        equal |= p.statements == su;
        if (p.statements > su) {
            above = true;
            s_a = std::min(s_a, p.statements);
        }
        if (p.statements < su) {
            below = true;
            s_b = std::max(s_b, p.statements);
        }
        lo = std::min(lo, p.statements);
        hi = std::max(hi, p.statements);
    }
    ThresholdResult r;
    if (equal) {
        r.kind = ThresholdCase::EqualMatch;
        r.threshold_ms = max_time_at(su);
        r.ref_statements = static_cast<double>(su);
        r.ref_time_ms = r.threshold_ms;
    } else if (above && below) {
        r.kind = ThresholdCase::Bracket;
        r.time_above_ms = max_time_at(s_a);
        r.time_below_ms = max_time_at(s_b);
        r.threshold_ms = (*r.time_above_ms + *r.time_below_ms) / 2;
        r.ref_statements = static_cast<double>(su);
        r.ref_time_ms = r.threshold_ms;
    } else if (below) {
        r.kind = ThresholdCase::OutlierAbove;
        r.threshold_ms = max_time_at(hi);
        r.ref_statements = static_cast<double>(hi);
        r.ref_time_ms = r.threshold_ms;
    } else {
        r.kind = ThresholdCase::OutlierBelow;
        r.threshold_ms = max_time_at(lo);
        r.ref_statements = static_cast<double>(lo);
        r.ref_time_ms = r.threshold_ms;
    }
    return r;
}

}  // namespace fixtures
