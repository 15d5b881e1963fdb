#include "perfgate/sampling.hpp"

#include <algorithm>
#include <set>

#include "perfgate/error.hpp"
#include "perfgate/random.hpp"

namespace perfgate {

namespace {

std::vector<int> sampleable_groups(const ClusterModel& model, bool include_noise) {
    std::vector<int> groups;
    for (int c = 0; c < model.cluster_count(); ++c) groups.push_back(c);
    if (groups.empty()) throw Error(ErrorCode::NoClusters, "model has no clusters");
    if (include_noise && model.noise_count() > 0) groups.push_back(kNoise);
    return groups;
}

// Partial Fisher-Yates: the first `take` entries of `pool` become a uniform
// draw without replacement.
void draw(std::vector<std::size_t>& pool, std::size_t take, Rng& rng) {
    for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
}

}  // namespace

std::size_t SamplePlan::total() const {
    std::size_t n = 0;
    for (const auto& [label, ids] : sampled) n += ids.size();
    return n;
}

std::vector<std::string> SamplePlan::ids() const {
    std::vector<std::string> out;
    for (const auto& [label, ids] : sampled) out.insert(out.end(), ids.begin(), ids.end());
    return out;
}

std::vector<std::string> minimized_suite(const ClusterModel& model, const FeatureMatrix& m) {
    if (model.cluster_count() == 0) throw Error(ErrorCode::NoClusters, "every record is noise");
    const auto reps = model.medoids.empty() ? medoids(model, m) : model.medoids;
    std::vector<std::string> out;
    for (const auto& [label, id] : reps) out.push_back(id);
    return out;
}

SamplePlan sample_per_cluster(const ClusterModel& model, SamplePlan plan) {
    if (plan.per_cluster < 1) throw Error(ErrorCode::InvalidArgument, "per_cluster must be >= 1");
    const auto groups = sampleable_groups(model, plan.include_noise);
    plan.sampled.clear();
    for (int label : groups) {
        auto pool = model.members(label);
        Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(label + 1)));
        const auto take = std::min(pool.size(), static_cast<std::size_t>(plan.per_cluster));
        draw(pool, take, rng);
        auto& ids = plan.sampled[label];
        for (std::size_t i = 0; i < take; ++i) ids.push_back(model.input_ids[pool[i]]);
    }
    return plan;
}

SamplePlan escalate_sample(const ClusterModel& model, SamplePlan plan, int additional,
                           std::uint64_t seed) {
    if (additional < 1) throw Error(ErrorCode::InvalidArgument, "additional must be >= 1");
    const auto groups = sampleable_groups(model, plan.include_noise);
    for (int label : groups) {
        auto& ids = plan.sampled[label];
        std::set<std::string> have(ids.begin(), ids.end());
        std::vector<std::size_t> pool;
        for (auto i : model.members(label)) {
            if (!have.count(model.input_ids[i])) pool.push_back(i);
        }
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label + 1)));
        const auto take = std::min(pool.size(), static_cast<std::size_t>(additional));
        draw(pool, take, rng);
        for (std::size_t i = 0; i < take; ++i) ids.push_back(model.input_ids[pool[i]]);
    }
    plan.per_cluster += additional;
    return plan;
}

}  // namespace perfgate
