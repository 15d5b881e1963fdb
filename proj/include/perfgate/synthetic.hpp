#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "perfgate/profile.hpp"

namespace perfgate {

struct AttributeDist {
    double mean = 0.0;
    double spread = 1.0;  // standard deviation
};

/// One Gaussian blob of test inputs. Execution time is not drawn directly:
/// it follows time = slope * statements + N(0, time_noise).
struct BlobSpec {
    std::size_t count = 0;
    AttributeDist input_size{10000.0, 500.0};
    AttributeDist memory{2048.0, 64.0};
    AttributeDist iterations{1000.0, 50.0};
    AttributeDist statements{50000.0, 2500.0};
    AttributeDist function_calls{800.0, 40.0};
    AttributeDist conditionals{3000.0, 150.0};
    std::optional<double> time_slope;  // overrides SyntheticSpec::time_slope
};

struct SyntheticSpec {
    std::vector<BlobSpec> blobs;
    double time_slope = 0.001;  // ms per statement
    double time_noise = 0.0;    // ms, absolute sd
    /// Statement counts are rounded to a multiple of this, so several
    /// inputs can share an executed-statement count.
    std::uint64_t statement_step = 1;
    std::string commit_id = "synthetic";
};

/// Throws InvalidSpec on no blobs, zero counts, or non-positive spreads/slopes.
void validate(const SyntheticSpec& spec);

/// Deterministic for fixed (spec, seed). Input ids are "in-000000", ... in
/// blob order. Counters are rounded and clamped at 0; exec_time is clamped
/// to a small positive floor.
CommitSnapshot generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Built-in datasets: "two-clusters" (small vs. large inputs, the default),
/// "five-blobs", "single-blob". `total` records are split evenly over blobs.
SyntheticSpec preset_spec(std::string_view name, std::size_t total);

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SyntheticSpec& spec);

}  // namespace perfgate
