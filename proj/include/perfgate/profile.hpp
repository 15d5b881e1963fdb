#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace perfgate {

/// The seven profiled attributes of a test input.
enum class Attribute {
    InputSize,
    ExecTime,
    Memory,
    Iterations,
    Statements,
    FunctionCalls,
    Conditionals,
};

inline constexpr std::array<Attribute, 7> kAllAttributes = {
    Attribute::InputSize,  Attribute::ExecTime,      Attribute::Memory,
    Attribute::Iterations, Attribute::Statements,    Attribute::FunctionCalls,
    Attribute::Conditionals,
};

/// Axes of the 3D cluster view: input size, statements, time.
inline const std::vector<Attribute> kDefaultFeatures = {
    Attribute::InputSize, Attribute::Statements, Attribute::ExecTime};

std::string_view attribute_name(Attribute a);

/// Accepts the short names ("exec_time") and the CSV column names
/// ("exec_time_ms", "memory_kb"). Throws InvalidArgument otherwise.
Attribute parse_attribute(std::string_view name);

/// Comma-separated list, e.g. "input_size,statements,exec_time".
std::vector<Attribute> parse_feature_list(std::string_view list);

struct ProfileRecord {
    std::string input_id;
    std::uint64_t input_size = 0;  // bytes
    double exec_time = 0.0;        // ms
    double memory = 0.0;           // kB
    std::uint64_t iterations = 0;
    std::uint64_t statements = 0;
    std::uint64_t function_calls = 0;
    std::uint64_t conditionals = 0;
    std::optional<std::string> test_case;

    double value(Attribute a) const;

    bool operator==(const ProfileRecord&) const = default;
};

struct CommitSnapshot {
    std::string commit_id;
    std::vector<ProfileRecord> records;
    std::int64_t captured_at = 0;  // seconds since epoch

    bool has_test_cases() const;
    /// Index of the record with this id, ignoring test_case rows.
    std::optional<std::size_t> find(std::string_view input_id) const;
};

/// Checks record invariants and (input_id, test_case) uniqueness.
/// Throws MalformedRow / DuplicateInput / EmptyDataset.
void validate(const CommitSnapshot& snapshot);

/// Collapses per-test-case rows into one row per input: counters and times
/// are summed, memory takes the max. Order follows first appearance.
CommitSnapshot aggregate_by_input(const CommitSnapshot& snapshot);

/// Multiplies exec_time of the selected inputs by (1 + factor).
CommitSnapshot apply_slowdown(const CommitSnapshot& snapshot,
                              const std::set<std::string>& input_ids,
                              double factor);

}  // namespace perfgate
