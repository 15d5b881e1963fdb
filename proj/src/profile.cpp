#include "perfgate/profile.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "perfgate/error.hpp"

namespace perfgate {

std::string_view attribute_name(Attribute a) {
    switch (a) {
        case Attribute::InputSize: return "input_size";
        case Attribute::ExecTime: return "exec_time";
        case Attribute::Memory: return "memory";
        case Attribute::Iterations: return "iterations";
        case Attribute::Statements: return "statements";
        case Attribute::FunctionCalls: return "function_calls";
        case Attribute::Conditionals: return "conditionals";
    }
    return "?";
}

Attribute parse_attribute(std::string_view name) {
    if (name == "exec_time_ms") return Attribute::ExecTime;
    if (name == "memory_kb") return Attribute::Memory;
    for (auto a : kAllAttributes) {
        if (attribute_name(a) == name) return a;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown attribute '" + std::string(name) + "'");
}

std::vector<Attribute> parse_feature_list(std::string_view list) {
    std::vector<Attribute> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        if (comma == std::string_view::npos) comma = list.size();
        auto item = list.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            auto a = parse_attribute(item);
            if (std::find(out.begin(), out.end(), a) != out.end()) {
                throw Error(ErrorCode::InvalidArgument,
                            "feature '" + std::string(item) + "' listed twice");
            }
            out.push_back(a);
        }
        pos = comma + 1;
    }
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty feature list");
    return out;
}

double ProfileRecord::value(Attribute a) const {
    switch (a) {
        case Attribute::InputSize: return static_cast<double>(input_size);
        case Attribute::ExecTime: return exec_time;
        case Attribute::Memory: return memory;
        case Attribute::Iterations: return static_cast<double>(iterations);
        case Attribute::Statements: return static_cast<double>(statements);
        case Attribute::FunctionCalls: return static_cast<double>(function_calls);
        case Attribute::Conditionals: return static_cast<double>(conditionals);
    }
    return 0.0;
}

bool CommitSnapshot::has_test_cases() const {
    return std::any_of(records.begin(), records.end(),
                       [](const ProfileRecord& r) { return r.test_case.has_value(); });
}

std::optional<std::size_t> CommitSnapshot::find(std::string_view input_id) const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].input_id == input_id) return i;
    }
    return std::nullopt;
}

void validate(const CommitSnapshot& snapshot) {
    if (snapshot.records.empty()) {
        throw Error(ErrorCode::EmptyDataset, "snapshot '" + snapshot.commit_id + "' has no records");
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 0; i < snapshot.records.size(); ++i) {
        const auto& r = snapshot.records[i];
        const auto where = "record " + std::to_string(i + 1);
        if (r.input_id.empty()) {
            throw Error(ErrorCode::MalformedRow, where + ": empty input_id");
        }
        if (!(r.exec_time > 0.0) || !std::isfinite(r.exec_time)) {
            throw Error(ErrorCode::MalformedRow, where + ": exec_time must be > 0");
        }
        if (!(r.memory >= 0.0) || !std::isfinite(r.memory)) {
            throw Error(ErrorCode::MalformedRow, where + ": memory must be >= 0");
        }
        // a missing test_case is keyed separately from any named one
        auto key = std::make_pair(r.input_id, r.test_case ? "#" + *r.test_case : std::string{});
        if (!seen.insert(key).second) {
            throw Error(ErrorCode::DuplicateInput, r.input_id);
        }
    }
}

CommitSnapshot aggregate_by_input(const CommitSnapshot& snapshot) {
    CommitSnapshot out;
    out.commit_id = snapshot.commit_id;
    out.captured_at = snapshot.captured_at;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& r : snapshot.records) {
        auto [it, inserted] = index.try_emplace(r.input_id, out.records.size());
        if (inserted) {
            ProfileRecord agg = r;
            agg.test_case.reset();
            out.records.push_back(std::move(agg));
            continue;
        }
        auto& agg = out.records[it->second];
        agg.input_size = std::max(agg.input_size, r.input_size);
        agg.exec_time += r.exec_time;
        agg.memory = std::max(agg.memory, r.memory);
        agg.iterations += r.iterations;
        agg.statements += r.statements;
        agg.function_calls += r.function_calls;
        agg.conditionals += r.conditionals;
    }
    return out;
}

CommitSnapshot apply_slowdown(const CommitSnapshot& snapshot,
                              const std::set<std::string>& input_ids, double factor) {
    if (!(factor >= 0.0) || !std::isfinite(factor)) {
        throw Error(ErrorCode::InvalidArgument, "slowdown factor must be >= 0");
    }
    std::set<std::string> found;
    CommitSnapshot out = snapshot;
    for (auto& r : out.records) {
        if (input_ids.count(r.input_id)) {
            r.exec_time *= (1.0 + factor);
            found.insert(r.input_id);
        }
    }
    for (const auto& id : input_ids) {
        if (!found.count(id)) throw Error(ErrorCode::UnknownInput, id);
    }
    return out;
}

}  // namespace perfgate
