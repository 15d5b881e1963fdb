#include "perfgate/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "perfgate/error.hpp"
#include "perfgate/random.hpp"

namespace perfgate {

namespace {

constexpr double kMinExecTime = 1e-3;

std::uint64_t draw_counter(Rng& rng, const AttributeDist& d) {
    const double v = std::round(rng.normal(d.mean, d.spread));
    return v <= 0.0 ? 0 : static_cast<std::uint64_t>(v);
}

void check_dist(const AttributeDist& d, const char* name, std::size_t blob) {
    if (!(d.spread > 0.0) || !std::isfinite(d.spread) || !std::isfinite(d.mean)) {
        throw Error(ErrorCode::InvalidSpec, "blob " + std::to_string(blob) + ": " + name +
                                                " spread must be positive");
    }
}

AttributeDist dist_from_json(const nlohmann::json& j, const char* key, AttributeDist def) {
    if (!j.contains(key)) return def;
    const auto& d = j.at(key);
    return {d.value("mean", def.mean), d.value("spread", def.spread)};
}

}  // namespace

void validate(const SyntheticSpec& spec) {
    if (spec.blobs.empty()) throw Error(ErrorCode::InvalidSpec, "at least one blob is required");
    if (!(spec.time_slope > 0.0)) throw Error(ErrorCode::InvalidSpec, "time_slope must be positive");
    if (!(spec.time_noise >= 0.0)) throw Error(ErrorCode::InvalidSpec, "time_noise must be >= 0");
    if (spec.statement_step == 0) throw Error(ErrorCode::InvalidSpec, "statement_step must be >= 1");
    for (std::size_t b = 0; b < spec.blobs.size(); ++b) {
        const auto& blob = spec.blobs[b];
        if (blob.count == 0) {
            throw Error(ErrorCode::InvalidSpec, "blob " + std::to_string(b) + ": count must be positive");
        }
        check_dist(blob.input_size, "input_size", b);
        check_dist(blob.memory, "memory", b);
        check_dist(blob.iterations, "iterations", b);
        check_dist(blob.statements, "statements", b);
        check_dist(blob.function_calls, "function_calls", b);
        check_dist(blob.conditionals, "conditionals", b);
        if (blob.time_slope && !(*blob.time_slope > 0.0)) {
            throw Error(ErrorCode::InvalidSpec, "blob " + std::to_string(b) + ": time_slope must be positive");
        }
    }
}

CommitSnapshot generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    validate(spec);
    CommitSnapshot snap;
    snap.commit_id = spec.commit_id;
    Rng rng(seed);
    std::size_t next_id = 0;
    for (const auto& blob : spec.blobs) {
        const double slope = blob.time_slope.value_or(spec.time_slope);
        for (std::size_t i = 0; i < blob.count; ++i) {
            ProfileRecord r;
            char id[32];
            std::snprintf(id, sizeof id, "in-%06zu", next_id++);
            r.input_id = id;
            r.input_size = draw_counter(rng, blob.input_size);
            r.memory = std::max(0.0, rng.normal(blob.memory.mean, blob.memory.spread));
            r.iterations = draw_counter(rng, blob.iterations);
            r.statements = draw_counter(rng, blob.statements);
            if (spec.statement_step > 1) {
                const auto step = spec.statement_step;
                r.statements = (r.statements + step / 2) / step * step;
            }
            r.function_calls = draw_counter(rng, blob.function_calls);
            r.conditionals = draw_counter(rng, blob.conditionals);
            const double noise = spec.time_noise > 0.0 ? rng.normal(0.0, spec.time_noise) : 0.0;
            r.exec_time = std::max(kMinExecTime, slope * static_cast<double>(r.statements) + noise);
            snap.records.push_back(std::move(r));
        }
    }
    return snap;
}

SyntheticSpec preset_spec(std::string_view name, std::size_t total) {
    if (total == 0) throw Error(ErrorCode::InvalidSpec, "record count must be positive");
    SyntheticSpec spec;
    spec.time_slope = 0.001;
    spec.time_noise = 3.0;
    spec.statement_step = 250;
    auto blob = [](double size, double stmts) {
        BlobSpec b;
        b.input_size = {size, size * 0.05};
        b.statements = {stmts, stmts * 0.05};
        b.iterations = {stmts / 40.0, stmts / 800.0};
        b.function_calls = {stmts / 50.0, stmts / 1000.0};
        b.conditionals = {3000.0, 150.0};
        b.memory = {2048.0, 64.0};
        return b;
    };
    if (name == "two-clusters") {
        spec.blobs = {blob(4000.0, 40000.0), blob(12000.0, 120000.0)};
    } else if (name == "five-blobs") {
        spec.blobs = {blob(2000.0, 20000.0), blob(6000.0, 60000.0), blob(10000.0, 100000.0),
                      blob(14000.0, 140000.0), blob(18000.0, 180000.0)};
        spec.time_noise = 1.0;
    } else if (name == "single-blob") {
        spec.blobs = {blob(8000.0, 80000.0)};
    } else {
        throw Error(ErrorCode::InvalidSpec, "unknown preset '" + std::string(name) + "'");
    }
    const std::size_t per = total / spec.blobs.size();
    std::size_t rest = total % spec.blobs.size();
    for (auto& b : spec.blobs) {
        b.count = per + (rest > 0 ? 1 : 0);
        if (rest > 0) --rest;
    }
    spec.blobs.erase(std::remove_if(spec.blobs.begin(), spec.blobs.end(),
                                    [](const BlobSpec& b) { return b.count == 0; }),
                     spec.blobs.end());
    return spec;
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
    try {
        SyntheticSpec spec;
        spec.time_slope = j.value("time_slope", spec.time_slope);
        spec.time_noise = j.value("time_noise", spec.time_noise);
        spec.statement_step = j.value("statement_step", spec.statement_step);
        spec.commit_id = j.value("commit_id", spec.commit_id);
        for (const auto& b : j.at("blobs")) {
            BlobSpec blob;
            auto count = b.at("count").get<std::int64_t>();
            if (count <= 0) throw Error(ErrorCode::InvalidSpec, "blob count must be positive");
            blob.count = static_cast<std::size_t>(count);
            const auto& attrs = b.contains("attributes") ? b.at("attributes") : b;
            blob.input_size = dist_from_json(attrs, "input_size", blob.input_size);
            blob.memory = dist_from_json(attrs, "memory", blob.memory);
            blob.iterations = dist_from_json(attrs, "iterations", blob.iterations);
            blob.statements = dist_from_json(attrs, "statements", blob.statements);
            blob.function_calls = dist_from_json(attrs, "function_calls", blob.function_calls);
            blob.conditionals = dist_from_json(attrs, "conditionals", blob.conditionals);
            if (b.contains("time_slope")) blob.time_slope = b.at("time_slope").get<double>();
            spec.blobs.push_back(blob);
        }
        validate(spec);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidSpec, e.what());
    }
}

nlohmann::ordered_json to_json(const SyntheticSpec& spec) {
    auto dist = [](const AttributeDist& d) {
        return nlohmann::ordered_json{{"mean", d.mean}, {"spread", d.spread}};
    };
    nlohmann::ordered_json j;
    j["commit_id"] = spec.commit_id;
    j["time_slope"] = spec.time_slope;
    j["time_noise"] = spec.time_noise;
    j["statement_step"] = spec.statement_step;
    j["blobs"] = nlohmann::ordered_json::array();
    for (const auto& b : spec.blobs) {
        nlohmann::ordered_json o;
        o["count"] = b.count;
        o["attributes"] = {
            {"input_size", dist(b.input_size)}, {"memory", dist(b.memory)},
            {"iterations", dist(b.iterations)}, {"statements", dist(b.statements)},
            {"function_calls", dist(b.function_calls)}, {"conditionals", dist(b.conditionals)},
        };
        if (b.time_slope) o["time_slope"] = *b.time_slope;
        j["blobs"].push_back(std::move(o));
    }
    return j;
}

}  // namespace perfgate
