#include "perfgate/serialize.hpp"

#include <cmath>

#include "perfgate/error.hpp"

namespace perfgate {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <typename T>
Json optional_number(const std::optional<T>& v) {
    return v ? number_or_null(static_cast<double>(*v)) : Json(nullptr);
}

Json params_json(const ClusterModel& m) {
    Json p = Json::object();
    switch (m.algorithm) {
        case Algorithm::KMeans:
        case Algorithm::Gmm:
            p["k"] = m.params.k;
            p["max_iter"] = m.params.max_iter;
            p["tol"] = m.params.tol;
            break;
        case Algorithm::Agglomerative:
            p["k"] = m.params.k;
            p["linkage"] = linkage_name(m.params.linkage);
            break;
        case Algorithm::Dbscan:
            p["eps"] = m.params.eps;
            p["min_pts"] = m.params.min_pts;
            break;
    }
    return p;
}

Json medoids_json(const std::map<int, std::string>& medoids) {
    Json o = Json::object();
    for (const auto& [label, id] : medoids) o[std::to_string(label)] = id;
    return o;
}

}  // namespace

Json feature_names(const std::vector<Attribute>& features) {
    Json arr = Json::array();
    for (auto a : features) arr.push_back(attribute_name(a));
    return arr;
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const CorrelationMatrix& cm) {
    Json j;
    j["attributes"] = feature_names(cm.attributes);
    Json r = Json::array();
    Json p = Json::array();
    for (std::size_t a = 0; a < cm.r.size(); ++a) {
        Json rr = Json::array();
        Json pp = Json::array();
        for (std::size_t b = 0; b < cm.r.size(); ++b) {
            rr.push_back(cm.defined[a][b] ? number_or_null(cm.r[a][b]) : Json(nullptr));
            pp.push_back(cm.p[a][b]);
        }
        r.push_back(std::move(rr));
        p.push_back(std::move(pp));
    }
    j["r"] = std::move(r);
    j["p"] = std::move(p);
    j["n"] = cm.n;
    return j;
}

Json to_json(const ElbowCurve& curve) {
    Json j;
    j["k_values"] = curve.k_values;
    Json d = Json::array();
    for (double v : curve.distortion) d.push_back(number_or_null(v));
    j["distortion"] = std::move(d);
    j["knee"] = curve.knee;
    j["low_confidence"] = curve.low_confidence;
    return j;
}

Json to_json(const ClusterModel& m) {
    Json j;
    j["algorithm"] = algorithm_name(m.algorithm);
    j["params"] = params_json(m);
    j["features"] = feature_names(m.features);
    j["seed"] = m.seed;
    j["commit"] = m.commit;
    Json assignments = Json::array();
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        assignments.push_back({{"input_id", m.input_ids[i]}, {"label", m.labels[i]}});
    }
    j["assignments"] = std::move(assignments);
    j["medoids"] = medoids_json(m.medoids);
    if (!m.centroids.empty()) j["centroids"] = m.centroids;
    return j;
}

Json model_summary(const ClusterModel& m) {
    Json j;
    j["algorithm"] = algorithm_name(m.algorithm);
    j["params"] = params_json(m);
    j["features"] = feature_names(m.features);
    j["seed"] = m.seed;
    j["commit"] = m.commit;
    j["records"] = m.labels.size();
    j["cluster_count"] = m.cluster_count();
    j["noise"] = m.noise_count();
    Json sizes = Json::object();
    auto s = m.cluster_sizes();
    for (std::size_t c = 0; c < s.size(); ++c) sizes[std::to_string(c)] = s[c];
    j["sizes"] = std::move(sizes);
    j["medoids"] = medoids_json(m.medoids);
    return j;
}

Json cluster_points(const ClusterModel& m, const FeatureMatrix& x) {
    Json j;
    j["features"] = feature_names(x.features);
    Json pts = Json::array();
    for (std::size_t i = 0; i < x.rows; ++i) {
        Json coords = Json::array();
        for (double v : x.row(i)) coords.push_back(v);
        pts.push_back({{"input_id", x.ids[i]}, {"coords", std::move(coords)}, {"label", m.labels.at(i)}});
    }
    j["points"] = std::move(pts);
    return j;
}

Json to_json(const SamplePlan& plan) {
    Json j;
    j["per_cluster"] = plan.per_cluster;
    j["seed"] = plan.seed;
    j["include_noise"] = plan.include_noise;
    Json s = Json::object();
    for (const auto& [label, ids] : plan.sampled) s[std::to_string(label)] = ids;
    j["sampled"] = std::move(s);
    return j;
}

Json to_json(const ThresholdResult& t) {
    Json j;
    j["case"] = threshold_case_name(t.kind);
    j["threshold_ms"] = t.threshold_ms;
    j["time_above_ms"] = optional_number(t.time_above_ms);
    j["time_below_ms"] = optional_number(t.time_below_ms);
    j["ref_point"] = {{"statements", t.ref_statements}, {"time_ms", t.ref_time_ms}};
    return j;
}

Json to_json(const CheckResult& c) {
    Json j;
    j["label"] = c.label;
    j["input_id"] = c.input_id;
    j["cluster"] = c.cluster;
    j["threshold"] = to_json(c.threshold);
    j["threshold_check"] = c.threshold_check;
    switch (c.gradient_check) {
        case GradientCheck::Skipped: j["gradient_check"] = "x"; break;
        case GradientCheck::True: j["gradient_check"] = true; break;
        case GradientCheck::False: j["gradient_check"] = false; break;
    }
    j["baseline_gradient"] = optional_number(c.baseline_gradient);
    j["updated_gradient"] = optional_number(c.updated_gradient);
    j["gradient_change_pct"] = optional_number(c.gradient_change_pct);
    j["flagged"] = c.flagged;
    return j;
}

Json to_json(const DecisionReport& r) {
    Json j;
    j["acceptable_limit"] = number_or_null(r.acceptable_limit);
    j["vote_threshold"] = r.vote_threshold;
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = std::move(checks);
    j["flagged"] = r.flagged_count;
    j["total"] = r.checks.size();
    j["flagged_fraction"] = r.flagged_fraction;
    j["verdict"] = verdict_name(r.verdict);
    j["uncertain"] = r.uncertain;
    return j;
}

ClusterModel model_from_json(const nlohmann::json& j) {
    try {
        ClusterModel m;
        m.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        const auto& p = j.at("params");
        m.params.k = p.value("k", 0);
        m.params.max_iter = p.value("max_iter", 0);
        m.params.tol = p.value("tol", 0.0);
        m.params.eps = p.value("eps", 0.0);
        m.params.min_pts = p.value("min_pts", 0);
        if (p.contains("linkage")) m.params.linkage = parse_linkage(p.at("linkage").get<std::string>());
        for (const auto& f : j.at("features")) m.features.push_back(parse_attribute(f.get<std::string>()));
        m.seed = j.value("seed", std::uint64_t{0});
        m.commit = j.value("commit", std::string{});
        for (const auto& a : j.at("assignments")) {
            m.input_ids.push_back(a.at("input_id").get<std::string>());
            const int label = a.at("label").get<int>();
            if (label < kNoise) throw Error(ErrorCode::InvalidArgument, "bad label in model");
            m.labels.push_back(label);
        }
        for (const auto& [key, id] : j.at("medoids").items()) m.medoids[std::stoi(key)] = id.get<std::string>();
        if (j.contains("centroids")) m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed model JSON: ") + e.what());
    }
}

SamplePlan plan_from_json(const nlohmann::json& j) {
    try {
        SamplePlan plan;
        plan.per_cluster = j.at("per_cluster").get<int>();
        plan.seed = j.value("seed", std::uint64_t{0});
        plan.include_noise = j.value("include_noise", false);
        for (const auto& [key, ids] : j.at("sampled").items()) {
            plan.sampled[std::stoi(key)] = ids.get<std::vector<std::string>>();
        }
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed sample plan JSON: ") + e.what());
    }
}

}  // namespace perfgate
