#include "perfgate/api_server.hpp"

#include <httplib.h>

#include <filesystem>
#include <limits>

#include "perfgate/error.hpp"
#include "perfgate/feature_matrix.hpp"
#include "perfgate/pipeline.hpp"
#include "perfgate/profile_io.hpp"
#include "perfgate/serialize.hpp"
#include "perfgate/stats.hpp"

namespace perfgate {

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct HttpError {
    int status;
    std::string error;
    std::string detail;
};

ApiResponse json_response(const Json& j, int status = 200) { return {status, render_json(j)}; }

ApiResponse error_response(int status, std::string_view error, const std::string& detail) {
    Json j;
    j["error"] = error;
    j["detail"] = detail;
    return {status, render_json(j)};
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound: return 404;
        case ErrorCode::InvalidArgument: return 400;
        default: return 422;
    }
}

const std::string& require(const std::map<std::string, std::string>& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end() || it->second.empty()) {
        throw HttpError{400, "BadRequest", "missing query parameter '" + key + "'"};
    }
    return it->second;
}

long long query_int(const std::map<std::string, std::string>& q, const std::string& key, long long def) {
    auto it = q.find(key);
    if (it == q.end() || it->second.empty()) return def;
    try {
        std::size_t used = 0;
        auto v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw HttpError{400, "BadRequest", "query parameter '" + key + "' must be an integer"};
    }
}

nlohmann::json parse_body(const std::string& body) {
    if (body.empty()) return nlohmann::json::object();
    try {
        auto j = nlohmann::json::parse(body);
        if (!j.is_object()) throw HttpError{400, "BadRequest", "request body must be a JSON object"};
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        throw HttpError{400, "BadRequest", std::string("malformed JSON: ") + e.what()};
    }
}

template <typename T>
T field(const nlohmann::json& j, const char* key, T def) {
    if (!j.contains(key) || j.at(key).is_null()) return def;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw HttpError{400, "BadRequest", std::string("field '") + key + "' has the wrong type"};
    }
}

std::vector<Attribute> features_field(const nlohmann::json& j) {
    if (!j.contains("features")) return kDefaultFeatures;
    const auto& f = j.at("features");
    if (f.is_string()) return parse_feature_list(f.get<std::string>());
    if (!f.is_array()) throw HttpError{400, "BadRequest", "features must be a list or a string"};
    std::vector<Attribute> out;
    for (const auto& name : f) {
        if (!name.is_string()) throw HttpError{400, "BadRequest", "feature names must be strings"};
        out.push_back(parse_attribute(name.get<std::string>()));
    }
    if (out.empty()) throw HttpError{400, "BadRequest", "features must not be empty"};
    return out;
}

// RAII claim on the single-writer slot.
class WriterSlot {
public:
    explicit WriterSlot(std::atomic<bool>& busy) : busy_(busy) {
        bool expected = false;
        if (!busy_.compare_exchange_strong(expected, true)) {
            throw HttpError{409, "Conflict", "another mutating request is in flight"};
        }
    }
    ~WriterSlot() {
        if (owned_) busy_.store(false);
    }
    void release_to_worker() { owned_ = false; }

private:
    std::atomic<bool>& busy_;
    bool owned_ = true;
};

}  // namespace

ApiServer::ApiServer(Workspace workspace) : workspace_(std::move(workspace)) {
    for (const auto& commit : workspace_.commits()) {
        snapshots_.emplace(commit, std::make_shared<const CommitSnapshot>(workspace_.load_snapshot(commit)));
    }
    if (auto name = workspace_.active_model(); name && workspace_.has_model(*name)) {
        model_ = std::make_shared<const ClusterModel>(workspace_.load_model(*name));
        fit_state_ = "done";
        if (std::filesystem::is_regular_file(workspace_.plan_path(*name))) {
            plan_ = std::make_shared<const SamplePlan>(workspace_.load_plan(*name));
        }
    }
    setup_routes();
}

ApiServer::~ApiServer() {
    stop();
    if (fit_thread_.joinable()) fit_thread_.join();
}

void ApiServer::setup_routes() {
    http_ = std::make_unique<httplib::Server>();
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query.emplace(k, v);
        auto out = handle(req.method, req.path, query, req.body);
        res.status = out.status;
        res.set_content(out.body, "application/json; charset=utf-8");
    };
    http_->Get(".*", forward);
    http_->Post(".*", forward);
}

bool ApiServer::listen(const std::string& host, int port) { return http_->listen(host, port); }

int ApiServer::bind_any_port(const std::string& host) { return http_->bind_to_any_port(host); }

bool ApiServer::listen_after_bind() { return http_->listen_after_bind(); }

void ApiServer::stop() {
    if (http_) http_->stop();
}

void ApiServer::wait_for_fit() {
    std::thread t;
    {
        std::lock_guard lock(state_mu_);
        t = std::move(fit_thread_);
    }
    if (t.joinable()) t.join();
}

ApiResponse ApiServer::handle(const std::string& method, const std::string& path,
                              const std::map<std::string, std::string>& query, const std::string& body) {
    try {
        if (method == "GET") {
            if (path == "/api/commits") return commits();
            if (path == "/api/profiles") return profiles(query);
            if (path == "/api/correlation") return correlation(query);
            if (path == "/api/elbow") return elbow(query);
            if (path == "/api/cluster/status") return cluster_status();
            if (path == "/api/clusters/current") return current_cluster();
            if (path == "/api/recommendation") return recommendation();
        } else if (method == "POST") {
            if (path == "/api/cluster") return post_cluster(body);
            if (path == "/api/sample") return post_sample(body);
            if (path == "/api/decide") return post_decide(body);
        }
        return error_response(404, "NotFound", "no endpoint " + method + " " + path);
    } catch (const HttpError& e) {
        return error_response(e.status, e.error, e.detail);
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e.name(), e.detail());
    } catch (const std::exception& e) {
        return error_response(500, "Internal", e.what());
    }
}

std::shared_ptr<const CommitSnapshot> ApiServer::snapshot(const std::string& commit) const {
    auto it = snapshots_.find(commit);
    if (it == snapshots_.end()) throw Error(ErrorCode::NotFound, "unknown commit '" + commit + "'");
    return it->second;
}

ApiResponse ApiServer::commits() const {
    Json arr = Json::array();
    for (const auto& [id, snap] : snapshots_) {
        double total = 0.0;
        for (const auto& r : snap->records) total += r.exec_time;
        arr.push_back({{"commit", id},
                       {"records", snap->records.size()},
                       {"total_exec_time_ms", total},
                       {"captured_at", snap->captured_at}});
    }
    return json_response(arr);
}

ApiResponse ApiServer::profiles(const Query& q) const {
    const auto snap = snapshot(require(q, "commit"));
    Json j;
    j["commit"] = snap->commit_id;
    j["records"] = to_json_records(*snap);
    return json_response(j);
}

ApiResponse ApiServer::correlation(const Query& q) const {
    return json_response(to_json(pearson_matrix(*snapshot(require(q, "commit")))));
}

ApiResponse ApiServer::elbow(const Query& q) const {
    const auto snap = snapshot(require(q, "commit"));
    const auto kmax = query_int(q, "kmax", 8);
    const auto seed = query_int(q, "seed", static_cast<long long>(kDefaultSeed));
    if (kmax < 2 || kmax > 1000) throw HttpError{400, "BadRequest", "kmax must be in [2, 1000]"};
    auto features = kDefaultFeatures;
    if (auto it = q.find("features"); it != q.end() && !it->second.empty()) {
        features = parse_feature_list(it->second);
    }
    return json_response(
        to_json(elbow_curve(*snap, features, static_cast<int>(kmax), static_cast<std::uint64_t>(seed))));
}

ApiResponse ApiServer::post_cluster(const std::string& body) {
    const auto j = parse_body(body);
    ClusterRequest req;
    const auto commit = field<std::string>(j, "commit", "");
    if (commit.empty()) throw HttpError{400, "BadRequest", "field 'commit' is required"};
    auto snap = snapshot(commit);
    req.algorithm = parse_algorithm(field<std::string>(j, "algo", "kmeans"));
    req.features = features_field(j);
    req.seed = field<std::uint64_t>(j, "seed", kDefaultSeed);
    req.k = field<int>(j, "k", req.k);
    if (j.contains("eps")) req.eps = field<double>(j, "eps", 0.0);
    req.min_pts = field<int>(j, "min_pts", req.min_pts);
    req.linkage = parse_linkage(field<std::string>(j, "linkage", "average"));
    req.max_iter = field<int>(j, "max_iter", req.max_iter);
    req.tol = field<double>(j, "tol", req.tol);
    const bool wait = field<bool>(j, "wait", false);
    if (req.algorithm == Algorithm::Dbscan && !req.eps) {
        throw HttpError{400, "BadRequest", "dbscan requires 'eps'"};
    }

    WriterSlot slot(busy_);
    if (wait) {
        auto model = std::make_shared<const ClusterModel>(fit_model(*snap, req));
        std::lock_guard lock(state_mu_);
        model_ = model;
        plan_.reset();
        fit_state_ = "done";
        fit_error_.clear();
        return json_response(model_summary(*model));
    }

    std::thread previous;
    {
        std::lock_guard lock(state_mu_);
        previous = std::move(fit_thread_);
        fit_state_ = "running";
        fit_error_.clear();
    }
    if (previous.joinable()) previous.join();
    slot.release_to_worker();
    std::lock_guard lock(state_mu_);
    fit_thread_ = std::thread([this, snap, req] {
        std::shared_ptr<const ClusterModel> model;
        std::string failure;
        try {
            model = std::make_shared<const ClusterModel>(fit_model(*snap, req));
        } catch (const Error& e) {
            failure = std::string(e.name()) + ": " + e.detail();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        {
            std::lock_guard inner(state_mu_);
            if (model) {
                model_ = model;
                plan_.reset();
                fit_state_ = "done";
            } else {
                fit_state_ = "failed";
                fit_error_ = failure;
            }
        }
        busy_.store(false);
    });
    Json accepted{{"state", "running"}};
    return json_response(accepted, 202);
}

ApiResponse ApiServer::cluster_status() const {
    std::lock_guard lock(state_mu_);
    Json j;
    j["state"] = fit_state_;
    if (fit_state_ == "done" && model_) j["summary"] = model_summary(*model_);
    if (fit_state_ == "failed") j["error"] = fit_error_;
    return json_response(j);
}

ApiResponse ApiServer::current_cluster() const {
    std::shared_ptr<const ClusterModel> model;
    {
        std::lock_guard lock(state_mu_);
        model = model_;
    }
    if (!model) throw Error(ErrorCode::NotFound, "no cluster model yet");
    Json j;
    j["summary"] = model_summary(*model);
    j["model"] = to_json(*model);
    if (!model->commit.empty() && snapshots_.count(model->commit)) {
        const auto m = standardize(*snapshot(model->commit), model->features);
        j["points"] = cluster_points(*model, m)["points"];
    }
    return json_response(j);
}

ApiResponse ApiServer::post_sample(const std::string& body) {
    const auto j = parse_body(body);
    WriterSlot slot(busy_);
    std::shared_ptr<const ClusterModel> model;
    std::shared_ptr<const SamplePlan> current;
    {
        std::lock_guard lock(state_mu_);
        model = model_;
        current = plan_;
    }
    if (!model) throw Error(ErrorCode::NotFound, "no cluster model yet");
    const auto seed = field<std::uint64_t>(j, "seed", kDefaultSeed);
    const auto escalate = field<int>(j, "escalate", 0);
    SamplePlan plan;
    if (escalate > 0) {
        if (!current) throw Error(ErrorCode::NotFound, "no sample plan to escalate");
        plan = escalate_sample(*model, *current, escalate, seed);
    } else {
        plan.per_cluster = field<int>(j, "per_cluster", kDefaultPerCluster);
        plan.seed = seed;
        plan.include_noise = field<bool>(j, "include_noise", false);
        plan = sample_per_cluster(*model, plan);
    }
    auto stored = std::make_shared<const SamplePlan>(std::move(plan));
    {
        std::lock_guard lock(state_mu_);
        plan_ = stored;
    }
    return json_response(to_json(*stored));
}

ApiResponse ApiServer::post_decide(const std::string& body) {
    const auto j = parse_body(body);
    WriterSlot slot(busy_);
    std::shared_ptr<const ClusterModel> model;
    std::shared_ptr<const SamplePlan> plan;
    {
        std::lock_guard lock(state_mu_);
        model = model_;
        plan = plan_;
    }
    if (!model) throw Error(ErrorCode::NotFound, "no cluster model yet");
    if (!plan) throw Error(ErrorCode::NotFound, "no sample plan yet");
    const auto updated_commit = field<std::string>(j, "updated", "");
    if (updated_commit.empty()) throw HttpError{400, "BadRequest", "field 'updated' is required"};
    const auto baseline_commit = field<std::string>(j, "baseline", model->commit);
    if (baseline_commit != model->commit) {
        throw Error(ErrorCode::ClusterMismatch, "current model was fitted on '" + model->commit +
                                                    "', not '" + baseline_commit + "'");
    }
    double limit = kDefaultAcceptableLimit;
    if (j.contains("acceptable_limit")) {
        const auto& v = j.at("acceptable_limit");
        if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) {
            limit = std::numeric_limits<double>::infinity();
        } else {
            limit = field<double>(j, "acceptable_limit", limit);
        }
    }
    const double vote = field<double>(j, "vote_threshold", kDefaultVoteThreshold);
    auto report = std::make_shared<const DecisionReport>(
        decide(*model, *plan, *snapshot(baseline_commit), *snapshot(updated_commit), limit, vote));
    {
        std::lock_guard lock(state_mu_);
        report_ = report;
    }
    return json_response(to_json(*report));
}

ApiResponse ApiServer::recommendation() const {
    std::shared_ptr<const DecisionReport> report;
    {
        std::lock_guard lock(state_mu_);
        report = report_;
    }
    if (!report) throw Error(ErrorCode::NotFound, "no decision has been made yet");
    return json_response(to_json(*report));
}

}  // namespace perfgate
