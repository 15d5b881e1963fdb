#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "perfgate/clustering.hpp"
#include "perfgate/decision.hpp"
#include "perfgate/profile.hpp"
#include "perfgate/sampling.hpp"
#include "perfgate/workspace.hpp"

namespace httplib {
class Server;
}

namespace perfgate {

struct ApiResponse {
    int status = 200;
    std::string body;
};

/// JSON-over-HTTP facade for the inspection dashboard.
///
/// Snapshots are loaded once at construction and never change afterwards.
/// The current model, sample plan and last decision are swapped as whole
/// shared_ptrs under a mutex. Mutating requests (cluster, sample, decide) are
/// single-writer: one arriving while another is in flight gets 409. Cluster
/// fits run on a worker thread and are polled through /api/cluster/status.
class ApiServer {
public:
    explicit ApiServer(Workspace workspace);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Transport-independent dispatch; the HTTP layer forwards here.
    ApiResponse handle(const std::string& method, const std::string& path,
                       const std::map<std::string, std::string>& query, const std::string& body);

    /// Blocks serving until stop().
    bool listen(const std::string& host, int port);
    /// Binds an ephemeral port and returns it (or -1); serve with listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

    /// Waits for a background cluster fit, if any, to finish.
    void wait_for_fit();

private:
    using Query = std::map<std::string, std::string>;

    ApiResponse commits() const;
    ApiResponse profiles(const Query& q) const;
    ApiResponse correlation(const Query& q) const;
    ApiResponse elbow(const Query& q) const;
    ApiResponse post_cluster(const std::string& body);
    ApiResponse cluster_status() const;
    ApiResponse current_cluster() const;
    ApiResponse post_sample(const std::string& body);
    ApiResponse post_decide(const std::string& body);
    ApiResponse recommendation() const;

    std::shared_ptr<const CommitSnapshot> snapshot(const std::string& commit) const;
    void setup_routes();

    Workspace workspace_;
    std::map<std::string, std::shared_ptr<const CommitSnapshot>> snapshots_;

    mutable std::mutex state_mu_;
    std::shared_ptr<const ClusterModel> model_;
    std::shared_ptr<const SamplePlan> plan_;
    std::shared_ptr<const DecisionReport> report_;
    std::string fit_state_ = "idle";
    std::string fit_error_;

    std::atomic<bool> busy_{false};
    std::thread fit_thread_;
    std::unique_ptr<httplib::Server> http_;
};

}  // namespace perfgate
