#include <gtest/gtest.h>

#include <httplib.h>

#include <chrono>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "perfgate/api_server.hpp"
#include "perfgate/cli.hpp"
#include "perfgate/serialize.hpp"
#include "perfgate/workspace.hpp"

using namespace perfgate;

namespace {

std::string cli_out(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    EXPECT_TRUE(code == kExitOk || code == kExitRunTests) << err.str();
    return out.str();
}

class ApiTest : public ::testing::Test {
protected:
    void SetUp() override {
        auto s = fixtures::regression_scenario();
        auto ws = Workspace::open(dir.path());
        ws.save_snapshot(s.baseline);
        auto up = fixtures::sampled_only(s);
        up.commit_id = "up";
        ws.save_snapshot(up);
    }

    ApiResponse get(ApiServer& api, const std::string& path, std::map<std::string, std::string> q = {}) {
        return api.handle("GET", path, q, "");
    }
    ApiResponse post(ApiServer& api, const std::string& path, const std::string& body) {
        return api.handle("POST", path, {}, body);
    }

    fixtures::TempDir dir{"api"};
};

}  // namespace

TEST_F(ApiTest, CommitsAndProfiles) {
    ApiServer api(Workspace::open(dir.path()));
    auto r = get(api, "/api/commits");
    ASSERT_EQ(r.status, 200);
    auto j = nlohmann::json::parse(r.body);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["commit"], "base");
    EXPECT_EQ(j[0]["records"], 4000);
    EXPECT_GT(j[0]["total_exec_time_ms"].get<double>(), 0.0);
    EXPECT_EQ(j[1]["records"], 6);

    auto p = get(api, "/api/profiles", {{"commit", "up"}});
    ASSERT_EQ(p.status, 200);
    EXPECT_EQ(nlohmann::json::parse(p.body)["records"].size(), 6u);

    EXPECT_EQ(get(api, "/api/profiles", {{"commit", "nope"}}).status, 404);
    EXPECT_EQ(get(api, "/api/profiles").status, 400);
    EXPECT_EQ(get(api, "/api/nothing").status, 404);
    auto err = nlohmann::json::parse(get(api, "/api/profiles", {{"commit", "nope"}}).body);
    EXPECT_TRUE(err.contains("error") && err.contains("detail"));
}

TEST_F(ApiTest, PureQueriesMatchCli) {
    const auto w = dir.str();
    const auto corr = cli_out({"-w", w, "stats", "corr", "--commit", "base"});
    const auto elbow = cli_out({"-w", w, "elbow", "--commit", "base"});
    ApiServer api(Workspace::open(dir.path()));
    EXPECT_EQ(get(api, "/api/correlation", {{"commit", "base"}}).body, corr);
    EXPECT_EQ(get(api, "/api/elbow", {{"commit", "base"}, {"kmax", "8"}, {"seed", "42"}}).body, elbow);
    EXPECT_EQ(get(api, "/api/elbow", {{"commit", "base"}, {"kmax", "x"}}).status, 400);
}

TEST_F(ApiTest, ClusterSampleDecideMatchCli) {
    const auto w = dir.str();
    const auto cluster = cli_out({"-w", w, "cluster", "--commit", "base", "--k", "2"});
    const auto sample = cli_out({"-w", w, "sample"});
    const auto decide = cli_out({"-w", w, "decide", "--updated-commit", "up"});
    ASSERT_EQ(nlohmann::json::parse(decide)["verdict"], "RUN");

    // Picks up the active model and plan the CLI left behind.
    {
        ApiServer api(Workspace::open(dir.path()));
        auto r = post(api, "/api/decide", R"({"baseline":"base","updated":"up","acceptable_limit":38})");
        ASSERT_EQ(r.status, 200) << r.body;
        EXPECT_EQ(r.body, decide);
        EXPECT_EQ(get(api, "/api/recommendation").body, decide);
    }

    // A fresh session reproduces every step.
    fixtures::TempDir empty("api-fresh");
    {
        auto ws = Workspace::open(empty.path());
        ws.save_snapshot(Workspace::open(dir.path()).load_snapshot("base"));
        ws.save_snapshot(Workspace::open(dir.path()).load_snapshot("up"));
    }
    ApiServer api(Workspace::open(empty.path()));
    EXPECT_EQ(get(api, "/api/recommendation").status, 404);
    EXPECT_EQ(post(api, "/api/sample", "{}").status, 404);
    auto c = post(api, "/api/cluster", R"({"commit":"base","algo":"kmeans","k":2,"wait":true})");
    ASSERT_EQ(c.status, 200) << c.body;
    EXPECT_EQ(c.body, cluster);
    EXPECT_EQ(post(api, "/api/decide", R"({"updated":"up"})").status, 404);  // no plan yet
    auto s = post(api, "/api/sample", "{}");
    EXPECT_EQ(s.body, sample);
    auto d = post(api, "/api/decide", R"({"baseline":"base","updated":"up"})");
    EXPECT_EQ(d.body, decide);

    auto current = nlohmann::json::parse(get(api, "/api/clusters/current").body);
    EXPECT_EQ(current["points"].size(), 4000u);
    EXPECT_EQ(current["summary"]["cluster_count"], 2);
}

TEST_F(ApiTest, BadRequestsAndDomainErrors) {
    ApiServer api(Workspace::open(dir.path()));
    EXPECT_EQ(post(api, "/api/cluster", "{not json").status, 400);
    EXPECT_EQ(post(api, "/api/cluster", "[1]").status, 400);
    EXPECT_EQ(post(api, "/api/cluster", R"({"commit":"base","algo":"dbscan"})").status, 400);
    EXPECT_EQ(post(api, "/api/cluster", R"({"commit":"base","algo":"spectral"})").status, 400);
    EXPECT_EQ(post(api, "/api/cluster", R"({"commit":"base","k":"two"})").status, 400);
    EXPECT_EQ(post(api, "/api/cluster", R"({"commit":"zzz"})").status, 404);
    auto r = post(api, "/api/cluster", R"({"commit":"up","k":7,"wait":true})");
    EXPECT_EQ(r.status, 422);
    EXPECT_EQ(nlohmann::json::parse(r.body)["error"], "TooFewRecords");
}

TEST_F(ApiTest, DbscanSummaryEqualsDirectFit) {
    ApiServer api(Workspace::open(dir.path()));
    auto r = post(api, "/api/cluster",
                  R"({"commit":"base","algo":"dbscan","eps":0.3,"min_pts":5,"features":["input_size","statements","exec_time"],"wait":true})");
    ASSERT_EQ(r.status, 200) << r.body;
    ClusterRequest req;
    req.algorithm = Algorithm::Dbscan;
    req.eps = 0.3;
    req.min_pts = 5;
    req.seed = 42;
    auto model = fit_model(Workspace::open(dir.path()).load_snapshot("base"), req);
    EXPECT_EQ(r.body, render_json(model_summary(model)));
}

TEST_F(ApiTest, AsyncFitPollsAndRejectsConcurrentWrites) {
    ApiServer api(Workspace::open(dir.path()));
    auto r = post(api, "/api/cluster", R"({"commit":"base","algo":"agglomerative","k":2})");
    ASSERT_EQ(r.status, 202) << r.body;
    // The fit over 4000 records takes far longer than these calls.
    EXPECT_EQ(post(api, "/api/sample", "{}").status, 409);
    EXPECT_EQ(post(api, "/api/cluster", R"({"commit":"base"})").status, 409);
    EXPECT_EQ(get(api, "/api/commits").status, 200);  // readers stay responsive
    EXPECT_EQ(nlohmann::json::parse(get(api, "/api/cluster/status").body)["state"], "running");
    api.wait_for_fit();
    auto status = nlohmann::json::parse(get(api, "/api/cluster/status").body);
    EXPECT_EQ(status["state"], "done");
    EXPECT_EQ(status["summary"]["algorithm"], "agglomerative");
    EXPECT_EQ(post(api, "/api/sample", R"({"per_cluster":2})").status, 200);
    auto esc = post(api, "/api/sample", R"({"escalate":1})");
    EXPECT_EQ(nlohmann::json::parse(esc.body)["per_cluster"], 3);
}

TEST_F(ApiTest, ServesOverHttp) {
    ApiServer api(Workspace::open(dir.path()));
    const int port = api.bind_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread server([&] { api.listen_after_bind(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    httplib::Result res;
    for (int attempt = 0; attempt < 50 && !res; ++attempt) {
        res = client.Get("/api/commits");
        if (!res) std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, get(api, "/api/commits").body);
    EXPECT_NE(res->get_header_value("Content-Type").find("application/json"), std::string::npos);

    auto bad = client.Post("/api/cluster", "{oops", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    auto q = client.Get("/api/profiles?commit=up");
    ASSERT_TRUE(q);
    EXPECT_EQ(q->status, 200);
    api.stop();
    server.join();
}
