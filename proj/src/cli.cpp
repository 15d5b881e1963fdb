#include "perfgate/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "perfgate/api_server.hpp"
#include "perfgate/error.hpp"
#include "perfgate/pipeline.hpp"
#include "perfgate/profile_io.hpp"
#include "perfgate/serialize.hpp"
#include "perfgate/stats.hpp"
#include "perfgate/synthetic.hpp"
#include "perfgate/workspace.hpp"

namespace perfgate {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string workspace = ".";
    std::uint64_t seed = 42;
    std::string features = "input_size,statements,exec_time";
    std::string format = "json";
};

struct Outputs {
    std::ostream& out;
    std::ostream& err;
    bool json = true;
};

std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
}

void emit(const Outputs& io, const Json& j, const std::string& table) {
    if (io.json) {
        io.out << render_json(j);
    } else {
        io.out << table;
    }
}

std::string matrix_table(const CorrelationMatrix& cm, bool pvalues) {
    std::ostringstream ss;
    ss << pad("", 15);
    for (auto a : cm.attributes) ss << pad(std::string(attribute_name(a)), 15);
    ss << '\n';
    for (std::size_t i = 0; i < cm.attributes.size(); ++i) {
        ss << pad(std::string(attribute_name(cm.attributes[i])), 15);
        for (std::size_t j = 0; j < cm.attributes.size(); ++j) {
            std::string cell;
            if (!cm.defined[i][j]) {
                cell = "undef";
            } else if (pvalues) {
                cell = i == j ? "self" : general(cm.p[i][j]) + (cm.p[i][j] < kSignificanceLevel ? "*" : "");
            } else {
                cell = fixed(cm.r[i][j], 3);
            }
            ss << pad(cell, 15);
        }
        ss << '\n';
    }
    ss << "n = " << cm.n << '\n';
    return ss.str();
}

std::string summary_table(const ClusterModel& m) {
    std::ostringstream ss;
    ss << "algorithm " << algorithm_name(m.algorithm) << ", " << m.cluster_count() << " clusters, "
       << m.noise_count() << " noise, " << m.labels.size() << " records\n";
    auto sizes = m.cluster_sizes();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        ss << "  cluster " << c << ": " << sizes[c] << " records, medoid "
           << m.medoids.at(static_cast<int>(c)) << '\n';
    }
    return ss.str();
}

std::string plan_table(const SamplePlan& plan) {
    std::ostringstream ss;
    for (const auto& [label, ids] : plan.sampled) {
        ss << (label == kNoise ? std::string("noise") : "C" + std::to_string(label + 1)) << ':';
        for (const auto& id : ids) ss << ' ' << id;
        ss << '\n';
    }
    return ss.str();
}

std::string resolve_model_name(const Workspace& ws, const std::string& requested) {
    if (!requested.empty()) return requested;
    return ws.active_model().value_or("current");
}

// Keeps only the sampled inputs of an updated profile file.
CommitSnapshot restrict_to(const CommitSnapshot& snap, const SamplePlan& plan) {
    const auto ids = plan.ids();
    const std::set<std::string> wanted(ids.begin(), ids.end());
    CommitSnapshot out;
    out.commit_id = snap.commit_id;
    out.captured_at = snap.captured_at;
    for (const auto& r : snap.records) {
        if (wanted.count(r.input_id)) out.records.push_back(r);
    }
    return out;
}

CommitSnapshot load_updated(const Workspace& ws, const std::string& commit, const std::string& file,
                            const std::string& input_format, const SamplePlan& plan) {
    check_name(commit);
    if (file.empty()) return ws.load_snapshot(commit);
    const auto fmt = input_format.empty() ? format_from_path(file) : parse_profile_format(input_format);
    auto snap = restrict_to(ingest(file, fmt, commit), plan);
    ws.save_snapshot(snap);
    return snap;
}

int decision_exit(const DecisionReport& r) {
    return r.verdict == Verdict::Run ? kExitRunTests : kExitOk;
}

double parse_limit(const std::string& text) {
    if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    std::istringstream ss(text);
    if (!(ss >> v) || !ss.eof() || !(v >= 0.0)) {
        throw UsageError("--acceptable-limit must be a number >= 0 or 'inf'");
    }
    return v;
}

void check_vote(double v) {
    if (!(v > 0.0) || v > 1.0) throw UsageError("--vote-threshold must be in (0, 1]");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"perfgate: cluster profiled test inputs and gate performance test runs"};
    app.name("perfgate");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--workspace,-w", g.workspace, "Workspace directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--features", g.features, "Comma-separated attribute subset")->capture_default_str();
    app.add_option("--format", g.format, "Report format")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();

    // ingest
    std::string ingest_file, ingest_commit, ingest_format;
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate a profile file and store it as a snapshot");
    ingest_cmd->add_option("file", ingest_file, "CSV or JSON profile file")->required();
    ingest_cmd->add_option("--commit", ingest_commit, "Commit id for the snapshot")->required();
    ingest_cmd->add_option("--input-format", ingest_format, "csv|json (default: from extension)")
        ->check(CLI::IsMember({"csv", "json"}));

    // synth
    std::string synth_commit, synth_spec, synth_preset = "two-clusters";
    std::size_t synth_count = 4000;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic snapshot");
    synth_cmd->add_option("--commit", synth_commit, "Commit id for the snapshot")->required();
    auto* spec_opt = synth_cmd->add_option("--spec", synth_spec, "Synthetic spec JSON file");
    synth_cmd->add_option("--preset", synth_preset, "two-clusters|five-blobs|single-blob")
        ->excludes(spec_opt)
        ->capture_default_str();
    synth_cmd->add_option("--count", synth_count, "Record count for presets")->capture_default_str();

    // stats
    std::string stats_commit;
    auto* stats_cmd = app.add_subcommand("stats", "Correlation statistics");
    stats_cmd->require_subcommand(1);
    auto* corr_cmd = stats_cmd->add_subcommand("corr", "Pearson correlation matrix");
    corr_cmd->add_option("--commit", stats_commit, "Snapshot commit id")->required();
    auto* pval_cmd = stats_cmd->add_subcommand("pvalues", "Two-tailed p-values of the correlations");
    pval_cmd->add_option("--commit", stats_commit, "Snapshot commit id")->required();

    // elbow
    std::string elbow_commit;
    int elbow_kmax = 8;
    auto* elbow_cmd = app.add_subcommand("elbow", "Distortion curve and knee for k-means");
    elbow_cmd->add_option("--commit", elbow_commit, "Snapshot commit id")->required();
    elbow_cmd->add_option("--kmax", elbow_kmax, "Largest k")->check(CLI::Range(2, 1000))->capture_default_str();

    // cluster
    std::string cluster_commit, cluster_algo = "kmeans", cluster_linkage = "average",
                                cluster_name = "current";
    ClusterRequest creq;
    double cluster_eps = 0.0;
    bool cluster_kdist = false;
    auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a snapshot's test inputs");
    cluster_cmd->add_option("--commit", cluster_commit, "Baseline snapshot commit id")->required();
    cluster_cmd->add_option("--algo", cluster_algo, "kmeans|gmm|agglomerative|dbscan")
        ->check(CLI::IsMember({"kmeans", "gmm", "agglomerative", "dbscan"}))
        ->capture_default_str();
    cluster_cmd->add_option("--k", creq.k, "Cluster count (kmeans, gmm, agglomerative)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* eps_opt = cluster_cmd->add_option("--eps", cluster_eps, "DBSCAN radius (standardized units)")
                        ->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--min-pts", creq.min_pts, "DBSCAN core threshold")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster_cmd->add_option("--linkage", cluster_linkage, "average|complete|single")
        ->check(CLI::IsMember({"average", "complete", "single"}))
        ->capture_default_str();
    cluster_cmd->add_option("--max-iter", creq.max_iter, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    cluster_cmd->add_option("--tol", creq.tol, "Convergence tolerance")->capture_default_str();
    cluster_cmd->add_option("--name", cluster_name, "Model name under models/")->capture_default_str();
    cluster_cmd->add_flag("--kdist", cluster_kdist, "Print the sorted k-distance curve (k = min-pts) and exit");

    // minimize
    std::string min_model;
    auto* min_cmd = app.add_subcommand("minimize", "Print the minimized suite (one medoid per cluster)");
    min_cmd->add_option("--model", min_model, "Model name (default: active model)");

    // sample
    std::string sample_model;
    int per_cluster = kDefaultPerCluster;
    int escalate = 0;
    bool include_noise = false;
    auto* sample_cmd = app.add_subcommand("sample", "Randomly sample inputs per cluster");
    sample_cmd->add_option("--model", sample_model, "Model name (default: active model)");
    sample_cmd->add_option("--per-cluster", per_cluster, "Samples per cluster")->check(CLI::PositiveNumber)->capture_default_str();
    sample_cmd->add_flag("--include-noise", include_noise, "Also sample DBSCAN noise points");
    sample_cmd->add_option("--escalate", escalate, "Extend the saved plan by this many per cluster")
        ->check(CLI::PositiveNumber);

    // decide / recommend share most options
    std::string dec_model, dec_updated_commit, dec_updated_file, dec_input_format;
    std::string limit_text = "38";
    double vote = kDefaultVoteThreshold;
    auto add_decision_options = [&](CLI::App* cmd) {
        cmd->add_option("--model", dec_model, "Model name (default: active model)");
        cmd->add_option("--updated-commit", dec_updated_commit, "Commit id of the updated measurements")->required();
        cmd->add_option("--updated", dec_updated_file, "Updated profile file (CSV/JSON) to ingest first");
        cmd->add_option("--input-format", dec_input_format, "csv|json (default: from extension)")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--acceptable-limit", limit_text, "Acceptable slowdown in percent, or 'inf'")->capture_default_str();
        cmd->add_option("--vote-threshold", vote, "Flagged fraction that triggers RUN")->capture_default_str();
    };
    auto* decide_cmd = app.add_subcommand("decide", "Evaluate sampled updated inputs against the baseline clusters");
    add_decision_options(decide_cmd);
    auto* rec_cmd = app.add_subcommand("recommend", "Sample, decide and aggregate into a RUN/SKIP recommendation");
    add_decision_options(rec_cmd);
    rec_cmd->add_option("--per-cluster", per_cluster, "Samples per cluster")->check(CLI::PositiveNumber)->capture_default_str();
    rec_cmd->add_flag("--include-noise", include_noise, "Also sample DBSCAN noise points");

    // serve
    std::string bind = "127.0.0.1";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP API for the inspection dashboard");
    serve_cmd->add_option("--bind", bind, "Bind address")->capture_default_str();
    serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535))->capture_default_str();

    std::vector<std::string> argv_store{"perfgate"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "perfgate: " << e.what() << '\n';
        return kExitUsage;
    }

    Outputs io{out, err, g.format == "json"};
    try {
        std::vector<Attribute> features;
        try {
            features = parse_feature_list(g.features);
        } catch (const Error& e) {
            throw UsageError(e.detail());
        }
        const auto ws = Workspace::open(g.workspace);

        if (ingest_cmd->parsed()) {
            check_name(ingest_commit);
            const auto fmt = ingest_format.empty() ? format_from_path(ingest_file)
                                                   : parse_profile_format(ingest_format);
            const auto snap = ingest(ingest_file, fmt, ingest_commit);
            ws.save_snapshot(snap);
            Json j{{"commit", snap.commit_id}, {"records", snap.records.size()},
                   {"path", std::filesystem::relative(ws.snapshot_path(snap.commit_id), ws.root()).generic_string()}};
            emit(io, j, "ingested " + std::to_string(snap.records.size()) + " records as " + snap.commit_id + "\n");
            return kExitOk;
        }

        if (synth_cmd->parsed()) {
            check_name(synth_commit);
            SyntheticSpec spec = synth_spec.empty()
                                     ? preset_spec(synth_preset, synth_count)
                                     : synthetic_spec_from_json(nlohmann::json::parse(read_text_file(synth_spec)));
            spec.commit_id = synth_commit;
            const auto snap = generate_synthetic(spec, g.seed);
            ws.save_snapshot(snap);
            Json j{{"commit", snap.commit_id}, {"records", snap.records.size()}, {"seed", g.seed},
                   {"path", std::filesystem::relative(ws.snapshot_path(snap.commit_id), ws.root()).generic_string()}};
            emit(io, j, "generated " + std::to_string(snap.records.size()) + " records as " + snap.commit_id + "\n");
            return kExitOk;
        }

        if (stats_cmd->parsed()) {
            const auto cm = pearson_matrix(ws.load_snapshot(stats_commit));
            const auto j = to_json(cm);
            ws.write_report("correlation_" + stats_commit + ".json", render_json(j));
            if (corr_cmd->parsed()) {
                emit(io, j, matrix_table(cm, false));
            } else {
                Json pj{{"attributes", j["attributes"]}, {"p", j["p"]}, {"n", cm.n},
                        {"significance_level", kSignificanceLevel}};
                emit(io, pj, matrix_table(cm, true));
            }
            return kExitOk;
        }

        if (elbow_cmd->parsed()) {
            const auto curve = elbow_curve(ws.load_snapshot(elbow_commit), features, elbow_kmax, g.seed);
            const auto j = to_json(curve);
            ws.write_report("elbow_" + elbow_commit + ".json", render_json(j));
            std::ostringstream ss;
            for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
                ss << "k=" << curve.k_values[i] << "  " << fixed(curve.distortion[i], 4) << '\n';
            }
            ss << "knee " << curve.knee << (curve.low_confidence ? " (low confidence)" : "") << '\n';
            emit(io, j, ss.str());
            return kExitOk;
        }

        if (cluster_cmd->parsed()) {
            check_name(cluster_name);
            creq.algorithm = parse_algorithm(cluster_algo);
            creq.linkage = parse_linkage(cluster_linkage);
            creq.features = features;
            creq.seed = g.seed;
            if (creq.algorithm == Algorithm::Dbscan && !cluster_kdist && eps_opt->count() == 0) {
                throw UsageError("dbscan requires --eps (use --kdist to inspect candidate values)");
            }
            const auto snap = ws.load_snapshot(cluster_commit);
            if (cluster_kdist) {
                const auto kd = k_distances(standardize(snap, features), creq.min_pts);
                Json j{{"k", creq.min_pts}, {"distances", kd}};
                std::ostringstream ss;
                for (double v : kd) ss << fixed(v, 6) << '\n';
                emit(io, j, ss.str());
                return kExitOk;
            }
            if (creq.algorithm == Algorithm::Dbscan) creq.eps = cluster_eps;
            const auto model = fit_model(snap, creq);
            ws.save_model(cluster_name, model);
            ws.set_active_model(cluster_name);
            emit(io, model_summary(model), summary_table(model));
            return kExitOk;
        }

        if (min_cmd->parsed()) {
            const auto name = resolve_model_name(ws, min_model);
            const auto model = ws.load_model(name);
            const auto m = standardize(ws.load_snapshot(model.commit), model.features);
            const auto suite = minimized_suite(model, m);
            Json j{{"model", name}, {"records", model.labels.size()}, {"suite", suite}};
            std::string text;
            for (const auto& id : suite) text += id + "\n";
            ws.write_report(name + ".minimized.txt", text);
            emit(io, j, text);
            return kExitOk;
        }

        if (sample_cmd->parsed()) {
            const auto name = resolve_model_name(ws, sample_model);
            const auto model = ws.load_model(name);
            SamplePlan plan;
            if (escalate > 0) {
                plan = escalate_sample(model, ws.load_plan(name), escalate, g.seed);
            } else {
                plan.per_cluster = per_cluster;
                plan.seed = g.seed;
                plan.include_noise = include_noise;
                plan = sample_per_cluster(model, plan);
            }
            ws.save_plan(name, plan);
            std::string ids;
            for (const auto& id : plan.ids()) ids += id + "\n";
            ws.write_report(name + ".sample_ids.txt", ids);
            emit(io, to_json(plan), plan_table(plan));
            return kExitOk;
        }

        if (decide_cmd->parsed() || rec_cmd->parsed()) {
            const double limit = parse_limit(limit_text);
            check_vote(vote);
            const auto name = resolve_model_name(ws, dec_model);
            const auto model = ws.load_model(name);
            SamplePlan plan;
            if (rec_cmd->parsed()) {
                plan.per_cluster = per_cluster;
                plan.seed = g.seed;
                plan.include_noise = include_noise;
                plan = sample_per_cluster(model, plan);
                ws.save_plan(name, plan);
            } else {
                plan = ws.load_plan(name);
            }
            const auto baseline = ws.load_snapshot(model.commit);
            const auto updated = load_updated(ws, dec_updated_commit, dec_updated_file, dec_input_format, plan);
            const auto report = decide(model, plan, baseline, updated, limit, vote);
            const auto j = to_json(report);
            ws.write_report("decision_" + dec_updated_commit + ".json", render_json(j));
            emit(io, j, render_table(report));
            return decision_exit(report);
        }

        if (serve_cmd->parsed()) {
            ApiServer server(ws);
            err << "perfgate: serving " << ws.root().string() << " on " << bind << ':' << port << '\n';
            if (!server.listen(bind, port)) {
                err << "perfgate: cannot listen on " << bind << ':' << port << '\n';
                return kExitDataError;
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "perfgate: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "perfgate: " << e.what() << '\n';
        return kExitDataError;
    } catch (const nlohmann::json::exception& e) {
        err << "perfgate: invalid JSON: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "perfgate: " << e.what() << '\n';
        return kExitDataError;
    }
    err << "perfgate: no subcommand\n";
    return kExitUsage;
}

}  // namespace perfgate
