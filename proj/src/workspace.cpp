#include "perfgate/workspace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "perfgate/clustering.hpp"
#include "perfgate/error.hpp"
#include "perfgate/profile_io.hpp"
#include "perfgate/sampling.hpp"
#include "perfgate/serialize.hpp"

namespace fs = std::filesystem;

namespace perfgate {

void check_name(const std::string& name) {
    bool ok = !name.empty() && name != "." && name != ".." && name.size() <= 200;
    for (char c : name) {
        bool allowed = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        ok = ok && allowed;
    }
    if (!ok) throw Error(ErrorCode::InvalidArgument, "invalid name '" + name + "'");
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Workspace Workspace::open(const fs::path& root) {
    std::error_code ec;
    for (auto sub : {"snapshots", "models", "reports"}) {
        fs::create_directories(root / sub, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + (root / sub).string());
    }
    return Workspace(root);
}

fs::path Workspace::snapshot_path(const std::string& commit_id) const {
    check_name(commit_id);
    return root_ / "snapshots" / (commit_id + ".json");
}

fs::path Workspace::model_path(const std::string& name) const {
    check_name(name);
    return root_ / "models" / (name + ".json");
}

fs::path Workspace::plan_path(const std::string& model_name) const {
    check_name(model_name);
    return root_ / "models" / (model_name + ".plan.json");
}

fs::path Workspace::report_path(const std::string& file_name) const {
    check_name(file_name);
    return root_ / "reports" / file_name;
}

std::vector<std::string> Workspace::commits() const {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(root_ / "snapshots")) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            out.push_back(entry.path().stem().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Workspace::has_snapshot(const std::string& commit_id) const {
    return fs::is_regular_file(snapshot_path(commit_id));
}

CommitSnapshot Workspace::load_snapshot(const std::string& commit_id) const {
    auto path = snapshot_path(commit_id);
    if (!fs::is_regular_file(path)) {
        throw Error(ErrorCode::NotFound, "no snapshot for commit '" + commit_id + "'");
    }
    return ingest(path, ProfileFormat::Json, commit_id);
}

void Workspace::save_snapshot(const CommitSnapshot& snapshot) const {
    validate(snapshot);
    save(snapshot, snapshot_path(snapshot.commit_id), ProfileFormat::Json);
}

bool Workspace::has_model(const std::string& name) const {
    return fs::is_regular_file(model_path(name));
}

ClusterModel Workspace::load_model(const std::string& name) const {
    auto path = model_path(name);
    if (!fs::is_regular_file(path)) throw Error(ErrorCode::NotFound, "no model '" + name + "'");
    return model_from_json(nlohmann::json::parse(read_text_file(path)));
}

void Workspace::save_model(const std::string& name, const ClusterModel& model) const {
    write_text_file(model_path(name), to_json(model).dump(1) + "\n");
}

SamplePlan Workspace::load_plan(const std::string& model_name) const {
    auto path = plan_path(model_name);
    if (!fs::is_regular_file(path)) {
        throw Error(ErrorCode::NotFound, "no sample plan for model '" + model_name + "'");
    }
    return plan_from_json(nlohmann::json::parse(read_text_file(path)));
}

void Workspace::save_plan(const std::string& model_name, const SamplePlan& plan) const {
    write_text_file(plan_path(model_name), to_json(plan).dump(1) + "\n");
}

std::optional<std::string> Workspace::active_model() const {
    auto path = root_ / "models" / "ACTIVE";
    if (!fs::is_regular_file(path)) return std::nullopt;
    auto name = read_text_file(path);
    while (!name.empty() && (name.back() == '\n' || name.back() == '\r')) name.pop_back();
    if (name.empty()) return std::nullopt;
    return name;
}

void Workspace::set_active_model(const std::string& name) const {
    check_name(name);
    write_text_file(root_ / "models" / "ACTIVE", name + "\n");
}

fs::path Workspace::write_report(const std::string& file_name, const std::string& text) const {
    auto path = report_path(file_name);
    write_text_file(path, text);
    return path;
}

}  // namespace perfgate
