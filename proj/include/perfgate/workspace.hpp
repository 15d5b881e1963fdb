#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "perfgate/profile.hpp"

namespace perfgate {

struct ClusterModel;
struct SamplePlan;

/// On-disk project state:
///   <root>/snapshots/<commit_id>.json
///   <root>/models/<name>.json
///   <root>/reports/<name>
/// Names are restricted to [A-Za-z0-9._-] so nothing resolves outside root.
class Workspace {
public:
    /// Opens (and if needed creates) the directory layout under `root`.
    static Workspace open(const std::filesystem::path& root);

    const std::filesystem::path& root() const { return root_; }

    std::vector<std::string> commits() const;
    bool has_snapshot(const std::string& commit_id) const;
    CommitSnapshot load_snapshot(const std::string& commit_id) const;
    void save_snapshot(const CommitSnapshot& snapshot) const;

    bool has_model(const std::string& name) const;
    ClusterModel load_model(const std::string& name) const;
    void save_model(const std::string& name, const ClusterModel& model) const;

    SamplePlan load_plan(const std::string& model_name) const;
    void save_plan(const std::string& model_name, const SamplePlan& plan) const;

    std::optional<std::string> active_model() const;
    void set_active_model(const std::string& name) const;

    /// Writes `text` to <root>/reports/<file_name>; returns the path.
    std::filesystem::path write_report(const std::string& file_name, const std::string& text) const;

    std::filesystem::path snapshot_path(const std::string& commit_id) const;
    std::filesystem::path model_path(const std::string& name) const;
    std::filesystem::path plan_path(const std::string& model_name) const;
    std::filesystem::path report_path(const std::string& file_name) const;

private:
    explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}
    std::filesystem::path root_;
};

/// Throws InvalidArgument unless `name` is a safe single path component.
void check_name(const std::string& name);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace perfgate
