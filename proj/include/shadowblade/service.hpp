#pragma once

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "shadowblade/exec.hpp"
#include "shadowblade/graph.hpp"

namespace shadowblade {

enum class ToolMode { Live, Replay };

/// Service configuration, normally read from SHADOWBLADE_* environment
/// variables.
struct ServiceConfig {
    std::filesystem::path data_dir = "./data";
    std::string bind_host = "127.0.0.1";
    int bind_port = 8750;
    ToolMode tool_mode = ToolMode::Replay;
    std::filesystem::path fixtures_dir = "./fixtures/replay";
    std::string wordlist = "/usr/share/wordlists/dirb/common.txt";
    int max_concurrent_scans = 2;
    std::filesystem::path ui_dir = "./web-ui/dist";

    /// Throws std::invalid_argument naming the offending variable.
    static ServiceConfig from_environment();
};

/// Backend selected by `config.tool_mode`, wrapped in the concurrency limit.
std::shared_ptr<ExecutionBackend> make_backend(const ServiceConfig& config);

/// Failure surfaced through the HTTP API: status code, stable error code
/// string and a human message.
class ApiError : public std::runtime_error {
public:
    ApiError(int status, std::string code, const std::string& message)
        : std::runtime_error(message), status_(status), code_(std::move(code)) {}

    int status() const noexcept { return status_; }
    const std::string& code() const noexcept { return code_; }

    nlohmann::json body() const { return {{"error", code_}, {"message", what()}}; }

private:
    int status_;
    std::string code_;
};

enum class JobState { Queued, Running, Done, Failed };
std::string_view to_string(JobState state) noexcept;

class Store;

/// Coordinates targets, scan jobs and their graphs.
///
/// Every method returns the JSON document the HTTP API sends back and throws
/// ApiError on failure. Graph mutations for a target happen one at a time:
/// a target admits a single queued or running job, and a finished job's merge
/// is applied to a copy of the graph that replaces the original only once
/// parsing, merging and weighting all succeeded. Jobs run on worker threads.
class Service {
public:
    Service(ServiceConfig config, std::shared_ptr<ExecutionBackend> backend);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    nlohmann::json create_target(const std::string& name, const std::string& host);
    nlohmann::json list_targets() const;
    nlohmann::json get_target(const std::string& target_id) const;
    void delete_target(const std::string& target_id);

    /// Body: {"tool": "nmap"|"ffuf", "options": {...}, "anchor_node": str?}.
    nlohmann::json start_scan(const std::string& target_id, const nlohmann::json& request);
    nlohmann::json get_job(const std::string& job_id) const;

    /// Schema-1 snapshot with freshly computed weights.
    nlohmann::json get_graph(const std::string& target_id) const;
    /// [{"node_ids", "edge_ids", "labels", "score"}], best first.
    nlohmann::json get_vectors(const std::string& target_id) const;

    /// Blocks until no job is queued or running.
    void wait_idle();

    const ServiceConfig& config() const noexcept { return config_; }

private:
    struct Job;
    struct TargetEntry;

    void load();
    void launch(const std::shared_ptr<Job>& job);
    void run_job(std::shared_ptr<Job> job);
    void finish(Job& job, TargetEntry* target, JobState state, std::optional<std::string> error);
    Invocation build_invocation(const TargetEntry& target, const Job& job) const;
    TargetEntry& target_or_throw(const std::string& target_id) const;
    nlohmann::json job_document(const Job& job) const;
    nlohmann::json target_document(const TargetEntry& target) const;

    ServiceConfig config_;
    std::shared_ptr<ExecutionBackend> backend_;
    std::unique_ptr<Store> store_;

    mutable std::mutex mutex_;
    std::condition_variable idle_;
    std::map<std::string, std::shared_ptr<TargetEntry>> targets_;
    std::map<std::string, std::shared_ptr<Job>> jobs_;
    std::size_t active_jobs_ = 0;
    std::vector<std::jthread> workers_;
};

} // namespace shadowblade
