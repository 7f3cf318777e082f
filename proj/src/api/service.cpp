#include "shadowblade/service.hpp"

#include <algorithm>

#include "../common/ids.hpp"
#include "shadowblade/error.hpp"
#include "shadowblade/grammar.hpp"
#include "shadowblade/snapshot.hpp"
#include "shadowblade/weights.hpp"
#include "store.hpp"

namespace shadowblade {

using nlohmann::json;

std::string_view to_string(JobState state) noexcept {
    switch (state) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
    }
    return "failed";
}

namespace {

std::optional<JobState> parse_job_state(std::string_view text) {
    for (JobState s : {JobState::Queued, JobState::Running, JobState::Done, JobState::Failed}) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

json optional_json(const std::optional<std::string>& value) {
    return value ? json(*value) : json(nullptr);
}

std::optional<std::string> optional_string(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_string()) return std::nullopt;
    return doc[key].get<std::string>();
}

ApiError unprocessable(const Error& e) { return ApiError(422, std::string(e.code_string()), e.what()); }

} // namespace

struct Service::Job {
    std::string id;
    std::string target_id;
    std::string tool;
    json options;
    std::optional<std::string> anchor_node;
    std::optional<std::string> wordlist;
    JobState state = JobState::Queued;
    std::optional<std::string> error;
    std::string created_at;
    std::optional<std::string> started_at;
    std::optional<std::string> finished_at;
    std::optional<MergeReport> report;
    json invocation = nullptr;
};

struct Service::TargetEntry {
    std::string id;
    std::string name;
    std::string host;
    std::string created_at;
    AttackGraph graph;
    std::optional<std::string> active_job;
};

Service::Service(ServiceConfig config, std::shared_ptr<ExecutionBackend> backend)
    : config_(std::move(config)),
      backend_(std::move(backend)),
      store_(std::make_unique<Store>(config_.data_dir)) {
    load();
}

Service::~Service() {
    std::vector<std::jthread> workers;
    {
        std::lock_guard lock(mutex_);
        workers.swap(workers_);
    }
    workers.clear();  // joins
}

json Service::target_document(const TargetEntry& t) const {
    return json{{"id", t.id},
                {"name", t.name},
                {"host", t.host},
                {"created_at", t.created_at},
                {"graph_id", t.graph.graph_id()}};
}

json Service::job_document(const Job& job) const {
    json report = nullptr;
    if (job.report) {
        report = json{{"nodes_added", job.report->nodes_added},
                      {"nodes_updated", job.report->nodes_updated},
                      {"edges_added", job.report->edges_added}};
    }
    json metadata = json::object();
    if (job.tool == "nmap") metadata["port_range"] = "tool-default";
    return json{{"id", job.id},
                {"target_id", job.target_id},
                {"tool", job.tool},
                {"options", job.options},
                {"anchor_node", optional_json(job.anchor_node)},
                {"wordlist", optional_json(job.wordlist)},
                {"state", std::string(to_string(job.state))},
                {"error", optional_json(job.error)},
                {"created_at", job.created_at},
                {"started_at", optional_json(job.started_at)},
                {"finished_at", optional_json(job.finished_at)},
                {"result", report},
                {"invocation", job.invocation},
                {"metadata", metadata}};
}

void Service::load() {
    std::vector<std::shared_ptr<Job>> resume;
    for (auto& loaded : store_->load_all()) {
        const json& t = loaded.target;
        auto entry = std::make_shared<TargetEntry>(TargetEntry{
            t.at("id").get<std::string>(), t.at("name").get<std::string>(), t.at("host").get<std::string>(),
            t.at("created_at").get<std::string>(), std::move(loaded.graph), std::nullopt});

        for (const json& doc : loaded.jobs) {
            auto job = std::make_shared<Job>();
            job->id = doc.at("id").get<std::string>();
            job->target_id = entry->id;
            job->tool = doc.at("tool").get<std::string>();
            job->options = doc.value("options", json::object());
            job->anchor_node = optional_string(doc, "anchor_node");
            job->wordlist = optional_string(doc, "wordlist");
            job->state = parse_job_state(doc.at("state").get<std::string>()).value_or(JobState::Failed);
            job->error = optional_string(doc, "error");
            job->created_at = doc.value("created_at", "");
            job->started_at = optional_string(doc, "started_at");
            job->finished_at = optional_string(doc, "finished_at");
            job->invocation = doc.value("invocation", json(nullptr));
            if (doc.contains("result") && doc["result"].is_object()) {
                const auto& r = doc["result"];
                job->report = MergeReport{r.value("nodes_added", std::size_t{0}),
                                          r.value("nodes_updated", std::size_t{0}),
                                          r.value("edges_added", std::size_t{0})};
            }

            if (job->state == JobState::Running) {
                // The process that ran it is gone; the graph was never touched.
                job->state = JobState::Failed;
                job->error = "interrupted: service restarted while the job was running";
                job->finished_at = detail::utc_timestamp();
                store_->save_job(entry->id, job->id, job_document(*job));
            } else if (job->state == JobState::Queued && !entry->active_job) {
                entry->active_job = job->id;
                resume.push_back(job);
            } else if (job->state == JobState::Queued) {
                job->state = JobState::Failed;
                job->error = "superseded: another job for this target was resumed";
                job->finished_at = detail::utc_timestamp();
                store_->save_job(entry->id, job->id, job_document(*job));
            }
            jobs_.emplace(job->id, std::move(job));
        }
        targets_.emplace(entry->id, std::move(entry));
    }

    std::lock_guard lock(mutex_);
    for (auto& job : resume) {
        ++active_jobs_;
        launch(job);
    }
}

Service::TargetEntry& Service::target_or_throw(const std::string& target_id) const {
    auto it = targets_.find(target_id);
    if (it == targets_.end()) throw ApiError(404, "UnknownTarget", "no target with id '" + target_id + "'");
    return *it->second;
}

json Service::create_target(const std::string& name, const std::string& host) {
    if (name.empty()) throw ApiError(422, "InvalidTargetName", "target name must not be empty");
    if (!is_valid_host(host)) throw ApiError(422, "InvalidHost", "invalid host: '" + host + "'");

    std::lock_guard lock(mutex_);
    for (const auto& [id, t] : targets_) {
        if (t->name == name) throw ApiError(409, "DuplicateName", "duplicate target name '" + name + "'");
    }
    auto entry = std::make_shared<TargetEntry>(TargetEntry{detail::random_id("t-"), name, host,
                                                           detail::utc_timestamp(), new_graph(name, host),
                                                           std::nullopt});
    store_->save_graph(entry->id, entry->graph);
    store_->save_target(entry->id, target_document(*entry));
    json doc = target_document(*entry);
    targets_.emplace(entry->id, std::move(entry));
    return doc;
}

json Service::list_targets() const {
    std::lock_guard lock(mutex_);
    std::vector<const TargetEntry*> sorted;
    for (const auto& [id, t] : targets_) sorted.push_back(t.get());
    std::sort(sorted.begin(), sorted.end(), [](const TargetEntry* a, const TargetEntry* b) {
        return std::tie(a->created_at, a->name) < std::tie(b->created_at, b->name);
    });
    json out = json::array();
    for (const auto* t : sorted) out.push_back(target_document(*t));
    return out;
}

json Service::get_target(const std::string& target_id) const {
    std::lock_guard lock(mutex_);
    return target_document(target_or_throw(target_id));
}

void Service::delete_target(const std::string& target_id) {
    std::lock_guard lock(mutex_);
    target_or_throw(target_id);
    targets_.erase(target_id);
    for (auto it = jobs_.begin(); it != jobs_.end();) {
        it = it->second->target_id == target_id ? jobs_.erase(it) : std::next(it);
    }
    store_->remove_target(target_id);
}

json Service::start_scan(const std::string& target_id, const json& request) {
    if (!request.is_object()) throw ApiError(400, "BadRequest", "request body must be a JSON object");
    const std::string tool = request.value("tool", "");
    if (tool != "nmap" && tool != "ffuf") {
        throw ApiError(422, "InvalidTool", "tool must be \"nmap\" or \"ffuf\"");
    }
    const json raw_options = request.contains("options") ? request["options"] : json::object();
    json options;
    try {
        options = tool == "nmap" ? to_json(nmap_options_from_json(raw_options))
                                 : to_json(ffuf_options_from_json(raw_options));
    } catch (const Error& e) {
        throw unprocessable(e);
    }
    std::optional<std::string> anchor;
    if (request.contains("anchor_node") && !request["anchor_node"].is_null()) {
        if (!request["anchor_node"].is_string()) {
            throw ApiError(422, "InvalidRequest", "anchor_node must be a string");
        }
        anchor = request["anchor_node"].get<std::string>();
    }
    std::optional<std::string> wordlist;
    if (request.contains("wordlist") && !request["wordlist"].is_null()) {
        if (!request["wordlist"].is_string() || tool != "ffuf") {
            throw ApiError(422, "InvalidRequest", "wordlist must be a string and only applies to ffuf scans");
        }
        wordlist = request["wordlist"].get<std::string>();
        try {
            build_ffuf_invocation("http://localhost", "/", {}, *wordlist, "unused.json");
        } catch (const Error& e) {
            throw unprocessable(e);
        }
    }
    if (tool == "nmap" && anchor) throw ApiError(422, "InvalidRequest", "anchor_node only applies to ffuf scans");
    if (tool == "ffuf" && !anchor) throw ApiError(422, "InvalidRequest", "ffuf scans need an anchor_node");

    std::lock_guard lock(mutex_);
    TargetEntry& target = target_or_throw(target_id);
    if (anchor) {
        const AttackNode* node = target.graph.find_node(*anchor);
        if (!node) throw ApiError(422, "UnknownNode", "unknown node '" + *anchor + "'");
        if (node->kind != NodeKind::Service && node->kind != NodeKind::HttpPath) {
            throw ApiError(422, "WrongNodeKind", "ffuf scans anchor at a Service or HttpPath node, not " +
                                                     std::string(to_string(node->kind)));
        }
    }
    if (target.active_job) {
        throw ApiError(409, "TargetBusy", "target already has job '" + *target.active_job + "' in flight");
    }

    auto job = std::make_shared<Job>();
    job->id = detail::random_id("j-");
    job->target_id = target.id;
    job->tool = tool;
    job->options = std::move(options);
    job->anchor_node = anchor;
    job->wordlist = wordlist;
    job->created_at = detail::utc_timestamp();
    store_->save_job(target.id, job->id, job_document(*job));
    jobs_.emplace(job->id, job);
    target.active_job = job->id;
    ++active_jobs_;

    json doc = job_document(*job);
    doc["job_id"] = job->id;
    launch(job);
    return doc;
}

void Service::launch(const std::shared_ptr<Job>& job) {
    workers_.emplace_back([this, job] { run_job(job); });
}

json Service::get_job(const std::string& job_id) const {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw ApiError(404, "UnknownJob", "no job with id '" + job_id + "'");
    return job_document(*it->second);
}

json Service::get_graph(const std::string& target_id) const {
    std::lock_guard lock(mutex_);
    AttackGraph graph = target_or_throw(target_id).graph;
    apply_weights(graph, compute_weights(graph));
    return snapshot(graph);
}

json Service::get_vectors(const std::string& target_id) const {
    std::lock_guard lock(mutex_);
    const AttackGraph& graph = target_or_throw(target_id).graph;
    json out = json::array();
    for (const auto& ranked : rank_vectors(graph)) {
        json labels = json::array();
        for (const auto& id : ranked.vector.node_ids) labels.push_back(graph.node(id).label);
        out.push_back(json{{"node_ids", ranked.vector.node_ids},
                           {"edge_ids", ranked.vector.edge_ids},
                           {"labels", std::move(labels)},
                           {"score", ranked.score}});
    }
    return out;
}

void Service::wait_idle() {
    std::unique_lock lock(mutex_);
    idle_.wait(lock, [this] { return active_jobs_ == 0; });
}

Invocation Service::build_invocation(const TargetEntry& target, const Job& job) const {
    if (job.tool == "nmap") {
        return build_nmap_invocation(target.host, nmap_options_from_json(job.options));
    }

    // Base URL from the nearest Port above the anchor; path from the anchor itself.
    const AttackGraph& g = target.graph;
    const AttackNode& anchor = g.node(*job.anchor_node);
    std::string anchor_path = "/";
    if (anchor.kind == NodeKind::HttpPath) anchor_path = anchor.attrs.at("url_path");

    int port = 80;
    std::string service_name;
    std::string current = anchor.id;
    for (int guard = 0; guard < 64; ++guard) {
        const AttackNode& node = g.node(current);
        if (node.kind == NodeKind::Service && service_name.empty()) {
            auto it = node.attrs.find("service_name");
            if (it != node.attrs.end()) service_name = it->second;
        }
        if (node.kind == NodeKind::Port) {
            port = std::stoi(node.attrs.at("port_number"));
            break;
        }
        const auto parents = g.in_edges(current);
        if (parents.empty()) break;
        current = parents.front()->from;
    }
    const bool tls = port == 443 || port == 8443 || service_name.find("https") != std::string::npos ||
                     service_name.find("ssl") != std::string::npos;
    std::string base = (tls ? "https://" : "http://") + target.host;
    if (port != (tls ? 443 : 80)) base += ":" + std::to_string(port);

    return build_ffuf_invocation(base, anchor_path, ffuf_options_from_json(job.options),
                                 job.wordlist.value_or(config_.wordlist),
                                 store_->job_scratch_path(target.id, job.id).string());
}

void Service::finish(Job& job, TargetEntry* target, JobState state, std::optional<std::string> error) {
    job.state = state;
    job.error = std::move(error);
    job.finished_at = detail::utc_timestamp();
    if (target) {
        store_->save_job(target->id, job.id, job_document(job));
        if (target->active_job == job.id) target->active_job.reset();
    }
    --active_jobs_;
    idle_.notify_all();
}

void Service::run_job(std::shared_ptr<Job> job) {
    Invocation invocation;
    {
        std::lock_guard lock(mutex_);
        auto it = targets_.find(job->target_id);
        if (it == targets_.end()) {
            --active_jobs_;
            idle_.notify_all();
            return;
        }
        job->state = JobState::Running;
        job->started_at = detail::utc_timestamp();
        try {
            invocation = build_invocation(*it->second, *job);
        } catch (const Error& e) {
            finish(*job, it->second.get(), JobState::Failed, std::string(e.code_string()) + ": " + e.what());
            return;
        }
        job->invocation = json{{"program", invocation.program}, {"argv", invocation.argv}};
        store_->save_job(job->target_id, job->id, job_document(*job));
    }

    std::string failure;
    try {
        const RawOutput raw = backend_->run(invocation);
        if (raw.exit_code != 0) {
            std::string tail = raw.standard_error.substr(raw.standard_error.size() > 400 ? raw.standard_error.size() - 400 : 0);
            throw Error(ErrorCode::ExecutionFailed,
                        invocation.program + " exited with code " + std::to_string(raw.exit_code) +
                            (tail.empty() ? "" : ": " + tail));
        }
        std::optional<PortScanResult> ports;
        std::optional<PathScanResult> paths;
        if (job->tool == "nmap") {
            ports = parse_nmap_xml(raw.document());
        } else {
            paths = parse_ffuf_json(raw.document());
            const auto ignored = ffuf_options_from_json(job->options).ignore_status_codes;
            std::erase_if(paths->entries, [&](const PathEntry& e) {
                return std::find(ignored.begin(), ignored.end(), e.http_status) != ignored.end();
            });
        }

        std::lock_guard lock(mutex_);
        auto it = targets_.find(job->target_id);
        if (it == targets_.end()) {
            --active_jobs_;
            idle_.notify_all();
            return;
        }
        TargetEntry& target = *it->second;
        AttackGraph next = target.graph;
        const MergeReport report =
            ports ? merge_port_scan(next, *ports) : merge_path_scan(next, *job->anchor_node, *paths);
        apply_weights(next, compute_weights(next));
        store_->save_graph(target.id, next);
        target.graph = std::move(next);
        job->report = report;
        finish(*job, &target, JobState::Done, std::nullopt);
        return;
    } catch (const Error& e) {
        failure = std::string(e.code_string()) + ": " + e.what();
    } catch (const std::exception& e) {
        failure = std::string("InternalError: ") + e.what();
    }

    std::lock_guard lock(mutex_);
    auto it = targets_.find(job->target_id);
    finish(*job, it == targets_.end() ? nullptr : it->second.get(), JobState::Failed, failure);
}

} // namespace shadowblade
