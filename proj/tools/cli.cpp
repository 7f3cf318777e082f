#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "shadowblade/http_api.hpp"
#include "shadowblade/snapshot.hpp"

namespace shadowblade::cli {

using nlohmann::json;

namespace {

struct CliFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApiResponse {
    int status = 0;
    std::string body;
    json doc;
};

class ApiClient {
public:
    explicit ApiClient(const std::string& base_url) : base_(base_url), client_(base_url) {
        if (!client_.is_valid()) throw CliFailure("invalid API base URL '" + base_url + "'");
        client_.set_connection_timeout(5);
        client_.set_read_timeout(30);
    }

    ApiResponse get(const std::string& path) { return check(client_.Get(path)); }
    ApiResponse post(const std::string& path, const json& body) {
        return check(client_.Post(path, body.dump(), "application/json"));
    }
    ApiResponse del(const std::string& path) { return check(client_.Delete(path)); }

private:
    ApiResponse check(const httplib::Result& result) {
        if (!result) {
            throw CliFailure("cannot reach API at " + base_ + ": " + httplib::to_string(result.error()));
        }
        ApiResponse response{result->status, result->body, nullptr};
        if (!result->body.empty()) response.doc = json::parse(result->body, nullptr, false);
        if (result->status >= 400) {
            if (response.doc.is_object() && response.doc.contains("error")) {
                throw CliFailure(response.doc["error"].get<std::string>() + ": " +
                                 response.doc.value("message", std::string{}));
            }
            throw CliFailure("API answered HTTP " + std::to_string(result->status));
        }
        return response;
    }

    std::string base_;
    httplib::Client client_;
};

json resolve_target(ApiClient& api, const std::string& ref) {
    const ApiResponse list = api.get("/api/targets");
    for (const auto& t : list.doc) {
        if (t.value("id", "") == ref) return t;
    }
    for (const auto& t : list.doc) {
        if (t.value("name", "") == ref) return t;
    }
    throw CliFailure("UnknownTarget: no target named or identified by '" + ref + "'");
}

std::string format_score(double score) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << score;
    return s.str();
}

void print_report(std::ostream& out, const json& job) {
    const json& r = job["result"];
    const auto added = r.value("nodes_added", 0);
    const auto updated = r.value("nodes_updated", 0);
    const auto edges = r.value("edges_added", 0);
    if (job.value("tool", "") == "ffuf") out << "ffuf: " << added + updated << " paths, ";
    out << added << " nodes added, " << updated << " nodes updated, " << edges << " edges added\n";
}

// Service hosted in-process on an ephemeral loopback port, for --data-dir.
class LocalService {
public:
    explicit LocalService(const std::string& data_dir) {
        ServiceConfig config = ServiceConfig::from_environment();
        config.data_dir = data_dir;
        service_ = std::make_unique<Service>(config, make_backend(config));
        register_routes(server_, *service_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw CliFailure("cannot bind a loopback port for the local service");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~LocalService() {
        service_->wait_idle();
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    std::unique_ptr<Service> service_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, CliConfig defaults) {
    CliConfig config = defaults;
    if (const char* env = std::getenv("SHADOWBLADE_API"); env && *env) config.api_base_url = env;

    CLI::App app{"Reconnaissance orchestrator: targets, scans, attack graphs and ranked attack vectors"};
    app.name("shadowblade");
    app.require_subcommand(1);
    auto* api_opt = app.add_option("--api", config.api_base_url, "API base URL (env SHADOWBLADE_API)");
    std::string local_dir;
    app.add_option("--data-dir", local_dir,
                   "Operate on this data directory through an in-process service instead of --api")
        ->excludes(api_opt);

    std::function<int()> action;
    auto table_or_json = CLI::IsMember({"table", "json"});

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service (configured by SHADOWBLADE_* variables)");
    serve_cmd->callback([&] {
        action = [&] { return serve(ServiceConfig::from_environment()); };
    });

    // target add | list | rm
    auto* target_cmd = app.add_subcommand("target", "Manage targets");
    target_cmd->require_subcommand(1);
    std::string name, host, target_ref;
    auto* add_cmd = target_cmd->add_subcommand("add", "Register a target");
    add_cmd->add_option("name", name, "Unique target name")->required();
    add_cmd->add_option("host", host, "Hostname or IPv4 address")->required();
    add_cmd->add_option("-f,--format", config.output_format)->check(table_or_json);
    add_cmd->callback([&] {
        action = [&] {
            ApiClient api(config.api_base_url);
            const ApiResponse r = api.post("/api/targets", json{{"name", name}, {"host", host}});
            if (config.output_format == "json") out << r.body;
            else out << r.doc["id"].get<std::string>() << "\n";
            return int{kOk};
        };
    });
    auto* list_cmd = target_cmd->add_subcommand("list", "List targets");
    list_cmd->add_option("-f,--format", config.output_format)->check(table_or_json);
    list_cmd->callback([&] {
        action = [&] {
            ApiClient api(config.api_base_url);
            const ApiResponse r = api.get("/api/targets");
            if (config.output_format == "json") {
                out << r.body;
                return int{kOk};
            }
            out << std::left << std::setw(20) << "ID" << std::setw(20) << "NAME" << std::setw(28) << "HOST"
                << "CREATED\n";
            for (const auto& t : r.doc) {
                out << std::setw(20) << t["id"].get<std::string>() << std::setw(20) << t["name"].get<std::string>()
                    << std::setw(28) << t["host"].get<std::string>() << t["created_at"].get<std::string>() << "\n";
            }
            return int{kOk};
        };
    });
    auto* rm_cmd = target_cmd->add_subcommand("rm", "Delete a target with its graph and jobs");
    rm_cmd->add_option("target", target_ref, "Target name or id")->required();
    rm_cmd->callback([&] {
        action = [&] {
            ApiClient api(config.api_base_url);
            const json target = resolve_target(api, target_ref);
            api.del("/api/targets/" + target["id"].get<std::string>());
            out << "deleted " << target["id"].get<std::string>() << "\n";
            return int{kOk};
        };
    });

    // scan nmap | ffuf
    auto* scan_cmd = app.add_subcommand("scan", "Run a scan and wait for it to finish");
    scan_cmd->require_subcommand(1);
    bool banner = false, scripts = false, skip_discovery = false;
    auto* nmap_cmd = scan_cmd->add_subcommand("nmap", "Port scan the target");
    nmap_cmd->add_option("target", target_ref, "Target name or id")->required();
    nmap_cmd->add_flag("--banner", banner, "Banner grabbing / version detection");
    nmap_cmd->add_flag("--scripts", scripts, "Run default scripts");
    nmap_cmd->add_flag("--skip-host-discovery", skip_discovery, "Treat the host as online (no ping)");
    nmap_cmd->add_option("-f,--format", config.output_format)->check(table_or_json);

    std::string node, ignore_status, wordlist;
    bool recursion = false, follow_redirect = false;
    auto* ffuf_cmd = scan_cmd->add_subcommand("ffuf", "Discover web paths under a Service or HttpPath node");
    ffuf_cmd->add_option("target", target_ref, "Target name or id")->required();
    ffuf_cmd->add_option("--node", node, "Anchor node id")->required();
    ffuf_cmd->add_flag("--recursion", recursion, "Recurse into discovered folders");
    ffuf_cmd->add_flag("--follow-redirect", follow_redirect, "Follow redirects");
    ffuf_cmd->add_option("--ignore-status", ignore_status, "Comma-separated status codes to drop");
    ffuf_cmd->add_option("--wordlist", wordlist, "Wordlist path (defaults to the service's)");
    ffuf_cmd->add_option("-f,--format", config.output_format)->check(table_or_json);

    auto run_scan = [&](json request) {
        ApiClient api(config.api_base_url);
        const json target = resolve_target(api, target_ref);
        const ApiResponse started = api.post("/api/targets/" + target["id"].get<std::string>() + "/scans", request);
        const std::string job_id = started.doc["job_id"].get<std::string>();

        const auto deadline = std::chrono::steady_clock::now() + config.poll_cap;
        while (true) {
            const ApiResponse polled = api.get("/api/jobs/" + job_id);
            const std::string state = polled.doc.value("state", "");
            if (state == "done" || state == "failed") {
                if (config.output_format == "json") out << polled.body;
                if (state == "failed") {
                    err << "error: scan failed: " << polled.doc.value("error", std::string{"unknown error"}) << "\n";
                    return int{kRuntimeError};
                }
                if (config.output_format != "json") print_report(out, polled.doc);
                return int{kOk};
            }
            if (std::chrono::steady_clock::now() >= deadline) {
                err << "error: job " << job_id << " still " << state << " after polling cap\n";
                return int{kRuntimeError};
            }
            std::this_thread::sleep_for(config.poll_interval);
        }
    };
    nmap_cmd->callback([&] {
        action = [&] {
            json request{{"tool", "nmap"},
                         {"options", {{"banner_grabbing", banner},
                                      {"hosts_online", !skip_discovery},
                                      {"default_scripts", scripts}}}};
            return run_scan(std::move(request));
        };
    });
    ffuf_cmd->callback([&] {
        json codes = json::array();
        std::stringstream csv(ignore_status);
        for (std::string item; std::getline(csv, item, ',');) {
            if (item.empty()) continue;
            try {
                std::size_t used = 0;
                const int code = std::stoi(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                codes.push_back(code);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--ignore-status", "'" + item + "' is not a status code");
            }
        }
        action = [&, codes] {
            json request{{"tool", "ffuf"},
                         {"anchor_node", node},
                         {"options", {{"path_recursion", recursion},
                                      {"follow_redirect", follow_redirect},
                                      {"ignore_status_codes", codes}}}};
            if (!wordlist.empty()) request["wordlist"] = wordlist;
            return run_scan(std::move(request));
        };
    });

    // graph export
    auto* graph_cmd = app.add_subcommand("graph", "Inspect attack graphs");
    graph_cmd->require_subcommand(1);
    std::string graph_format = "json";
    auto* export_cmd = graph_cmd->add_subcommand("export", "Print the target's graph");
    export_cmd->add_option("target", target_ref, "Target name or id")->required();
    export_cmd->add_option("-f,--format", graph_format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    export_cmd->callback([&] {
        action = [&] {
            ApiClient api(config.api_base_url);
            const json target = resolve_target(api, target_ref);
            const ApiResponse r = api.get("/api/targets/" + target["id"].get<std::string>() + "/graph");
            if (graph_format == "json") out << r.body;
            else out << to_dot(restore(r.doc));
            return int{kOk};
        };
    });

    // vectors
    auto* vectors_cmd = app.add_subcommand("vectors", "Ranked attack vectors for a target");
    vectors_cmd->add_option("target", target_ref, "Target name or id")->required();
    vectors_cmd->add_option("-f,--format", config.output_format)->check(table_or_json);
    vectors_cmd->callback([&] {
        action = [&] {
            ApiClient api(config.api_base_url);
            const json target = resolve_target(api, target_ref);
            const ApiResponse r = api.get("/api/targets/" + target["id"].get<std::string>() + "/vectors");
            if (config.output_format == "json") {
                out << r.body;
                return int{kOk};
            }
            out << std::left << std::setw(6) << "RANK" << std::setw(10) << "SCORE" << "PATH\n";
            int rank = 1;
            for (const auto& v : r.doc) {
                std::string path;
                for (const auto& label : v["labels"]) {
                    if (!path.empty()) path += " -> ";
                    path += label.get<std::string>();
                }
                out << std::setw(6) << rank++ << std::setw(10) << format_score(v["score"].get<double>()) << path
                    << "\n";
            }
            return int{kOk};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        std::unique_ptr<LocalService> local;
        if (!local_dir.empty() && !serve_cmd->parsed()) {
            local = std::make_unique<LocalService>(local_dir);
            config.api_base_url = local->url();
        }
        return action ? action() : int{kUsageError};
    } catch (const CliFailure& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kRuntimeError;
}

} // namespace shadowblade::cli
