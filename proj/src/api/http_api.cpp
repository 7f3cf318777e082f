#include "shadowblade/http_api.hpp"

#include <csignal>
#include <cstdio>
#include <filesystem>

#include <httplib.h>

namespace shadowblade {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump() + "\n", kJson);
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const ApiError& e) {
            send(res, e.status(), e.body());
        } catch (const std::exception& e) {
            send(res, 500, json{{"error", "InternalError"}, {"message", e.what()}});
        }
    };
}

json parse_body(const httplib::Request& req) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
        throw ApiError(400, "BadRequest", "request body must be a JSON object");
    }
    return body;
}

httplib::Server* g_server = nullptr;

extern "C" void stop_server(int) {
    if (g_server) g_server->stop();
}

} // namespace

void register_routes(httplib::Server& server, Service& service) {
    server.Post("/api/targets", guarded([&](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        const json name = body.value("name", json(nullptr));
        const json host = body.value("host", json(nullptr));
        if (!name.is_string()) throw ApiError(422, "InvalidTargetName", "name must be a string");
        if (!host.is_string()) throw ApiError(422, "InvalidHost", "host must be a string");
        send(res, 201, service.create_target(name.get<std::string>(), host.get<std::string>()));
    }));
    server.Get("/api/targets", guarded([&](const httplib::Request&, httplib::Response& res) {
        send(res, 200, service.list_targets());
    }));
    server.Get(R"(/api/targets/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
        send(res, 200, service.get_target(req.matches[1]));
    }));
    server.Delete(R"(/api/targets/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
        service.delete_target(req.matches[1]);
        res.status = 204;
    }));
    server.Post(R"(/api/targets/([^/]+)/scans)", guarded([&](const httplib::Request& req, httplib::Response& res) {
        send(res, 202, service.start_scan(req.matches[1], parse_body(req)));
    }));
    server.Get(R"(/api/jobs/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
        send(res, 200, service.get_job(req.matches[1]));
    }));
    server.Get(R"(/api/targets/([^/]+)/graph)", guarded([&](const httplib::Request& req, httplib::Response& res) {
        send(res, 200, service.get_graph(req.matches[1]));
    }));
    server.Get(R"(/api/targets/([^/]+)/vectors)", guarded([&](const httplib::Request& req, httplib::Response& res) {
        send(res, 200, service.get_vectors(req.matches[1]));
    }));

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
        if (res.status == 404 && req.path.rfind("/api/", 0) == 0) {
            send(res, 404, json{{"error", "NotFound"}, {"message", "no route for " + req.method + " " + req.path}});
            return httplib::Server::HandlerResponse::Handled;
        }
        return httplib::Server::HandlerResponse::Unhandled;
    });
}

int serve(const ServiceConfig& config) {
    Service service(config, make_backend(config));
    httplib::Server server;
    register_routes(server, service);
    if (std::filesystem::is_directory(config.ui_dir)) {
        server.set_mount_point("/", config.ui_dir.string());
    }

    g_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    std::fprintf(stderr, "shadowblade: listening on http://%s:%d (%s mode, data in %s)\n",
                 config.bind_host.c_str(), config.bind_port,
                 config.tool_mode == ToolMode::Live ? "live" : "replay", config.data_dir.string().c_str());
    const bool ok = server.listen(config.bind_host, config.bind_port);
    g_server = nullptr;
    if (!ok) {
        std::fprintf(stderr, "shadowblade: cannot listen on %s:%d\n", config.bind_host.c_str(), config.bind_port);
        return 1;
    }
    service.wait_idle();
    return 0;
}

} // namespace shadowblade
