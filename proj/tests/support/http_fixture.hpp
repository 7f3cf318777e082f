#pragma once

#include <memory>
#include <string>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "shadowblade/http_api.hpp"
#include "temp_dir.hpp"

namespace testing_support {

/// Replay-mode service behind a real HTTP server on an ephemeral loopback
/// port.
class HttpHarness {
public:
    explicit HttpHarness(std::shared_ptr<shadowblade::ExecutionBackend> backend = nullptr) {
        config_.data_dir = dir_.path;
        config_.fixtures_dir = replay_dir();
        start(backend ? backend : shadowblade::make_backend(config_));
    }

    ~HttpHarness() { stop(); }

    /// Stops the server and the service, then starts both again on the same
    /// data directory.
    void restart() {
        stop();
        start(shadowblade::make_backend(config_));
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(10);
        return c;
    }
    shadowblade::Service& service() { return *service_; }
    const std::filesystem::path& data_dir() const { return dir_.path; }

private:
    void start(std::shared_ptr<shadowblade::ExecutionBackend> backend) {
        service_ = std::make_unique<shadowblade::Service>(config_, std::move(backend));
        server_ = std::make_unique<httplib::Server>();
        shadowblade::register_routes(*server_, *service_);
        port_ = server_->bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_->listen_after_bind(); });
        server_->wait_until_ready();
    }

    void stop() {
        if (!server_) return;
        service_->wait_idle();
        server_->stop();
        thread_.join();
        server_.reset();
        service_.reset();
    }

    TempDir dir_;
    shadowblade::ServiceConfig config_;
    std::unique_ptr<shadowblade::Service> service_;
    std::unique_ptr<httplib::Server> server_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace testing_support
