#include <gtest/gtest.h>

#include "gated_backend.hpp"
#include "http_fixture.hpp"

using namespace testing_support;
using nlohmann::json;

namespace {

json body_of(const httplib::Result& r) { return json::parse(r->body); }

std::string create(httplib::Client& c, const std::string& name = "armageddon") {
    auto r = c.Post("/api/targets", json{{"name", name}, {"host", "armageddon.htb"}}.dump(), "application/json");
    return body_of(r)["id"];
}

json wait_for_job(httplib::Client& c, const std::string& job_id) {
    for (int i = 0; i < 500; ++i) {
        auto doc = body_of(c.Get("/api/jobs/" + job_id));
        if (doc["state"] == "done" || doc["state"] == "failed") return doc;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    return nullptr;
}

} // namespace

TEST(HttpApi, TargetLifecycle) {
    HttpHarness h;
    auto c = h.client();
    auto list = c.Get("/api/targets");
    ASSERT_TRUE(list);
    EXPECT_EQ(list->status, 200);
    EXPECT_EQ(list->body, "[]\n");
    EXPECT_EQ(list->get_header_value("Content-Type"), "application/json");

    auto created = c.Post("/api/targets", R"({"name":"armageddon","host":"armageddon.htb"})", "application/json");
    EXPECT_EQ(created->status, 201);
    const auto target = body_of(created);
    const std::string id = target["id"];

    auto one = c.Get("/api/targets/" + id);
    EXPECT_EQ(one->status, 200);
    EXPECT_EQ(one->body, created->body);

    auto dup = c.Post("/api/targets", R"({"name":"armageddon","host":"armageddon.htb"})", "application/json");
    EXPECT_EQ(dup->status, 409);
    EXPECT_EQ(body_of(dup)["error"], "DuplicateName");
    EXPECT_TRUE(body_of(dup)["message"].is_string());

    auto bad = c.Post("/api/targets", R"({"name":"x","host":"bad host!"})", "application/json");
    EXPECT_EQ(bad->status, 422);
    EXPECT_EQ(body_of(bad)["error"], "InvalidHost");

    EXPECT_EQ(c.Delete("/api/targets/" + id)->status, 204);
    auto again = c.Delete("/api/targets/" + id);
    EXPECT_EQ(again->status, 404);
    EXPECT_EQ(body_of(again)["error"], "UnknownTarget");
}

TEST(HttpApi, MalformedBodiesAndUnknownRoutes) {
    HttpHarness h;
    auto c = h.client();
    auto r = c.Post("/api/targets", "{nope", "application/json");
    EXPECT_EQ(r->status, 400);
    EXPECT_EQ(body_of(r)["error"], "BadRequest");
    auto missing = c.Get("/api/nothing/here");
    EXPECT_EQ(missing->status, 404);
    EXPECT_EQ(body_of(missing)["error"], "NotFound");
    EXPECT_EQ(c.Get("/api/jobs/j-missing")->status, 404);
}

TEST(HttpApi, ScanFlowAndBodiesMatchService) {
    HttpHarness h;
    auto c = h.client();
    const auto id = create(c);
    auto started = c.Post("/api/targets/" + id + "/scans", R"({"tool":"nmap","options":{"banner_grabbing":true,
        "hosts_online":true,"default_scripts":true}})", "application/json");
    EXPECT_EQ(started->status, 202);
    const std::string job_id = body_of(started)["job_id"];
    EXPECT_EQ(wait_for_job(c, job_id)["state"], "done");

    auto graph = c.Get("/api/targets/" + id + "/graph");
    EXPECT_EQ(graph->body, h.service().get_graph(id).dump() + "\n");
    EXPECT_EQ(body_of(graph)["nodes"].size(), 5u);
    auto vectors = c.Get("/api/targets/" + id + "/vectors");
    EXPECT_EQ(vectors->body, h.service().get_vectors(id).dump() + "\n");
    EXPECT_EQ(body_of(vectors).size(), 2u);
    EXPECT_EQ(c.Get("/api/jobs/" + job_id)->body, h.service().get_job(job_id).dump() + "\n");

    std::string port80;
    const auto graph_doc = body_of(graph);
    for (const auto& n : graph_doc["nodes"]) {
        if (n["label"] == "80/tcp") port80 = n["id"];
    }
    auto wrong = c.Post("/api/targets/" + id + "/scans",
                        json{{"tool", "ffuf"}, {"anchor_node", port80}, {"options", json::object()}}.dump(),
                        "application/json");
    EXPECT_EQ(wrong->status, 422);
    EXPECT_EQ(body_of(wrong)["error"], "WrongNodeKind");
    EXPECT_EQ(c.Post("/api/targets/t-nope/scans", R"({"tool":"nmap"})", "application/json")->status, 404);
}

TEST(HttpApi, TargetBusyOverHttp) {
    auto backend = std::make_shared<GatedBackend>(replay_dir());
    HttpHarness h(backend);
    auto c = h.client();
    const auto id = create(c);
    const std::string body = R"({"tool":"nmap","options":{}})";
    // -Pn against armageddon.htb has a fixture.
    EXPECT_EQ(c.Post("/api/targets/" + id + "/scans", body, "application/json")->status, 202);
    auto busy = c.Post("/api/targets/" + id + "/scans", body, "application/json");
    EXPECT_EQ(busy->status, 409);
    EXPECT_EQ(body_of(busy)["error"], "TargetBusy");
    backend->release();
}

TEST(HttpApi, RestartReloadsIdenticalGraph) {
    HttpHarness h;
    auto c = h.client();
    const auto id = create(c);
    auto started = c.Post("/api/targets/" + id + "/scans", R"({"tool":"nmap","options":{"banner_grabbing":true}})",
                          "application/json");
    wait_for_job(c, body_of(started)["job_id"]);
    const auto before = c.Get("/api/targets/" + id + "/graph")->body;
    h.restart();
    auto c2 = h.client();
    EXPECT_EQ(c2.Get("/api/targets/" + id + "/graph")->body, before);
}
