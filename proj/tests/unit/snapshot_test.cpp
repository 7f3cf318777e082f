#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "shadowblade/error.hpp"
#include "shadowblade/snapshot.hpp"
#include "shadowblade/weights.hpp"

using namespace shadowblade;
using namespace testing_support;
using nlohmann::json;

namespace {

std::set<std::string> keys(const json& object) {
    std::set<std::string> out;
    for (const auto& [k, v] : object.items()) out.insert(k);
    return out;
}

ErrorCode restore_error(const json& doc) {
    try {
        restore(doc);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ExecutionFailed;
}

AttackGraph armageddon_post_ffuf() {
    auto g = armageddon_post_nmap();
    merge_path_scan(g, apache_node(g), replay_armageddon_ffuf());
    apply_weights(g, compute_weights(g));
    return g;
}

int count(const std::string& text, const std::regex& re) {
    return static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

const std::regex kNodeStatement(R"(^  "[^"]+" \[label=)", std::regex::multiline);
const std::regex kEdgeStatement(R"(^  "[^"]+" -> "[^"]+")", std::regex::multiline);

} // namespace

TEST(Snapshot, RootOnlyRoundTrip) {
    const auto g = new_graph("t", "10.10.10.233");
    EXPECT_EQ(restore(snapshot(g)), g);
}

TEST(Snapshot, ArmageddonPostFfufRoundTrip) {
    const auto g = armageddon_post_ffuf();
    const auto doc = snapshot(g);
    EXPECT_EQ(restore(doc), g);
    EXPECT_EQ(restore(doc.dump()), g);
    EXPECT_EQ(snapshot(restore(doc)), doc);
}

TEST(Snapshot, ExactFieldNames) {
    auto g = armageddon_post_ffuf();
    mark_success(g, apache_node(g), true);
    const auto doc = snapshot(g);
    EXPECT_EQ(keys(doc), (std::set<std::string>{"version", "graph_id", "target", "revision", "nodes", "edges"}));
    EXPECT_EQ(doc["version"], 1);
    EXPECT_EQ(keys(doc["target"]), (std::set<std::string>{"name", "host"}));
    for (const auto& n : doc["nodes"]) {
        EXPECT_EQ(keys(n), (std::set<std::string>{"id", "kind", "label", "attrs", "success"}));
        for (const auto& [k, v] : n["attrs"].items()) EXPECT_TRUE(v.is_string()) << k;
    }
    for (const auto& e : doc["edges"]) {
        EXPECT_EQ(keys(e), (std::set<std::string>{"id", "from", "to", "label", "weight"}));
        EXPECT_TRUE(e["weight"].is_number());
    }
    EXPECT_EQ(doc["nodes"][0]["kind"], "Target");
}

TEST(Snapshot, UnweightedEdgesSerializeAsNull) {
    const auto doc = snapshot(armageddon_post_nmap());
    for (const auto& e : doc["edges"]) EXPECT_TRUE(e["weight"].is_null());
}

TEST(Snapshot, RandomGraphsRoundTrip) {
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 200; ++i) {
        auto g = oracle::random_graph(rng);
        if (i % 3 == 0) apply_weights(g, compute_weights(g));
        ASSERT_EQ(restore(snapshot(g)), g) << "graph #" << i;
    }
}

TEST(Restore, VersionTwoRejected) {
    auto doc = snapshot(new_graph("t", "a.htb"));
    doc["version"] = 2;
    EXPECT_EQ(restore_error(doc), ErrorCode::SchemaVersionMismatch);
}

TEST(Restore, MalformedDocuments) {
    const auto good = snapshot(armageddon_post_nmap());
    auto mutate = [&](auto f) {
        json d = good;
        f(d);
        return restore_error(d);
    };
    EXPECT_EQ(mutate([](json& d) { d.erase("nodes"); }), ErrorCode::MalformedDocument);
    EXPECT_EQ(mutate([](json& d) { d["extra"] = 1; }), ErrorCode::MalformedDocument);
    EXPECT_EQ(mutate([](json& d) { d["nodes"][0]["kind"] = "Router"; }), ErrorCode::MalformedDocument);
    EXPECT_EQ(mutate([](json& d) { d["edges"][0]["weight"] = 1.5; }), ErrorCode::MalformedDocument);
    EXPECT_EQ(mutate([](json& d) { d["edges"][0]["to"] = "n404"; }), ErrorCode::MalformedDocument);
    EXPECT_EQ(mutate([](json& d) { d["nodes"][1]["attrs"]["port_number"] = 22; }), ErrorCode::MalformedDocument);
    EXPECT_EQ(mutate([](json& d) { std::swap(d["nodes"][0], d["nodes"][1]); }), ErrorCode::MalformedDocument);
    EXPECT_EQ(mutate([](json& d) { d["nodes"][1]["success"] = "yes"; }), ErrorCode::MalformedDocument);
    EXPECT_EQ(restore_error(json::array()), ErrorCode::MalformedDocument);
    EXPECT_THROW(restore(std::string_view("{not json")), Error);
}

TEST(Dot, RootOnly) {
    const auto dot = to_dot(new_graph("t", "a.htb"));
    EXPECT_EQ(dot.rfind("digraph ", 0), 0u);
    EXPECT_EQ(count(dot, kNodeStatement), 1);
    EXPECT_EQ(count(dot, kEdgeStatement), 0);
}

TEST(Dot, ArmageddonPostNmap) {
    auto g = armageddon_post_nmap();
    const auto dot = to_dot(g);
    EXPECT_EQ(count(dot, kNodeStatement), 5);
    EXPECT_EQ(count(dot, kEdgeStatement), 4);
    EXPECT_EQ(to_dot(g), dot);
    apply_weights(g, compute_weights(g));
    const auto weighted = to_dot(g);
    EXPECT_NE(weighted.find("label=\"open-port 0.50\""), std::string::npos);
    EXPECT_NE(weighted.find("label=\"runs-service 0.60\""), std::string::npos);
}

TEST(Dot, QuotesLabels) {
    auto g = new_graph("t", "a.htb");
    add_custom_node(g, g.root().id, "say \"hi\"\\");
    const auto dot = to_dot(g);
    EXPECT_NE(dot.find(R"(label="say \"hi\"\\")"), std::string::npos);
}
