#include <gtest/gtest.h>

#include <algorithm>

#include "shadowblade/error.hpp"
#include "shadowblade/graph.hpp"

using namespace shadowblade;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::ExecutionFailed;
}

} // namespace

TEST(NewGraph, ArmageddonHasSingleTargetNode) {
    auto g = new_graph("armageddon", "armageddon.htb");
    ASSERT_EQ(g.nodes().size(), 1u);
    EXPECT_EQ(g.root().kind, NodeKind::Target);
    EXPECT_EQ(g.root().label, "armageddon.htb");
    EXPECT_TRUE(g.edges().empty());
    EXPECT_EQ(g.revision(), 1u);
    EXPECT_EQ(g.target().name, "armageddon");
}

TEST(NewGraph, AcceptsIpv4Host) {
    auto g = new_graph("t", "10.10.10.233");
    EXPECT_EQ(g.nodes().size(), 1u);
    EXPECT_EQ(g.edges().size(), 0u);
}

TEST(NewGraph, RejectsBadInput) {
    EXPECT_EQ(code_of([] { new_graph("bad", "host;rm -rf /"); }), ErrorCode::InvalidHost);
    EXPECT_EQ(code_of([] { new_graph("", "a.htb"); }), ErrorCode::InvalidTargetName);
}

TEST(CustomNode, AddsManualEdgeAndBumpsRevision) {
    auto g = new_graph("armageddon", "armageddon.htb");
    const auto before = g.revision();
    const auto id = add_custom_node(g, g.root().id, "drupal 7 detected");
    EXPECT_EQ(g.nodes().size(), 2u);
    ASSERT_EQ(g.edges().size(), 1u);
    EXPECT_EQ(g.edges()[0].label, "manual");
    EXPECT_EQ(g.node(id).kind, NodeKind::Custom);
    EXPECT_GT(g.revision(), before);
}

TEST(CustomNode, UnknownParent) {
    auto g = new_graph("t", "a.htb");
    EXPECT_EQ(code_of([&] { add_custom_node(g, "missing", "x"); }), ErrorCode::UnknownNode);
}

TEST(CustomNode, SameLabelTwiceGivesTwoNodes) {
    auto g = new_graph("t", "a.htb");
    const auto a = add_custom_node(g, g.root().id, "note");
    const auto b = add_custom_node(g, g.root().id, "note");
    EXPECT_NE(a, b);
    EXPECT_EQ(g.nodes().size(), 3u);
}

TEST(MarkSuccess, MarkAndUnmark) {
    auto g = new_graph("t", "a.htb");
    const auto a = add_custom_node(g, g.root().id, "a");
    const auto b = add_custom_node(g, g.root().id, "b");
    mark_success(g, a, true);
    mark_success(g, b, true);
    EXPECT_EQ(effective_success_set(g), (std::vector<std::string>{a, b}));
    const auto rev = g.revision();
    mark_success(g, b, false);
    EXPECT_EQ(effective_success_set(g), std::vector<std::string>{a});
    EXPECT_GT(g.revision(), rev);
}

TEST(MarkSuccess, RootAndUnknown) {
    auto g = new_graph("t", "a.htb");
    EXPECT_EQ(code_of([&] { mark_success(g, g.root().id, true); }), ErrorCode::RootNotMarkable);
    EXPECT_EQ(code_of([&] { mark_success(g, "nope", true); }), ErrorCode::UnknownNode);
}

TEST(SuccessSet, DefaultsToNonRootLeaves) {
    auto g = new_graph("t", "a.htb");
    EXPECT_TRUE(effective_success_set(g).empty());
    const auto a = add_custom_node(g, g.root().id, "a");
    const auto b = add_custom_node(g, a, "b");
    const auto c = add_custom_node(g, g.root().id, "c");
    EXPECT_EQ(effective_success_set(g), (std::vector<std::string>{b, c}));
}

TEST(Edges, CycleRejectedAndGraphUnchanged) {
    auto g = new_graph("t", "a.htb");
    const auto a = add_custom_node(g, g.root().id, "a");
    const auto b = add_custom_node(g, a, "b");
    const auto c = add_custom_node(g, b, "c");
    const auto copy = g;
    EXPECT_EQ(code_of([&] { g.add_edge(c, a, "manual"); }), ErrorCode::CycleRejected);
    EXPECT_EQ(g, copy);
}

TEST(Edges, InvalidEdges) {
    auto g = new_graph("t", "a.htb");
    const auto a = add_custom_node(g, g.root().id, "a");
    const auto b = add_custom_node(g, g.root().id, "b");
    EXPECT_EQ(code_of([&] { g.add_edge(a, a, "manual"); }), ErrorCode::InvalidEdge);
    EXPECT_EQ(code_of([&] { g.add_edge(a, g.root().id, "manual"); }), ErrorCode::InvalidEdge);
    EXPECT_EQ(code_of([&] { g.add_edge(g.root().id, a, "manual"); }), ErrorCode::InvalidEdge);
    EXPECT_EQ(code_of([&] { g.add_edge(a, "zz", "manual"); }), ErrorCode::UnknownNode);
    g.add_edge(a, b, "pivot");
    EXPECT_NE(g.find_edge_between(a, b), nullptr);
}

TEST(Nodes, TargetKindCannotBeAdded) {
    auto g = new_graph("t", "a.htb");
    EXPECT_EQ(code_of([&] { g.add_node(g.root().id, NodeKind::Target, "x", {}, "manual"); }),
              ErrorCode::WrongNodeKind);
}

TEST(Nodes, KindSpecificAttributesValidated) {
    auto g = new_graph("t", "a.htb");
    const auto root = g.root().id;
    EXPECT_EQ(code_of([&] { g.add_node(root, NodeKind::Port, "x", {{"protocol", "tcp"}}, "open-port"); }),
              ErrorCode::InvalidNodeAttrs);
    EXPECT_EQ(code_of([&] {
                  g.add_node(root, NodeKind::Port, "x", {{"port_number", "70000"}, {"protocol", "tcp"}}, "open-port");
              }),
              ErrorCode::InvalidNodeAttrs);
    EXPECT_EQ(code_of([&] {
                  g.add_node(root, NodeKind::HttpPath, "x", {{"url_path", "x"}, {"http_status", "200"}}, "serves-path");
              }),
              ErrorCode::InvalidNodeAttrs);
    EXPECT_EQ(code_of([&] {
                  g.add_node(root, NodeKind::HttpPath, "x", {{"url_path", "/x"}, {"http_status", "99"}}, "serves-path");
              }),
              ErrorCode::InvalidNodeAttrs);
}

TEST(Nodes, UpdateAttrsReportsChangeAndBumpsOnlyThen) {
    auto g = new_graph("t", "a.htb");
    const auto a = add_custom_node(g, g.root().id, "a", {{"k", "v"}});
    const auto rev = g.revision();
    EXPECT_FALSE(g.update_attrs(a, {{"k", "v"}}));
    EXPECT_EQ(g.revision(), rev);
    EXPECT_TRUE(g.update_attrs(a, {{"k", "w"}}));
    EXPECT_EQ(g.revision(), rev + 1);
}

TEST(Nodes, EdgeWeightsDoNotBumpRevision) {
    auto g = new_graph("t", "a.htb");
    add_custom_node(g, g.root().id, "a");
    const auto rev = g.revision();
    g.set_edge_weight(g.edges()[0].id, 0.5);
    EXPECT_EQ(g.revision(), rev);
    EXPECT_EQ(g.edges()[0].weight, 0.5);
}

TEST(Assemble, RejectsBrokenInvariants) {
    const TargetDescriptor target{"t", "a.htb"};
    AttackNode root{"n1", NodeKind::Target, "a.htb", {}, false};
    AttackNode child{"n2", NodeKind::Custom, "c", {}, false};
    AttackNode orphan{"n3", NodeKind::Custom, "o", {}, false};
    AttackEdge e1{"e1", "n1", "n2", "manual", std::nullopt};
    AttackEdge back{"e2", "n2", "n1", "manual", std::nullopt};

    EXPECT_NO_THROW(AttackGraph::assemble("g", target, 3, {root, child}, {e1}));
    EXPECT_EQ(code_of([&] { AttackGraph::assemble("g", target, 3, {child, root}, {e1}); }),
              ErrorCode::MalformedDocument);
    EXPECT_EQ(code_of([&] { AttackGraph::assemble("g", target, 3, {root, child, orphan}, {e1}); }),
              ErrorCode::MalformedDocument);
    EXPECT_EQ(code_of([&] { AttackGraph::assemble("g", target, 3, {root, child}, {e1, back}); }),
              ErrorCode::MalformedDocument);
    EXPECT_EQ(code_of([&] { AttackGraph::assemble("g", target, 3, {root, root}, {}); }),
              ErrorCode::MalformedDocument);
}
