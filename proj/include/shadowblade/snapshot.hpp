#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "shadowblade/graph.hpp"

namespace shadowblade {

inline constexpr int kSnapshotSchemaVersion = 1;

// Snapshot document, schema version 1:
//
//   {"version":1,"graph_id":str,"target":{"name":str,"host":str},"revision":int,
//    "nodes":[{"id":str,"kind":str,"label":str,"attrs":{str:str},"success":bool}],
//    "edges":[{"id":str,"from":str,"to":str,"label":str,"weight":number|null}]}
//
// Nodes and edges keep insertion order; the root is always the first node.
nlohmann::json snapshot(const AttackGraph& graph);

/// Throws SchemaVersionMismatch for a version other than 1 and
/// MalformedDocument for anything else that does not fit the schema or
/// violates a graph invariant.
AttackGraph restore(const nlohmann::json& document);
AttackGraph restore(std::string_view document_text);
inline AttackGraph restore(const std::string& document_text) { return restore(std::string_view(document_text)); }
inline AttackGraph restore(const char* document_text) { return restore(std::string_view(document_text)); }

/// Graphviz export. Node and edge ids are used verbatim as DOT ids, so they
/// are stable for a given revision; weighted edges carry the weight with two
/// decimals in their label.
std::string to_dot(const AttackGraph& graph);

} // namespace shadowblade
