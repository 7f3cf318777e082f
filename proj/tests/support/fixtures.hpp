#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "shadowblade/exec.hpp"
#include "shadowblade/graph.hpp"
#include "shadowblade/tools.hpp"

namespace testing_support {

inline std::filesystem::path source_dir() { return SHADOWBLADE_SOURCE_DIR; }
inline std::filesystem::path replay_dir() { return source_dir() / "fixtures" / "replay"; }
inline std::filesystem::path wordlist() { return source_dir() / "fixtures" / "wordlists" / "common.txt"; }
inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(SHADOWBLADE_TEST_DATA_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline constexpr const char* kArmageddonHost = "armageddon.htb";

// nmap -sV -sC -oX - armageddon.htb (hosts_online keeps host discovery on).
inline shadowblade::NmapOptions armageddon_nmap_options() { return {true, true, true}; }
// ffuf against port 80, following redirects and dropping 403 responses.
inline shadowblade::FfufOptions armageddon_ffuf_options() { return {false, true, {403}}; }

inline shadowblade::PortScanResult replay_armageddon_nmap() {
    shadowblade::ReplayBackend backend(replay_dir());
    auto inv = shadowblade::build_nmap_invocation(kArmageddonHost, armageddon_nmap_options());
    return shadowblade::parse_nmap_xml(backend.run(inv).document());
}

inline shadowblade::PathScanResult replay_armageddon_ffuf(const shadowblade::FfufOptions& opts =
                                                              armageddon_ffuf_options()) {
    shadowblade::ReplayBackend backend(replay_dir());
    auto inv = shadowblade::build_ffuf_invocation("http://armageddon.htb", "/", opts, wordlist().string());
    return shadowblade::parse_ffuf_json(backend.run(inv).document());
}

inline const shadowblade::AttackNode* find_by_label(const shadowblade::AttackGraph& g, const std::string& label) {
    for (const auto& n : g.nodes()) {
        if (n.label == label) return &n;
    }
    return nullptr;
}

inline const shadowblade::AttackNode* find_by_attr(const shadowblade::AttackGraph& g, const std::string& key,
                                                   const std::string& value) {
    for (const auto& n : g.nodes()) {
        auto it = n.attrs.find(key);
        if (it != n.attrs.end() && it->second == value) return &n;
    }
    return nullptr;
}

/// Armageddon after the nmap scan: root, 22/tcp -> OpenSSH 7.4, 80/tcp -> Apache.
inline shadowblade::AttackGraph armageddon_post_nmap() {
    auto g = shadowblade::new_graph("armageddon", kArmageddonHost);
    shadowblade::merge_port_scan(g, replay_armageddon_nmap());
    return g;
}

inline std::string apache_node(const shadowblade::AttackGraph& g) {
    return find_by_attr(g, "product", "Apache httpd")->id;
}

} // namespace testing_support
