#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowblade/graph.hpp"

namespace shadowblade {

// Plain-document persistence:
//   <data_dir>/targets/<id>/target.json
//   <data_dir>/targets/<id>/graph.json
//   <data_dir>/targets/<id>/jobs/<job_id>.json
// Every write goes to a temp file first and is renamed into place.
class Store {
public:
    explicit Store(std::filesystem::path data_dir);

    void save_target(const std::string& target_id, const nlohmann::json& document);
    void save_graph(const std::string& target_id, const AttackGraph& graph);
    void save_job(const std::string& target_id, const std::string& job_id, const nlohmann::json& document);
    void remove_target(const std::string& target_id);

    std::filesystem::path job_scratch_path(const std::string& target_id, const std::string& job_id) const;

    struct Loaded {
        nlohmann::json target;
        AttackGraph graph;
        std::vector<nlohmann::json> jobs;
    };
    std::vector<Loaded> load_all() const;

private:
    std::filesystem::path target_dir(const std::string& target_id) const;

    std::filesystem::path root_;
};

} // namespace shadowblade
