#include "store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "shadowblade/snapshot.hpp"

namespace shadowblade {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_atomically(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) throw std::runtime_error("invalid JSON in " + path.string());
    return doc;
}

} // namespace

Store::Store(fs::path data_dir) : root_(std::move(data_dir)) {
    fs::create_directories(root_ / "targets");
}

fs::path Store::target_dir(const std::string& target_id) const { return root_ / "targets" / target_id; }

void Store::save_target(const std::string& target_id, const json& document) {
    write_atomically(target_dir(target_id) / "target.json", document.dump(2) + "\n");
}

void Store::save_graph(const std::string& target_id, const AttackGraph& graph) {
    write_atomically(target_dir(target_id) / "graph.json", snapshot(graph).dump(2) + "\n");
}

void Store::save_job(const std::string& target_id, const std::string& job_id, const json& document) {
    write_atomically(target_dir(target_id) / "jobs" / (job_id + ".json"), document.dump(2) + "\n");
}

void Store::remove_target(const std::string& target_id) {
    std::error_code ec;
    fs::remove_all(target_dir(target_id), ec);
}

fs::path Store::job_scratch_path(const std::string& target_id, const std::string& job_id) const {
    return fs::absolute(target_dir(target_id) / "jobs" / (job_id + ".out.json"));
}

std::vector<Store::Loaded> Store::load_all() const {
    std::vector<Loaded> result;
    for (const auto& entry : fs::directory_iterator(root_ / "targets")) {
        if (!entry.is_directory()) continue;
        const fs::path dir = entry.path();
        if (!fs::exists(dir / "target.json") || !fs::exists(dir / "graph.json")) continue;
        Loaded loaded{read_json(dir / "target.json"), restore(read_json(dir / "graph.json")), {}};
        if (fs::is_directory(dir / "jobs")) {
            for (const auto& job : fs::directory_iterator(dir / "jobs")) {
                const auto name = job.path().filename().string();
                if (job.path().extension() != ".json" || name.ends_with(".out.json")) continue;
                loaded.jobs.push_back(read_json(job.path()));
            }
        }
        result.push_back(std::move(loaded));
    }
    return result;
}

} // namespace shadowblade
