#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "shadowblade/error.hpp"
#include "shadowblade/exec.hpp"
#include "shadowblade/graph.hpp"
#include "shadowblade/snapshot.hpp"
#include "shadowblade/tools.hpp"
#include "shadowblade/weights.hpp"

namespace py = pybind11;
using namespace shadowblade;
using nlohmann::json;

namespace {

py::object to_python(const json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

json from_python(const py::handle& obj) {
    return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::dict report_dict(const MergeReport& r) {
    py::dict d;
    d["nodes_added"] = r.nodes_added;
    d["nodes_updated"] = r.nodes_updated;
    d["edges_added"] = r.edges_added;
    return d;
}

py::dict vector_dict(const AttackVector& v, std::optional<double> score) {
    py::dict d;
    d["node_ids"] = v.node_ids;
    d["edge_ids"] = v.edge_ids;
    d["score"] = score ? py::cast(*score) : py::none();
    return d;
}

json port_scan_json(const PortScanResult& r) {
    json ports = json::array();
    auto opt = [](const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); };
    for (const auto& p : r.ports) {
        ports.push_back({{"port_number", p.port_number}, {"protocol", p.protocol},
                         {"state", std::string(to_string(p.state))}, {"service_name", opt(p.service_name)},
                         {"product", opt(p.product)}, {"version", opt(p.version)},
                         {"extra_info", opt(p.extra_info)}, {"banner", opt(p.banner)}});
    }
    return {{"host", r.host}, {"aliases", r.aliases}, {"ports", ports}};
}

json path_scan_json(const PathScanResult& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"url_path", e.url_path}, {"http_status", e.http_status},
                           {"content_length", e.content_length},
                           {"redirect_location", e.redirect_location ? json(*e.redirect_location) : json(nullptr)}});
    }
    return {{"base_url", r.base_url}, {"entries", entries}};
}

py::dict invocation_dict(const Invocation& inv) {
    py::dict d;
    d["program"] = inv.program;
    d["argv"] = inv.argv;
    d["timeout"] = inv.timeout.count();
    d["output_path"] = inv.output_path ? py::cast(*inv.output_path) : py::none();
    return d;
}

// The value after "-o" is the tool's output file, as build_ffuf_invocation sets it.
Invocation invocation_from(const std::string& program, std::vector<std::string> argv) {
    Invocation inv{program, std::move(argv), kNmapTimeout, std::nullopt};
    for (std::size_t i = 1; i < inv.argv.size(); ++i) {
        if (inv.argv[i - 1] == "-o") inv.output_path = inv.argv[i];
    }
    return inv;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Attack graph model, scoring and tool runner";

    static py::handle error_type = py::exception<Error>(m, "Error").release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
            instance.attr("code") = std::string(e.code_string());
            PyErr_SetObject(error_type.ptr(), instance.ptr());
        }
    });

    py::class_<AttackGraph>(m, "Graph")
        .def(py::init([](const std::string& name, const std::string& host) { return new_graph(name, host); }),
             py::arg("name"), py::arg("host"))
        .def_property_readonly("graph_id", &AttackGraph::graph_id)
        .def_property_readonly("revision", &AttackGraph::revision)
        .def_property_readonly("root", [](const AttackGraph& g) { return g.root().id; })
        .def_property_readonly("nodes", [](const AttackGraph& g) { return to_python(snapshot(g)["nodes"]); })
        .def_property_readonly("edges", [](const AttackGraph& g) { return to_python(snapshot(g)["edges"]); })
        .def("add_custom_node", [](AttackGraph& g, const std::string& parent, std::string label, Attributes attrs) {
            return add_custom_node(g, parent, std::move(label), std::move(attrs));
        }, py::arg("parent"), py::arg("label"), py::arg("attrs") = Attributes{})
        .def("add_edge", [](AttackGraph& g, const std::string& from, const std::string& to, const std::string& label) {
            return g.add_edge(from, to, label);
        }, py::arg("source"), py::arg("dest"), py::arg("label") = std::string(edge_labels::manual))
        .def("mark_success", [](AttackGraph& g, const std::string& id, bool flag) { mark_success(g, id, flag); },
             py::arg("node_id"), py::arg("flag") = true)
        .def("merge_nmap_xml", [](AttackGraph& g, std::string_view xml) {
            return report_dict(merge_port_scan(g, parse_nmap_xml(xml)));
        }, py::arg("xml"))
        .def("merge_ffuf_json", [](AttackGraph& g, const std::string& anchor, std::string_view doc) {
            return report_dict(merge_path_scan(g, anchor, parse_ffuf_json(doc)));
        }, py::arg("anchor_node"), py::arg("document"))
        .def("success_set", &effective_success_set)
        .def("vectors", [](const AttackGraph& g) {
            py::list out;
            for (const auto& v : enumerate_vectors(g)) out.append(vector_dict(v, v.score));
            return out;
        })
        .def("compute_weights", [](const AttackGraph& g) { return compute_weights(g).edge_weights; })
        .def("apply_weights", [](AttackGraph& g) { apply_weights(g, compute_weights(g)); })
        .def("rank_vectors", [](const AttackGraph& g) {
            py::list out;
            for (const auto& r : rank_vectors(g)) out.append(vector_dict(r.vector, r.score));
            return out;
        })
        .def("snapshot", [](const AttackGraph& g) { return to_python(snapshot(g)); })
        .def("to_dot", &to_dot)
        .def_static("restore", [](const py::object& doc) {
            if (py::isinstance<py::str>(doc)) return restore(doc.cast<std::string>());
            return restore(from_python(doc));
        }, py::arg("document"))
        .def("__eq__", [](const AttackGraph& a, const AttackGraph& b) { return a == b; })
        .def("__repr__", [](const AttackGraph& g) {
            return "<Graph " + g.target().name + " nodes=" + std::to_string(g.nodes().size()) +
                   " edges=" + std::to_string(g.edges().size()) + " revision=" + std::to_string(g.revision()) + ">";
        });

    m.def("nmap_invocation", [](const std::string& host, bool banner, bool scripts, bool online) {
        return invocation_dict(build_nmap_invocation(host, {banner, online, scripts}));
    }, py::arg("host"), py::arg("banner_grabbing") = false, py::arg("default_scripts") = false,
       py::arg("hosts_online") = false);

    m.def("ffuf_invocation", [](const std::string& base_url, const std::string& anchor, const std::string& wordlist,
                                bool recursion, bool follow, std::vector<int> ignore,
                                std::optional<std::string> output) {
        FfufOptions opts{recursion, follow, std::move(ignore)};
        return invocation_dict(output ? build_ffuf_invocation(base_url, anchor, opts, wordlist, *output)
                                      : build_ffuf_invocation(base_url, anchor, opts, wordlist));
    }, py::arg("base_url"), py::arg("anchor_path"), py::arg("wordlist"), py::arg("path_recursion") = false,
       py::arg("follow_redirect") = false, py::arg("ignore_status_codes") = std::vector<int>{},
       py::arg("output") = py::none());

    m.def("parse_nmap_xml", [](std::string_view xml) { return to_python(port_scan_json(parse_nmap_xml(xml))); });
    m.def("parse_ffuf_json", [](std::string_view doc) { return to_python(path_scan_json(parse_ffuf_json(doc))); });

    m.def("canonical_key", [](const std::string& program, std::vector<std::string> argv) {
        return canonical_key(invocation_from(program, std::move(argv)));
    }, py::arg("program"), py::arg("argv"));

    m.def("replay", [](const std::filesystem::path& fixtures, const std::string& program,
                       std::vector<std::string> argv) {
        const auto out = ReplayBackend(fixtures).run(invocation_from(program, std::move(argv)));
        py::dict d;
        d["stdout"] = out.standard_output;
        d["exit_code"] = out.exit_code;
        d["duration_ms"] = out.duration.count();
        d["document"] = out.document();
        return d;
    }, py::arg("fixtures_dir"), py::arg("program"), py::arg("argv"));

    m.def("destination_weight", [](const std::string& kind, Attributes attrs) {
        const auto parsed = parse_node_kind(kind);
        if (!parsed) throw Error(ErrorCode::InvalidNodeAttrs, "unknown node kind '" + kind + "'");
        return destination_weight(AttackNode{"", *parsed, "", std::move(attrs), false});
    }, py::arg("kind"), py::arg("attrs") = Attributes{});
}
