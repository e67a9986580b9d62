// Python bindings for the main operations. Graphs cross the boundary as
// dicts, samples as JSON text (decoded by the Python package).

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiarg/amr.hpp"
#include "hiarg/config.hpp"
#include "hiarg/error.hpp"
#include "hiarg/factory.hpp"
#include "hiarg/pipeline.hpp"
#include "hiarg/relatives.hpp"
#include "hiarg/store.hpp"

namespace py = pybind11;
using namespace hiarg;

namespace {

py::dict graph_to_dict(const AmrGraph& g) {
  py::list nodes, edges;
  for (const auto& n : g.nodes) {
    nodes.append(py::make_tuple(n.id, std::string(to_string(n.attr.kind)), n.attr.text));
  }
  for (const auto& e : g.edges) edges.append(py::make_tuple(e.src, e.label, e.dst));
  py::dict d;
  d["root"] = g.root;
  d["nodes"] = nodes;
  d["edges"] = edges;
  return d;
}

AmrGraph graph_from_dict(const py::dict& d) {
  AmrGraph g;
  g.root = d["root"].cast<std::string>();
  for (auto item : d["nodes"]) {
    auto t = item.cast<py::tuple>();
    g.nodes.push_back({t[0].cast<std::string>(),
                       NodeAttr{node_kind_from_string(t[1].cast<std::string>()),
                                t[2].cast<std::string>()}});
  }
  for (auto item : d["edges"]) {
    auto t = item.cast<py::tuple>();
    g.edges.push_back({t[0].cast<std::string>(), t[2].cast<std::string>(),
                       t[1].cast<std::string>()});
  }
  return g;
}

// Config text plus keyword overrides, e.g. seed=42, jobs=4.
RunConfig make_config(const std::string& text, const py::dict& overrides) {
  std::istringstream in(text);
  auto c = parse_config(in);
  for (auto [k, v] : overrides) {
    std::string value = py::isinstance<py::bool_>(v) ? (v.cast<bool>() ? "true" : "false")
                                                     : py::str(v).cast<std::string>();
    apply_setting(c, k.cast<std::string>(), value);
  }
  c.check();
  return c;
}

py::dict summary(const std::string& text) {
  py::dict d;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon != std::string::npos) d[py::str(line.substr(0, colon))] = line.substr(colon + 2);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_hiarg, m) {
  m.doc() = "Hi-ArG construction and pre-training sample factory";

  auto base = py::register_exception<Error>(m, "HiargError");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<InvalidGraph>(m, "InvalidGraph", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<CorruptFile>(m, "CorruptFile", base);

  m.def("parse_penman", [](const std::string& text) { return graph_to_dict(parse_penman(text)); },
        py::arg("text"));
  m.def("serialize_penman",
        [](const py::dict& g) { return serialize_penman(graph_from_dict(g)); }, py::arg("graph"));
  m.def("validate_graph", [](const py::dict& g) {
    std::vector<std::string> out;
    for (const auto& v : validate(graph_from_dict(g)).violations) {
      out.push_back(std::string(to_string(v.kind)) + ": " + v.message);
    }
    return out;
  }, py::arg("graph"));
  m.def("tokenize", [](const std::string& text) { return SimpleTokenizer{}.tokenize(text); },
        py::arg("text"));
  m.def("split_sentences", [](const std::string& text) { return split_sentences(text); },
        py::arg("text"));

  py::class_<HiArg>(m, "Store")
      .def(py::init<>())
      .def("add_sentence",
           [](HiArg& s, const std::string& id, const std::string& text, const std::string& penman,
              const std::string& alignment, const std::string& doc, std::uint32_t position,
              const std::string& conclusion, const std::string& stance, bool hint) {
             SentenceRecord r;
             r.id = id;
             r.text = text;
             r.doc_id = doc;
             r.position = position;
             r.conclusion_id = conclusion;
             r.stance = stance_from_string(stance);
             r.is_hint = hint;
             s.add_sentence(r, parse_penman(penman), parse_alignment(alignment));
           },
           py::arg("id"), py::arg("text"), py::arg("penman"), py::arg("alignment") = "",
           py::arg("doc") = "", py::arg("position") = 0, py::arg("conclusion") = "",
           py::arg("stance") = "", py::arg("hint") = false)
      .def("merge", [](HiArg& s) { return s.merge().nodes_eliminated; })
      .def_property_readonly("merged", &HiArg::merged)
      .def_property_readonly("node_count", [](const HiArg& s) { return s.nodes().size(); })
      .def_property_readonly("edge_count", [](const HiArg& s) { return s.edges().size(); })
      .def_property_readonly("top_count", [](const HiArg& s) { return s.tops().size(); })
      .def_property_readonly("sentence_ids", &HiArg::sentence_order)
      .def("sentence_graph",
           [](const HiArg& s, const std::string& id) { return graph_to_dict(s.sentence_graph(id)); })
      .def("stats", [](const HiArg& s) {
        SimpleTokenizer tok;
        return summary(s.stats(&tok).to_text());
      })
      .def("candidates",
           [](const HiArg& s, const std::string& anchor, std::size_t min_gap,
              std::size_t degree_cap) {
             auto g = build_sn_graph(s, degree_cap);
             std::vector<std::pair<std::string, double>> out;
             for (const auto& c : candidate_pairs(s, g, anchor, {min_gap, false})) {
               out.push_back({c.relative, c.similarity});
             }
             return out;
           },
           py::arg("anchor"), py::arg("min_gap") = kDefaultMinGap,
           py::arg("degree_cap") = kDefaultDegreeCap)
      .def("save", [](const HiArg& s, const std::string& path) { s.save(path); })
      .def_static("load", [](const std::string& path) { return HiArg::load(path); })
      .def("__eq__", [](const HiArg& a, const HiArg& b) { return a == b; });

  m.def("sample_relatives",
        [](const std::vector<std::pair<std::string, double>>& candidates, std::size_t k,
           std::uint64_t seed) {
          std::vector<RelativeCandidate> c;
          for (const auto& [id, sim] : candidates) c.push_back({"", id, sim});
          return sample_relatives(c, k, seed);
        },
        py::arg("candidates"), py::arg("k"), py::arg("seed"));

  m.def("format_config",
        [](const std::string& text, const py::kwargs& kw) {
          return format_config(make_config(text, kw));
        },
        py::arg("text") = "");
  m.def("extract",
        [](const std::string& corpus, const std::string& manifest, const std::string& rejections,
           const std::string& config, const py::kwargs& kw) {
          auto c = make_config(config, kw);
          py::gil_scoped_release release;
          return cmd_extract(corpus, manifest, rejections, c).to_text();
        },
        py::arg("corpus"), py::arg("manifest"), py::arg("rejections") = "",
        py::arg("config") = "");
  m.def("build",
        [](const std::string& manifest, const std::string& graphs, const std::string& store,
           const std::string& config, const py::kwargs& kw) {
          auto c = make_config(config, kw);
          py::gil_scoped_release release;
          return cmd_build(manifest, graphs, store, c).to_text();
        },
        py::arg("manifest"), py::arg("graphs"), py::arg("store"), py::arg("config") = "");
  m.def("relatives",
        [](const std::string& store, const std::string& out, const std::string& config,
           const py::kwargs& kw) {
          auto c = make_config(config, kw);
          py::gil_scoped_release release;
          return cmd_relatives(store, out, c).to_text();
        },
        py::arg("store"), py::arg("out"), py::arg("config") = "");
  m.def("samples",
        [](const std::string& store, const std::string& assignments, const std::string& out_dir,
           const std::string& config, const py::kwargs& kw) {
          auto c = make_config(config, kw);
          py::gil_scoped_release release;
          return cmd_samples(store, assignments, out_dir, c).to_text();
        },
        py::arg("store"), py::arg("assignments"), py::arg("out_dir"), py::arg("config") = "");
  m.def("run_all",
        [](const std::string& corpus, const std::string& graphs, const std::string& out_dir,
           const std::string& config, const py::kwargs& kw) {
          auto c = make_config(config, kw);
          std::string text;
          {
            py::gil_scoped_release release;
            auto s = run_all(corpus, graphs, out_dir, c);
            text = s.extract.to_text() + s.build.to_text() + s.relatives.to_text() +
                   s.samples.to_text();
          }
          return text;
        },
        py::arg("corpus"), py::arg("graphs"), py::arg("out_dir"), py::arg("config") = "");
  m.def("validate_path", [](const std::string& path) { return cmd_validate(path); },
        py::arg("path"));
  m.def("store_stats", [](const std::string& path) { return cmd_stats(path); }, py::arg("path"));

  m.def("shard_records",
        [](const std::string& path) {
          std::vector<std::string> out;
          for (const auto& s : load_samples(path)) out.push_back(sample_to_json(s));
          return out;
        },
        py::arg("path"), "Validated records of a shard file as JSON text.");
  m.def("validate_record",
        [](const std::string& line) { return validate_sample(sample_from_json(line)); },
        py::arg("line"));
}
