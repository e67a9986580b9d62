#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hiarg/error.hpp"
#include "hiarg/factory.hpp"

namespace hiarg {

using ojson = nlohmann::ordered_json;

namespace {

std::string node_kind_name(const AdaptedNode& node) {
  switch (node.role) {
    case NodeRole::kRoot:
      return "root";
    case NodeRole::kLink:
      return "link";
    case NodeRole::kSemantic:
      break;
  }
  return std::string(to_string(node.attr.kind));
}

AdaptedNode node_from(std::string_view kind, std::string text, NodeId store_id) {
  if (kind == "root") return {NodeRole::kRoot, concept_attr(std::move(text)), 0};
  if (kind == "link") return {NodeRole::kLink, concept_attr(std::move(text)), 0};
  return {NodeRole::kSemantic, NodeAttr{node_kind_from_string(kind), std::move(text)},
          store_id};
}

bool is_semantic(const TrainingSample& s, std::uint32_t node) {
  return node < s.graph.nodes.size() && s.graph.nodes[node].role == NodeRole::kSemantic;
}

}  // namespace

std::vector<std::string> validate_sample(const TrainingSample& s,
                                         std::string_view separator,
                                         std::string_view pad) {
  std::vector<std::string> f;
  auto fail = [&](std::string msg) { f.push_back(std::move(msg)); };
  const auto& g = s.graph;

  // Tokens and layout.
  if (s.tokens.size() != s.budget) {
    fail("token count " + std::to_string(s.tokens.size()) + " differs from budget " +
         std::to_string(s.budget));
  }
  if (s.content_length > s.tokens.size()) {
    fail("content length exceeds token count");
    return f;
  }
  for (std::size_t i = s.content_length; i < s.tokens.size(); ++i) {
    if (s.tokens[i] != pad) {
      fail("non-pad token after content at " + std::to_string(i));
      break;
    }
  }
  std::vector<bool> covered(s.content_length, false);
  for (std::size_t i = 0; i < s.sentences.size(); ++i) {
    const auto& sent = s.sentences[i];
    const auto tag = "sentence " + std::to_string(i);
    if (sent.start >= sent.end || sent.end > s.content_length) {
      fail(tag + " has a bad span");
      continue;
    }
    if (i > 0 && sent.start < s.sentences[i - 1].end) fail(tag + " overlaps its predecessor");
    if (sent.doc >= s.docs.size()) fail(tag + " refers to a missing document");
    for (auto t = sent.start; t < sent.end; ++t) covered[t] = true;
    if (sent.relative_of < 0) continue;
    if (s.kind == SampleKind::kPlain) fail(tag + " is a relative in a plain sample");
    const auto a = static_cast<std::size_t>(sent.relative_of);
    if (a >= i || s.sentences[a].relative_of >= 0) {
      fail(tag + " has an invalid anchor");
      continue;
    }
    if (s.sentences[a].doc != sent.doc) fail(tag + " is not linked to its anchor's document");
    if (sent.doc < s.docs.size()) {
      if (sent.start < s.docs[sent.doc].end) fail(tag + " precedes the end of its document");
      if (sent.doc + 1 < s.docs.size() && sent.end >= s.docs[sent.doc + 1].start) {
        fail(tag + " is not placed before the next document");
      }
    }
  }
  for (std::size_t d = 0; d < s.docs.size(); ++d) {
    const auto& doc = s.docs[d];
    if (doc.start >= doc.end || doc.end > s.content_length) {
      fail("document " + std::to_string(d) + " has a bad span");
      continue;
    }
    if (d > 0 && (doc.start == 0 || s.tokens[doc.start - 1] != separator)) {
      fail("document " + std::to_string(d) + " is not preceded by a separator");
    }
  }
  for (std::uint32_t t = 0; t < s.content_length; ++t) {
    if (!covered[t] && s.tokens[t] != separator) {
      fail("token " + std::to_string(t) + " belongs to no sentence");
      break;
    }
  }

  // Graph.
  const auto n = s.sentences.size();
  if (g.nodes.empty() || g.nodes[0].role != NodeRole::kRoot) fail("node 0 is not the root");
  if (g.link_order.size() != n || g.sentence_ids.size() != n) {
    fail("link node count differs from sentence count");
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto l = g.link_order[i];
      if (l >= g.nodes.size() || g.nodes[l].role != NodeRole::kLink) {
        fail("link order entry " + std::to_string(i) + " is not a link node");
      }
      if (g.sentence_ids[i] != s.sentences[i].id) fail("graph sentence order mismatch");
    }
  }
  if (g.edges.size() % 2 != 0) fail("odd edge count");
  for (std::size_t e = 0; e + 1 < g.edges.size(); e += 2) {
    const auto& a = g.edges[e];
    const auto& b = g.edges[e + 1];
    if (a.src >= g.nodes.size() || a.dst >= g.nodes.size()) {
      fail("edge " + std::to_string(e) + " has an unknown endpoint");
      continue;
    }
    if (a.reversed || !b.reversed || b.src != a.dst || b.dst != a.src ||
        b.label != invert_label(a.label) || a.structural != b.structural) {
      fail("edge " + std::to_string(e + 1) + " is not the companion of edge " +
           std::to_string(e));
    }
  }
  for (const auto& span : s.alignments) {
    if (!is_semantic(s, span.node) || span.start >= span.end ||
        span.end > s.content_length) {
      fail("bad alignment span");
      break;
    }
  }

  // Masks.
  std::set<std::uint32_t> mlm;
  for (const auto& m : s.masks.mlm) {
    if (m.pos >= s.content_length || s.tokens[m.pos] == separator) {
      fail("MLM position " + std::to_string(m.pos) + " is not maskable");
      continue;
    }
    if (!mlm.insert(m.pos).second) fail("duplicate MLM position " + std::to_string(m.pos));
    if (s.tokens[m.pos] != m.original) fail("MLM target differs at " + std::to_string(m.pos));
  }
  std::set<std::uint32_t> hidden;
  std::set<std::uint32_t> seen;
  for (const auto& m : s.masks.mnm) {
    if (!is_semantic(s, m.node)) {
      fail("MNM target " + std::to_string(m.node) + " is not a semantic node");
      continue;
    }
    if (!seen.insert(m.node).second) fail("duplicate MNM node " + std::to_string(m.node));
    if (g.nodes[m.node].attr != m.original) fail("MNM target differs at node " + std::to_string(m.node));
    hidden.insert(m.node);
  }
  seen.clear();
  for (const auto& m : s.masks.mem) {
    if (m.edge >= g.edges.size() || g.edges[m.edge].reversed || g.edges[m.edge].structural) {
      fail("MEM target " + std::to_string(m.edge) + " is not a semantic edge");
      continue;
    }
    if (!seen.insert(m.edge).second) fail("duplicate MEM edge " + std::to_string(m.edge));
    if (g.edges[m.edge].label != m.original) fail("MEM target differs at edge " + std::to_string(m.edge));
    hidden.insert(g.edges[m.edge].src);
    hidden.insert(g.edges[m.edge].dst);
  }
  for (const auto& span : s.alignments) {
    if (!hidden.count(span.node)) continue;
    for (auto t = span.start; t < span.end && t < s.content_length; ++t) {
      if (!mlm.count(t)) {
        fail("leak: token " + std::to_string(t) + " aligned to hidden node " +
             std::to_string(span.node) + " is unmasked");
      }
    }
  }

  // GCL.
  std::vector<std::uint32_t> semantic;
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].role == NodeRole::kSemantic) semantic.push_back(i);
  }
  if (s.gcl.size() != semantic.size()) {
    fail("GCL label count differs from semantic node count");
  } else {
    std::multiset<NodeAttr> before;
    std::multiset<NodeAttr> after;
    std::size_t permuted = 0;
    for (std::size_t i = 0; i < semantic.size(); ++i) {
      const auto& l = s.gcl[i];
      if (l.node != semantic[i]) {
        fail("GCL labels out of node order");
        break;
      }
      if (l.permuted != l.permuted_attr.has_value()) {
        fail("GCL label of node " + std::to_string(l.node) + " is inconsistent");
        continue;
      }
      if (!l.permuted) continue;
      ++permuted;
      if (*l.permuted_attr == g.nodes[l.node].attr) {
        fail("GCL node " + std::to_string(l.node) + " keeps its attribute");
      }
      before.insert(g.nodes[l.node].attr);
      after.insert(*l.permuted_attr);
    }
    if (permuted == 1) fail("GCL permutes a single node");
    if (before != after) fail("GCL attributes are not a permutation");
  }

  // TOP, DIR, RSD.
  const std::size_t expected_top = g.link_order.size() > 1 ? g.link_order.size() - 1 : 0;
  if (s.top.size() != expected_top) {
    fail("TOP pair count differs from link count - 1");
  } else {
    for (std::size_t i = 0; i < s.top.size(); ++i) {
      if (s.top[i].first != g.link_order[i] || s.top[i].second != g.link_order[i + 1]) {
        fail("TOP pair " + std::to_string(i) + " is not consecutive");
      }
    }
  }
  if (s.dir.size() != g.edges.size()) {
    fail("DIR label count differs from edge count");
  } else {
    for (std::uint32_t e = 0; e < s.dir.size(); ++e) {
      if (s.dir[e].edge != e || s.dir[e].reversed != g.edges[e].reversed) {
        fail("DIR label " + std::to_string(e) + " is wrong");
      }
    }
  }
  std::vector<std::uint32_t> relatives;
  for (std::uint32_t i = 0; i < s.sentences.size(); ++i) {
    if (s.sentences[i].relative_of >= 0) relatives.push_back(i);
  }
  if (s.kind == SampleKind::kPlain && !s.rsd.empty()) fail("plain sample carries RSD labels");
  if (s.kind == SampleKind::kAugmented) {
    if (s.rsd.size() != relatives.size()) {
      fail("RSD label count differs from relative count");
    } else {
      for (std::size_t i = 0; i < relatives.size(); ++i) {
        if (s.rsd[i].relative != relatives[i] ||
            s.rsd[i].doc != s.sentences[relatives[i]].doc) {
          fail("RSD label " + std::to_string(i) + " does not match its relative");
        }
      }
    }
  }
  return f;
}

std::string sample_to_json(const TrainingSample& s) {
  ojson j;
  j["kind"] = to_string(s.kind);
  j["seed"] = s.seed;
  j["budget"] = s.budget;
  j["content_length"] = s.content_length;
  j["tokens"] = s.tokens;
  auto& sents = j["sentence_boundaries"] = ojson::array();
  for (const auto& x : s.sentences) {
    sents.push_back({{"id", x.id}, {"start", x.start}, {"end", x.end},
                     {"doc", x.doc}, {"relative_of", x.relative_of}});
  }
  auto& docs = j["doc_boundaries"] = ojson::array();
  for (const auto& d : s.docs) {
    docs.push_back({{"id", d.doc_id}, {"start", d.start}, {"end", d.end}});
  }
  auto& nodes = j["nodes"] = ojson::array();
  for (std::size_t i = 0; i < s.graph.nodes.size(); ++i) {
    const auto& n = s.graph.nodes[i];
    nodes.push_back({{"id", i}, {"attr", n.attr.text}, {"kind", node_kind_name(n)},
                     {"store_id", n.store_id}});
  }
  auto& edges = j["edges"] = ojson::array();
  for (const auto& e : s.graph.edges) {
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"label", e.label},
                     {"reversed", e.reversed}, {"structural", e.structural}});
  }
  j["link_order"] = s.graph.link_order;
  auto& al = j["alignments"] = ojson::array();
  for (const auto& a : s.alignments) {
    al.push_back({{"node", a.node}, {"start", a.start}, {"end", a.end}});
  }
  auto& mlm = j["mlm"] = ojson::array();
  for (const auto& m : s.masks.mlm) mlm.push_back({{"pos", m.pos}, {"original", m.original}});
  auto& mnm = j["mnm"] = ojson::array();
  for (const auto& m : s.masks.mnm) {
    mnm.push_back({{"node", m.node}, {"original", m.original.text},
                   {"kind", to_string(m.original.kind)}});
  }
  auto& mem = j["mem"] = ojson::array();
  for (const auto& m : s.masks.mem) mem.push_back({{"edge", m.edge}, {"original", m.original}});
  auto& gcl = j["gcl"] = ojson::array();
  for (const auto& l : s.gcl) {
    ojson x = {{"node", l.node}, {"label", l.permuted ? "permuted" : "original"}};
    if (l.permuted_attr) {
      x["permuted_attr"] = l.permuted_attr->text;
      x["permuted_kind"] = to_string(l.permuted_attr->kind);
    }
    gcl.push_back(std::move(x));
  }
  auto& top = j["top"] = ojson::array();
  for (const auto& t : s.top) top.push_back({{"first", t.first}, {"second", t.second}});
  auto& dir = j["dir"] = ojson::array();
  for (const auto& d : s.dir) {
    dir.push_back({{"edge", d.edge}, {"label", d.reversed ? "reversed" : "original"}});
  }
  auto& rsd = j["rsd"] = ojson::array();
  for (const auto& r : s.rsd) {
    rsd.push_back({{"doc", r.doc}, {"relative", r.relative}, {"label", to_string(r.label)}});
  }
  return j.dump();
}

TrainingSample sample_from_json(std::string_view line) {
  TrainingSample s;
  try {
    auto j = ojson::parse(line);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "plain") {
      s.kind = SampleKind::kPlain;
    } else if (kind == "augmented") {
      s.kind = SampleKind::kAugmented;
    } else {
      throw Error("unknown sample kind '" + kind + "'");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    s.budget = j.at("budget").get<std::size_t>();
    s.content_length = j.at("content_length").get<std::uint32_t>();
    s.tokens = j.at("tokens").get<std::vector<std::string>>();
    for (const auto& x : j.at("sentence_boundaries")) {
      s.sentences.push_back({x.at("id").get<std::string>(), x.at("start").get<std::uint32_t>(),
                             x.at("end").get<std::uint32_t>(), x.at("doc").get<std::uint32_t>(),
                             x.at("relative_of").get<std::int32_t>()});
      s.graph.sentence_ids.push_back(s.sentences.back().id);
    }
    for (const auto& x : j.at("doc_boundaries")) {
      s.docs.push_back({x.at("id").get<std::string>(), x.at("start").get<std::uint32_t>(),
                        x.at("end").get<std::uint32_t>()});
    }
    for (const auto& x : j.at("nodes")) {
      if (x.at("id").get<std::size_t>() != s.graph.nodes.size()) {
        throw Error("node ids are not consecutive");
      }
      s.graph.nodes.push_back(node_from(x.at("kind").get<std::string>(),
                                        x.at("attr").get<std::string>(),
                                        x.at("store_id").get<NodeId>()));
    }
    for (const auto& x : j.at("edges")) {
      s.graph.edges.push_back({x.at("src").get<std::uint32_t>(), x.at("dst").get<std::uint32_t>(),
                               x.at("label").get<std::string>(), x.at("reversed").get<bool>(),
                               x.at("structural").get<bool>()});
    }
    s.graph.link_order = j.at("link_order").get<std::vector<std::uint32_t>>();
    for (const auto& x : j.at("alignments")) {
      s.alignments.push_back({x.at("node").get<std::uint32_t>(), x.at("start").get<std::uint32_t>(),
                              x.at("end").get<std::uint32_t>()});
    }
    for (const auto& x : j.at("mlm")) {
      s.masks.mlm.push_back({x.at("pos").get<std::uint32_t>(), x.at("original").get<std::string>()});
    }
    for (const auto& x : j.at("mnm")) {
      s.masks.mnm.push_back({x.at("node").get<std::uint32_t>(),
                             NodeAttr{node_kind_from_string(x.at("kind").get<std::string>()),
                                      x.at("original").get<std::string>()}});
    }
    for (const auto& x : j.at("mem")) {
      s.masks.mem.push_back({x.at("edge").get<std::uint32_t>(), x.at("original").get<std::string>()});
    }
    for (const auto& x : j.at("gcl")) {
      GclLabel l{x.at("node").get<std::uint32_t>(), x.at("label").get<std::string>() == "permuted", {}};
      if (x.contains("permuted_attr")) {
        l.permuted_attr = NodeAttr{node_kind_from_string(x.at("permuted_kind").get<std::string>()),
                                   x.at("permuted_attr").get<std::string>()};
      }
      s.gcl.push_back(std::move(l));
    }
    for (const auto& x : j.at("top")) {
      s.top.push_back({x.at("first").get<std::uint32_t>(), x.at("second").get<std::uint32_t>()});
    }
    for (const auto& x : j.at("dir")) {
      s.dir.push_back({x.at("edge").get<std::uint32_t>(), x.at("label").get<std::string>() == "reversed"});
    }
    for (const auto& x : j.at("rsd")) {
      s.rsd.push_back({x.at("doc").get<std::uint32_t>(), x.at("relative").get<std::uint32_t>(),
                       stance_label_from_string(x.at("label").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed sample record: ") + e.what());
  }
  return s;
}

std::size_t emit(const std::vector<TrainingSample>& samples, std::ostream& out) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto findings = validate_sample(samples[i]);
    if (!findings.empty()) {
      throw ValidationError("sample " + std::to_string(i) + ": " + findings.front());
    }
  }
  for (const auto& s : samples) out << sample_to_json(s) << '\n';
  if (!out) throw Error("write failed");
  return samples.size();
}

std::size_t emit(const std::vector<TrainingSample>& samples, const std::string& path) {
  std::ostringstream buffer;
  auto n = emit(samples, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << buffer.str();
  if (!out) throw Error("write failed: " + path);
  return n;
}

std::vector<TrainingSample> load_samples(std::istream& in) {
  std::vector<TrainingSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(sample_from_json(line));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TrainingSample> load_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return load_samples(in);
}

}  // namespace hiarg
