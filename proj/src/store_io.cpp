// Store file format, version 1.
//
//   line 1:  hiarg-store <version> <fnv1a64 of body, 16 hex> <body lines>
//   body:    one JSON array per line, in this order
//     ["meta", next_id, merged]
//     ["node", id, kind, text]
//     ["edge", src, label, dst]
//     ["sent", id, text, doc, conclusion, stance, position, hint, top,
//              [[node, start, end], ...]]            (insertion order)
//     ["top", id, [sentence ids]]
//     ["proxy", id, [member ids]]
//     ["inter", src, dst, relation, provenance]

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hiarg/error.hpp"
#include "hiarg/rng.hpp"
#include "hiarg/store.hpp"

namespace hiarg {

namespace {

constexpr std::string_view kMagic = "hiarg-store";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void HiArg::save(std::ostream& out) const {
  using nlohmann::json;
  std::string body;
  std::size_t lines = 0;
  auto put = [&](const json& record) {
    body += record.dump();
    body += '\n';
    ++lines;
  };
  put(json::array({"meta", next_id_, merged_}));
  for (const auto& [id, attr] : nodes_) {
    put(json::array({"node", id, to_string(attr.kind), attr.text}));
  }
  for (const auto& e : edges_) put(json::array({"edge", e.src, e.label, e.dst}));
  for (const auto& sid : order_) {
    const auto& r = sentences_.at(sid);
    json spans = json::array();
    for (const auto& [node, list] : r.alignment) {
      for (const auto& s : list) spans.push_back(json::array({node, s.start, s.end}));
    }
    put(json::array({"sent", r.id, r.text, r.doc_id, r.conclusion_id,
                     to_string(r.stance), r.position, r.is_hint, r.top, spans}));
  }
  for (const auto& [top, ids] : tops_) put(json::array({"top", top, ids}));
  for (const auto& [proxy, members] : proxies_) {
    put(json::array({"proxy", proxy, members}));
  }
  for (const auto& e : inter_edges_) {
    put(json::array({"inter", e.src, e.dst, to_string(e.relation), e.provenance}));
  }
  out << kMagic << ' ' << kFormatVersion << ' ' << hex64(fnv1a64(body)) << ' '
      << lines << '\n'
      << body;
}

void HiArg::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  save(out);
  if (!out) throw Error("write failed for " + path);
}

HiArg HiArg::load(std::istream& in) {
  using nlohmann::json;
  std::string header;
  if (!std::getline(in, header)) throw CorruptFile("empty store file");
  std::istringstream hs(header);
  std::string magic, checksum;
  int version = 0;
  std::size_t lines = 0;
  if (!(hs >> magic >> version >> checksum >> lines) || magic != kMagic) {
    throw CorruptFile("not a store file");
  }
  if (version != kFormatVersion) {
    throw VersionMismatch("store format version " + std::to_string(version) +
                          ", expected " + std::to_string(kFormatVersion));
  }
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (hex64(fnv1a64(body)) != checksum) {
    throw CorruptFile("store checksum mismatch");
  }

  HiArg store;
  std::size_t count = 0;
  std::istringstream bs(body);
  std::string line;
  try {
    while (std::getline(bs, line)) {
      ++count;
      auto r = json::parse(line);
      const auto& tag = r.at(0).get_ref<const std::string&>();
      if (tag == "meta") {
        store.next_id_ = r.at(1).get<NodeId>();
        store.merged_ = r.at(2).get<bool>();
      } else if (tag == "node") {
        store.nodes_.emplace(
            r.at(1).get<NodeId>(),
            NodeAttr{node_kind_from_string(r.at(2).get<std::string>()),
                     r.at(3).get<std::string>()});
      } else if (tag == "edge") {
        store.edges_.insert({r.at(1).get<NodeId>(), r.at(2).get<std::string>(),
                             r.at(3).get<NodeId>()});
      } else if (tag == "sent") {
        SentenceRecord rec;
        rec.id = r.at(1).get<std::string>();
        rec.text = r.at(2).get<std::string>();
        rec.doc_id = r.at(3).get<std::string>();
        rec.conclusion_id = r.at(4).get<std::string>();
        rec.stance = stance_from_string(r.at(5).get<std::string>());
        rec.position = r.at(6).get<std::uint32_t>();
        rec.is_hint = r.at(7).get<bool>();
        rec.top = r.at(8).get<NodeId>();
        for (const auto& s : r.at(9)) {
          rec.alignment[s.at(0).get<NodeId>()].push_back(
              {s.at(1).get<std::uint32_t>(), s.at(2).get<std::uint32_t>()});
        }
        store.order_index_.emplace(rec.id, store.order_.size());
        store.order_.push_back(rec.id);
        store.sentences_.emplace(rec.id, std::move(rec));
      } else if (tag == "top") {
        store.tops_.emplace(r.at(1).get<NodeId>(),
                            r.at(2).get<std::vector<std::string>>());
      } else if (tag == "proxy") {
        store.proxies_.emplace(r.at(1).get<NodeId>(),
                               r.at(2).get<std::vector<NodeId>>());
      } else if (tag == "inter") {
        store.inter_edges_.push_back(
            {r.at(1).get<NodeId>(), r.at(2).get<NodeId>(),
             relation_from_string(r.at(3).get<std::string>()),
             r.at(4).get<std::string>()});
      } else {
        throw CorruptFile("unknown store record '" + tag + "'");
      }
    }
  } catch (const json::exception& e) {
    throw CorruptFile("malformed store record " + std::to_string(count) + ": " +
                      e.what());
  }
  if (count != lines) {
    throw CorruptFile("store has " + std::to_string(count) + " records, header says " +
                      std::to_string(lines));
  }
  return store;
}

HiArg HiArg::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return load(in);
}

}  // namespace hiarg
