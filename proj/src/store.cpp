#include "hiarg/store.hpp"

#include <algorithm>
#include <unordered_map>

#include "hiarg/error.hpp"

namespace hiarg {

std::string_view to_string(Stance stance) {
  switch (stance) {
    case Stance::kPro:
      return "pro";
    case Stance::kCon:
      return "con";
    case Stance::kNone:
      return "none";
  }
  return "none";
}

Stance stance_from_string(std::string_view s) {
  if (s == "pro" || s == "PRO") return Stance::kPro;
  if (s == "con" || s == "CON") return Stance::kCon;
  if (s == "none" || s.empty()) return Stance::kNone;
  throw Error("unknown stance '" + std::string(s) + "'");
}

std::string_view to_string(Relation relation) {
  return relation == Relation::kSupport ? "support" : "attack";
}

Relation relation_from_string(std::string_view s) {
  if (s == "support") return Relation::kSupport;
  if (s == "attack") return Relation::kAttack;
  throw Error("unknown relation '" + std::string(s) + "'");
}

std::size_t AdaptedSubgraph::semantic_node_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const AdaptedNode& n) {
        return n.role == NodeRole::kSemantic;
      }));
}

std::string StoreStats::to_text() const {
  return "sentences: " + std::to_string(sentences) + "\n" +
         "tokens: " + std::to_string(tokens) + "\n" +
         "nodes: " + std::to_string(nodes) + "\n" +
         "edges: " + std::to_string(edges) + "\n" +
         "tops: " + std::to_string(tops) + "\n";
}

NodeId HiArg::add_sentence(SentenceRecord record, const AmrGraph& graph,
                           const Alignment& alignment) {
  if (sentences_.count(record.id)) {
    throw DuplicateId("duplicate sentence id " + record.id);
  }
  auto report = validate(graph);
  if (!report.ok()) {
    throw InvalidGraph("sentence " + record.id + ": " +
                       report.violations.front().message);
  }

  std::unordered_map<std::string, NodeId> local;
  for (const auto& node : graph.nodes) {
    NodeId id = next_id_++;
    local.emplace(node.id, id);
    nodes_.emplace(id, node.attr);
  }
  for (const auto& e : graph.edges) {
    edges_.insert({local.at(e.src), e.label, local.at(e.dst)});
  }

  record.top = local.at(graph.root);
  record.alignment.clear();
  for (const auto& [node, spans] : alignment) {
    auto it = local.find(node);
    if (it == local.end()) {
      throw InvalidGraph("sentence " + record.id +
                         ": alignment names unknown node " + node);
    }
    auto& dst = record.alignment[it->second];
    dst.insert(dst.end(), spans.begin(), spans.end());
    dst = normalize_spans(std::move(dst));
  }

  tops_[record.top].push_back(record.id);
  order_index_.emplace(record.id, order_.size());
  order_.push_back(record.id);
  NodeId top = record.top;
  sentences_.emplace(record.id, std::move(record));
  merged_ = false;
  return top;
}

std::vector<std::pair<std::string, NodeId>> HiArg::children(NodeId node) const {
  std::vector<std::pair<std::string, NodeId>> out;
  for (auto it = edges_.lower_bound(StoreEdge{node, "", 0});
       it != edges_.end() && it->src == node; ++it) {
    out.emplace_back(it->label, it->dst);
  }
  return out;
}

MergeReport HiArg::merge() {
  MergeReport report;
  // Child lists of alive nodes.
  std::map<NodeId, std::vector<std::pair<std::string, NodeId>>> kids;
  for (const auto& [id, attr] : nodes_) kids[id];
  for (const auto& e : edges_) kids[e.src].emplace_back(e.label, e.dst);

  // Height = longest path to a leaf. Directly isomorphic nodes always share a
  // height, so sweeping heights bottom-up reaches the fixpoint in one pass.
  std::map<NodeId, std::size_t> height;
  {
    std::vector<std::pair<NodeId, bool>> stack;
    for (const auto& [id, _] : nodes_) {
      if (height.count(id)) continue;
      stack.push_back({id, false});
      while (!stack.empty()) {
        auto [u, expanded] = stack.back();
        stack.pop_back();
        if (height.count(u)) continue;
        if (expanded) {
          std::size_t h = 0;
          for (const auto& [label, v] : kids[u]) h = std::max(h, height.at(v) + 1);
          height[u] = h;
          continue;
        }
        stack.push_back({u, true});
        for (const auto& [label, v] : kids[u]) {
          if (!height.count(v)) stack.push_back({v, false});
        }
      }
    }
  }
  std::map<std::size_t, std::vector<NodeId>> levels;
  for (const auto& [id, h] : height) levels[h].push_back(id);

  using Signature = std::pair<NodeAttr, std::vector<std::pair<std::string, NodeId>>>;
  std::map<NodeId, NodeId> rep;
  auto resolve = [&](NodeId id) {
    auto it = rep.find(id);
    return it == rep.end() ? id : it->second;
  };

  // One sweep, then a confirming sweep that must find nothing.
  for (int pass = 0; pass < 2; ++pass) {
    ++report.iterations;
    std::size_t merged_now = 0;
    for (const auto& [h, ids] : levels) {
      std::map<Signature, NodeId> seen;
      for (NodeId id : ids) {
        if (rep.count(id)) continue;
        Signature sig{nodes_.at(id), {}};
        for (const auto& [label, v] : kids[id]) {
          sig.second.emplace_back(label, resolve(v));
        }
        std::sort(sig.second.begin(), sig.second.end());
        sig.second.erase(std::unique(sig.second.begin(), sig.second.end()),
                         sig.second.end());
        auto [it, inserted] = seen.emplace(std::move(sig), id);
        if (!inserted) {
          rep[id] = it->second;
          ++merged_now;
        }
      }
    }
    report.nodes_eliminated += merged_now;
    if (merged_now == 0) break;
  }

  if (!rep.empty()) {
    for (const auto& [from, to] : rep) nodes_.erase(from);

    std::set<StoreEdge> edges;
    for (const auto& e : edges_) {
      edges.insert({resolve(e.src), e.label, resolve(e.dst)});
    }
    edges_ = std::move(edges);

    std::map<NodeId, std::vector<std::string>> tops;
    for (auto& [top, ids] : tops_) {
      auto& dst = tops[resolve(top)];
      dst.insert(dst.end(), ids.begin(), ids.end());
    }
    for (auto& [top, ids] : tops) {
      std::sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) {
        return order_index_.at(a) < order_index_.at(b);
      });
    }
    tops_ = std::move(tops);

    for (auto& [id, rec] : sentences_) {
      rec.top = resolve(rec.top);
      AlignmentMap<NodeId> alignment;
      for (auto& [node, spans] : rec.alignment) {
        auto& dst = alignment[resolve(node)];
        dst.insert(dst.end(), spans.begin(), spans.end());
      }
      for (auto& [node, spans] : alignment) spans = normalize_spans(std::move(spans));
      rec.alignment = std::move(alignment);
    }
    for (auto& e : inter_edges_) {
      e.src = resolve(e.src);
      e.dst = resolve(e.dst);
    }
    for (auto& [proxy, members] : proxies_) {
      for (auto& m : members) m = resolve(m);
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
    }
  }
  merged_ = true;
  return report;
}

NodeId HiArg::add_proxy(std::vector<NodeId> members) {
  for (NodeId m : members) {
    if (!tops_.count(m) && !proxies_.count(m)) {
      throw UnknownId("proxy member " + std::to_string(m) +
                      " is not a top or proxy node");
    }
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  NodeId id = next_id_++;
  proxies_.emplace(id, std::move(members));
  return id;
}

std::size_t HiArg::add_inter_edge(NodeId src, NodeId dst, Relation relation,
                                  std::string provenance) {
  for (NodeId end : {src, dst}) {
    if (!tops_.count(end) && !proxies_.count(end)) {
      throw UnknownId("inter-arg endpoint " + std::to_string(end) +
                      " is not a top or proxy node");
    }
  }
  inter_edges_.push_back({src, dst, relation, std::move(provenance)});
  return inter_edges_.size() - 1;
}

std::vector<NodeId> HiArg::descendants(NodeId top) const {
  std::set<NodeId> seen{top};
  std::vector<NodeId> stack{top};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (auto it = edges_.lower_bound(StoreEdge{u, "", 0});
         it != edges_.end() && it->src == u; ++it) {
      if (seen.insert(it->dst).second) stack.push_back(it->dst);
    }
  }
  return {seen.begin(), seen.end()};
}

const SentenceRecord* HiArg::find_sentence(const std::string& id) const {
  auto it = sentences_.find(id);
  return it == sentences_.end() ? nullptr : &it->second;
}

const SentenceRecord& HiArg::sentence(const std::string& id) const {
  const auto* rec = find_sentence(id);
  if (rec == nullptr) throw UnknownId("unknown sentence id " + id);
  return *rec;
}

AmrGraph HiArg::sentence_graph(const std::string& sentence_id) const {
  const auto& rec = sentence(sentence_id);
  auto name = [](NodeId id) { return "n" + std::to_string(id); };
  AmrGraph g;
  g.root = name(rec.top);
  for (NodeId id : descendants(rec.top)) {
    g.nodes.push_back({name(id), nodes_.at(id)});
    for (const auto& [label, child] : children(id)) {
      g.edges.push_back({name(id), name(child), label});
    }
  }
  return g;
}

AdaptedSubgraph HiArg::adapt_subgraph(
    std::span<const std::string> sentence_ids) const {
  AdaptedSubgraph sub;
  std::vector<NodeId> tops;
  for (const auto& id : sentence_ids) tops.push_back(sentence(id).top);

  const auto n = static_cast<std::uint32_t>(sentence_ids.size());
  sub.nodes.push_back({NodeRole::kRoot, concept_attr(std::string(kRootText)), 0});
  for (std::uint32_t i = 0; i < n; ++i) {
    sub.nodes.push_back({NodeRole::kLink, concept_attr(std::string(kLinkText)), 0});
    sub.link_order.push_back(i + 1);
    sub.sentence_ids.push_back(sentence_ids[i]);
  }

  std::set<NodeId> semantic;
  for (NodeId top : tops) {
    auto d = descendants(top);
    semantic.insert(d.begin(), d.end());
  }
  std::map<NodeId, std::uint32_t> index;
  for (NodeId id : semantic) {
    index.emplace(id, static_cast<std::uint32_t>(sub.nodes.size()));
    sub.nodes.push_back({NodeRole::kSemantic, nodes_.at(id), id});
  }

  auto add_pair = [&](std::uint32_t src, std::uint32_t dst,
                      const std::string& label, bool structural) {
    sub.edges.push_back({src, dst, label, false, structural});
    sub.edges.push_back({dst, src, invert_label(label), true, structural});
  };
  const std::string snt(kSentenceLabel);
  for (std::uint32_t i = 0; i < n; ++i) add_pair(0, i + 1, snt, true);
  for (std::uint32_t i = 0; i < n; ++i) {
    add_pair(i + 1, index.at(tops[i]), snt, true);
  }
  for (NodeId id : semantic) {
    for (const auto& [label, child] : children(id)) {
      add_pair(index.at(id), index.at(child), label, false);
    }
  }
  return sub;
}

StoreStats HiArg::stats(const Tokenizer* tokenizer) const {
  StoreStats s;
  s.sentences = sentences_.size();
  s.nodes = nodes_.size();
  s.edges = edges_.size();
  s.tops = tops_.size();
  if (tokenizer != nullptr) {
    for (const auto& [id, rec] : sentences_) {
      s.tokens += tokenizer->tokenize(rec.text).size();
    }
  }
  return s;
}

}  // namespace hiarg
