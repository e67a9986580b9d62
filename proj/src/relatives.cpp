#include "hiarg/relatives.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "hiarg/error.hpp"
#include "hiarg/rng.hpp"
#include "hiarg/sampling.hpp"

namespace hiarg {

SentenceNodeGraph::SentenceNodeGraph(std::vector<std::string> sentence_ids,
                                     std::vector<std::vector<NodeId>> adjacency,
                                     std::size_t degree_cap)
    : ids_(std::move(sentence_ids)),
      adjacency_(std::move(adjacency)),
      degree_cap_(degree_cap) {
  if (ids_.size() != adjacency_.size()) {
    throw Error("sentence ids and adjacency lists differ in length");
  }
  for (std::uint32_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
  for (std::uint32_t link = 0; link < adjacency_.size(); ++link) {
    auto& nodes = adjacency_[link];
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (NodeId v : nodes) inverse_[v].push_back(link);
  }
  active_degree_.resize(adjacency_.size(), 0);
  for (std::uint32_t link = 0; link < adjacency_.size(); ++link) {
    for (NodeId v : adjacency_[link]) {
      if (node_active(v)) ++active_degree_[link];
    }
  }
}

std::uint32_t SentenceNodeGraph::link_of(const std::string& sentence_id) const {
  auto it = index_.find(sentence_id);
  if (it == index_.end()) throw UnknownId("unknown sentence id " + sentence_id);
  return it->second;
}

const std::vector<std::uint32_t>& SentenceNodeGraph::adjacent_links(NodeId node) const {
  static const std::vector<std::uint32_t> kEmpty;
  auto it = inverse_.find(node);
  return it == inverse_.end() ? kEmpty : it->second;
}

bool SentenceNodeGraph::node_active(NodeId node) const {
  auto d = node_degree(node);
  return d > 0 && d <= degree_cap_;
}

SentenceNodeGraph build_sn_graph(const HiArg& store, std::size_t degree_cap) {
  std::vector<std::string> ids = store.sentence_order();
  std::vector<std::vector<NodeId>> adjacency;
  adjacency.reserve(ids.size());
  std::map<NodeId, std::vector<NodeId>> cache;  // per top node
  for (const auto& id : ids) {
    NodeId top = store.sentence(id).top;
    auto it = cache.find(top);
    if (it == cache.end()) it = cache.emplace(top, store.descendants(top)).first;
    adjacency.push_back(it->second);
  }
  return SentenceNodeGraph(std::move(ids), std::move(adjacency), degree_cap);
}

double two_hop_similarity(const SentenceNodeGraph& g, std::uint32_t a,
                          std::uint32_t b) {
  if (!g.link_active(a)) return 0.0;
  const auto& na = g.adjacent_nodes(a);
  const auto& nb = g.adjacent_nodes(b);
  const double step_a = 1.0 / static_cast<double>(g.link_degree(a));
  double sum = 0.0;
  auto i = na.begin();
  auto j = nb.begin();
  while (i != na.end() && j != nb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      if (g.node_active(*i)) {
        sum += step_a / static_cast<double>(g.node_degree(*i));
      }
      ++i;
      ++j;
    }
  }
  return sum;
}

std::vector<double> two_hop_distribution(const SentenceNodeGraph& g,
                                         std::uint32_t a) {
  std::vector<double> dist(g.link_count(), 0.0);
  if (!g.link_active(a)) return dist;
  const double step_a = 1.0 / static_cast<double>(g.link_degree(a));
  for (NodeId v : g.adjacent_nodes(a)) {
    if (!g.node_active(v)) continue;
    const auto& links = g.adjacent_links(v);
    const double p = step_a / static_cast<double>(links.size());
    for (auto b : links) dist[b] += p;
  }
  return dist;
}

std::vector<RelativeCandidate> candidate_pairs(const HiArg& store,
                                               const SentenceNodeGraph& g,
                                               const std::string& anchor,
                                               const CandidateOptions& options) {
  const auto& a = store.sentence(anchor);
  std::vector<RelativeCandidate> out;
  if (a.is_hint) return out;
  const auto link = g.link_of(anchor);
  if (!g.link_active(link)) return out;
  // Sparse two-step distribution; summation order matches two_hop_distribution.
  std::map<std::uint32_t, double> reach;
  const double step = 1.0 / static_cast<double>(g.link_degree(link));
  for (NodeId v : g.adjacent_nodes(link)) {
    if (!g.node_active(v)) continue;
    const auto& links = g.adjacent_links(v);
    const double p = step / static_cast<double>(links.size());
    for (auto b : links) reach[b] += p;
  }
  for (const auto& [b, forward] : reach) {
    if (b == link) continue;
    double sim = forward;
    if (options.symmetric) sim = 0.5 * (sim + two_hop_similarity(g, b, link));
    if (sim <= 0.0) continue;
    const auto& r = store.sentence(g.sentence_id(b));
    if (r.top == a.top) continue;
    if (r.conclusion_id != a.conclusion_id) continue;
    if (r.doc_id == a.doc_id) {
      auto gap = r.position > a.position ? r.position - a.position
                                         : a.position - r.position;
      // At least `min_gap` sentences must lie between the two.
      if (gap <= options.min_gap) continue;
    }
    out.push_back({anchor, r.id, sim});
  }
  return out;
}

std::vector<std::string> sample_relatives(
    const std::vector<RelativeCandidate>& candidates, std::size_t k,
    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> weights;
  weights.reserve(candidates.size());
  for (const auto& c : candidates) weights.push_back(c.similarity);
  std::vector<std::string> out;
  for (auto i : weighted_sample(weights, k, rng)) out.push_back(candidates[i].relative);
  return out;
}

std::string_view to_string(StanceLabel label) {
  switch (label) {
    case StanceLabel::kSupporting:
      return "supporting";
    case StanceLabel::kAttacking:
      return "attacking";
    case StanceLabel::kNonRelevant:
      return "non-relevant";
  }
  return "non-relevant";
}

StanceLabel stance_label_from_string(std::string_view s) {
  if (s == "supporting") return StanceLabel::kSupporting;
  if (s == "attacking") return StanceLabel::kAttacking;
  if (s == "non-relevant") return StanceLabel::kNonRelevant;
  throw Error("unknown stance label '" + std::string(s) + "'");
}

StanceLabel rsd_label(const SentenceRecord& anchor, const SentenceRecord& relative) {
  if (anchor.stance == Stance::kNone || relative.stance == Stance::kNone) {
    throw Error("stance metadata missing for " +
                (anchor.stance == Stance::kNone ? anchor.id : relative.id));
  }
  if (anchor.conclusion_id != relative.conclusion_id) {
    return StanceLabel::kNonRelevant;
  }
  return anchor.stance == relative.stance ? StanceLabel::kSupporting
                                          : StanceLabel::kAttacking;
}

void write_assignments(std::ostream& out,
                       const std::vector<RelativeAssignment>& assignments) {
  for (const auto& a : assignments) {
    nlohmann::ordered_json j;
    j["anchor"] = a.anchor;
    j["relative"] = a.relative;
    j["similarity"] = a.similarity;
    j["label"] = to_string(a.label);
    out << j.dump() << '\n';
  }
}

std::vector<RelativeAssignment> read_assignments(std::istream& in) {
  std::vector<RelativeAssignment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({j.at("anchor").get<std::string>(),
                     j.at("relative").get<std::string>(),
                     j.at("similarity").get<double>(),
                     stance_label_from_string(j.at("label").get<std::string>())});
    } catch (const nlohmann::json::exception& e) {
      throw Error("assignment line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hiarg
