#pragma once

// The merged hierarchical argumentation graph: shared semantic nodes and
// edges, top nodes with their sentences, and the inter-argument layer.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hiarg/amr.hpp"
#include "hiarg/tokenizer.hpp"

namespace hiarg {

using NodeId = std::uint32_t;

enum class Stance : std::uint8_t { kNone, kPro, kCon };

std::string_view to_string(Stance stance);
Stance stance_from_string(std::string_view s);

struct SentenceRecord {
  std::string id;
  std::string text;
  std::string doc_id;
  std::string conclusion_id;
  Stance stance = Stance::kNone;
  std::uint32_t position = 0;
  bool is_hint = false;
  NodeId top = 0;
  AlignmentMap<NodeId> alignment;

  bool operator==(const SentenceRecord&) const = default;
};

struct StoreEdge {
  NodeId src = 0;
  std::string label;
  NodeId dst = 0;

  auto operator<=>(const StoreEdge&) const = default;
};

enum class Relation : std::uint8_t { kSupport, kAttack };

std::string_view to_string(Relation relation);
Relation relation_from_string(std::string_view s);

struct InterArgEdge {
  NodeId src = 0;
  NodeId dst = 0;
  Relation relation = Relation::kSupport;
  std::string provenance;

  bool operator==(const InterArgEdge&) const = default;
};

enum class NodeRole : std::uint8_t { kSemantic, kLink, kRoot };

struct AdaptedNode {
  NodeRole role = NodeRole::kSemantic;
  NodeAttr attr;
  NodeId store_id = 0;  // meaningful for semantic nodes only

  bool operator==(const AdaptedNode&) const = default;
};

struct AdaptedEdge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  std::string label;
  bool reversed = false;
  bool structural = false;

  bool operator==(const AdaptedEdge&) const = default;
};

inline constexpr std::string_view kSentenceLabel = ":snt";
inline constexpr std::string_view kRootText = "<root>";
inline constexpr std::string_view kLinkText = "<link>";

// Sub-graph handed to a model: node 0 is the root R, nodes 1..n are the link
// nodes S_1..S_n in sentence order, semantic nodes follow in store-id order.
// Edge 2k is an original edge and edge 2k+1 its reversed companion.
struct AdaptedSubgraph {
  std::vector<AdaptedNode> nodes;
  std::vector<AdaptedEdge> edges;
  std::vector<std::uint32_t> link_order;
  std::vector<std::string> sentence_ids;

  std::size_t semantic_node_count() const;
  bool operator==(const AdaptedSubgraph&) const = default;
};

struct MergeReport {
  std::size_t nodes_eliminated = 0;
  std::size_t iterations = 0;
};

struct StoreStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t tops = 0;

  // `key: value` lines.
  std::string to_text() const;
  bool operator==(const StoreStats&) const = default;
};

class HiArg {
 public:
  static constexpr int kFormatVersion = 1;

  // Inserts the graph under fresh ids and registers the sentence under the
  // graph root. `alignment` is keyed by the graph's local node ids; the
  // record's `top` and `alignment` fields are filled in here.
  // Throws InvalidGraph or DuplicateId.
  NodeId add_sentence(SentenceRecord record, const AmrGraph& graph,
                      const Alignment& alignment = {});

  // Merges directly isomorphic nodes until none remain.
  MergeReport merge();

  NodeId add_proxy(std::vector<NodeId> members);
  std::size_t add_inter_edge(NodeId src, NodeId dst, Relation relation,
                             std::string provenance);

  AdaptedSubgraph adapt_subgraph(std::span<const std::string> sentence_ids) const;

  StoreStats stats(const Tokenizer* tokenizer = nullptr) const;

  // Descendants of `top` (inclusive), ascending.
  std::vector<NodeId> descendants(NodeId top) const;
  // The descendant sub-graph of a sentence's top node as an AmrGraph whose
  // node ids are `n<global id>`.
  AmrGraph sentence_graph(const std::string& sentence_id) const;

  const SentenceRecord& sentence(const std::string& id) const;
  const SentenceRecord* find_sentence(const std::string& id) const;
  // Sentence ids in insertion order.
  const std::vector<std::string>& sentence_order() const { return order_; }

  const std::map<NodeId, NodeAttr>& nodes() const { return nodes_; }
  const std::set<StoreEdge>& edges() const { return edges_; }
  const std::map<NodeId, std::vector<std::string>>& tops() const { return tops_; }
  const std::map<NodeId, std::vector<NodeId>>& proxies() const { return proxies_; }
  const std::vector<InterArgEdge>& inter_edges() const { return inter_edges_; }
  bool merged() const { return merged_; }

  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static HiArg load(std::istream& in);
  static HiArg load(const std::string& path);

  bool operator==(const HiArg&) const = default;

 private:
  std::vector<std::pair<std::string, NodeId>> children(NodeId node) const;

  std::map<NodeId, NodeAttr> nodes_;
  std::set<StoreEdge> edges_;
  std::map<NodeId, std::vector<std::string>> tops_;
  std::map<std::string, SentenceRecord> sentences_;
  std::vector<std::string> order_;
  std::map<std::string, std::size_t> order_index_;
  std::vector<InterArgEdge> inter_edges_;
  std::map<NodeId, std::vector<NodeId>> proxies_;
  NodeId next_id_ = 0;
  bool merged_ = true;
};

}  // namespace hiarg
