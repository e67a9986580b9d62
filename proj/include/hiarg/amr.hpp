#pragma once

// Single-sentence AMR graphs: data model, Penman I/O, edge inversion and
// structural validation.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hiarg {

enum class NodeKind : std::uint8_t { kConcept, kFrameset, kConstant };

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view s);

struct NodeAttr {
  NodeKind kind = NodeKind::kConcept;
  std::string text;

  auto operator<=>(const NodeAttr&) const = default;
};

// Builds the attribute for a concept slot, classifying `kill-01` style
// PropBank senses as framesets.
NodeAttr concept_attr(std::string text);
NodeAttr constant_attr(std::string text);

// word(-word)*-NN
bool is_frameset_text(std::string_view text);

struct AmrNode {
  std::string id;
  NodeAttr attr;

  bool operator==(const AmrNode&) const = default;
};

struct AmrEdge {
  std::string src;
  std::string dst;
  std::string label;

  auto operator<=>(const AmrEdge&) const = default;
};

struct AmrGraph {
  std::vector<AmrNode> nodes;
  std::vector<AmrEdge> edges;
  std::string root;

  const AmrNode* find(std::string_view id) const;
  bool operator==(const AmrGraph&) const = default;
};

// Half-open token range [start, end) into a sentence's token sequence.
struct TokenSpan {
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  auto operator<=>(const TokenSpan&) const = default;
};

template <typename Key>
using AlignmentMap = std::map<Key, std::vector<TokenSpan>>;

// Node id -> token spans. Spans per node are sorted and disjoint.
using Alignment = AlignmentMap<std::string>;

// Sorts spans and fuses overlapping ones.
std::vector<TokenSpan> normalize_spans(std::vector<TokenSpan> spans);

// Parses the `# ::alignments` payload: space-separated `nodeid:start-end`.
Alignment parse_alignment(std::string_view text);
std::string format_alignment(const Alignment& alignment);

// Empty string when valid; otherwise a description of the first problem.
std::string check_alignment(const Alignment& alignment, const AmrGraph& graph,
                            std::size_t token_count);

// Penman text -> graph. Variables become nodes keyed by their variable name;
// constants become nodes keyed `<parent var>.<n>` where n is the 1-based
// position of the role among the parent's roles. Throws ParseError.
AmrGraph parse_penman(std::string_view text);

// Deterministic serialization. Variables are named by concept initial plus
// depth-first visit index; children are ordered by (label, child signature).
// Throws InvalidGraph if the graph is not admissible or a constant node is
// shared.
std::string serialize_penman(const AmrGraph& graph);

AmrEdge invert_edge(const AmrEdge& edge);
std::string invert_label(std::string_view label);
bool is_inverse_label(std::string_view label);

struct Violation {
  enum class Kind {
    kEmptyGraph,
    kMissingRoot,
    kDuplicateNode,
    kDanglingEdge,
    kCycle,
    kUnreachable,
    kBadLabel,
    kBadAttr,
  };
  Kind kind;
  std::string message;
  // Witness: cycle path (first node repeated at the end) or offending ids.
  std::vector<std::string> nodes;
};

std::string_view to_string(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
};

ValidationReport validate(const AmrGraph& graph);

// Optional pass: inverts `-of` edges back to their active form where doing so
// keeps every node reachable from the root and keeps the graph acyclic.
// Returns the number of edges inverted.
std::size_t normalize_orientation(AmrGraph& graph);

// One block of a Penman file.
struct PenmanBlock {
  std::string id;
  std::string sentence;
  std::optional<std::string> alignments;
  std::string graph_text;
  std::map<std::string, std::string> metadata;
  std::size_t line = 0;  // 1-based line where the block starts
};

// Splits a stream into blank-line separated blocks, collecting `# ::key value`
// headers. Graph text is not parsed here.
std::vector<PenmanBlock> read_penman_blocks(std::istream& in);
std::string format_penman_block(const PenmanBlock& block);

}  // namespace hiarg
