#pragma once

// Relative search: the bipartite sentence-node graph, two-hop random-walk
// similarity, constrained candidate generation, weighted sampling and the
// relative stance labels.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hiarg/store.hpp"

namespace hiarg {

inline constexpr std::size_t kDefaultMinGap = 31;      // L
inline constexpr std::size_t kDefaultDegreeCap = 500;  // S

// Link nodes are indexed 0..n-1 in store sentence order. Each link node is
// adjacent to every semantic node under its sentence's top node. Semantic
// nodes adjacent to more than `degree_cap` link nodes are inactive: they are
// excluded from degrees and from walks.
class SentenceNodeGraph {
 public:
  SentenceNodeGraph() = default;
  SentenceNodeGraph(std::vector<std::string> sentence_ids,
                    std::vector<std::vector<NodeId>> adjacency,
                    std::size_t degree_cap);

  std::size_t link_count() const { return adjacency_.size(); }
  std::size_t degree_cap() const { return degree_cap_; }
  const std::string& sentence_id(std::uint32_t link) const { return ids_[link]; }
  std::uint32_t link_of(const std::string& sentence_id) const;

  const std::vector<NodeId>& adjacent_nodes(std::uint32_t link) const {
    return adjacency_[link];
  }
  // Link nodes adjacent to `node`, ascending; empty if unknown.
  const std::vector<std::uint32_t>& adjacent_links(NodeId node) const;

  // Number of link nodes adjacent to `node`, regardless of the cap.
  std::size_t node_degree(NodeId node) const { return adjacent_links(node).size(); }
  bool node_active(NodeId node) const;
  // Number of active semantic nodes adjacent to `link`.
  std::size_t link_degree(std::uint32_t link) const { return active_degree_[link]; }
  bool link_active(std::uint32_t link) const { return active_degree_[link] > 0; }

 private:
  std::vector<std::string> ids_;
  std::map<std::string, std::uint32_t> index_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::map<NodeId, std::vector<std::uint32_t>> inverse_;
  std::vector<std::size_t> active_degree_;
  std::size_t degree_cap_ = kDefaultDegreeCap;
};

SentenceNodeGraph build_sn_graph(const HiArg& store,
                                 std::size_t degree_cap = kDefaultDegreeCap);

// Probability that a two-step uniform walk from link `a` ends at link `b`:
// sum over shared active nodes v of 1/deg(a) * 1/deg(v). Zero if `a` is
// inactive or nothing is shared. Directional.
double two_hop_similarity(const SentenceNodeGraph& g, std::uint32_t a,
                          std::uint32_t b);

// The full two-step end-point distribution from `a` (index = link, including
// the return to `a`). Sums to 1 for an active `a`.
std::vector<double> two_hop_distribution(const SentenceNodeGraph& g,
                                         std::uint32_t a);

struct RelativeCandidate {
  std::string anchor;
  std::string relative;
  double similarity = 0.0;

  bool operator==(const RelativeCandidate&) const = default;
};

struct CandidateOptions {
  std::size_t min_gap = kDefaultMinGap;
  // Average the two walk directions instead of walking from the anchor.
  bool symmetric = false;
};

// Candidates for `anchor` with positive similarity that
//   1. do not share the anchor's top node,
//   2. share its conclusion id,
//   3. are not within `min_gap` sentences of it in the same document,
//   4. (similarity uses active nodes only),
//   5. and the anchor is not a hint sentence.
// Ordered by link index. Throws UnknownId for an unknown anchor.
std::vector<RelativeCandidate> candidate_pairs(const HiArg& store,
                                               const SentenceNodeGraph& g,
                                               const std::string& anchor,
                                               const CandidateOptions& options = {});

// Weighted sampling without replacement, proportional to similarity.
std::vector<std::string> sample_relatives(
    const std::vector<RelativeCandidate>& candidates, std::size_t k,
    std::uint64_t seed);

enum class StanceLabel : std::uint8_t { kSupporting, kAttacking, kNonRelevant };

std::string_view to_string(StanceLabel label);
StanceLabel stance_label_from_string(std::string_view s);

// Same conclusion and stance: supporting; same conclusion, opposite stance:
// attacking; otherwise non-relevant. Throws Error when a stance is missing.
StanceLabel rsd_label(const SentenceRecord& anchor, const SentenceRecord& relative);

struct RelativeAssignment {
  std::string anchor;
  std::string relative;
  double similarity = 0.0;
  StanceLabel label = StanceLabel::kNonRelevant;

  bool operator==(const RelativeAssignment&) const = default;
};

void write_assignments(std::ostream& out,
                       const std::vector<RelativeAssignment>& assignments);
std::vector<RelativeAssignment> read_assignments(std::istream& in);

}  // namespace hiarg
