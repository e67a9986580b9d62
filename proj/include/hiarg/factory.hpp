#pragma once

// Pre-training sample factory: coordinated text/node/edge masks, graph
// structure labels (GCL, TOP, DIR), relative stance labels, sample packing
// and the line-delimited sample format.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hiarg/relatives.hpp"
#include "hiarg/rng.hpp"
#include "hiarg/store.hpp"
#include "hiarg/tokenizer.hpp"

namespace hiarg {

struct EmitConfig {
  std::size_t budget = 512;
  double mask_ratio = 0.15;
  double gcl_fraction = 0.15;
  // Probability that a sample is relative-augmented (0 = plain only).
  double mix_probability = 0.0;
  std::uint64_t seed = 0;
};

// Throws ConfigError when a ratio or the budget is out of range.
void check_config(const EmitConfig& config);

// Token span of a sample, in sample token coordinates, aligned to a node of
// the sample graph.
struct AlignedSpan {
  std::uint32_t node = 0;
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  auto operator<=>(const AlignedSpan&) const = default;
};

struct MlmTarget {
  std::uint32_t pos = 0;
  std::string original;
  bool operator==(const MlmTarget&) const = default;
};

struct MnmTarget {
  std::uint32_t node = 0;
  NodeAttr original;
  bool operator==(const MnmTarget&) const = default;
};

// `edge` is always an original-orientation edge; its reversed companion
// (edge + 1) is hidden together with it.
struct MemTarget {
  std::uint32_t edge = 0;
  std::string original;
  bool operator==(const MemTarget&) const = default;
};

struct MaskPlan {
  std::vector<MlmTarget> mlm;
  std::vector<MnmTarget> mnm;
  std::vector<MemTarget> mem;
  bool operator==(const MaskPlan&) const = default;
};

struct GraphMaskWeights {
  std::vector<double> nodes;  // per sample-graph node
  std::vector<double> edges;  // per sample-graph edge
};

struct GraphMasks {
  std::vector<std::uint32_t> nodes;  // ascending
  std::vector<std::uint32_t> edges;  // ascending
};

// Node weight = number of sentences whose semantics include the node (link
// neighbours in the sentence-node graph); edge weight = product of its
// endpoint weights. Structural nodes, `:snt` edges and reversed companions
// get weight 0.
GraphMaskWeights graph_mask_weights(const AdaptedSubgraph& sub,
                                    const SentenceNodeGraph& sn);

// Per modality, ceil(ratio * eligible) components drawn proportionally to
// weight without replacement.
GraphMasks sample_graph_masks(const GraphMaskWeights& weights, double ratio,
                              Rng& rng);

// Every token aligned to a masked node, or to an endpoint of a masked edge.
std::set<std::uint32_t> text_premask(const AdaptedSubgraph& sub,
                                     const GraphMasks& masks,
                                     const std::vector<AlignedSpan>& alignments);

// Adds uniformly random positions from `maskable` until ceil(ratio *
// |maskable|) positions are masked; a premask already at the target is
// returned unchanged.
std::vector<std::uint32_t> top_up_text_masks(const std::set<std::uint32_t>& premask,
                                             const std::vector<std::uint32_t>& maskable,
                                             double ratio, Rng& rng);

struct GclLabel {
  std::uint32_t node = 0;
  bool permuted = false;
  std::optional<NodeAttr> permuted_attr;
  bool operator==(const GclLabel&) const = default;
};

// One label per semantic node, ascending by node index. ceil(fraction * n)
// semantic nodes are selected and their attributes permuted so that no
// selected node keeps an equal attribute. A selection of one node cannot be
// permuted and is skipped.
std::vector<GclLabel> gcl_permute(const AdaptedSubgraph& sub, double fraction,
                                  Rng& rng);
// Same, with the selected node set given. Returns all-original labels when no
// valid permutation exists.
std::vector<GclLabel> gcl_permute_selected(const AdaptedSubgraph& sub,
                                           std::vector<std::uint32_t> selected,
                                           Rng& rng);

// (first, second): link node `first` precedes link node `second`.
struct TopPair {
  std::uint32_t first = 0;
  std::uint32_t second = 0;
  bool operator==(const TopPair&) const = default;
};

std::vector<TopPair> top_labels(const AdaptedSubgraph& sub);

struct DirLabel {
  std::uint32_t edge = 0;
  bool reversed = false;
  bool operator==(const DirLabel&) const = default;
};

std::vector<DirLabel> dir_labels(const AdaptedSubgraph& sub);

struct RsdLabel {
  std::uint32_t doc = 0;       // index into TrainingSample::docs
  std::uint32_t relative = 0;  // index into TrainingSample::sentences
  StanceLabel label = StanceLabel::kNonRelevant;
  bool operator==(const RsdLabel&) const = default;
};

enum class SampleKind : std::uint8_t { kPlain, kAugmented };

std::string_view to_string(SampleKind kind);

struct SampleSentence {
  std::string id;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::uint32_t doc = 0;
  std::int32_t relative_of = -1;  // sentence index of the anchor, -1 if none
  bool operator==(const SampleSentence&) const = default;
};

struct DocSegment {
  std::string doc_id;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  bool operator==(const DocSegment&) const = default;
};

struct TrainingSample {
  SampleKind kind = SampleKind::kPlain;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  // Padded to the budget; content occupies [0, content_length).
  std::vector<std::string> tokens;
  std::uint32_t content_length = 0;
  std::vector<SampleSentence> sentences;
  std::vector<DocSegment> docs;
  AdaptedSubgraph graph;
  std::vector<AlignedSpan> alignments;
  MaskPlan masks;
  std::vector<GclLabel> gcl;
  std::vector<TopPair> top;
  std::vector<DirLabel> dir;
  std::vector<RsdLabel> rsd;

  bool operator==(const TrainingSample&) const = default;
};

// Positions of content tokens that may be masked (separators excluded).
std::vector<std::uint32_t> maskable_positions(const TrainingSample& sample,
                                              std::string_view separator);

// Builds the mask plan from chosen graph masks and text mask positions.
MaskPlan make_mask_plan(const TrainingSample& sample, const GraphMasks& graph_masks,
                        const std::vector<std::uint32_t>& text_positions);

// ---------------------------------------------------------------------------
// Packing

struct PlannedSentence {
  std::string id;
  std::uint32_t doc = 0;
  std::int32_t relative_of = -1;
};

struct SampleWindow {
  SampleKind kind = SampleKind::kPlain;
  std::vector<std::string> doc_ids;
  std::vector<PlannedSentence> sentences;
};

struct PlanStats {
  std::size_t oversized_sentences = 0;
  std::size_t dropped_relatives = 0;
};

// anchor sentence id -> relative sentence ids
using RelativeMap = std::map<std::string, std::vector<std::string>>;

RelativeMap relative_map(const std::vector<RelativeAssignment>& assignments);

// Documents in store order, each with its sentence ids by position.
std::vector<std::pair<std::string, std::vector<std::string>>> documents_in_order(
    const HiArg& store);

// Greedy packing in document order. Each window's kind is drawn with
// probability `mix_probability` from a seed derived from (seed, window
// index). Sentences are never truncated: one longer than the budget is
// skipped; a document that does not fit is cut at a sentence boundary.
std::vector<SampleWindow> plan_windows(const HiArg& store, const RelativeMap& relatives,
                                       const Tokenizer& tokenizer,
                                       const EmitConfig& config,
                                       PlanStats* stats = nullptr);

TrainingSample assemble_sample(const HiArg& store, const SentenceNodeGraph& sn,
                               const SampleWindow& window, const Tokenizer& tokenizer,
                               const EmitConfig& config, std::uint64_t seed);

// Every invariant of a sample; empty when valid.
std::vector<std::string> validate_sample(const TrainingSample& sample,
                                         std::string_view separator = "</s>",
                                         std::string_view pad = "<pad>");

// One JSON record per line. Throws ValidationError before writing anything
// if a sample is invalid.
std::size_t emit(const std::vector<TrainingSample>& samples, std::ostream& out);
std::size_t emit(const std::vector<TrainingSample>& samples, const std::string& path);

std::string sample_to_json(const TrainingSample& sample);
TrainingSample sample_from_json(std::string_view line);
std::vector<TrainingSample> load_samples(std::istream& in);
std::vector<TrainingSample> load_samples(const std::string& path);

}  // namespace hiarg
