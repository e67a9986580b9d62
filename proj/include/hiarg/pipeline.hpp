#pragma once

// Pipeline stages behind the command-line tool. Every stage is a pure
// function of its input files, the config and the root seed; outputs do not
// depend on `jobs`.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hiarg/config.hpp"
#include "hiarg/store.hpp"

namespace hiarg {

// Runs fn(0..n-1) on up to `jobs` threads. The first exception thrown by any
// item is rethrown after all threads finish.
void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

struct ExtractSummary {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t hints = 0;
  std::map<std::string, std::size_t> reject_counts;

  std::string to_text() const;
};

// corpus (JSONL) -> manifest (JSONL); rejections go to `rejections_path`
// (one `reason<TAB>doc<TAB>text` line each) when it is not empty.
ExtractSummary cmd_extract(const std::string& corpus_path, const std::string& manifest_path,
                           const std::string& rejections_path, const RunConfig& config);

struct BuildSummary {
  std::size_t manifest_size = 0;
  std::size_t ingested = 0;
  std::map<std::string, std::size_t> skip_counts;
  std::size_t nodes_eliminated = 0;
  StoreStats stats;

  std::string to_text() const;
};

// manifest + Penman graphs -> merged store file.
BuildSummary cmd_build(const std::string& manifest_path, const std::string& graphs_path,
                       const std::string& store_path, const RunConfig& config);

struct RelativesSummary {
  std::size_t sentences = 0;
  std::size_t anchors = 0;  // non-hint sentences
  std::size_t with_candidates = 0;
  std::size_t assignments = 0;
  std::map<std::string, std::size_t> label_counts;

  // Fraction of all sentences with at least one candidate.
  double coverage() const;
  std::string to_text() const;
};

RelativesSummary cmd_relatives(const std::string& store_path,
                               const std::string& assignments_path,
                               const RunConfig& config);

struct SamplesSummary {
  std::size_t samples = 0;
  std::size_t plain = 0;
  std::size_t augmented = 0;
  std::size_t shards = 0;
  std::size_t content_tokens = 0;
  std::size_t maskable_tokens = 0;
  std::size_t masked_tokens = 0;
  std::size_t semantic_nodes = 0;
  std::size_t masked_nodes = 0;
  std::size_t semantic_edges = 0;
  std::size_t masked_edges = 0;
  std::size_t oversized_sentences = 0;
  std::size_t dropped_relatives = 0;
  std::vector<std::string> shard_files;

  std::string to_text() const;
};

// store (+ assignments, may be empty for plain-only runs) -> shard files
// `shard-NNNNN.jsonl` plus `summary.txt` in `out_dir`.
SamplesSummary cmd_samples(const std::string& store_path,
                           const std::string& assignments_path,
                           const std::string& out_dir, const RunConfig& config);

// Every invariant of a persisted artifact: a store file, a shard file or a
// directory of shards. Each finding is prefixed by its location.
std::vector<std::string> cmd_validate(const std::string& path);

// Structural invariants of a loaded store.
std::vector<std::string> validate_store(const HiArg& store);

std::string cmd_stats(const std::string& store_path);

struct RunAllSummary {
  ExtractSummary extract;
  BuildSummary build;
  RelativesSummary relatives;
  SamplesSummary samples;
};

// extract -> build -> relatives -> samples under `out_dir`, with the same
// file names the staged commands would use.
RunAllSummary run_all(const std::string& corpus_path, const std::string& graphs_path,
                      const std::string& out_dir, const RunConfig& config);

}  // namespace hiarg
