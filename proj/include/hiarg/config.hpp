#pragma once

// Run configuration shared by the pipeline stages. The file format is
// key-value text: one `key = value` per line, `#` starts a comment.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hiarg/corpus.hpp"
#include "hiarg/factory.hpp"
#include "hiarg/relatives.hpp"

namespace hiarg {

struct RunConfig {
  FilterPolicy filter;
  EmitConfig emit;
  std::size_t min_gap = kDefaultMinGap;       // L
  std::size_t degree_cap = kDefaultDegreeCap;  // S
  std::size_t relatives_per_sentence = 1;      // k
  bool symmetric_similarity = false;
  MissingGraphMode missing_graph = MissingGraphMode::kSkip;
  std::size_t jobs = 1;
  std::size_t shard_size = 1000;  // samples per shard file
  // Root seed; required by the relatives and samples stages.
  std::optional<std::uint64_t> seed;

  std::uint64_t require_seed() const;
  // Throws ConfigError on out-of-range values.
  void check() const;
};

// Unknown keys and malformed values raise ConfigError naming the line.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
std::string format_config(const RunConfig& config);

}  // namespace hiarg
