#include "hiarg/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hiarg/error.hpp"

namespace hiarg {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

}  // namespace

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ConfigError("a seed is required for this stage (--seed or `seed =`)");
  return *seed;
}

void RunConfig::check() const {
  if (filter.min_words < 1) throw ConfigError("min_words must be at least 1");
  if (degree_cap < 1) throw ConfigError("S must be positive");
  if (relatives_per_sentence < 1) throw ConfigError("k must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (shard_size < 1) throw ConfigError("shard_size must be at least 1");
  check_config(emit);
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "budget") {
    c.emit.budget = parse_number<std::size_t>(key, value);
  } else if (key == "mask_ratio") {
    c.emit.mask_ratio = parse_number<double>(key, value);
  } else if (key == "gcl_fraction") {
    c.emit.gcl_fraction = parse_number<double>(key, value);
  } else if (key == "mix_probability") {
    c.emit.mix_probability = parse_number<double>(key, value);
  } else if (key == "L" || key == "min_gap") {
    c.min_gap = parse_number<std::size_t>(key, value);
  } else if (key == "S" || key == "degree_cap") {
    c.degree_cap = parse_number<std::size_t>(key, value);
  } else if (key == "k" || key == "relatives") {
    c.relatives_per_sentence = parse_number<std::size_t>(key, value);
  } else if (key == "symmetric") {
    c.symmetric_similarity = parse_bool(key, value);
  } else if (key == "min_words") {
    c.filter.min_words = parse_number<std::size_t>(key, value);
  } else if (key == "require_printable") {
    c.filter.require_printable = parse_bool(key, value);
  } else if (key == "missing_graph") {
    if (value == "skip") {
      c.missing_graph = MissingGraphMode::kSkip;
    } else if (value == "abort") {
      c.missing_graph = MissingGraphMode::kAbort;
    } else {
      throw ConfigError("missing_graph must be skip or abort");
    }
  } else if (key == "jobs") {
    c.jobs = parse_number<std::size_t>(key, value);
  } else if (key == "shard_size") {
    c.shard_size = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto text = trim(line);
    if (text.empty()) continue;
    auto eq = text.find('=');
    if (eq == std::string::npos) eq = text.find(':');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(c, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  return parse_config(in);
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "budget = " << c.emit.budget << '\n'
      << "mask_ratio = " << c.emit.mask_ratio << '\n'
      << "gcl_fraction = " << c.emit.gcl_fraction << '\n'
      << "mix_probability = " << c.emit.mix_probability << '\n'
      << "L = " << c.min_gap << '\n'
      << "S = " << c.degree_cap << '\n'
      << "k = " << c.relatives_per_sentence << '\n'
      << "symmetric = " << (c.symmetric_similarity ? "true" : "false") << '\n'
      << "min_words = " << c.filter.min_words << '\n'
      << "require_printable = " << (c.filter.require_printable ? "true" : "false") << '\n'
      << "missing_graph = "
      << (c.missing_graph == MissingGraphMode::kSkip ? "skip" : "abort") << '\n'
      << "jobs = " << c.jobs << '\n'
      << "shard_size = " << c.shard_size << '\n';
  if (c.seed) out << "seed = " << *c.seed << '\n';
  return out.str();
}

}  // namespace hiarg
