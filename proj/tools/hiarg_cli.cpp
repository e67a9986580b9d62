#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hiarg/config.hpp"
#include "hiarg/error.hpp"
#include "hiarg/pipeline.hpp"

namespace {

constexpr int kInputError = 1;
constexpr int kValidationFailure = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out;
};

hiarg::RunConfig resolve(const Common& c) {
  hiarg::RunConfig config;
  if (!c.config_path.empty()) config = hiarg::load_config(c.config_path);
  if (c.seed) config.seed = *c.seed;
  if (c.jobs) config.jobs = *c.jobs;
  config.check();
  return config;
}

void add_common(CLI::App* cmd, Common& c, bool out_required) {
  cmd->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "root seed");
  cmd->add_option("--jobs", c.jobs, "worker threads");
  auto* out = cmd->add_option("--out", c.out, "output path");
  if (out_required) out->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hi-ArG construction and pre-training sample factory"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  Common c;
  std::string corpus, manifest, graphs, store, assignments, rejections, target;

  auto* extract = app.add_subcommand("extract", "split and filter a corpus into a sentence manifest");
  extract->add_option("corpus", corpus, "corpus JSONL")->required();
  extract->add_option("--rejections", rejections, "rejection log path");
  add_common(extract, c, true);

  auto* build = app.add_subcommand("build", "ingest parsed graphs and merge them into a store");
  build->add_option("manifest", manifest, "sentence manifest")->required();
  build->add_option("graphs", graphs, "Penman graph file")->required();
  add_common(build, c, true);

  auto* relatives = app.add_subcommand("relatives", "sample relatives for every sentence");
  relatives->add_option("store", store, "store file")->required();
  add_common(relatives, c, true);

  auto* samples = app.add_subcommand("samples", "emit pre-training sample shards");
  samples->add_option("store", store, "store file")->required();
  samples->add_option("--relatives", assignments, "relative assignment file");
  add_common(samples, c, true);

  auto* validate = app.add_subcommand("validate", "re-check invariants of a store or shards");
  validate->add_option("path", target, "store file, shard file or shard directory")->required();

  auto* stats = app.add_subcommand("stats", "print store statistics");
  stats->add_option("store", store, "store file")->required();

  auto* run = app.add_subcommand("run-all", "extract, build, relatives and samples in one go");
  run->add_option("corpus", corpus, "corpus JSONL")->required();
  run->add_option("graphs", graphs, "Penman graph file")->required();
  add_common(run, c, true);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));
  spdlog::set_default_logger(spdlog::stderr_color_mt("hiarg"));
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*extract) {
      std::cout << hiarg::cmd_extract(corpus, c.out, rejections, resolve(c)).to_text();
    } else if (*build) {
      std::cout << hiarg::cmd_build(manifest, graphs, c.out, resolve(c)).to_text();
    } else if (*relatives) {
      std::cout << hiarg::cmd_relatives(store, c.out, resolve(c)).to_text();
    } else if (*samples) {
      std::cout << hiarg::cmd_samples(store, assignments, c.out, resolve(c)).to_text();
    } else if (*validate) {
      auto findings = hiarg::cmd_validate(target);
      for (const auto& f : findings) std::cout << f << '\n';
      std::cout << "findings: " << findings.size() << '\n';
      return findings.empty() ? 0 : kValidationFailure;
    } else if (*stats) {
      std::cout << hiarg::cmd_stats(store);
    } else if (*run) {
      auto s = hiarg::run_all(corpus, graphs, c.out, resolve(c));
      std::cout << "[extract]\n" << s.extract.to_text() << "[build]\n" << s.build.to_text()
                << "[relatives]\n" << s.relatives.to_text() << "[samples]\n"
                << s.samples.to_text();
    }
  } catch (const hiarg::ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
