#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "fixtures.hpp"
#include "hiarg/config.hpp"
#include "hiarg/error.hpp"
#include "hiarg/pipeline.hpp"

using namespace hiarg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("hiarg-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Relative path -> bytes for every file under `root`.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

const std::string kCorpus = std::string(HIARG_DATA_DIR) + "/mini/corpus.jsonl";
const std::string kGraphs = std::string(HIARG_DATA_DIR) + "/mini/graphs.penman";

RunConfig seeded(std::uint64_t seed, double mix = 0.0, std::size_t jobs = 1) {
  RunConfig c;
  c.seed = seed;
  c.emit.mix_probability = mix;
  c.jobs = jobs;
  return c;
}

void write_fixture_inputs(const TempDir& dir) {
  std::vector<SentenceRecord> records;
  std::ostringstream graphs;
  std::uint32_t pos = 0;
  for (const auto& s : fixture::ban_kill()) {
    records.push_back(fixture::record(s.id, s.text, "d1", pos++));
    PenmanBlock b;
    b.id = s.id;
    b.sentence = s.text;
    b.alignments = s.alignment;
    b.graph_text = s.penman;
    graphs << format_penman_block(b) << '\n';
  }
  std::ofstream m(dir / "manifest.jsonl", std::ios::binary);
  write_manifest(m, records);
  spit(dir / "graphs.penman", graphs.str());
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# pre-training run\n"
      "budget = 256\n"
      "mask_ratio: 0.2\n"
      "gcl_fraction = 0.1   # trailing comment\n"
      "mix_probability = 0.5\n"
      "L = 10\n"
      "S = 50\n"
      "k = 2\n"
      "symmetric = true\n"
      "min_words = 3\n"
      "missing_graph = abort\n"
      "jobs = 4\n"
      "seed = 123\n");
  auto c = parse_config(in);
  CHECK(c.emit.budget == 256);
  CHECK(c.emit.mask_ratio == 0.2);
  CHECK(c.emit.gcl_fraction == 0.1);
  CHECK(c.emit.mix_probability == 0.5);
  CHECK(c.min_gap == 10);
  CHECK(c.degree_cap == 50);
  CHECK(c.relatives_per_sentence == 2);
  CHECK(c.symmetric_similarity);
  CHECK(c.filter.min_words == 3);
  CHECK(c.missing_graph == MissingGraphMode::kAbort);
  CHECK(c.jobs == 4);
  CHECK(c.seed == 123u);

  std::istringstream again(format_config(c));
  auto d = parse_config(again);
  CHECK(format_config(d) == format_config(c));

  std::istringstream unknown("budget = 5\n\nwidth = 3\n");
  try {
    parse_config(unknown);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream bad("mask_ratio = lots\n");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  std::istringstream out_of_range("mask_ratio = 1.5\n");
  CHECK_THROWS_AS(parse_config(out_of_range).check(), ConfigError);
  CHECK_THROWS_AS(RunConfig{}.require_seed(), ConfigError);
}

TEST_CASE("extract edge cases") {
  TempDir dir("extract");
  spit(dir / "empty.jsonl", "");
  auto e = cmd_extract(dir / "empty.jsonl", dir / "m.jsonl", dir / "r.tsv", RunConfig{});
  CHECK(e.documents == 0);
  CHECK(e.sentences == 0);
  CHECK(e.reject_counts.empty());
  CHECK(slurp(dir / "m.jsonl").empty());

  spit(dir / "short.jsonl",
       R"({"id":"a","conclusion":"Ban guns","stance":"pro","premise":"Guns kill. Guns kill many people every single year."})"
       "\n");
  auto s = cmd_extract(dir / "short.jsonl", dir / "m2.jsonl", dir / "r2.tsv", RunConfig{});
  CHECK(s.reject_counts == std::map<std::string, std::size_t>{{"short", 1}});
  CHECK(s.sentences == 2);
  CHECK(s.to_text().find("rejected.short: 1") != std::string::npos);
  CHECK(slurp(dir / "r2.tsv") == "short\ta\tGuns kill.\n");

  spit(dir / "dup.jsonl", R"({"id":"a","premise":"x"})" "\n" R"({"id":"a","premise":"y"})" "\n");
  CHECK_THROWS_AS(cmd_extract(dir / "dup.jsonl", dir / "m3.jsonl", "", RunConfig{}), DuplicateId);
  CHECK_THROWS_AS(cmd_extract(dir / "missing.jsonl", dir / "m4.jsonl", "", RunConfig{}), Error);
}

TEST_CASE("build the two-sentence store") {
  TempDir dir("build");
  write_fixture_inputs(dir);
  auto b = cmd_build(dir / "manifest.jsonl", dir / "graphs.penman", dir / "a.hiarg", RunConfig{});
  CHECK(b.stats.sentences == 2);
  CHECK(b.stats.nodes == 6);
  CHECK(b.stats.edges == 5);
  CHECK(b.stats.tops == 2);
  cmd_build(dir / "manifest.jsonl", dir / "graphs.penman", dir / "b.hiarg", RunConfig{});
  CHECK(slurp(dir / "a.hiarg") == slurp(dir / "b.hiarg"));
  CHECK(cmd_stats(dir / "a.hiarg").find("nodes: 6") != std::string::npos);
  CHECK(cmd_validate(dir / "a.hiarg").empty());

  // A store that was never merged cannot feed relative search.
  auto unmerged = fixture::ban_kill_store(false);
  unmerged.save(dir / "raw.hiarg");
  CHECK_THROWS_AS(cmd_relatives(dir / "raw.hiarg", dir / "rel.jsonl", seeded(1)), ValidationError);
}

TEST_CASE("run-all is deterministic and independent of jobs") {
  TempDir a("runall-a"), b("runall-b"), c("runall-c");
  auto cfg = seeded(42, 0.5, 1);
  run_all(kCorpus, kGraphs, a.path.string(), cfg);
  run_all(kCorpus, kGraphs, b.path.string(), cfg);
  cfg.jobs = 8;
  run_all(kCorpus, kGraphs, c.path.string(), cfg);
  const auto ta = tree(a.path);
  CHECK(ta.count("samples/shard-00000.jsonl") == 1);
  CHECK(ta == tree(b.path));
  CHECK(ta == tree(c.path));
  CHECK(cmd_validate((a.path / "samples").string()).empty());
  CHECK(cmd_validate((a.path / "store.hiarg").string()).empty());

  TempDir d("runall-d");
  run_all(kCorpus, kGraphs, d.path.string(), seeded(43, 0.5, 1));
  CHECK(tree(d.path).at("samples/shard-00000.jsonl") != ta.at("samples/shard-00000.jsonl"));
}

TEST_CASE("staged execution equals run-all") {
  TempDir all("staged-all"), staged("staged");
  auto cfg = seeded(7, 0.5, 2);
  run_all(kCorpus, kGraphs, all.path.string(), cfg);
  cmd_extract(kCorpus, staged / "manifest.jsonl", staged / "rejections.tsv", cfg);
  cmd_build(staged / "manifest.jsonl", kGraphs, staged / "store.hiarg", cfg);
  cmd_relatives(staged / "store.hiarg", staged / "relatives.jsonl", cfg);
  cmd_samples(staged / "store.hiarg", staged / "relatives.jsonl", staged / "samples", cfg);
  CHECK(tree(all.path) == tree(staged.path));
}

TEST_CASE("sample kinds follow the mix probability") {
  TempDir dir("kinds");
  auto plain = run_all(kCorpus, kGraphs, dir.path.string(), seeded(3, 0.0));
  CHECK(plain.samples.augmented == 0);
  CHECK(plain.samples.plain == plain.samples.samples);

  TempDir dir2("kinds-aug");
  auto aug = run_all(kCorpus, kGraphs, dir2.path.string(), seeded(3, 1.0));
  CHECK(aug.samples.plain == 0);
  std::size_t with_rsd = 0;
  for (const auto& s : load_samples((dir2.path / "samples/shard-00000.jsonl").string())) {
    CHECK(s.kind == SampleKind::kAugmented);
    with_rsd += s.rsd.empty() ? 0 : 1;
  }
  CHECK(with_rsd == aug.samples.samples);

  RunConfig no_seed;
  no_seed.emit.mix_probability = 0.5;
  TempDir dir3("kinds-noseed");
  CHECK_THROWS_AS(run_all(kCorpus, kGraphs, dir3.path.string(), no_seed), ConfigError);
}

TEST_CASE("hint-only corpus yields no relatives") {
  TempDir dir("hints");
  spit(dir / "corpus.jsonl",
       R"({"id":"a","conclusion":"We should ban guns","stance":"pro","premise":""})" "\n"
       R"({"id":"b","conclusion":"We should ban guns","stance":"con","premise":""})" "\n");
  std::ostringstream graphs;
  const char* texts[] = {"\"We should ban guns\" is right.", "\"We should ban guns\" is wrong."};
  const char* penman[] = {"(r / right-06 :ARG1 (g / gun))", "(w / wrong-02 :ARG1 (g / gun))"};
  const char* ids[] = {"a#0", "b#0"};
  for (int i = 0; i < 2; ++i) {
    PenmanBlock b;
    b.id = ids[i];
    b.sentence = texts[i];
    b.graph_text = penman[i];
    graphs << format_penman_block(b) << '\n';
  }
  spit(dir / "graphs.penman", graphs.str());
  auto s = run_all(dir / "corpus.jsonl", dir / "graphs.penman", (dir.path / "out").string(),
                   seeded(1));
  CHECK(s.extract.hints == 2);
  CHECK(s.relatives.assignments == 0);
  CHECK(slurp(dir.path / "out/relatives.jsonl").empty());
}

TEST_CASE("validate reports a leaked token") {
  TempDir dir("validate");
  run_all(kCorpus, kGraphs, dir.path.string(), seeded(5));
  const auto shard = dir.path / "samples/shard-00000.jsonl";
  CHECK(cmd_validate(shard.string()).empty());
  auto text = slurp(shard);
  auto line = text.substr(0, text.find('\n'));
  auto sample = sample_from_json(line);
  REQUIRE_FALSE(sample.masks.mnm.empty());
  sample.masks.mlm.clear();
  spit(dir / "bad.jsonl", sample_to_json(sample) + "\n");
  auto findings = cmd_validate(dir / "bad.jsonl");
  REQUIRE_FALSE(findings.empty());
  bool leak = false;
  for (const auto& f : findings) leak |= f.find("leak") != std::string::npos;
  CHECK(leak);
}

#ifdef HIARG_CLI_PATH
TEST_CASE("command-line exit codes") {
  TempDir dir("cli");
  const std::string cli = HIARG_CLI_PATH;
  auto run = [&](const std::string& args) {
    const auto cmd = cli + " " + args + " > " + (dir / "log.txt") + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(run("run-all " + kCorpus + " " + kGraphs + " --seed 9 --jobs 2 --out " +
            (dir / "run")) == 0);
  CHECK(run("validate " + (dir / "run") + "/samples") == 0);
  CHECK(run("stats " + (dir / "run") + "/store.hiarg") == 0);
  CHECK(run("build " + (dir / "nope.jsonl") + " " + kGraphs + " --out " + (dir / "x.hiarg")) == 1);
  CHECK(run("samples " + (dir / "run") + "/store.hiarg --out " + (dir / "s")) == 1);

  auto sample = load_samples((dir.path / "run/samples/shard-00000.jsonl").string()).at(0);
  sample.masks.mlm.clear();
  spit(dir / "bad.jsonl", sample_to_json(sample) + "\n");
  CHECK(run("validate " + (dir / "bad.jsonl")) == 2);
}
#endif
