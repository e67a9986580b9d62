#include "hiarg/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "hiarg/error.hpp"
#include "hiarg/factory.hpp"
#include "hiarg/rng.hpp"

namespace hiarg {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::string ratio_text(std::size_t num, std::size_t den) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4)
      << (den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den));
  return out.str();
}

void counts_text(std::ostringstream& out, const std::string& prefix,
                 const std::map<std::string, std::size_t>& counts) {
  for (const auto& [k, v] : counts) out << prefix << k << ": " << v << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------
// extract

std::string ExtractSummary::to_text() const {
  std::ostringstream out;
  out << "documents: " << documents << '\n'
      << "sentences: " << sentences << '\n'
      << "hints: " << hints << '\n';
  std::size_t rejected = 0;
  for (const auto& [k, v] : reject_counts) rejected += v;
  out << "rejected: " << rejected << '\n';
  counts_text(out, "rejected.", reject_counts);
  return out.str();
}

ExtractSummary cmd_extract(const std::string& corpus_path, const std::string& manifest_path,
                           const std::string& rejections_path, const RunConfig& config) {
  config.check();
  auto in = open_in(corpus_path);
  const auto docs = read_corpus(in);

  std::set<std::string> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.id).second) throw DuplicateId("duplicate document id " + d.id);
  }

  const RuleSplitter splitter;
  std::vector<ExtractResult> parts(docs.size());
  parallel_for(docs.size(), config.jobs, [&](std::size_t i) {
    parts[i] = extract_document(docs[i], config.filter, splitter);
  });
  ExtractResult all;
  for (auto& p : parts) all.append(std::move(p));

  {
    auto out = open_out(manifest_path);
    write_manifest(out, all.sentences);
  }
  if (!rejections_path.empty()) {
    auto out = open_out(rejections_path);
    for (const auto& r : all.rejections) {
      out << to_string(r.reason) << '\t' << r.doc_id << '\t' << r.text << '\n';
    }
  }

  ExtractSummary s;
  s.documents = docs.size();
  s.sentences = all.sentences.size();
  for (const auto& rec : all.sentences) s.hints += rec.is_hint ? 1 : 0;
  s.reject_counts = all.reject_counts;
  return s;
}

// ---------------------------------------------------------------------------
// build

std::string BuildSummary::to_text() const {
  std::ostringstream out;
  out << "manifest: " << manifest_size << '\n'
      << "ingested: " << ingested << '\n';
  std::size_t skipped = 0;
  for (const auto& [k, v] : skip_counts) skipped += v;
  out << "skipped: " << skipped << '\n';
  counts_text(out, "skipped.", skip_counts);
  out << "merged_away: " << nodes_eliminated << '\n' << stats.to_text();
  return out.str();
}

BuildSummary cmd_build(const std::string& manifest_path, const std::string& graphs_path,
                       const std::string& store_path, const RunConfig& config) {
  config.check();
  std::vector<SentenceRecord> manifest;
  {
    auto in = open_in(manifest_path);
    manifest = read_manifest(in);
  }
  std::vector<PenmanBlock> blocks;
  {
    auto in = open_in(graphs_path);
    blocks = read_penman_blocks(in);
  }
  SimpleTokenizer tokenizer;
  IngestOptions options;
  options.missing = config.missing_graph;
  options.tokenizer = &tokenizer;
  auto ingested = ingest_parsed(blocks, manifest, options);

  HiArg store;
  for (auto& item : ingested.items) {
    store.add_sentence(std::move(item.record), item.graph, item.alignment);
  }
  auto report = store.merge();
  auto findings = validate_store(store);
  if (!findings.empty()) throw ValidationError("built store is invalid: " + findings.front());
  store.save(store_path);

  BuildSummary s;
  s.manifest_size = ingested.manifest_size;
  s.ingested = ingested.items.size();
  s.skip_counts = ingested.skip_counts;
  s.nodes_eliminated = report.nodes_eliminated;
  s.stats = store.stats(&tokenizer);
  return s;
}

// ---------------------------------------------------------------------------
// relatives

double RelativesSummary::coverage() const {
  return sentences == 0 ? 0.0
                        : static_cast<double>(with_candidates) / static_cast<double>(sentences);
}

std::string RelativesSummary::to_text() const {
  std::ostringstream out;
  out << "sentences: " << sentences << '\n'
      << "anchors: " << anchors << '\n'
      << "with_candidates: " << with_candidates << '\n'
      << "coverage: " << ratio_text(with_candidates, sentences) << '\n'
      << "assignments: " << assignments << '\n';
  counts_text(out, "label.", label_counts);
  return out.str();
}

RelativesSummary cmd_relatives(const std::string& store_path,
                               const std::string& assignments_path,
                               const RunConfig& config) {
  config.check();
  const auto root = config.require_seed();
  const auto store = HiArg::load(store_path);
  if (!store.merged()) throw ValidationError("store is not merged: " + store_path);
  const auto sn = build_sn_graph(store, config.degree_cap);
  const auto stage = stage_seed(root, "relatives");
  const CandidateOptions options{config.min_gap, config.symmetric_similarity};

  const auto& order = store.sentence_order();
  std::vector<std::vector<RelativeAssignment>> per_anchor(order.size());
  std::vector<char> has_candidates(order.size(), 0);
  parallel_for(order.size(), config.jobs, [&](std::size_t i) {
    const auto& anchor = store.sentence(order[i]);
    auto candidates = candidate_pairs(store, sn, anchor.id, options);
    has_candidates[i] = candidates.empty() ? 0 : 1;
    std::map<std::string, double> sim;
    for (const auto& c : candidates) sim.emplace(c.relative, c.similarity);
    for (auto& rel : sample_relatives(candidates, config.relatives_per_sentence,
                                      item_seed(stage, i))) {
      per_anchor[i].push_back(
          {anchor.id, rel, sim.at(rel), rsd_label(anchor, store.sentence(rel))});
    }
  });

  RelativesSummary s;
  s.sentences = order.size();
  std::vector<RelativeAssignment> all;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!store.sentence(order[i]).is_hint) ++s.anchors;
    s.with_candidates += has_candidates[i];
    for (auto& a : per_anchor[i]) {
      ++s.label_counts[std::string(to_string(a.label))];
      all.push_back(std::move(a));
    }
  }
  s.assignments = all.size();
  auto out = open_out(assignments_path);
  write_assignments(out, all);
  if (!out) throw Error("write failed: " + assignments_path);
  return s;
}

// ---------------------------------------------------------------------------
// samples

std::string SamplesSummary::to_text() const {
  std::ostringstream out;
  out << "samples: " << samples << '\n'
      << "plain: " << plain << '\n'
      << "augmented: " << augmented << '\n'
      << "shards: " << shards << '\n'
      << "content_tokens: " << content_tokens << '\n'
      << "text_mask_ratio: " << ratio_text(masked_tokens, maskable_tokens) << '\n'
      << "node_mask_ratio: " << ratio_text(masked_nodes, semantic_nodes) << '\n'
      << "edge_mask_ratio: " << ratio_text(masked_edges, semantic_edges) << '\n'
      << "oversized_sentences: " << oversized_sentences << '\n'
      << "dropped_relatives: " << dropped_relatives << '\n';
  return out.str();
}

SamplesSummary cmd_samples(const std::string& store_path,
                           const std::string& assignments_path,
                           const std::string& out_dir, const RunConfig& config) {
  config.check();
  const auto root = config.require_seed();
  const auto store = HiArg::load(store_path);
  if (!store.merged()) throw ValidationError("store is not merged: " + store_path);
  RelativeMap relatives;
  if (!assignments_path.empty()) {
    auto in = open_in(assignments_path);
    relatives = relative_map(read_assignments(in));
  } else if (config.emit.mix_probability > 0.0) {
    throw ConfigError("augmented samples need a relative assignment file");
  }

  EmitConfig emit_config = config.emit;
  emit_config.seed = stage_seed(root, "samples");
  const SimpleTokenizer tokenizer;
  const auto sn = build_sn_graph(store, config.degree_cap);
  PlanStats plan_stats;
  const auto windows = plan_windows(store, relatives, tokenizer, emit_config, &plan_stats);

  std::vector<TrainingSample> samples(windows.size());
  const auto sample_stage = stage_seed(emit_config.seed, "sample");
  parallel_for(windows.size(), config.jobs, [&](std::size_t i) {
    samples[i] = assemble_sample(store, sn, windows[i], tokenizer, emit_config,
                                 item_seed(sample_stage, i));
  });

  fs::create_directories(out_dir);
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("shard-", 0) == 0 && entry.path().extension() == ".jsonl") {
      fs::remove(entry.path());
    }
  }

  SamplesSummary s;
  s.oversized_sentences = plan_stats.oversized_sentences;
  s.dropped_relatives = plan_stats.dropped_relatives;
  const std::string sep(tokenizer.separator());
  for (const auto& t : samples) {
    ++s.samples;
    (t.kind == SampleKind::kPlain ? s.plain : s.augmented) += 1;
    s.content_tokens += t.content_length;
    s.maskable_tokens += maskable_positions(t, sep).size();
    s.masked_tokens += t.masks.mlm.size();
    s.semantic_nodes += t.graph.semantic_node_count();
    s.masked_nodes += t.masks.mnm.size();
    for (const auto& e : t.graph.edges) s.semantic_edges += (!e.structural && !e.reversed);
    s.masked_edges += t.masks.mem.size();
  }

  for (std::size_t begin = 0; begin < samples.size(); begin += config.shard_size) {
    const auto end = std::min(samples.size(), begin + config.shard_size);
    std::vector<TrainingSample> shard(samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                      samples.begin() + static_cast<std::ptrdiff_t>(end));
    char name[32];
    std::snprintf(name, sizeof name, "shard-%05zu.jsonl", s.shards);
    const auto path = (fs::path(out_dir) / name).string();
    emit(shard, path);
    s.shard_files.push_back(path);
    ++s.shards;
  }
  write_file((fs::path(out_dir) / "summary.txt").string(), s.to_text());
  return s;
}

// ---------------------------------------------------------------------------
// validate / stats

std::vector<std::string> validate_store(const HiArg& store) {
  std::vector<std::string> f;
  const auto& nodes = store.nodes();
  std::map<NodeId, std::vector<std::pair<std::string, NodeId>>> children;
  std::map<NodeId, std::size_t> indegree;
  for (const auto& e : store.edges()) {
    if (!nodes.count(e.src) || !nodes.count(e.dst)) {
      f.push_back("edge " + std::to_string(e.src) + " " + e.label + " " +
                  std::to_string(e.dst) + " has an unknown endpoint");
      continue;
    }
    children[e.src].emplace_back(e.label, e.dst);
    ++indegree[e.dst];
  }

  // Kahn's algorithm over the whole semantic layer.
  std::vector<NodeId> ready;
  for (const auto& [id, attr] : nodes) {
    if (!indegree.count(id)) ready.push_back(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    auto id = ready.back();
    ready.pop_back();
    ++visited;
    for (const auto& [label, child] : children[id]) {
      if (--indegree[child] == 0) ready.push_back(child);
    }
  }
  if (visited != nodes.size()) f.push_back("semantic layer contains a cycle");

  std::map<std::string, std::size_t> listed;
  for (const auto& [top, ids] : store.tops()) {
    if (!nodes.count(top)) f.push_back("top " + std::to_string(top) + " is not a node");
    for (const auto& id : ids) {
      ++listed[id];
      const auto* rec = store.find_sentence(id);
      if (rec == nullptr) {
        f.push_back("top " + std::to_string(top) + " lists unknown sentence " + id);
      } else if (rec->top != top) {
        f.push_back("sentence " + id + " is listed under the wrong top");
      }
    }
  }
  std::set<std::pair<std::string, std::uint32_t>> positions;
  for (const auto& id : store.sentence_order()) {
    const auto& rec = store.sentence(id);
    if (listed[id] != 1) f.push_back("sentence " + id + " is not under exactly one top");
    if (!positions.emplace(rec.doc_id, rec.position).second) {
      f.push_back("duplicate position " + std::to_string(rec.position) + " in document " +
                  rec.doc_id);
    }
    if (!nodes.count(rec.top)) continue;
    auto report = validate(store.sentence_graph(id));
    if (!report.ok()) {
      f.push_back("sentence " + id + ": " + report.violations.front().message);
    }
    auto below = store.descendants(rec.top);
    for (const auto& [node, spans] : rec.alignment) {
      if (!std::binary_search(below.begin(), below.end(), node)) {
        f.push_back("sentence " + id + " aligns to node " + std::to_string(node) +
                    " outside its graph");
      }
    }
  }

  if (store.merged()) {
    std::map<std::pair<NodeAttr, std::vector<std::pair<std::string, NodeId>>>, NodeId> sigs;
    for (const auto& [id, attr] : nodes) {
      auto kids = children[id];
      std::sort(kids.begin(), kids.end());
      auto [it, inserted] = sigs.emplace(std::make_pair(attr, std::move(kids)), id);
      if (!inserted) {
        f.push_back("nodes " + std::to_string(it->second) + " and " + std::to_string(id) +
                    " are directly isomorphic after merge");
      }
    }
  }

  for (const auto& e : store.inter_edges()) {
    for (auto end : {e.src, e.dst}) {
      if (!store.tops().count(end) && !store.proxies().count(end)) {
        f.push_back("inter-argument edge endpoint " + std::to_string(end) + " is unknown");
      }
    }
  }
  return f;
}

namespace {

void validate_shard(const std::string& path, std::vector<std::string>& findings) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path + ":" + std::to_string(lineno) + ": ";
    TrainingSample sample;
    try {
      sample = sample_from_json(line);
    } catch (const Error& e) {
      findings.push_back(where + e.what());
      continue;
    }
    for (auto& msg : validate_sample(sample)) findings.push_back(where + msg);
  }
}

}  // namespace

std::vector<std::string> cmd_validate(const std::string& path) {
  std::vector<std::string> findings;
  if (fs::is_directory(path)) {
    std::vector<std::string> shards;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ".jsonl") shards.push_back(entry.path().string());
    }
    std::sort(shards.begin(), shards.end());
    for (const auto& shard : shards) validate_shard(shard, findings);
    return findings;
  }
  std::string head;
  {
    auto in = open_in(path);
    std::getline(in, head);
  }
  if (head.rfind("hiarg-store", 0) == 0) {
    try {
      auto store = HiArg::load(path);
      for (auto& msg : validate_store(store)) findings.push_back(path + ": " + msg);
    } catch (const Error& e) {
      findings.push_back(path + ": " + e.what());
    }
    return findings;
  }
  validate_shard(path, findings);
  return findings;
}

std::string cmd_stats(const std::string& store_path) {
  const auto store = HiArg::load(store_path);
  const SimpleTokenizer tokenizer;
  return store.stats(&tokenizer).to_text();
}

// ---------------------------------------------------------------------------
// run-all

RunAllSummary run_all(const std::string& corpus_path, const std::string& graphs_path,
                      const std::string& out_dir, const RunConfig& config) {
  config.check();
  config.require_seed();
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  RunAllSummary s;
  s.extract = cmd_extract(corpus_path, (dir / "manifest.jsonl").string(),
                          (dir / "rejections.tsv").string(), config);
  s.build = cmd_build((dir / "manifest.jsonl").string(), graphs_path,
                      (dir / "store.hiarg").string(), config);
  s.relatives = cmd_relatives((dir / "store.hiarg").string(),
                              (dir / "relatives.jsonl").string(), config);
  s.samples = cmd_samples((dir / "store.hiarg").string(), (dir / "relatives.jsonl").string(),
                          (dir / "samples").string(), config);
  return s;
}

}  // namespace hiarg
