#include "hiarg/factory.hpp"

#include <algorithm>
#include <numeric>

#include <spdlog/spdlog.h>

#include "hiarg/error.hpp"
#include "hiarg/sampling.hpp"

namespace hiarg {

void check_config(const EmitConfig& config) {
  if (config.budget == 0) throw ConfigError("token budget must be positive");
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(config.mask_ratio)) throw ConfigError("mask ratio must be in (0,1)");
  if (!open_unit(config.gcl_fraction)) {
    throw ConfigError("GCL permute fraction must be in (0,1)");
  }
  if (config.mix_probability < 0.0 || config.mix_probability > 1.0) {
    throw ConfigError("mix probability must be in [0,1]");
  }
}

std::string_view to_string(SampleKind kind) {
  return kind == SampleKind::kPlain ? "plain" : "augmented";
}

// ---------------------------------------------------------------------------
// Masks

GraphMaskWeights graph_mask_weights(const AdaptedSubgraph& sub,
                                    const SentenceNodeGraph& sn) {
  GraphMaskWeights w;
  w.nodes.assign(sub.nodes.size(), 0.0);
  w.edges.assign(sub.edges.size(), 0.0);
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    if (sub.nodes[i].role != NodeRole::kSemantic) continue;
    w.nodes[i] = static_cast<double>(sn.node_degree(sub.nodes[i].store_id));
  }
  for (std::size_t e = 0; e < sub.edges.size(); ++e) {
    const auto& edge = sub.edges[e];
    if (edge.reversed || edge.structural) continue;
    w.edges[e] = w.nodes[edge.src] * w.nodes[edge.dst];
  }
  return w;
}

GraphMasks sample_graph_masks(const GraphMaskWeights& weights, double ratio,
                              Rng& rng) {
  auto draw = [&](const std::vector<double>& ws, const char* what) {
    auto eligible = static_cast<std::size_t>(
        std::count_if(ws.begin(), ws.end(), [](double x) { return x > 0.0; }));
    if (eligible == 0 && !ws.empty() && ratio > 0.0) {
      spdlog::debug("no eligible {} to mask", what);
    }
    auto picked = weighted_sample(ws, ceil_count(ratio, eligible), rng);
    std::vector<std::uint32_t> out(picked.begin(), picked.end());
    std::sort(out.begin(), out.end());
    return out;
  };
  GraphMasks masks;
  masks.nodes = draw(weights.nodes, "nodes");
  masks.edges = draw(weights.edges, "edges");
  return masks;
}

std::set<std::uint32_t> text_premask(const AdaptedSubgraph& sub,
                                     const GraphMasks& masks,
                                     const std::vector<AlignedSpan>& alignments) {
  std::set<std::uint32_t> hidden(masks.nodes.begin(), masks.nodes.end());
  for (auto e : masks.edges) {
    hidden.insert(sub.edges[e].src);
    hidden.insert(sub.edges[e].dst);
  }
  std::set<std::uint32_t> out;
  for (const auto& span : alignments) {
    if (!hidden.count(span.node)) continue;
    for (auto t = span.start; t < span.end; ++t) out.insert(t);
  }
  return out;
}

std::vector<std::uint32_t> top_up_text_masks(const std::set<std::uint32_t>& premask,
                                             const std::vector<std::uint32_t>& maskable,
                                             double ratio, Rng& rng) {
  std::vector<std::uint32_t> out(premask.begin(), premask.end());
  const auto target = ceil_count(ratio, maskable.size());
  if (out.size() < target) {
    std::vector<std::uint32_t> free;
    for (auto p : maskable) {
      if (!premask.count(p)) free.push_back(p);
    }
    auto need = std::min(target - out.size(), free.size());
    // Partial Fisher-Yates: the first `need` entries become a uniform draw.
    for (std::size_t i = 0; i < need; ++i) {
      auto j = i + static_cast<std::size_t>(rng.below(free.size() - i));
      std::swap(free[i], free[j]);
      out.push_back(free[i]);
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<std::uint32_t> maskable_positions(const TrainingSample& sample,
                                              std::string_view separator) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < sample.content_length; ++i) {
    if (sample.tokens[i] != separator) out.push_back(i);
  }
  return out;
}

MaskPlan make_mask_plan(const TrainingSample& sample, const GraphMasks& graph_masks,
                        const std::vector<std::uint32_t>& text_positions) {
  MaskPlan plan;
  for (auto p : text_positions) plan.mlm.push_back({p, sample.tokens.at(p)});
  for (auto n : graph_masks.nodes) plan.mnm.push_back({n, sample.graph.nodes.at(n).attr});
  for (auto e : graph_masks.edges) plan.mem.push_back({e, sample.graph.edges.at(e).label});
  return plan;
}

// ---------------------------------------------------------------------------
// Graph structure labels

std::vector<GclLabel> gcl_permute_selected(const AdaptedSubgraph& sub,
                                           std::vector<std::uint32_t> selected,
                                           Rng& rng) {
  std::vector<GclLabel> labels;
  for (std::uint32_t i = 0; i < sub.nodes.size(); ++i) {
    if (sub.nodes[i].role == NodeRole::kSemantic) labels.push_back({i, false, {}});
  }
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
  const auto m = selected.size();
  if (m < 2) return labels;
  for (auto s : selected) {
    if (s >= sub.nodes.size() || sub.nodes[s].role != NodeRole::kSemantic) {
      throw Error("GCL selection contains a non-semantic node");
    }
  }

  const auto& attr = [&](std::size_t k) -> const NodeAttr& {
    return sub.nodes[selected[k]].attr;
  };
  // source[k]: which selected node's attribute selected[k] receives.
  std::vector<std::size_t> source(m);
  bool found = false;
  for (int attempt = 0; attempt < 32 && !found; ++attempt) {
    std::iota(source.begin(), source.end(), 0);
    rng.shuffle(source.begin(), source.end());
    found = true;
    for (std::size_t k = 0; k < m; ++k) {
      if (attr(source[k]) == attr(k)) {
        found = false;
        break;
      }
    }
  }
  if (!found) {
    // Group equal attributes, then shift by the largest group size. Valid
    // whenever no attribute covers more than half of the selection.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return attr(a) < attr(b); });
    std::size_t largest = 0;
    for (std::size_t i = 0; i < m;) {
      std::size_t j = i;
      while (j < m && attr(order[j]) == attr(order[i])) ++j;
      largest = std::max(largest, j - i);
      i = j;
    }
    if (2 * largest > m) return labels;
    for (std::size_t i = 0; i < m; ++i) source[order[i]] = order[(i + largest) % m];
  }

  for (auto& label : labels) {
    auto it = std::lower_bound(selected.begin(), selected.end(), label.node);
    if (it == selected.end() || *it != label.node) continue;
    auto k = static_cast<std::size_t>(it - selected.begin());
    label.permuted = true;
    label.permuted_attr = attr(source[k]);
  }
  return labels;
}

std::vector<GclLabel> gcl_permute(const AdaptedSubgraph& sub, double fraction,
                                  Rng& rng) {
  std::vector<std::uint32_t> semantic;
  for (std::uint32_t i = 0; i < sub.nodes.size(); ++i) {
    if (sub.nodes[i].role == NodeRole::kSemantic) semantic.push_back(i);
  }
  const auto count = ceil_count(fraction, semantic.size());
  if (count < 2) {
    if (count == 1) spdlog::debug("GCL selection of one node skipped");
    return gcl_permute_selected(sub, {}, rng);
  }
  for (int draw = 0; draw < 8; ++draw) {
    auto pool = semantic;
    for (std::size_t i = 0; i < count; ++i) {
      auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    auto labels = gcl_permute_selected(sub, pool, rng);
    if (std::any_of(labels.begin(), labels.end(),
                    [](const GclLabel& l) { return l.permuted; })) {
      return labels;
    }
  }
  spdlog::debug("GCL: no attribute derangement found, sample left unpermuted");
  return gcl_permute_selected(sub, {}, rng);
}

std::vector<TopPair> top_labels(const AdaptedSubgraph& sub) {
  std::vector<TopPair> out;
  for (std::size_t i = 1; i < sub.link_order.size(); ++i) {
    out.push_back({sub.link_order[i - 1], sub.link_order[i]});
  }
  return out;
}

std::vector<DirLabel> dir_labels(const AdaptedSubgraph& sub) {
  std::vector<DirLabel> out;
  out.reserve(sub.edges.size());
  for (std::uint32_t e = 0; e < sub.edges.size(); ++e) {
    out.push_back({e, sub.edges[e].reversed});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Packing

RelativeMap relative_map(const std::vector<RelativeAssignment>& assignments) {
  RelativeMap map;
  for (const auto& a : assignments) map[a.anchor].push_back(a.relative);
  return map;
}

std::vector<std::pair<std::string, std::vector<std::string>>> documents_in_order(
    const HiArg& store) {
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  std::map<std::string, std::size_t> index;
  for (const auto& id : store.sentence_order()) {
    const auto& rec = store.sentence(id);
    auto [it, inserted] = index.emplace(rec.doc_id, docs.size());
    if (inserted) docs.push_back({rec.doc_id, {}});
    docs[it->second].second.push_back(id);
  }
  for (auto& [doc, ids] : docs) {
    std::stable_sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) {
      return store.sentence(a).position < store.sentence(b).position;
    });
  }
  return docs;
}

std::vector<SampleWindow> plan_windows(const HiArg& store, const RelativeMap& relatives,
                                       const Tokenizer& tokenizer,
                                       const EmitConfig& config, PlanStats* stats) {
  PlanStats local;
  PlanStats& st = stats != nullptr ? *stats : local;
  std::map<std::string, std::size_t> lengths;
  auto length = [&](const std::string& id) {
    auto it = lengths.find(id);
    if (it == lengths.end()) {
      it = lengths.emplace(id, tokenizer.tokenize(store.sentence(id).text).size()).first;
    }
    return it->second;
  };

  const auto docs = documents_in_order(store);
  const auto kind_stage = stage_seed(config.seed, "window-kind");
  const auto budget = config.budget;
  std::vector<SampleWindow> windows;
  std::size_t d = 0;
  std::size_t s = 0;
  while (d < docs.size()) {
    SampleWindow w;
    Rng coin(item_seed(kind_stage, windows.size()));
    w.kind = coin.bernoulli(config.mix_probability) ? SampleKind::kAugmented
                                                    : SampleKind::kPlain;
    std::size_t used = 0;
    bool full = false;
    while (d < docs.size() && !full) {
      const auto& [doc_id, ids] = docs[d];
      bool opened = false;
      std::uint32_t doc_index = 0;
      std::vector<PlannedSentence> pending;
      while (s < ids.size()) {
        const auto len = length(ids[s]);
        if (len == 0) {
          ++s;
          continue;
        }
        if (len > budget) {
          spdlog::warn("sentence {} has {} tokens, over the budget of {}; skipped",
                       ids[s], len, budget);
          ++st.oversized_sentences;
          ++s;
          continue;
        }
        const std::size_t cost = len + ((!opened && !w.doc_ids.empty()) ? 1 : 0);
        if (used + cost > budget) {
          full = true;
          break;
        }
        if (!opened) {
          doc_index = static_cast<std::uint32_t>(w.doc_ids.size());
          w.doc_ids.push_back(doc_id);
          opened = true;
        }
        const auto anchor = static_cast<std::int32_t>(w.sentences.size());
        w.sentences.push_back({ids[s], doc_index, -1});
        used += cost;
        if (w.kind == SampleKind::kAugmented) {
          if (auto it = relatives.find(ids[s]); it != relatives.end()) {
            for (const auto& rel : it->second) {
              const auto rlen = length(rel);
              if (used + rlen > budget) {
                ++st.dropped_relatives;
                continue;
              }
              pending.push_back({rel, doc_index, anchor});
              used += rlen;
            }
          }
        }
        ++s;
      }
      // Relatives go right after the part of their document in this window.
      w.sentences.insert(w.sentences.end(), pending.begin(), pending.end());
      if (!full) {
        ++d;
        s = 0;
      }
    }
    if (w.sentences.empty()) break;
    windows.push_back(std::move(w));
  }
  return windows;
}

TrainingSample assemble_sample(const HiArg& store, const SentenceNodeGraph& sn,
                               const SampleWindow& window, const Tokenizer& tokenizer,
                               const EmitConfig& config, std::uint64_t seed) {
  TrainingSample t;
  t.kind = window.kind;
  t.seed = seed;
  t.budget = config.budget;
  const std::string sep(tokenizer.separator());

  std::vector<std::string> ids;
  std::int64_t prev_doc = -1;
  for (const auto& planned : window.sentences) {
    const bool relative = planned.relative_of >= 0;
    if (!relative && static_cast<std::int64_t>(planned.doc) != prev_doc) {
      if (prev_doc >= 0) t.tokens.push_back(sep);
      t.docs.push_back({window.doc_ids.at(planned.doc),
                        static_cast<std::uint32_t>(t.tokens.size()), 0});
      prev_doc = planned.doc;
    }
    const auto start = static_cast<std::uint32_t>(t.tokens.size());
    auto toks = tokenizer.tokenize(store.sentence(planned.id).text);
    t.tokens.insert(t.tokens.end(), toks.begin(), toks.end());
    const auto end = static_cast<std::uint32_t>(t.tokens.size());
    if (!relative) t.docs.back().end = end;
    t.sentences.push_back({planned.id, start, end, planned.doc, planned.relative_of});
    ids.push_back(planned.id);
  }
  if (t.tokens.size() > config.budget) {
    throw ValidationError("window exceeds the token budget");
  }
  t.content_length = static_cast<std::uint32_t>(t.tokens.size());
  t.tokens.resize(config.budget, std::string(tokenizer.pad()));

  t.graph = store.adapt_subgraph(ids);
  std::map<NodeId, std::uint32_t> index;
  for (std::uint32_t i = 0; i < t.graph.nodes.size(); ++i) {
    if (t.graph.nodes[i].role == NodeRole::kSemantic) {
      index.emplace(t.graph.nodes[i].store_id, i);
    }
  }
  for (const auto& sentence : t.sentences) {
    const auto& rec = store.sentence(sentence.id);
    for (const auto& [node, spans] : rec.alignment) {
      auto it = index.find(node);
      if (it == index.end()) continue;
      for (const auto& span : spans) {
        t.alignments.push_back(
            {it->second, sentence.start + span.start, sentence.start + span.end});
      }
    }
  }
  std::sort(t.alignments.begin(), t.alignments.end());

  Rng rng(seed);
  auto weights = graph_mask_weights(t.graph, sn);
  auto graph_masks = sample_graph_masks(weights, config.mask_ratio, rng);
  auto premask = text_premask(t.graph, graph_masks, t.alignments);
  auto text = top_up_text_masks(premask, maskable_positions(t, sep),
                                config.mask_ratio, rng);
  t.masks = make_mask_plan(t, graph_masks, text);
  t.gcl = gcl_permute(t.graph, config.gcl_fraction, rng);
  t.top = top_labels(t.graph);
  t.dir = dir_labels(t.graph);

  if (t.kind == SampleKind::kAugmented) {
    for (std::uint32_t i = 0; i < t.sentences.size(); ++i) {
      const auto& s = t.sentences[i];
      if (s.relative_of < 0) continue;
      const auto& anchor = t.sentences[static_cast<std::size_t>(s.relative_of)];
      t.rsd.push_back({anchor.doc, i,
                       rsd_label(store.sentence(anchor.id), store.sentence(s.id))});
    }
  }
  return t;
}

}  // namespace hiarg
