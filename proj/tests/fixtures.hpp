#pragma once

// Worked examples shared by unit and acceptance tests: the two-sentence
// "ban guns" / "guns kill people" pair and the single-node graph.

#include <string>
#include <vector>

#include "hiarg/amr.hpp"
#include "hiarg/store.hpp"

namespace fixture {

inline constexpr const char* kKillText = "(k / kill-01 :ARG0 (g / gun) :ARG1 (p / person))";
inline constexpr const char* kRecommendText =
    "(r / recommend-01 :ARG1 (b / ban-01 :ARG0 (w / we) :ARG1 (g / gun)))";

struct Sentence {
  const char* id;
  const char* text;
  const char* penman;
  const char* alignment;
};

// Token indices follow the default tokenizer ("We should ban guns ." etc).
inline const std::vector<Sentence>& ban_kill() {
  static const std::vector<Sentence> s = {
      {"d1#0", "We should ban guns.", kRecommendText, "w:0-1 r:1-2 b:2-3 g:3-4"},
      {"d1#1", "Guns kill people.", kKillText, "g:0-1 k:1-2 p:2-3"},
  };
  return s;
}

inline hiarg::SentenceRecord record(const std::string& id, const std::string& text,
                                    const std::string& doc, std::uint32_t position,
                                    hiarg::Stance stance = hiarg::Stance::kPro,
                                    const std::string& conclusion = "ban guns") {
  hiarg::SentenceRecord r;
  r.id = id;
  r.text = text;
  r.doc_id = doc;
  r.conclusion_id = conclusion;
  r.stance = stance;
  r.position = position;
  return r;
}

// Both sentences in one document, merged.
inline hiarg::HiArg ban_kill_store(bool merge = true) {
  hiarg::HiArg store;
  std::uint32_t pos = 0;
  for (const auto& s : ban_kill()) {
    store.add_sentence(record(s.id, s.text, "d1", pos++), hiarg::parse_penman(s.penman),
                       hiarg::parse_alignment(s.alignment));
  }
  if (merge) store.merge();
  return store;
}

inline std::vector<std::string> ban_kill_ids() { return {"d1#0", "d1#1"}; }

}  // namespace fixture
