#pragma once

// Synthetic argument corpus with gold AMR graphs and token alignments.
// Sentences come from a handful of templates over a small vocabulary, so
// documents under one conclusion share concepts and relatives exist.
// Alignments cover content words only, as an external aligner would.

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hiarg/corpus.hpp"
#include "hiarg/store.hpp"

namespace synth {

struct Sentence {
  std::string text;
  std::string penman;
  std::string alignment;
};

struct Document {
  std::string id;
  std::string conclusion;
  std::string topic;
  hiarg::Stance stance = hiarg::Stance::kPro;
  Sentence hint;
  std::vector<Sentence> sentences;  // premise sentences that pass the filter
  std::vector<std::string> rejected;
  std::string premise;  // text the extractor sees
};

struct Options {
  std::size_t documents = 20;
  std::size_t min_sentences = 8;
  std::size_t max_sentences = 40;
  std::size_t conclusions = 4;
  double rejected_probability = 0.05;
  std::uint64_t seed = 1;
};

namespace detail {

struct Noun {
  const char* amr;
  const char* plural;
};
struct Verb {
  const char* frame;
  const char* base;
};

inline const std::vector<Noun>& nouns() {
  static const std::vector<Noun> v = {
      {"gun", "guns"},         {"person", "people"},     {"child", "children"},
      {"law", "laws"},         {"school", "schools"},    {"weapon", "weapons"},
      {"citizen", "citizens"}, {"crime", "crimes"},      {"tax", "taxes"},
      {"family", "families"},  {"hunter", "hunters"},    {"owner", "owners"},
      {"city", "cities"},      {"drug", "drugs"},        {"worker", "workers"},
      {"company", "companies"}, {"student", "students"}, {"animal", "animals"}};
  return v;
}

inline const std::vector<Noun>& subjects() {
  static const std::vector<Noun> v = {{"we", "We"},
                                      {"government", "Governments"},
                                      {"parent", "Parents"},
                                      {"citizen", "Citizens"},
                                      {"police", "Police"},
                                      {"state", "States"}};
  return v;
}

inline const std::vector<Verb>& verbs() {
  static const std::vector<Verb> v = {
      {"ban-01", "ban"},         {"kill-01", "kill"},     {"protect-01", "protect"},
      {"harm-01", "harm"},       {"support-01", "support"}, {"reduce-01", "reduce"},
      {"prevent-01", "prevent"}, {"increase-01", "increase"}, {"control-01", "control"},
      {"allow-01", "allow"},     {"legalize-01", "legalize"}, {"fund-01", "fund"}};
  return v;
}

inline const std::vector<Verb>& adjectives() {
  static const std::vector<Verb> v = {{"safe-01", "safe"},
                                      {"fair-01", "fair"},
                                      {"good-02", "good"},
                                      {"necessary-02", "necessary"},
                                      {"possible-01", "possible"}};
  return v;
}

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct Conclusion {
  Verb verb;
  Noun object;
  std::string text() const { return std::string("We should ") + verb.base + " " + object.plural; }
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  // A noun other than `avoid`, preferring the topic noun half of the time.
  Noun noun(const Conclusion& c, const std::vector<const char*>& avoid) {
    for (;;) {
      const Noun& n = unit() < 0.4 ? c.object : pick(nouns());
      bool clash = false;
      for (auto* a : avoid) clash |= std::string(a) == n.amr;
      if (!clash) return n;
    }
  }

  Verb verb(const Conclusion& c, const char* avoid = "") {
    for (;;) {
      const Verb& v = unit() < 0.3 ? c.verb : pick(verbs());
      if (std::string(v.frame) != avoid) return v;
    }
  }

  Sentence sentence(const Conclusion& c) {
    using std::string;
    switch (below(5)) {
      case 0: {
        auto s = pick(subjects());
        auto v = verb(c);
        auto o = noun(c, {s.amr});
        auto p = noun(c, {s.amr, o.amr});
        return {string(s.plural) + " should " + v.base + " " + o.plural + " in " + p.plural + ".",
                string("(r / recommend-01 :ARG1 (v / ") + v.frame + " :ARG0 (s / " + s.amr +
                    ") :ARG1 (o / " + o.amr + ") :location (p / " + p.amr + ")))",
                "s:0-1 r:1-2 v:2-3 o:3-4 p:5-6"};
      }
      case 1: {
        auto a = noun(c, {});
        auto v = verb(c);
        auto b = noun(c, {a.amr});
        return {capitalize(a.plural) + " " + v.base + " many " + b.plural + " every year.",
                string("(v / ") + v.frame + " :ARG0 (a / " + a.amr + ") :ARG1 (b / " +
                    b.amr + " :quant (m / many)) :frequency (y / year))",
                "a:0-1 v:1-2 m:2-3 b:3-4 y:5-6"};
      }
      case 2: {
        auto adj = pick(adjectives());
        auto v = verb(c);
        auto o = noun(c, {});
        return {string("It is not ") + adj.base + " to " + v.base + " " + o.plural + ".",
                string("(a / ") + adj.frame + " :polarity - :ARG1 (v / " + v.frame +
                    " :ARG1 (o / " + o.amr + ")))",
                "a.1:2-3 a:3-4 v:5-6 o:6-7"};
      }
      case 3: {
        auto s = noun(c, {});
        auto v = verb(c);
        auto o = noun(c, {s.amr});
        auto b = noun(c, {s.amr, o.amr});
        auto v2 = verb(c, v.frame);
        auto x = noun(c, {s.amr, o.amr, b.amr});
        return {capitalize(s.plural) + " " + v.base + " " + o.plural + " because " + b.plural +
                    " " + v2.base + " " + x.plural + ".",
                string("(c / cause-01 :ARG0 (w / ") + v2.frame + " :ARG0 (b / " + b.amr +
                    ") :ARG1 (x / " + x.amr + ")) :ARG1 (v / " + v.frame + " :ARG0 (s / " +
                    s.amr + ") :ARG1 (o / " + o.amr + ")))",
                "s:0-1 v:1-2 o:2-3 c:3-4 b:4-5 w:5-6 x:6-7"};
      }
      default: {
        auto s = noun(c, {});
        auto v = verb(c);
        auto o = noun(c, {s.amr});
        return {capitalize(s.plural) + " have the right to " + v.base + " " + o.plural + ".",
                string("(r / right-05 :ARG1 (s / ") + s.amr + ") :ARG2 (v / " + v.frame +
                    " :ARG0 s :ARG1 (o / " + o.amr + ")))",
                "s:0-1 r:3-4 v:5-6 o:6-7"};
      }
    }
  }

  static Sentence hint(const Conclusion& c, hiarg::Stance stance) {
    const bool pro = stance == hiarg::Stance::kPro;
    return {hiarg::rewrite_conclusion(c.text(), stance),
            std::string("(j / ") + (pro ? "right-06" : "wrong-02") +
                " :ARG1 (r / recommend-01 :ARG1 (v / " + c.verb.frame + " :ARG0 (w / we) :ARG1 (o / " +
                c.object.amr + "))))",
            "w:1-2 r:2-3 v:3-4 o:4-5 j:7-8"};
  }

  std::string rejected() {
    if (below(4) == 0) return "Crime\x07 rises every single year.";
    return capitalize(pick(nouns()).plural) + " matter.";
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace detail

inline std::vector<Document> corpus(const Options& o) {
  detail::Generator gen(o.seed);
  std::vector<detail::Conclusion> conclusions;
  std::vector<std::string> used;
  while (conclusions.size() < o.conclusions) {
    detail::Conclusion c{gen.pick(detail::verbs()), gen.pick(detail::nouns())};
    if (std::find(used.begin(), used.end(), c.text()) != used.end()) continue;
    used.push_back(c.text());
    conclusions.push_back(c);
  }
  std::vector<Document> docs;
  for (std::size_t d = 0; d < o.documents; ++d) {
    const auto ci = gen.below(conclusions.size());
    const auto& c = conclusions[ci];
    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "doc%04zu", d);
    doc.id = id;
    doc.conclusion = c.text();
    doc.topic = "topic" + std::to_string(ci);
    doc.stance = gen.below(2) ? hiarg::Stance::kPro : hiarg::Stance::kCon;
    doc.hint = detail::Generator::hint(c, doc.stance);
    const auto n = o.min_sentences + gen.below(o.max_sentences - o.min_sentences + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (gen.unit() < o.rejected_probability) {
        doc.rejected.push_back(gen.rejected());
        if (!doc.premise.empty()) doc.premise += ' ';
        doc.premise += doc.rejected.back();
      }
      doc.sentences.push_back(gen.sentence(c));
      if (!doc.premise.empty()) doc.premise += (i % 7 == 6) ? "\n" : " ";
      doc.premise += doc.sentences.back().text;
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

// Manifest records in extraction order: hint at position 0, then premises.
inline std::vector<std::pair<hiarg::SentenceRecord, Sentence>> records(const Document& doc) {
  std::vector<std::pair<hiarg::SentenceRecord, Sentence>> out;
  auto add = [&](const Sentence& s, bool hint) {
    hiarg::SentenceRecord r;
    r.position = static_cast<std::uint32_t>(out.size());
    r.id = hiarg::sentence_id(doc.id, r.position);
    r.text = s.text;
    r.doc_id = doc.id;
    r.conclusion_id = doc.topic;
    r.stance = doc.stance;
    r.is_hint = hint;
    out.push_back({r, s});
  };
  add(doc.hint, true);
  for (const auto& s : doc.sentences) add(s, false);
  return out;
}

// Store built directly from the gold graphs, merged.
inline hiarg::HiArg store(const std::vector<Document>& docs) {
  hiarg::HiArg s;
  for (const auto& doc : docs) {
    for (const auto& [rec, sent] : records(doc)) {
      s.add_sentence(rec, hiarg::parse_penman(sent.penman), hiarg::parse_alignment(sent.alignment));
    }
  }
  s.merge();
  return s;
}

inline void write_files(const std::vector<Document>& docs, const std::string& corpus_path,
                        const std::string& graphs_path) {
  std::ofstream corpus(corpus_path, std::ios::binary);
  std::ofstream graphs(graphs_path, std::ios::binary);
  for (const auto& doc : docs) {
    nlohmann::ordered_json j;
    j["id"] = doc.id;
    j["conclusion"] = doc.conclusion;
    j["topic"] = doc.topic;
    j["stance"] = hiarg::to_string(doc.stance);
    j["premise"] = doc.premise;
    corpus << j.dump() << '\n';
    for (const auto& [rec, sent] : records(doc)) {
      hiarg::PenmanBlock b;
      b.id = rec.id;
      b.sentence = sent.text;
      b.alignments = sent.alignment;
      b.graph_text = sent.penman;
      graphs << hiarg::format_penman_block(b) << '\n';
    }
  }
}

}  // namespace synth
