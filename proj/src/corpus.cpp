#include "hiarg/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "hiarg/error.hpp"

namespace hiarg {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (is_space(c)) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string_view to_string(RejectReason reason) {
  return reason == RejectReason::kShort ? "short" : "unprintable";
}

// ---------------------------------------------------------------------------
// Splitting

const std::vector<std::string>& RuleSplitter::default_abbreviations() {
  static const std::vector<std::string> kList = {
      "mr",   "mrs",  "ms",   "dr",  "prof", "sr",  "jr",   "st",  "vs",
      "etc",  "e.g",  "i.e",  "inc", "ltd",  "co",  "corp", "no",  "fig",
      "approx", "u.s", "u.k", "mt",  "gen",  "gov", "sen",  "rep", "cf",
      "al",   "jan",  "feb",  "mar", "apr",  "jun", "jul",  "aug", "sep",
      "sept", "oct",  "nov",  "dec"};
  return kList;
}

RuleSplitter::RuleSplitter() : RuleSplitter(default_abbreviations()) {}

RuleSplitter::RuleSplitter(std::vector<std::string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {
  for (auto& a : abbreviations_) {
    std::transform(a.begin(), a.end(), a.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (!a.empty() && a.back() == '.') a.pop_back();
  }
  std::sort(abbreviations_.begin(), abbreviations_.end());
}

bool RuleSplitter::is_abbreviation(std::string_view word) const {
  // Leading punctuation such as an opening quote is not part of the word.
  while (!word.empty() && !std::isalnum(static_cast<unsigned char>(word.front()))) {
    word.remove_prefix(1);
  }
  if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) {
    return true;  // initial
  }
  std::string lower(word);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return std::binary_search(abbreviations_.begin(), abbreviations_.end(), lower);
}

std::vector<std::string> RuleSplitter::split(std::string_view text) const {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto emit = [&](std::size_t end) {
    auto s = trim(text.substr(start, end - start));
    if (!s.empty()) out.push_back(std::move(s));
    start = end;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() &&
           (text[run_end] == '.' || text[run_end] == '!' || text[run_end] == '?')) {
      ++run_end;
    }
    std::size_t j = run_end;
    while (j < text.size() && is_closer(text[j])) ++j;
    if (j < text.size() && !is_space(text[j])) {
      i = j;
      continue;
    }
    if (c == '.' && run_end == i + 1) {
      // A lone period: the word it closes may be an abbreviation.
      std::size_t word_start = i;
      while (word_start > start && !is_space(text[word_start - 1])) --word_start;
      if (is_abbreviation(text.substr(word_start, i - word_start))) {
        i = j;
        continue;
      }
    }
    emit(j);
    i = j;
  }
  emit(text.size());
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  static const RuleSplitter kDefault;
  return kDefault.split(text);
}

// ---------------------------------------------------------------------------
// Filtering

std::size_t count_words(std::string_view sentence) {
  std::size_t words = 0;
  bool in_word = false;
  for (char c : sentence) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  return words;
}

bool is_printable(std::string_view sentence) {
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    auto c = static_cast<unsigned char>(sentence[i]);
    if (c < 0x20 || c == 0x7f) return false;
    // UTF-8 encoded C1 controls U+0080..U+009F.
    if (c == 0xc2 && i + 1 < sentence.size()) {
      auto next = static_cast<unsigned char>(sentence[i + 1]);
      if (next >= 0x80 && next <= 0x9f) return false;
    }
  }
  return true;
}

FilterResult filter_sentence(std::string_view sentence, const FilterPolicy& policy) {
  if (policy.require_printable && !is_printable(sentence)) {
    return {RejectReason::kUnprintable};
  }
  if (count_words(sentence) < policy.min_words) return {RejectReason::kShort};
  return {};
}

std::string rewrite_conclusion(std::string_view conclusion, Stance stance) {
  auto text = trim(conclusion);
  if (text.empty()) throw Error("cannot rewrite an empty conclusion");
  switch (stance) {
    case Stance::kPro:
      return "\"" + text + "\" is right.";
    case Stance::kCon:
      return "\"" + text + "\" is wrong.";
    case Stance::kNone:
      break;
  }
  throw Error("conclusion hint needs a pro or con stance");
}

std::string sentence_id(std::string_view doc_id, std::uint32_t position) {
  return std::string(doc_id) + "#" + std::to_string(position);
}

// ---------------------------------------------------------------------------
// Extraction

void ExtractResult::append(ExtractResult other) {
  sentences.insert(sentences.end(), std::make_move_iterator(other.sentences.begin()),
                   std::make_move_iterator(other.sentences.end()));
  rejections.insert(rejections.end(),
                    std::make_move_iterator(other.rejections.begin()),
                    std::make_move_iterator(other.rejections.end()));
  for (const auto& [reason, n] : other.reject_counts) reject_counts[reason] += n;
}

ExtractResult extract_document(const DocumentRecord& doc, const FilterPolicy& policy,
                               const SentenceSplitter& splitter) {
  ExtractResult result;
  std::uint32_t position = 0;
  auto make = [&](std::string text, bool hint) {
    SentenceRecord rec;
    rec.id = sentence_id(doc.id, position);
    rec.text = std::move(text);
    rec.doc_id = doc.id;
    rec.conclusion_id = doc.conclusion_id.empty() ? doc.conclusion : doc.conclusion_id;
    rec.stance = doc.stance;
    rec.position = position++;
    rec.is_hint = hint;
    result.sentences.push_back(std::move(rec));
  };
  // Hints are synthesized, so premise filters do not apply to them.
  if (!trim(doc.conclusion).empty() && doc.stance != Stance::kNone) {
    make(rewrite_conclusion(doc.conclusion, doc.stance), true);
  }
  // Layout whitespace (newlines, tabs) is normalized before splitting.
  for (auto& sentence : splitter.split(collapse_whitespace(doc.premise))) {
    auto verdict = filter_sentence(sentence, policy);
    if (!verdict.keep()) {
      ++result.reject_counts[std::string(to_string(*verdict.reason))];
      result.rejections.push_back({doc.id, std::move(sentence), *verdict.reason});
      continue;
    }
    make(std::move(sentence), false);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Corpus and manifest files

DocumentRecord parse_document(std::string_view json_line) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed corpus record: ") + e.what());
  }
  DocumentRecord doc;
  doc.id = j.value("id", "");
  doc.conclusion = j.value("conclusion", "");
  doc.conclusion_id = j.value("topic", "");
  if (j.contains("premises") && j["premises"].is_array() && !j["premises"].empty()) {
    const auto& p = j["premises"][0];
    doc.premise = p.value("text", "");
    doc.stance = stance_from_string(p.value("stance", ""));
  } else {
    doc.premise = j.value("premise", "");
    doc.stance = stance_from_string(j.value("stance", ""));
  }
  if (doc.id.empty()) throw Error("corpus record without id");
  return doc;
}

std::vector<DocumentRecord> read_corpus(std::istream& in) {
  std::vector<DocumentRecord> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    docs.push_back(parse_document(line));
  }
  return docs;
}

void write_manifest(std::ostream& out, const std::vector<SentenceRecord>& sentences) {
  for (const auto& s : sentences) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["doc"] = s.doc_id;
    j["conclusion_id"] = s.conclusion_id;
    j["stance"] = to_string(s.stance);
    j["position"] = s.position;
    j["hint"] = s.is_hint;
    j["text"] = s.text;
    out << j.dump() << '\n';
  }
}

std::vector<SentenceRecord> read_manifest(std::istream& in) {
  std::vector<SentenceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      SentenceRecord s;
      s.id = j.at("id").get<std::string>();
      s.doc_id = j.at("doc").get<std::string>();
      s.conclusion_id = j.value("conclusion_id", "");
      s.stance = stance_from_string(j.value("stance", "none"));
      s.position = j.at("position").get<std::uint32_t>();
      s.is_hint = j.value("hint", false);
      s.text = j.at("text").get<std::string>();
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error("manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ingestion

std::size_t IngestResult::skipped() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : skip_counts) n += count;
  return n;
}

IngestResult ingest_parsed(const std::vector<PenmanBlock>& blocks,
                           const std::vector<SentenceRecord>& manifest,
                           const IngestOptions& options) {
  std::unordered_map<std::string, const PenmanBlock*> by_id;
  for (const auto& b : blocks) by_id.emplace(b.id, &b);

  IngestResult result;
  result.manifest_size = manifest.size();
  auto skip = [&](const std::string& id, const std::string& reason,
                  const std::string& detail) {
    spdlog::warn("skipping sentence {}: {} ({})", id, reason, detail);
    ++result.skip_counts[reason];
    result.skip_log.emplace_back(id, reason + ": " + detail);
  };

  for (const auto& entry : manifest) {
    auto it = by_id.find(entry.id);
    if (it == by_id.end()) {
      if (options.missing == MissingGraphMode::kAbort) {
        throw UnknownId("no parsed graph for sentence " + entry.id);
      }
      skip(entry.id, "missing", "no graph block");
      continue;
    }
    const PenmanBlock& block = *it->second;
    IngestedSentence item;
    item.record = entry;
    try {
      item.graph = parse_penman(block.graph_text);
    } catch (const ParseError& e) {
      skip(entry.id, "parse-error", e.what());
      continue;
    }
    auto report = validate(item.graph);
    if (!report.ok()) {
      const auto& v = report.violations.front();
      skip(entry.id, report.has(Violation::Kind::kCycle) ? "cycle" : "invalid-graph",
           v.message);
      continue;
    }
    if (block.alignments) {
      try {
        item.alignment = parse_alignment(*block.alignments);
      } catch (const ParseError& e) {
        skip(entry.id, "alignment", e.what());
        continue;
      }
      std::size_t bound = SIZE_MAX;
      if (options.tokenizer != nullptr) {
        bound = options.tokenizer->tokenize(entry.text).size();
      }
      auto problem = check_alignment(item.alignment, item.graph, bound);
      if (!problem.empty()) {
        skip(entry.id, "alignment", problem);
        continue;
      }
    }
    result.items.push_back(std::move(item));
  }
  return result;
}

}  // namespace hiarg
