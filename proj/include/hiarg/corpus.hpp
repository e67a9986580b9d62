#pragma once

// Extracting stage (sentence splitting, filtering, conclusion hints) and the
// ingestion of externally parsed Penman graphs.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hiarg/amr.hpp"
#include "hiarg/store.hpp"
#include "hiarg/tokenizer.hpp"

namespace hiarg {

struct DocumentRecord {
  std::string id;
  std::string conclusion;
  // Groups documents for relative search; defaults to the conclusion text.
  std::string conclusion_id;
  Stance stance = Stance::kNone;
  std::string premise;
};

struct FilterPolicy {
  std::size_t min_words = 5;
  bool require_printable = true;
};

enum class RejectReason : std::uint8_t { kShort, kUnprintable };

std::string_view to_string(RejectReason reason);

struct FilterResult {
  std::optional<RejectReason> reason;
  bool keep() const { return !reason.has_value(); }
};

class SentenceSplitter {
 public:
  virtual ~SentenceSplitter() = default;
  virtual std::vector<std::string> split(std::string_view text) const = 0;
};

// Splits after terminal punctuation (. ! ?), optionally followed by closing
// quotes or brackets, when whitespace or the end of text follows. A period
// does not end a sentence when the word it closes is a guarded abbreviation
// or a single-letter initial.
class RuleSplitter final : public SentenceSplitter {
 public:
  RuleSplitter();
  explicit RuleSplitter(std::vector<std::string> abbreviations);

  std::vector<std::string> split(std::string_view text) const override;

  static const std::vector<std::string>& default_abbreviations();

 private:
  bool is_abbreviation(std::string_view word) const;
  std::vector<std::string> abbreviations_;  // lower case, without the final '.'
};

std::vector<std::string> split_sentences(std::string_view text);

std::size_t count_words(std::string_view sentence);
bool is_printable(std::string_view sentence);
FilterResult filter_sentence(std::string_view sentence, const FilterPolicy& policy);

// `"<conclusion>" is right.` for pro, `... is wrong.` for con.
// Throws Error on an empty conclusion or a missing stance.
std::string rewrite_conclusion(std::string_view conclusion, Stance stance);

std::string sentence_id(std::string_view doc_id, std::uint32_t position);

struct Rejection {
  std::string doc_id;
  std::string text;
  RejectReason reason;
};

struct ExtractResult {
  // Manifest entries in (document, position) order; the hint is position 0.
  std::vector<SentenceRecord> sentences;
  std::vector<Rejection> rejections;
  std::map<std::string, std::size_t> reject_counts;

  void append(ExtractResult other);
};

ExtractResult extract_document(const DocumentRecord& doc,
                               const FilterPolicy& policy,
                               const SentenceSplitter& splitter);

// Line-delimited JSON corpus. Accepts flat records
//   {"id", "conclusion", "stance", "premise", "topic"?}
// and args.me records with a "premises" array of {"text", "stance"}.
std::vector<DocumentRecord> read_corpus(std::istream& in);
DocumentRecord parse_document(std::string_view json_line);

// Sentence manifest: one JSON object per line.
void write_manifest(std::ostream& out, const std::vector<SentenceRecord>& sentences);
std::vector<SentenceRecord> read_manifest(std::istream& in);

enum class MissingGraphMode : std::uint8_t { kSkip, kAbort };

struct IngestOptions {
  MissingGraphMode missing = MissingGraphMode::kSkip;
  // Used to bound alignment spans; when null spans are not range-checked.
  const Tokenizer* tokenizer = nullptr;
};

struct IngestedSentence {
  SentenceRecord record;
  AmrGraph graph;
  Alignment alignment;
};

struct IngestResult {
  std::vector<IngestedSentence> items;
  std::size_t manifest_size = 0;
  std::map<std::string, std::size_t> skip_counts;
  std::vector<std::pair<std::string, std::string>> skip_log;  // id, reason

  std::size_t skipped() const;
};

// Pairs manifest entries with Penman blocks by id, in manifest order. Graphs
// that fail to parse or validate are skipped and counted; a missing block is
// skipped or raises UnknownId depending on `options.missing`.
IngestResult ingest_parsed(const std::vector<PenmanBlock>& blocks,
                           const std::vector<SentenceRecord>& manifest,
                           const IngestOptions& options = {});

}  // namespace hiarg
