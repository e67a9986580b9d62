#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hiarg {

// Contract for any tokenizer plugged into the sample factory. Implementations
// must be deterministic, and must emit separator() as a single token when it
// appears as a whitespace-delimited word, so that tokenizing `a <sep> b`
// equals tokenize(a) + [sep] + tokenize(b).
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
  virtual std::string_view separator() const { return "</s>"; }
  virtual std::string_view pad() const { return "<pad>"; }
};

// Default tokenizer: whitespace split, then runs of word characters
// (alphanumerics, '_', any non-ASCII byte) are tokens and every other
// printable ASCII character is a token of its own.
class SimpleTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(std::string_view text) const override;
};

}  // namespace hiarg
