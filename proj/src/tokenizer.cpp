#include "hiarg/tokenizer.hpp"

#include <cctype>

namespace hiarg {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

}  // namespace

std::vector<std::string> SimpleTokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    std::size_t end = pos;
    while (end < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[end]))) {
      ++end;
    }
    std::string_view word = text.substr(pos, end - pos);
    pos = end;
    if (word.empty()) continue;
    if (word == separator() || word == pad()) {
      out.emplace_back(word);
      continue;
    }
    std::size_t i = 0;
    while (i < word.size()) {
      if (is_word_byte(static_cast<unsigned char>(word[i]))) {
        std::size_t j = i;
        while (j < word.size() && is_word_byte(static_cast<unsigned char>(word[j]))) {
          ++j;
        }
        out.emplace_back(word.substr(i, j - i));
        i = j;
      } else {
        out.emplace_back(word.substr(i, 1));
        ++i;
      }
    }
  }
  return out;
}

}  // namespace hiarg
