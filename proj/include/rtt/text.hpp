#pragma once

// Word-level sentence model shared by every attack stage.
//
// A Sentence keeps the words an attack may perturb together with the exact
// glue (whitespace and edge punctuation) between them, so any edited sentence
// can be turned back into text without losing formatting.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "rtt/errors.hpp"

namespace rtt {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// ASCII punctuation only; UTF-8 continuation bytes count as word characters.
inline bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

class Sentence {
 public:
  Sentence() : separators_{""} {}

  // separators.size() must be tokens.size() + 1 and no token may be empty.
  Sentence(std::vector<std::string> tokens, std::vector<std::string> separators,
           std::string source_text)
      : tokens_(std::move(tokens)),
        separators_(std::move(separators)),
        source_text_(std::move(source_text)) {
    if (separators_.size() != tokens_.size() + 1) {
      throw InputError("sentence needs exactly one more separator than tokens");
    }
    for (const auto& t : tokens_) {
      if (t.empty()) throw InputError("sentence tokens must be non-empty");
    }
  }

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::string>& separators() const noexcept { return separators_; }
  const std::string& source_text() const noexcept { return source_text_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_.at(i); }
  auto begin() const noexcept { return tokens_.begin(); }
  auto end() const noexcept { return tokens_.end(); }

  std::string text() const {
    std::string out = separators_.front();
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      out += tokens_[i];
      out += separators_[i + 1];
    }
    return out;
  }

  // New sentence with token `index` set to `word`; separators untouched.
  Sentence with_word(std::size_t index, std::string word) const {
    if (index >= tokens_.size()) {
      throw PositionError("token index " + std::to_string(index) + " out of range for " +
                          std::to_string(tokens_.size()) + "-token sentence");
    }
    if (word.empty()) throw InputError("replacement word must be non-empty");
    Sentence out = *this;
    out.tokens_[index] = std::move(word);
    return out;
  }

  // Drops token `index` along with the separator that follows it.
  Sentence without_word(std::size_t index) const {
    if (index >= tokens_.size()) {
      throw PositionError("token index " + std::to_string(index) + " out of range for " +
                          std::to_string(tokens_.size()) + "-token sentence");
    }
    Sentence out = *this;
    out.tokens_.erase(out.tokens_.begin() + static_cast<std::ptrdiff_t>(index));
    out.separators_.erase(out.separators_.begin() + static_cast<std::ptrdiff_t>(index) + 1);
    return out;
  }

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::string> separators_;
  std::string source_text_;
};

// Splits on whitespace; punctuation at either edge of a whitespace-delimited
// chunk goes to the neighbouring separator. Interior punctuation stays in the
// token ("beer-fueled", "I'll"). Lossless: detokenize(tokenize(t)) == t.
inline Sentence tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::vector<std::string> seps;
  std::string glue;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_space(text[i])) {
      glue += text[i++];
      continue;
    }
    std::size_t end = i;
    while (end < n && !is_space(text[end])) ++end;
    std::size_t lo = i;
    std::size_t hi = end;
    while (lo < hi && is_punct(text[lo])) ++lo;
    while (hi > lo && is_punct(text[hi - 1])) --hi;
    if (lo == hi) {
      glue.append(text.substr(i, end - i));
    } else {
      glue.append(text.substr(i, lo - i));
      seps.push_back(std::move(glue));
      glue.clear();
      tokens.emplace_back(text.substr(lo, hi - lo));
      glue.append(text.substr(hi, end - hi));
    }
    i = end;
  }
  seps.push_back(std::move(glue));
  return Sentence(std::move(tokens), std::move(seps), std::string(text));
}

inline std::string detokenize(const Sentence& s) { return s.text(); }

inline Sentence replace_word(const Sentence& s, std::size_t index, std::string word) {
  return s.with_word(index, std::move(word));
}

struct LabeledExample {
  std::string id;
  std::string text;
  int label = 0;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

}  // namespace rtt
