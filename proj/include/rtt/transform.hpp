#pragma once

// Replacement candidate generation: embedding neighbours, synonym tables and
// character-level edits. Every generator is deterministic and never returns
// the original word or a duplicate.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rtt/backends.hpp"
#include "rtt/resources.hpp"
#include "rtt/text.hpp"

namespace rtt {

struct CandidateSet {
  std::size_t word_index = 0;
  std::vector<std::string> candidates;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

enum class CharMechanism { kInsert, kDelete, kAdjacentSwap, kHomoglyph, kRandomSub };

namespace detail {

// Appends `cand` unless it equals the original (case-insensitively) or was
// already seen.
class CandidateSink {
 public:
  explicit CandidateSink(std::string_view original) : original_(original) {}

  void add(std::string cand) {
    if (cand.empty() || iequals(cand, original_)) return;
    if (!seen_.insert(to_lower(cand)).second) return;
    out_.push_back(std::move(cand));
  }

  std::vector<std::string> take() && { return std::move(out_); }
  std::size_t size() const noexcept { return out_.size(); }

 private:
  std::string_view original_;
  std::unordered_set<std::string> seen_;
  std::vector<std::string> out_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Lowercase letter keyed by (seed, word, position, mechanism).
inline char keyed_letter(std::uint64_t seed, std::string_view word, std::size_t pos,
                         CharMechanism mech) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a(word));
  h = splitmix64(h ^ static_cast<std::uint64_t>(pos));
  h = splitmix64(h ^ static_cast<std::uint64_t>(mech));
  return static_cast<char>('a' + h % 26);
}

inline bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace detail

// K nearest neighbours by cosine with similarity >= min_cos. Ordered by
// descending similarity, equal similarities lexicographically.
inline CandidateSet embedding_synonyms(std::string_view word, std::size_t k, double min_cos,
                                       const EmbeddingStore& store) {
  CandidateSet out;
  const Vector* query = store.lookup(word);
  if (!query || k == 0) return out;
  auto key = to_lower(word);
  std::vector<std::pair<double, const std::string*>> scored;
  for (const auto& [w, v] : store.entries()) {
    if (w == key) continue;
    double c = cosine(*query, v);
    if (c >= min_cos) scored.emplace_back(c, &w);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  for (std::size_t i = 0; i < scored.size() && out.candidates.size() < k; ++i) {
    out.candidates.push_back(*scored[i].second);
  }
  return out;
}

// First K table synonyms in file order, skipping the word itself.
inline CandidateSet synonym_table_candidates(
    std::string_view word, std::size_t k,
    const std::map<std::string, std::vector<std::string>>& table) {
  CandidateSet out;
  auto it = table.find(to_lower(word));
  if (it == table.end()) return out;
  detail::CandidateSink sink(word);
  for (const auto& syn : it->second) {
    if (sink.size() >= k) break;
    sink.add(syn);
  }
  out.candidates = std::move(sink).take();
  return out;
}

// Enumeration order: delete, adjacent_swap, homoglyph, insert, random_sub;
// each left to right. Words with non-ASCII bytes are left alone.
inline CandidateSet char_perturbations(std::string_view word, const std::set<CharMechanism>& mechanisms,
                                       const std::map<char, char>& homoglyphs, std::uint64_t seed) {
  CandidateSet out;
  if (word.empty() || !detail::is_ascii(word)) return out;
  detail::CandidateSink sink(word);
  const std::string w(word);
  const std::size_t n = w.size();
  auto on = [&](CharMechanism m) { return mechanisms.count(m) != 0; };

  if (on(CharMechanism::kDelete) && n > 1) {
    for (std::size_t i = 0; i < n; ++i) sink.add(w.substr(0, i) + w.substr(i + 1));
  }
  if (on(CharMechanism::kAdjacentSwap)) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::string c = w;
      std::swap(c[i], c[i + 1]);
      sink.add(std::move(c));
    }
  }
  if (on(CharMechanism::kHomoglyph)) {
    for (std::size_t i = 0; i < n; ++i) {
      auto it = homoglyphs.find(w[i]);
      if (it == homoglyphs.end()) continue;
      std::string c = w;
      c[i] = it->second;
      sink.add(std::move(c));
    }
  }
  if (on(CharMechanism::kInsert)) {
    for (std::size_t i = 0; i <= n; ++i) {
      char ch = detail::keyed_letter(seed, w, i, CharMechanism::kInsert);
      sink.add(w.substr(0, i) + ch + w.substr(i));
    }
  }
  if (on(CharMechanism::kRandomSub)) {
    for (std::size_t i = 0; i < n; ++i) {
      char ch = detail::keyed_letter(seed, w, i, CharMechanism::kRandomSub);
      if (std::tolower(static_cast<unsigned char>(w[i])) == ch) ch = ch == 'z' ? 'a' : ch + 1;
      std::string c = w;
      c[i] = ch;
      sink.add(std::move(c));
    }
  }
  out.candidates = std::move(sink).take();
  return out;
}

// What a recipe draws candidates from. Sources are concatenated in the order
// synonym table, embedding neighbours, character edits.
struct TransformSpec {
  bool use_synonym_table = false;
  bool use_embeddings = false;
  double min_embedding_cos = -1.0;
  std::set<CharMechanism> char_mechanisms;

  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

// Applies the source casing of the first letter to a table-sourced candidate.
inline std::string match_case(std::string_view original, std::string cand) {
  if (!original.empty() && std::isupper(static_cast<unsigned char>(original[0])) && !cand.empty() &&
      std::islower(static_cast<unsigned char>(cand[0]))) {
    cand[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cand[0])));
  }
  return cand;
}

inline CandidateSet generate_candidates(const Sentence& s, std::size_t index, const TransformSpec& spec,
                                        std::size_t limit, const ResourceBundle& bundle,
                                        const EmbeddingStore& embeddings, std::uint64_t seed) {
  const std::string& word = s[index];
  detail::CandidateSink sink(word);
  if (spec.use_synonym_table) {
    for (auto& c : synonym_table_candidates(word, limit, bundle.synonym_table).candidates) {
      sink.add(match_case(word, std::move(c)));
    }
  }
  if (spec.use_embeddings) {
    for (auto& c : embedding_synonyms(word, limit, spec.min_embedding_cos, embeddings).candidates) {
      sink.add(match_case(word, std::move(c)));
    }
  }
  if (!spec.char_mechanisms.empty()) {
    for (auto& c : char_perturbations(word, spec.char_mechanisms, bundle.homoglyph_map, seed).candidates) {
      sink.add(std::move(c));
    }
  }
  CandidateSet out;
  out.word_index = index;
  out.candidates = std::move(sink).take();
  if (out.candidates.size() > limit) out.candidates.resize(limit);
  return out;
}

}  // namespace rtt
