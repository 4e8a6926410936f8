#pragma once

// Flat-file linguistic resources: word embeddings, stopwords, synonym and POS
// tables, homoglyphs, sentiment weights and phrase translation tables.
//
// Everything is plain text so fixtures can be diffed and reviewed. Loaders are
// strict: a row with the wrong column count is an error, never skipped.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rtt/errors.hpp"
#include "rtt/text.hpp"

namespace rtt {

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kOther };

inline std::optional<PosTag> parse_pos_tag(std::string_view s) {
  if (s == "NOUN") return PosTag::kNoun;
  if (s == "VERB") return PosTag::kVerb;
  if (s == "ADJ") return PosTag::kAdj;
  if (s == "ADV") return PosTag::kAdv;
  if (s == "OTHER") return PosTag::kOther;
  return std::nullopt;
}

using Vector = std::vector<double>;

class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }

  void insert(std::string word, Vector v) {
    if (dimension_ == 0) dimension_ = v.size();
    if (v.size() != dimension_ || dimension_ == 0) {
      throw FormatError("embedding for '" + word + "' has dimension " +
                        std::to_string(v.size()) + ", expected " + std::to_string(dimension_));
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw FormatError("non-finite component in embedding for '" + word + "'");
    }
    entries_[to_lower(word)] = std::move(v);
  }

  const Vector* lookup(std::string_view word) const {
    auto it = entries_.find(to_lower(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

  // Sorted by word.
  const std::map<std::string, Vector>& entries() const noexcept { return entries_; }

  friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

 private:
  std::size_t dimension_ = 0;
  std::map<std::string, Vector> entries_;
};

struct ResourceBundle {
  std::unordered_set<std::string> stopwords;
  std::map<std::string, std::vector<std::string>> synonym_table;
  std::map<std::string, std::set<PosTag>> pos_lexicon;
  std::map<char, char> homoglyph_map;
  std::map<std::string, double> sentiment_lexicon;

  bool is_stopword(std::string_view word) const { return stopwords.count(to_lower(word)) != 0; }

  friend bool operator==(const ResourceBundle&, const ResourceBundle&) = default;
};

// Lowercased source phrase (as a token list) -> target phrase.
using PhraseTable = std::map<std::vector<std::string>, std::string>;

// Keyed by (source language, target language).
using TranslationTables = std::map<std::pair<std::string, std::string>, PhraseTable>;

namespace detail {

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delim, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                       : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::ifstream open_input(const std::filesystem::path& path, const std::string& kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + kind + " file: " + path.string());
  return in;
}

// Calls fn(columns, line_number) for every non-blank TSV row.
template <typename Fn>
void for_each_tsv_row(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(split(line, '\t'), lineno);
  }
}

}  // namespace detail

inline EmbeddingStore load_embeddings(std::istream& in) {
  EmbeddingStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw FormatError("embedding row has no vector components", lineno);
    Vector v;
    v.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto x = detail::parse_real(fields[i]);
      if (!x) throw FormatError("unparseable embedding component '" + fields[i] + "'", lineno);
      v.push_back(*x);
    }
    if (store.dimension() != 0 && v.size() != store.dimension()) {
      throw FormatError("embedding dimension " + std::to_string(v.size()) +
                            " does not match " + std::to_string(store.dimension()),
                        lineno);
    }
    if (store.lookup(fields[0])) throw FormatError("duplicate embedding for '" + fields[0] + "'", lineno);
    store.insert(fields[0], std::move(v));
  }
  return store;
}

inline EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  auto in = detail::open_input(path, "embeddings");
  return load_embeddings(in);
}

// One `kind=path` per line; '#' starts a comment. Relative paths resolve
// against the manifest's directory.
class ResourceManifest {
 public:
  ResourceManifest() = default;

  static ResourceManifest parse(std::istream& in, const std::filesystem::path& base_dir) {
    ResourceManifest m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      detail::strip_cr(line);
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw FormatError("manifest line is not key=path", lineno);
      auto key = line.substr(0, eq);
      auto value = line.substr(eq + 1);
      auto trim = [](std::string& s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
      };
      trim(key);
      trim(value);
      if (key.empty() || value.empty()) throw FormatError("manifest line has empty key or path", lineno);
      std::filesystem::path p(value);
      if (p.is_relative()) p = base_dir / p;
      m.paths_[key] = p;
    }
    return m;
  }

  static ResourceManifest load(const std::filesystem::path& path) {
    auto in = detail::open_input(path, "manifest");
    return parse(in, path.parent_path());
  }

  void set(std::string kind, std::filesystem::path p) { paths_[std::move(kind)] = std::move(p); }

  std::optional<std::filesystem::path> path(const std::string& kind) const {
    auto it = paths_.find(kind);
    if (it == paths_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, std::filesystem::path>& paths() const noexcept { return paths_; }

 private:
  std::map<std::string, std::filesystem::path> paths_;
};

namespace detail {

inline void load_stopwords(std::istream& in, ResourceBundle& b) {
  for_each_tsv_row(in, [&](const std::vector<std::string>& cols, std::size_t ln) {
    if (cols.size() != 1) throw FormatError("stopword row must have 1 column", ln);
    b.stopwords.insert(to_lower(cols[0]));
  });
}

inline void load_synonyms(std::istream& in, ResourceBundle& b) {
  for_each_tsv_row(in, [&](const std::vector<std::string>& cols, std::size_t ln) {
    if (cols.size() < 2) throw FormatError("synonym row needs a word and at least one synonym", ln);
    auto& list = b.synonym_table[to_lower(cols[0])];
    for (std::size_t i = 1; i < cols.size(); ++i) {
      if (cols[i].empty()) throw FormatError("empty synonym column", ln);
      list.push_back(cols[i]);
    }
  });
}

inline void load_pos(std::istream& in, ResourceBundle& b) {
  for_each_tsv_row(in, [&](const std::vector<std::string>& cols, std::size_t ln) {
    if (cols.size() < 2) throw FormatError("pos row needs a word and at least one tag", ln);
    auto& tags = b.pos_lexicon[to_lower(cols[0])];
    for (std::size_t i = 1; i < cols.size(); ++i) {
      auto tag = parse_pos_tag(cols[i]);
      if (!tag) throw FormatError("unknown POS tag '" + cols[i] + "'", ln);
      tags.insert(*tag);
    }
  });
}

inline void load_homoglyphs(std::istream& in, ResourceBundle& b) {
  for_each_tsv_row(in, [&](const std::vector<std::string>& cols, std::size_t ln) {
    if (cols.size() != 2) throw FormatError("homoglyph row must have 2 columns", ln);
    if (cols[0].size() != 1 || cols[1].size() != 1) {
      throw FormatError("homoglyph entries must be single ASCII characters", ln);
    }
    if (cols[0] == cols[1]) throw FormatError("homoglyph maps a character to itself", ln);
    auto [it, inserted] = b.homoglyph_map.emplace(cols[0][0], cols[1][0]);
    if (!inserted && it->second != cols[1][0]) {
      throw FormatError("conflicting homoglyph for '" + cols[0] + "'", ln);
    }
  });
}

inline void load_sentiment(std::istream& in, ResourceBundle& b) {
  for_each_tsv_row(in, [&](const std::vector<std::string>& cols, std::size_t ln) {
    if (cols.size() != 2) throw FormatError("sentiment row must have 2 columns", ln);
    auto w = parse_real(cols[1]);
    if (!w) throw FormatError("unparseable sentiment weight '" + cols[1] + "'", ln);
    auto [it, inserted] = b.sentiment_lexicon.emplace(to_lower(cols[0]), *w);
    if (!inserted && it->second != *w) {
      throw FormatError("conflicting sentiment weight for '" + cols[0] + "'", ln);
    }
  });
}

}  // namespace detail

// Each kind is optional; an absent kind yields an empty table.
inline ResourceBundle load_bundle(const ResourceManifest& manifest) {
  ResourceBundle b;
  auto load = [&](const std::string& kind, auto&& loader) {
    auto p = manifest.path(kind);
    if (!p) return;
    auto in = detail::open_input(*p, kind);
    try {
      loader(in, b);
    } catch (const FormatError& e) {
      throw FormatError(kind + ": " + e.message(), e.line());
    }
  };
  load("stopwords", detail::load_stopwords);
  load("synonyms", detail::load_synonyms);
  load("pos", detail::load_pos);
  load("homoglyphs", detail::load_homoglyphs);
  load("sentiment", detail::load_sentiment);
  return b;
}

inline PhraseTable load_phrase_table(std::istream& in) {
  PhraseTable table;
  detail::for_each_tsv_row(in, [&](const std::vector<std::string>& cols, std::size_t ln) {
    if (cols.size() != 2) throw FormatError("translation row must have 2 columns", ln);
    auto src = detail::split_ws(to_lower(cols[0]));
    if (src.empty() || cols[1].find_first_not_of(' ') == std::string::npos) {
      throw FormatError("translation row has an empty phrase", ln);
    }
    auto [it, inserted] = table.emplace(std::move(src), cols[1]);
    if (!inserted && it->second != cols[1]) {
      throw FormatError("conflicting translation for '" + cols[0] + "'", ln);
    }
  });
  return table;
}

// Manifest keys of the form `translation.<src>-<tgt>`.
inline TranslationTables load_translation_tables(const ResourceManifest& manifest) {
  constexpr std::string_view kPrefix = "translation.";
  TranslationTables tables;
  for (const auto& [kind, path] : manifest.paths()) {
    if (kind.rfind(kPrefix, 0) != 0) continue;
    auto pair = kind.substr(kPrefix.size());
    auto dash = pair.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == pair.size()) {
      throw FormatError("translation key must look like translation.en-es: " + kind);
    }
    auto in = detail::open_input(path, kind);
    try {
      tables[{pair.substr(0, dash), pair.substr(dash + 1)}] = load_phrase_table(in);
    } catch (const FormatError& e) {
      throw FormatError(kind + ": " + e.message(), e.line());
    }
  }
  return tables;
}

// All offline resources an attack run needs.
struct ResourceSet {
  ResourceBundle bundle;
  EmbeddingStore embeddings;
  TranslationTables translations;
};

inline ResourceSet load_resource_set(const std::filesystem::path& manifest_path) {
  auto manifest = ResourceManifest::load(manifest_path);
  ResourceSet rs;
  rs.bundle = load_bundle(manifest);
  if (auto p = manifest.path("embeddings")) rs.embeddings = load_embeddings(*p);
  rs.translations = load_translation_tables(manifest);
  return rs;
}

}  // namespace rtt
