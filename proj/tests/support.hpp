#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "hx/parse.hpp"

namespace hxtest {

inline std::filesystem::path corpus_path(const std::string& rel) { return std::filesystem::path(HX_CORPUS_DIR) / rel; }

/// Corpus documents are parsed once per test binary.
inline const hx::Document& corpus(const std::string& rel) {
  static std::map<std::string, hx::Document> cache;
  auto it = cache.find(rel);
  if (it == cache.end()) it = cache.emplace(rel, hx::load_document(corpus_path(rel))).first;
  return it->second;
}

/// A document parsed from text, with includes resolved against the corpus.
inline hx::Document doc_from(const std::string& text) {
  return hx::parse_document(text, "<test>", std::filesystem::path(HX_CORPUS_DIR));
}

}  // namespace hxtest
