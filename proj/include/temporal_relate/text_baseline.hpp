#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "temporal_relate/entity_table.hpp"

namespace trel {

// TF-IDF text baseline: one document per entity, lowercase alphabetic
// tokens, stop words and single characters dropped.
struct Corpus {
  std::unordered_map<EntityId, std::map<std::string, int>> docs;  // token -> tf
  std::unordered_map<std::string, int> df;
  int doc_count = 0;
};

inline std::vector<std::string> tokenize(const std::string& text,
                                         const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2 && !stopwords.count(cur)) tokens.push_back(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (std::isalpha(c)) cur.push_back(static_cast<char>(std::tolower(c)));
    else flush();
  }
  flush();
  return tokens;
}

inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open stopword file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

// Builds a corpus from a directory of `<entity>.txt` files.
inline Corpus build_corpus(const std::string& dir,
                           const std::unordered_set<std::string>& stopwords,
                           EntityTable& table) {
  Corpus corpus;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path());
  if (files.empty()) throw std::runtime_error("no .txt documents in " + dir);
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    std::ifstream is(path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    EntityId id = table.intern(path.stem().string());
    auto& doc = corpus.docs[id];
    for (const auto& tok : tokenize(text, stopwords)) ++doc[tok];
    for (const auto& [tok, _] : doc) ++corpus.df[tok];
    ++corpus.doc_count;
  }
  return corpus;
}

// Cosine of L2-normalized vectors with weight tf * (1 + ln((1+N)/(1+df))).
inline double tfidf_cosine(const Corpus& corpus, EntityId a, EntityId b) {
  auto ita = corpus.docs.find(a);
  auto itb = corpus.docs.find(b);
  if (ita == corpus.docs.end() || itb == corpus.docs.end())
    throw std::invalid_argument("tfidf_cosine: entity not in corpus");
  auto idf = [&](const std::string& tok) {
    auto it = corpus.df.find(tok);
    const double df = it == corpus.df.end() ? 0.0 : it->second;
    return 1.0 + std::log((1.0 + corpus.doc_count) / (1.0 + df));
  };
  auto norm2 = [&](const std::map<std::string, int>& doc) {
    double s = 0.0;
    for (const auto& [tok, tf] : doc) {
      const double w = tf * idf(tok);
      s += w * w;
    }
    return s;
  };
  const double na2 = norm2(ita->second), nb2 = norm2(itb->second);
  if (na2 == 0.0 || nb2 == 0.0) return 0.0;
  double dot = 0.0;
  for (const auto& [tok, tf] : ita->second) {
    auto it = itb->second.find(tok);
    if (it != itb->second.end()) dot += tf * idf(tok) * it->second * idf(tok);
  }
  return dot / std::sqrt(na2 * nb2);
}

}  // namespace trel
