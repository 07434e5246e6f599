#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "temporal_relate/entity_table.hpp"

namespace trel {

struct ParseStats {
  std::uint64_t pairs = 0;
  std::uint64_t malformed = 0;
  std::uint64_t skipped = 0;  // well-formed but predicate-filtered
};

using PairSink = std::function<void(EntityId, EntityId)>;

namespace detail {

inline int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int hi = hex_val(s[i + 1]), lo = hex_val(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

// Local name of a resource IRI: text after the last '/', percent-decoded.
inline std::string iri_local_name(std::string_view iri) {
  auto pos = iri.rfind('/');
  auto local = pos == std::string_view::npos ? iri : iri.substr(pos + 1);
  return percent_decode(local);
}

// Reads one <...> term starting at s[i]; returns the IRI body or empty on
// malformed input, advancing i past the term.
inline std::string_view take_iri(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  if (i >= s.size() || s[i] != '<') return {};
  auto close = s.find('>', i + 1);
  if (close == std::string_view::npos) return {};
  auto body = s.substr(i + 1, close - i - 1);
  i = close + 1;
  return body;
}

}  // namespace detail

// Streams (source, target) pairs from an N-Triples file, keeping only
// triples whose predicate matches `predicate_filter`. Subject/object IRIs
// are reduced to their local name and interned. Malformed lines are counted,
// not fatal; triples with literal objects are skipped.
inline ParseStats parse_ntriples_links(const std::string& path,
                                       const std::string& predicate_filter,
                                       EntityTable& table, const PairSink& sink) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  ParseStats stats;
  std::string line;
  while (std::getline(is, line)) {
    std::string_view sv(line);
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) sv.remove_suffix(1);
    if (sv.empty() || sv.front() == '#') continue;
    std::size_t i = 0;
    auto subj = detail::take_iri(sv, i);
    auto pred = detail::take_iri(sv, i);
    if (subj.empty() || pred.empty()) {
      ++stats.malformed;
      continue;
    }
    while (i < sv.size() && (sv[i] == ' ' || sv[i] == '\t')) ++i;
    if (i >= sv.size()) {
      ++stats.malformed;
      continue;
    }
    if (sv[i] != '<') {
      // literal or blank-node object: out of scope, treat as non-matching
      ++stats.skipped;
      continue;
    }
    std::size_t obj_start = i;
    auto obj = detail::take_iri(sv, i);
    if (obj.empty()) {
      ++stats.malformed;
      continue;
    }
    (void)obj_start;
    while (i < sv.size() && (sv[i] == ' ' || sv[i] == '\t')) ++i;
    if (i >= sv.size() || sv[i] != '.') {
      ++stats.malformed;
      continue;
    }
    if (pred != predicate_filter) {
      ++stats.skipped;
      continue;
    }
    EntityId s = table.intern(detail::iri_local_name(subj));
    EntityId t = table.intern(detail::iri_local_name(obj));
    sink(s, t);
    ++stats.pairs;
  }
  return stats;
}

// Streams pairs from a `source<TAB>target` edge list. '#' lines are
// comments, blank lines are skipped, any other line without exactly one TAB
// counts as malformed.
inline ParseStats parse_edge_tsv(const std::string& path, EntityTable& table,
                                 const PairSink& sink) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  ParseStats stats;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      ++stats.malformed;
      continue;
    }
    EntityId s = table.intern(std::string_view(line).substr(0, tab));
    EntityId t = table.intern(std::string_view(line).substr(tab + 1));
    sink(s, t);
    ++stats.pairs;
  }
  return stats;
}

inline std::vector<std::pair<EntityId, EntityId>> collect_pairs(
    const std::function<ParseStats(const PairSink&)>& parse, ParseStats* stats = nullptr) {
  std::vector<std::pair<EntityId, EntityId>> pairs;
  auto st = parse([&](EntityId s, EntityId t) { pairs.emplace_back(s, t); });
  if (stats) *stats = st;
  return pairs;
}

}  // namespace trel
