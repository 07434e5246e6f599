#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "temporal_relate/entity_table.hpp"

namespace trel {

// One time-stamped directed link graph. Adjacency lists are sorted and
// deduplicated, self-loops are dropped, and in_adj is the transpose of
// out_adj. Immutable after build_snapshot.
struct SnapshotGraph {
  std::string label;
  std::uint32_t ordinal = 1;
  std::vector<std::vector<EntityId>> out_adj;
  std::vector<std::vector<EntityId>> in_adj;
  std::uint64_t edge_count = 0;
  bool redirected = false;

  std::size_t node_count() const { return out_adj.size(); }

  bool has_edge(EntityId i, EntityId j) const {
    if (i >= out_adj.size()) return false;
    const auto& row = out_adj[i];
    return std::binary_search(row.begin(), row.end(), j);
  }

  const std::vector<EntityId>& out(EntityId v) const {
    static const std::vector<EntityId> empty;
    return v < out_adj.size() ? out_adj[v] : empty;
  }
  const std::vector<EntityId>& in(EntityId v) const {
    static const std::vector<EntityId> empty;
    return v < in_adj.size() ? in_adj[v] : empty;
  }

  bool operator==(const SnapshotGraph& o) const {
    return label == o.label && ordinal == o.ordinal && out_adj == o.out_adj &&
           edge_count == o.edge_count;
  }
};

inline SnapshotGraph build_snapshot(std::vector<std::pair<EntityId, EntityId>> pairs,
                                    std::string label, std::uint32_t ordinal) {
  if (ordinal < 1) throw std::invalid_argument("build_snapshot: ordinal must be >= 1");
  SnapshotGraph g;
  g.label = std::move(label);
  g.ordinal = ordinal;

  EntityId max_id = 0;
  bool any = false;
  for (auto& [s, t] : pairs) {
    if (s == t) continue;  // self-loop
    max_id = std::max({max_id, s, t});
    any = true;
  }
  if (!any) return g;

  g.out_adj.resize(max_id + 1);
  g.in_adj.resize(max_id + 1);
  for (auto& [s, t] : pairs) {
    if (s == t) continue;
    g.out_adj[s].push_back(t);
  }
  for (auto& row : g.out_adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    g.edge_count += row.size();
  }
  for (EntityId s = 0; s < g.out_adj.size(); ++s)
    for (EntityId t : g.out_adj[s]) g.in_adj[t].push_back(s);
  for (auto& row : g.in_adj) std::sort(row.begin(), row.end());
  return g;
}

namespace detail {

inline void write_bytes(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  write_bytes(os, buf, sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw std::runtime_error("snapshot file truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace detail

// Binary container "TRL1": label, ordinal, node count, CSR offsets and
// targets for out_adj. in_adj is rebuilt on load.
inline void save_snapshot(const SnapshotGraph& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os.write("TRL1", 4);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.label.size()));
  detail::write_bytes(os, g.label.data(), g.label.size());
  detail::write_le<std::uint32_t>(os, g.ordinal);
  detail::write_le<std::uint8_t>(os, g.redirected ? 1 : 0);
  detail::write_le<std::uint64_t>(os, g.out_adj.size());
  detail::write_le<std::uint64_t>(os, g.edge_count);
  std::uint64_t off = 0;
  detail::write_le<std::uint64_t>(os, off);
  for (const auto& row : g.out_adj) {
    off += row.size();
    detail::write_le<std::uint64_t>(os, off);
  }
  for (const auto& row : g.out_adj)
    for (EntityId t : row) detail::write_le<std::uint32_t>(os, t);
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline SnapshotGraph load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "TRL1", 4) != 0)
    throw std::runtime_error("not a TRL1 snapshot (bad magic): " + path);
  SnapshotGraph g;
  auto label_len = detail::read_le<std::uint32_t>(is);
  g.label.resize(label_len);
  is.read(g.label.data(), label_len);
  if (!is) throw std::runtime_error("snapshot file truncated: " + path);
  g.ordinal = detail::read_le<std::uint32_t>(is);
  g.redirected = detail::read_le<std::uint8_t>(is) != 0;
  auto nodes = detail::read_le<std::uint64_t>(is);
  g.edge_count = detail::read_le<std::uint64_t>(is);
  std::vector<std::uint64_t> offsets(nodes + 1);
  for (auto& o : offsets) o = detail::read_le<std::uint64_t>(is);
  if (offsets.back() != g.edge_count)
    throw std::runtime_error("snapshot file corrupt (offset/edge mismatch): " + path);
  g.out_adj.resize(nodes);
  g.in_adj.resize(nodes);
  for (std::uint64_t v = 0; v < nodes; ++v) {
    auto deg = offsets[v + 1] - offsets[v];
    g.out_adj[v].resize(deg);
    for (auto& t : g.out_adj[v]) t = detail::read_le<std::uint32_t>(is);
  }
  for (EntityId s = 0; s < g.out_adj.size(); ++s)
    for (EntityId t : g.out_adj[s]) {
      if (t >= nodes) throw std::runtime_error("snapshot file corrupt (target out of range)");
      g.in_adj[t].push_back(s);
    }
  for (auto& row : g.in_adj) std::sort(row.begin(), row.end());
  return g;
}

}  // namespace trel
