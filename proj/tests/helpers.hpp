#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "temporal_relate/snapshot.hpp"

namespace test {

using trel::EntityId;

inline std::vector<std::pair<EntityId, EntityId>> random_edges(std::mt19937& rng,
                                                               int max_nodes, int count) {
  std::uniform_int_distribution<EntityId> node(0, static_cast<EntityId>(max_nodes - 1));
  std::vector<std::pair<EntityId, EntityId>> edges;
  for (int i = 0; i < count; ++i) edges.emplace_back(node(rng), node(rng));
  return edges;
}

inline trel::SnapshotGraph random_graph(std::mt19937& rng, int max_nodes, int edge_count,
                                        const std::string& label = "rand",
                                        std::uint32_t ordinal = 1) {
  return trel::build_snapshot(random_edges(rng, max_nodes, edge_count), label, ordinal);
}

// Scratch directory cleaned up on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("trel_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

}  // namespace test
