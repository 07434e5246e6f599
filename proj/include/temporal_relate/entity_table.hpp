#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trel {

using EntityId = std::uint32_t;

// Interned bijection between entity names and dense ids 0..count()-1.
// One writer at a time; lookups by id are safe alongside reads.
class EntityTable {
 public:
  EntityId intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    EntityId id = static_cast<EntityId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<EntityId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(EntityId id) const {
    if (id >= names_.size()) throw std::out_of_range("EntityTable: bad id");
    return names_[id];
  }

  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, EntityId> index_;
};

}  // namespace trel
