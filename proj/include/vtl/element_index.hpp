#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "vtl/group.hpp"

namespace vtl {

/// Open-addressing map GroupElement -> dense index, linear probing.
/// Insert-only; lookups are read-only and safe to share across threads.
class ElementIndex {
 public:
  static constexpr std::uint32_t npos = 0xFFFFFFFFU;

  ElementIndex() { rehash(16); }
  explicit ElementIndex(std::size_t expected) { rehash(capacity_for(expected)); }

  std::size_t size() const { return size_; }

  /// Returns the existing index, or inserts `value` and returns it.
  std::uint32_t insert(const GroupElement& key, std::uint32_t value) {
    if ((size_ + 1) * 2 > slots_.size()) rehash(slots_.size() * 2);
    std::size_t i = GroupElementHash{}(key) & mask_;
    while (slots_[i].value != npos) {
      if (slots_[i].key == key) return slots_[i].value;
      i = (i + 1) & mask_;
    }
    slots_[i] = Slot{key, value};
    ++size_;
    return value;
  }

  std::uint32_t find(const GroupElement& key) const {
    std::size_t i = GroupElementHash{}(key) & mask_;
    while (slots_[i].value != npos) {
      if (slots_[i].key == key) return slots_[i].value;
      i = (i + 1) & mask_;
    }
    return npos;
  }

  bool contains(const GroupElement& key) const { return find(key) != npos; }

 private:
  struct Slot {
    GroupElement key;
    std::uint32_t value = npos;
  };

  static std::size_t capacity_for(std::size_t n) {
    std::size_t cap = 16;
    while (cap < n * 2 + 2) cap *= 2;
    return cap;
  }

  void rehash(std::size_t cap) {
    std::vector<Slot> old;
    old.swap(slots_);
    slots_.assign(cap, Slot{});
    mask_ = cap - 1;
    size_ = 0;
    for (const auto& s : old) {
      if (s.value != npos) insert(s.key, s.value);
    }
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace vtl
