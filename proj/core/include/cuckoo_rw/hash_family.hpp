#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <span>
#include <unordered_map>

namespace cuckoo_rw {

using ItemId = std::uint64_t;
using Vertex = std::uint32_t;

inline constexpr int kMaxChoices = 16;

// Stand-in for k independent, truly random functions U -> [n].
//
// Coordinate i of item x is SipHash-2-4(key(seed), x || i) mapped onto [n]
// by a 64x64 -> 128 multiply-high. The value is a pure function of
// (seed, x, i); the memo only avoids recomputing it, so query order never
// changes the answer. Tuples may repeat slots.
class HashFamily {
 public:
  HashFamily(int k, std::uint64_t n, std::uint64_t seed);

  HashFamily(const HashFamily&) = delete;
  HashFamily& operator=(const HashFamily&) = delete;

  int k() const { return k_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  /// The k slots of `item`, position i being h_{i+1}(item). Memoized; the
  /// returned view stays valid for the family's lifetime. Thread-safe.
  std::span<const Vertex> positions(ItemId item) const;

  /// One coordinate without touching the memo.
  Vertex coordinate(ItemId item, int index) const;

  /// Overrides the tuple for `item`. Used to build adversarial fixtures;
  /// throws if the item was already queried or any slot is out of range.
  void pin(ItemId item, std::span<const Vertex> slots);

  std::size_t memo_size() const;

 private:
  using Tuple = std::array<Vertex, kMaxChoices>;

  int k_;
  std::uint64_t n_;
  std::uint64_t seed_;
  std::array<unsigned char, 16> key_{};

  mutable std::mutex mu_;
  // Node-based: element addresses survive rehashing, which positions() relies on.
  mutable std::unordered_map<ItemId, Tuple> memo_;
};

}  // namespace cuckoo_rw
