#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cuckoo_rw/hash_family.hpp"
#include "cuckoo_rw/hypergraph.hpp"

namespace cuckoo_rw {

struct InsertionOutcome {
  std::uint64_t steps = 0;
  bool success = false;
  std::uint64_t displaced = 0;
  /// Set when the walk hit the step cap: the item carried at that moment,
  /// which is no longer stored. It need not be the item passed to insert().
  std::optional<ItemId> unplaced;
};

/// ceil(log2(n)^4), at least 1.
std::uint64_t default_step_cap(std::uint64_t n);

struct TableTestAccess;

// One item per slot, k hashed choices per item, random-walk insertion.
//
// Every stored item e sits at slot h_{H(e)}(e), where H(e) is its active
// hash index. Insertion picks an index uniformly at random, excluding on
// every step after the first the index the evicted item was using.
class CuckooTable {
 public:
  CuckooTable(const HashFamily& family, std::uint64_t walk_seed);

  std::uint64_t capacity() const { return slots_.size(); }
  std::uint64_t size() const { return stored_; }
  double load_factor() const { return static_cast<double>(stored_) / static_cast<double>(slots_.size()); }
  const HashFamily& family() const { return *family_; }

  /// Random-walk insertion, at most `step_cap` iterations. Throws
  /// std::logic_error if `item` is already stored.
  InsertionOutcome insert(ItemId item, std::uint64_t step_cap);

  /// Examines at most k slots.
  bool lookup(ItemId item) const;

  /// Item at `slot`, if any.
  std::optional<ItemId> at(Vertex slot) const;

  /// Active hash index (0-based) of a stored item.
  std::optional<int> active_index(ItemId item) const;

  /// Stored items in slot order; edge i of hypergraph_snapshot() and
  /// orientation_snapshot() belongs to item i of this list.
  std::vector<ItemId> stored_items() const;
  Hypergraph hypergraph_snapshot() const;
  Orientation orientation_snapshot() const;

  /// Rechecks every structural invariant from scratch.
  bool audit() const;

 private:
  friend struct TableTestAccess;

  struct Slot {
    ItemId item = 0;
    std::uint8_t active = 0;
    bool occupied = false;
  };

  std::optional<Vertex> find_slot(ItemId item) const;

  const HashFamily* family_;
  std::vector<Slot> slots_;
  std::uint64_t stored_ = 0;
  std::mt19937_64 walk_rng_;
};

}  // namespace cuckoo_rw
