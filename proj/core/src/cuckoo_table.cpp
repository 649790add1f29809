#include "cuckoo_rw/cuckoo_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace cuckoo_rw {

std::uint64_t default_step_cap(std::uint64_t n) {
  const double lg = std::log2(static_cast<double>(std::max<std::uint64_t>(n, 2)));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(std::pow(lg, 4))));
}

CuckooTable::CuckooTable(const HashFamily& family, std::uint64_t walk_seed)
    : family_(&family), slots_(family.n()), walk_rng_(walk_seed) {}

std::optional<Vertex> CuckooTable::find_slot(ItemId item) const {
  auto pos = family_->positions(item);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const Slot& s = slots_[pos[i]];
    if (s.occupied && s.item == item) return pos[i];
  }
  return std::nullopt;
}

bool CuckooTable::lookup(ItemId item) const {
  return find_slot(item).has_value();
}

std::optional<ItemId> CuckooTable::at(Vertex slot) const {
  const Slot& s = slots_.at(slot);
  if (!s.occupied) return std::nullopt;
  return s.item;
}

std::optional<int> CuckooTable::active_index(ItemId item) const {
  if (auto slot = find_slot(item)) return slots_[*slot].active;
  return std::nullopt;
}

InsertionOutcome CuckooTable::insert(ItemId item, std::uint64_t step_cap) {
  if (step_cap < 1) throw std::invalid_argument("CuckooTable::insert: step_cap must be >= 1");
  if (lookup(item)) throw std::logic_error("CuckooTable::insert: item already stored");

  const int k = family_->k();
  InsertionOutcome out;
  ItemId carried = item;
  std::optional<int> excluded;  // j in the walk; empty on the first step
  while (out.steps < step_cap) {
    ++out.steps;
    int index;
    if (excluded) {
      // Uniform over {0..k-1} \ {j}: draw from k-1 values and skip j.
      index = std::uniform_int_distribution<int>(0, k - 2)(walk_rng_);
      if (index >= *excluded) ++index;
    } else {
      index = std::uniform_int_distribution<int>(0, k - 1)(walk_rng_);
    }
    const Vertex target = family_->positions(carried)[index];
    Slot& slot = slots_[target];
    if (!slot.occupied) {
      slot = {carried, static_cast<std::uint8_t>(index), true};
      ++stored_;
      out.success = true;
      out.displaced = out.steps - 1;
      return out;
    }
    const Slot evicted = slot;
    slot = {carried, static_cast<std::uint8_t>(index), true};
    carried = evicted.item;
    excluded = evicted.active;
    ++out.displaced;
  }
  // The carried item left the table; everything else is consistently placed
  // and the stored count is unchanged.
  out.unplaced = carried;
  return out;
}

std::vector<ItemId> CuckooTable::stored_items() const {
  std::vector<ItemId> out;
  out.reserve(stored_);
  for (const Slot& s : slots_) {
    if (s.occupied) out.push_back(s.item);
  }
  return out;
}

Hypergraph CuckooTable::hypergraph_snapshot() const {
  Hypergraph g(capacity(), family_->k());
  for (const Slot& s : slots_) {
    if (s.occupied) g.add_edge(family_->positions(s.item));
  }
  return g;
}

Orientation CuckooTable::orientation_snapshot() const {
  Orientation h;
  h.n = capacity();
  for (std::uint64_t v = 0; v < slots_.size(); ++v) {
    if (slots_[v].occupied) h.assignment.push_back(static_cast<Vertex>(v));
  }
  return h;
}

bool CuckooTable::audit() const {
  std::unordered_set<ItemId> seen;
  std::uint64_t occupied = 0;
  for (std::uint64_t v = 0; v < slots_.size(); ++v) {
    const Slot& s = slots_[v];
    if (!s.occupied) continue;
    ++occupied;
    if (s.active >= family_->k()) return false;
    if (family_->positions(s.item)[s.active] != v) return false;
    if (!seen.insert(s.item).second) return false;
  }
  return occupied == stored_ && stored_ <= slots_.size();
}

}  // namespace cuckoo_rw
