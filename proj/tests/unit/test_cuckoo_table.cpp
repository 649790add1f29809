#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "cuckoo_rw/cuckoo_table.hpp"
#include "cuckoo_rw/seeding.hpp"

namespace cuckoo_rw {

struct TableTestAccess {
  static void corrupt(CuckooTable& t, Vertex slot, ItemId item, int active) {
    auto& s = t.slots_[slot];
    if (!s.occupied) ++t.stored_;
    s = {item, static_cast<std::uint8_t>(active), true};
  }
};

}  // namespace cuckoo_rw

using namespace cuckoo_rw;

TEST_CASE("first insert lands in one step") {
  HashFamily f(3, 100, 1);
  CuckooTable t(f, 2);
  const auto out = t.insert(10, 5);
  CHECK(out.success);
  CHECK(out.steps == 1);
  CHECK(out.displaced == 0);
  CHECK_FALSE(out.unplaced);
  CHECK(t.lookup(10));
  CHECK_FALSE(t.lookup(11));
  CHECK(t.size() == 1);
  CHECK(t.audit());
}

TEST_CASE("lookup on an empty table") {
  HashFamily f(3, 16, 0);
  CuckooTable t(f, 0);
  CHECK_FALSE(t.lookup(0));
  CHECK(t.size() == 0);
  CHECK(t.audit());
}

TEST_CASE("duplicate insert is rejected") {
  HashFamily f(3, 100, 1);
  CuckooTable t(f, 2);
  t.insert(1, 10);
  CHECK_THROWS_AS(t.insert(1, 10), std::logic_error);
  CHECK_THROWS_AS(t.insert(2, 0), std::invalid_argument);
}

TEST_CASE("pigeonhole: a fourth item on three shared slots hits the cap") {
  HashFamily f(3, 3, 0);
  const Vertex shared[] = {0, 1, 2};
  for (ItemId x = 0; x < 4; ++x) f.pin(x, shared);
  CuckooTable t(f, 7);
  for (ItemId x = 0; x < 3; ++x) {
    const auto out = t.insert(x, 1000);
    CHECK(out.success);
    CHECK(out.steps == out.displaced + 1);
  }
  const auto out = t.insert(3, 50);
  CHECK_FALSE(out.success);
  CHECK(out.steps == 50);
  REQUIRE(out.unplaced);
  CHECK_FALSE(t.lookup(*out.unplaced));
  CHECK(t.size() == 3);
  CHECK(t.audit());
  int stored = 0;
  for (ItemId x = 0; x < 4; ++x) stored += t.lookup(x);
  CHECK(stored == 3);
}

TEST_CASE("walk index choice excludes the evicted item's index and is uniform otherwise") {
  // Both items hash every index to slot 0. B's first step evicts A; A then
  // picks an index other than its previous one and evicts B at the cap.
  for (int k : {3, 4}) {
    CAPTURE(k);
    std::vector<std::vector<int>> moves(k, std::vector<int>(k, 0));
    std::vector<int> first(k, 0);
    const int runs = 6000;
    for (int r = 0; r < runs; ++r) {
      HashFamily f(k, 4, 0);
      const std::vector<Vertex> zeros(k, 0);
      f.pin(0, zeros);
      f.pin(1, zeros);
      CuckooTable t(f, mix_seed(1234, r));
      REQUIRE(t.insert(0, 1).success);
      const int before = *t.active_index(0);
      ++first[before];
      const auto out = t.insert(1, 2);
      CHECK_FALSE(out.success);
      CHECK(out.unplaced == ItemId{1});
      const int after = *t.active_index(0);
      CHECK(after != before);
      ++moves[before][after];
      CHECK(t.audit());
    }
    const double p_first = 1.0 / k;
    for (int i = 0; i < k; ++i) {
      CHECK(std::abs(first[i] - runs * p_first) < 3 * std::sqrt(runs * p_first * (1 - p_first)));
      const double p = 1.0 / (k - 1);
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        const double trials = first[i];
        CHECK(std::abs(moves[i][j] - trials * p) < 3 * std::sqrt(trials * p * (1 - p)));
      }
    }
  }
}

TEST_CASE("sub-threshold loads insert without failure") {
  const std::uint64_t n = 10000;
  const std::uint64_t m = static_cast<std::uint64_t>(0.88 * n);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CAPTURE(seed);
    HashFamily f(3, n, seed);
    CuckooTable t(f, seed + 100);
    std::uint64_t failures = 0;
    for (ItemId x = 0; x < m; ++x) {
      const auto out = t.insert(x, 100000);
      failures += !out.success;
      if (out.success) CHECK(out.steps == out.displaced + 1);
    }
    CHECK(failures == 0);
    CHECK(t.size() == m);
    CHECK(t.audit());
  }
}

TEST_CASE("orientation snapshot") {
  HashFamily f(3, 50, 3);
  CuckooTable t(f, 4);
  auto h = t.orientation_snapshot();
  CHECK(h.assignment.empty());
  CHECK(h.free_count() == 50);

  t.insert(1, 10);
  h = t.orientation_snapshot();
  CHECK(h.assignment.size() == 1);
  CHECK(h.free_count() == 49);

  for (ItemId x = 2; x < 40; ++x) t.insert(x, 1000);
  h = t.orientation_snapshot();
  const Hypergraph g = t.hypergraph_snapshot();
  CHECK(h.free_count() == t.capacity() - t.size());
  CHECK(is_valid_orientation(g, h));
  const auto items = t.stored_items();
  REQUIRE(items.size() == h.assignment.size());
  for (std::size_t i = 0; i < items.size(); ++i) CHECK(t.at(h.assignment[i]) == items[i]);
}

TEST_CASE("audit detects a misplaced item") {
  HashFamily f(3, 64, 5);
  const Vertex tuple[] = {1, 2, 3};
  f.pin(999, tuple);
  CuckooTable t(f, 6);
  for (ItemId x = 0; x < 20; ++x) t.insert(x, 1000);
  CHECK(t.audit());
  // Slot 40 is not among item 999's positions.
  TableTestAccess::corrupt(t, 40, 999, 0);
  CHECK_FALSE(t.audit());
}

TEST_CASE("randomized operation sequence keeps every invariant") {
  // Small table driven past capacity so capped walks happen regularly.
  HashFamily f(3, 48, 77);
  CuckooTable t(f, 78);
  std::mt19937_64 rng(79);
  std::uint64_t capped = 0;
  ItemId next = 0;
  for (int op = 0; op < 5000; ++op) {
    if (rng() % 3 == 0) {
      (void)t.lookup(rng() % (next + 1));
    } else {
      const auto out = t.insert(next++, 1 + rng() % 200);
      if (!out.success) {
        ++capped;
        CHECK_FALSE(t.lookup(*out.unplaced));
      } else {
        CHECK(out.steps == out.displaced + 1);
      }
    }
    REQUIRE(t.audit());
  }
  CHECK(capped > 0);
}

TEST_CASE("default step cap") {
  CHECK(default_step_cap(16) == 256);
  CHECK(default_step_cap(1 << 10) == 10000);
  CHECK(default_step_cap(1) >= 1);
  CHECK(default_step_cap(100000) == static_cast<std::uint64_t>(std::ceil(std::pow(std::log2(100000.0), 4))));
}
