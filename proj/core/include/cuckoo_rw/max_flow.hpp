#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace cuckoo_rw {

// Dinic's algorithm on integer capacities.
class MaxFlow {
 public:
  using Cap = std::int64_t;
  static constexpr Cap kInfinite = std::numeric_limits<Cap>::max() / 4;

  explicit MaxFlow(std::size_t nodes);

  void add_arc(std::size_t from, std::size_t to, Cap capacity);

  Cap solve(std::size_t source, std::size_t sink);

  /// After solve(): nodes reachable from the source in the residual graph,
  /// i.e. the source side of a minimum cut.
  std::vector<bool> source_side(std::size_t source) const;

 private:
  struct Arc {
    std::size_t to;
    Cap residual;
  };

  bool build_levels(std::size_t source, std::size_t sink);
  Cap push(std::size_t source, std::size_t sink);

  std::vector<Arc> arcs_;  // arc i and i^1 are mutual reverses
  std::vector<std::vector<std::size_t>> out_;
  std::vector<int> level_;
  std::vector<std::size_t> next_arc_;
};

}  // namespace cuckoo_rw
