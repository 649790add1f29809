#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cuckoo_rw {

// Hopcroft-Karp maximum matching between left nodes [0, left) and right
// nodes [0, right). Adjacency is given in CSR form.
class BipartiteMatching {
 public:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};

  BipartiteMatching(std::uint32_t left, std::uint32_t right);

  void add_edge(std::uint32_t l, std::uint32_t r);

  /// Size of a maximum matching. May be called once.
  std::uint32_t solve();

  std::span<const std::uint32_t> match_of_left() const { return match_left_; }
  std::span<const std::uint32_t> match_of_right() const { return match_right_; }

 private:
  bool layer();
  bool augment(std::uint32_t root);

  std::uint32_t left_;
  std::uint32_t right_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pending_;
  std::vector<std::uint32_t> offset_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::uint32_t> match_left_;
  std::vector<std::uint32_t> match_right_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::uint32_t> cursor_;
};

}  // namespace cuckoo_rw
