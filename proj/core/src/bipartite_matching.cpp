#include "cuckoo_rw/bipartite_matching.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuckoo_rw {
namespace {
constexpr std::uint32_t kInf = ~std::uint32_t{0};
}

BipartiteMatching::BipartiteMatching(std::uint32_t left, std::uint32_t right) : left_(left), right_(right) {}

void BipartiteMatching::add_edge(std::uint32_t l, std::uint32_t r) {
  if (l >= left_ || r >= right_) throw std::out_of_range("BipartiteMatching: node out of range");
  pending_.emplace_back(l, r);
}

// BFS from all free left nodes; dist_ is the layer of each left node.
// Returns true if some free right node is reachable.
bool BipartiteMatching::layer() {
  std::vector<std::uint32_t> queue;
  queue.reserve(left_);
  for (std::uint32_t l = 0; l < left_; ++l) {
    if (match_left_[l] == kNone) {
      dist_[l] = 0;
      queue.push_back(l);
    } else {
      dist_[l] = kInf;
    }
  }
  bool found = false;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t l = queue[head];
    for (std::uint32_t i = offset_[l]; i < offset_[l + 1]; ++i) {
      const std::uint32_t mate = match_right_[adj_[i]];
      if (mate == kNone) {
        found = true;
      } else if (dist_[mate] == kInf) {
        dist_[mate] = dist_[l] + 1;
        queue.push_back(mate);
      }
    }
  }
  return found;
}

// Iterative layered DFS from a free left node.
bool BipartiteMatching::augment(std::uint32_t root) {
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    const std::uint32_t l = stack.back();
    bool descended = false;
    for (auto& i = cursor_[l]; i < offset_[l + 1]; ++i) {
      const std::uint32_t r = adj_[i];
      const std::uint32_t mate = match_right_[r];
      if (mate == kNone) {
        // Flip the alternating path held on the stack, top to bottom.
        std::uint32_t free_right = r;
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          const std::uint32_t node = *it;
          const std::uint32_t previous = match_left_[node];
          match_left_[node] = free_right;
          match_right_[free_right] = node;
          free_right = previous;
        }
        return true;
      }
      if (dist_[mate] == dist_[l] + 1) {
        ++i;  // do not retry this arc from l
        stack.push_back(mate);
        descended = true;
        break;
      }
    }
    if (!descended) {
      dist_[l] = kInf;
      stack.pop_back();
    }
  }
  return false;
}

std::uint32_t BipartiteMatching::solve() {
  offset_.assign(left_ + 1, 0);
  for (auto [l, r] : pending_) ++offset_[l + 1];
  for (std::uint32_t l = 0; l < left_; ++l) offset_[l + 1] += offset_[l];
  adj_.resize(pending_.size());
  std::vector<std::uint32_t> fill(offset_.begin(), offset_.end() - 1);
  for (auto [l, r] : pending_) adj_[fill[l]++] = r;
  pending_.clear();
  pending_.shrink_to_fit();

  match_left_.assign(left_, kNone);
  match_right_.assign(right_, kNone);
  dist_.assign(left_, kInf);
  cursor_.assign(left_, 0);

  // Greedy warm start.
  std::uint32_t size = 0;
  for (std::uint32_t l = 0; l < left_; ++l) {
    for (std::uint32_t i = offset_[l]; i < offset_[l + 1]; ++i) {
      if (match_right_[adj_[i]] == kNone) {
        match_left_[l] = adj_[i];
        match_right_[adj_[i]] = l;
        ++size;
        break;
      }
    }
  }

  while (layer()) {
    std::copy(offset_.begin(), offset_.end() - 1, cursor_.begin());
    for (std::uint32_t l = 0; l < left_; ++l) {
      if (match_left_[l] == kNone && augment(l)) ++size;
    }
  }
  return size;
}

}  // namespace cuckoo_rw
