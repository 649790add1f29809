#include "cuckoo_rw/max_flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuckoo_rw {

MaxFlow::MaxFlow(std::size_t nodes) : out_(nodes), level_(nodes), next_arc_(nodes) {}

void MaxFlow::add_arc(std::size_t from, std::size_t to, Cap capacity) {
  if (from >= out_.size() || to >= out_.size()) throw std::out_of_range("MaxFlow: node out of range");
  if (capacity < 0) throw std::invalid_argument("MaxFlow: negative capacity");
  out_[from].push_back(arcs_.size());
  arcs_.push_back({to, capacity});
  out_[to].push_back(arcs_.size());
  arcs_.push_back({from, 0});
}

bool MaxFlow::build_levels(std::size_t source, std::size_t sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::vector<std::size_t> queue{source};
  level_[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (std::size_t a : out_[u]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[u] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

// One blocking-flow augmentation along an explicit stack (no recursion: the
// level graph can be as deep as the node count).
MaxFlow::Cap MaxFlow::push(std::size_t source, std::size_t sink) {
  std::vector<std::size_t> path;  // arc indices from source
  std::size_t u = source;
  while (true) {
    if (u == sink) {
      Cap bottleneck = kInfinite;
      for (std::size_t a : path) bottleneck = std::min(bottleneck, arcs_[a].residual);
      for (std::size_t a : path) {
        arcs_[a].residual -= bottleneck;
        arcs_[a ^ 1].residual += bottleneck;
      }
      return bottleneck;
    }
    bool advanced = false;
    for (auto& i = next_arc_[u]; i < out_[u].size(); ++i) {
      const std::size_t a = out_[u][i];
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && level_[arc.to] == level_[u] + 1) {
        path.push_back(a);
        u = arc.to;
        advanced = true;
        break;
      }
    }
    if (advanced) continue;
    if (path.empty()) return 0;
    // Dead end: retreat and skip the arc that led here.
    level_[u] = -1;
    const std::size_t back = path.back();
    path.pop_back();
    u = arcs_[back ^ 1].to;
    ++next_arc_[u];
  }
}

MaxFlow::Cap MaxFlow::solve(std::size_t source, std::size_t sink) {
  Cap total = 0;
  while (build_levels(source, sink)) {
    std::fill(next_arc_.begin(), next_arc_.end(), 0);
    while (Cap f = push(source, sink)) total += f;
  }
  return total;
}

std::vector<bool> MaxFlow::source_side(std::size_t source) const {
  std::vector<bool> seen(out_.size(), false);
  std::vector<std::size_t> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t a : out_[u]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && !seen[arc.to]) {
        seen[arc.to] = true;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

}  // namespace cuckoo_rw
