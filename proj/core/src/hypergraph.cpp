#include "cuckoo_rw/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "cuckoo_rw/bipartite_matching.hpp"
#include "cuckoo_rw/max_flow.hpp"

namespace cuckoo_rw {

// ---------------------------------------------------------------------------
// Hypergraph

Hypergraph::Hypergraph(std::uint64_t n, int k) : n_(n), k_(k) {
  if (n < 1) throw std::domain_error("Hypergraph: n must be >= 1");
  if (k < 1 || k > kMaxChoices) throw std::domain_error("Hypergraph: k must lie in [1, 16]");
}

EdgeId Hypergraph::add_edge(std::span<const Vertex> tuple) {
  if (tuple.size() != static_cast<std::size_t>(k_)) {
    throw std::invalid_argument("Hypergraph::add_edge: tuple length differs from k");
  }
  for (Vertex v : tuple) {
    if (v >= n_) throw std::out_of_range("Hypergraph::add_edge: vertex out of range");
  }
  if (edge_count() >= std::numeric_limits<EdgeId>::max()) throw std::length_error("Hypergraph: too many edges");
  const auto id = static_cast<EdgeId>(edge_count());
  tuples_.insert(tuples_.end(), tuple.begin(), tuple.end());
  return id;
}

std::vector<Vertex> Hypergraph::projected(EdgeId e) const {
  auto t = tuple(e);
  std::vector<Vertex> out(t.begin(), t.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Hypergraph::write_text(std::ostream& os) const {
  os << n_ << ' ' << edge_count() << ' ' << k_ << '\n';
  for (EdgeId e = 0; e < edge_count(); ++e) {
    auto t = tuple(e);
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
    os << '\n';
  }
}

Hypergraph Hypergraph::read_text(std::istream& is) {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  int k = 0;
  if (!(is >> n >> m >> k)) throw std::runtime_error("Hypergraph::read_text: bad header");
  Hypergraph g(n, k);
  std::vector<Vertex> tuple(k);
  for (std::uint64_t e = 0; e < m; ++e) {
    for (int i = 0; i < k; ++i) {
      std::int64_t v = -1;
      if (!(is >> v) || v < 0) {
        throw std::runtime_error("Hypergraph::read_text: bad vertex on edge line " + std::to_string(e + 1));
      }
      tuple[i] = static_cast<Vertex>(v);
      if (static_cast<std::uint64_t>(v) >= n) throw std::out_of_range("Hypergraph::read_text: vertex out of range");
    }
    g.add_edge(tuple);
  }
  return g;
}

Hypergraph sample_hypergraph(std::uint64_t n, std::uint64_t m, int k, std::uint64_t seed) {
  const HashFamily family(k, n, seed);
  Hypergraph g(n, k);
  std::vector<Vertex> tuple(k);
  for (std::uint64_t item = 0; item < m; ++item) {
    for (int i = 0; i < k; ++i) tuple[i] = family.coordinate(item, i);
    g.add_edge(tuple);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Orientations

std::vector<std::optional<EdgeId>> Orientation::inverse() const {
  std::vector<std::optional<EdgeId>> inv(n);
  for (EdgeId e = 0; e < assignment.size(); ++e) {
    if (assignment[e] != kUnassigned) inv[assignment[e]] = e;
  }
  return inv;
}

std::vector<Vertex> Orientation::free_vertices() const {
  std::vector<bool> used(n, false);
  for (Vertex v : assignment) {
    if (v != kUnassigned) used[v] = true;
  }
  std::vector<Vertex> out;
  for (std::uint64_t v = 0; v < n; ++v) {
    if (!used[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::size_t Orientation::free_count() const {
  return free_vertices().size();
}

bool is_valid_orientation(const Hypergraph& g, const Orientation& h) {
  if (h.n != g.n() || h.assignment.size() != g.edge_count()) return false;
  std::vector<bool> used(g.n(), false);
  for (EdgeId e = 0; e < h.assignment.size(); ++e) {
    const Vertex v = h.assignment[e];
    if (v >= g.n() || used[v]) return false;
    auto t = g.tuple(e);
    if (std::find(t.begin(), t.end(), v) == t.end()) return false;
    used[v] = true;
  }
  return true;
}

std::optional<Orientation> find_orientation(const Hypergraph& g) {
  const std::size_t m = g.edge_count();
  if (m > g.n()) return std::nullopt;
  BipartiteMatching matching(static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(g.n()));
  for (EdgeId e = 0; e < m; ++e) {
    for (Vertex v : g.projected(e)) matching.add_edge(e, v);
  }
  if (matching.solve() != m) return std::nullopt;
  Orientation h;
  h.n = g.n();
  auto left = matching.match_of_left();
  h.assignment.assign(left.begin(), left.end());
  return h;
}

// ---------------------------------------------------------------------------
// 2-core

CoreResult strip_core(const Hypergraph& g, std::optional<std::uint64_t> tie_break_seed) {
  const std::size_t m = g.edge_count();
  std::vector<std::uint32_t> degree(g.n(), 0);
  // XOR of incident edge ids, once per occurrence. At degree 1 it names the
  // only remaining edge.
  std::vector<EdgeId> incident_xor(g.n(), 0);
  for (EdgeId e = 0; e < m; ++e) {
    for (Vertex v : g.tuple(e)) {
      ++degree[v];
      incident_xor[v] ^= e;
    }
  }

  std::vector<Vertex> pending;
  for (std::uint64_t v = 0; v < g.n(); ++v) {
    if (degree[v] == 1) pending.push_back(static_cast<Vertex>(v));
  }

  std::mt19937_64 rng(tie_break_seed.value_or(0));
  std::vector<bool> alive(m, true);
  CoreResult out;
  while (!pending.empty()) {
    if (tie_break_seed) {
      std::uniform_int_distribution<std::size_t> pick(0, pending.size() - 1);
      std::swap(pending[pick(rng)], pending.back());
    }
    const Vertex v = pending.back();
    pending.pop_back();
    if (degree[v] != 1) continue;
    const EdgeId e = incident_xor[v];
    alive[e] = false;
    out.peel_order.push_back({v, e});
    for (Vertex u : g.tuple(e)) {
      --degree[u];
      incident_xor[u] ^= e;
      if (degree[u] == 1) pending.push_back(u);
    }
  }

  for (std::uint64_t v = 0; v < g.n(); ++v) {
    if (degree[v] > 0) out.core_vertices.push_back(static_cast<Vertex>(v));
  }
  for (EdgeId e = 0; e < m; ++e) {
    if (alive[e]) out.core_edges.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// h-neighborhoods

namespace {

// Expands the orientation BFS level by level. `visit(level, vertex)` returns
// true to stop early.
template <typename Visit>
void walk_levels(const Hypergraph& g, const std::vector<std::optional<EdgeId>>& inverse, Vertex v,
                 std::uint64_t max_level, Visit&& visit) {
  std::unordered_set<Vertex> seen{v};
  std::vector<Vertex> frontier{v};
  if (visit(0, v)) return;
  for (std::uint64_t level = 1; level <= max_level && !frontier.empty(); ++level) {
    std::vector<Vertex> next;
    for (Vertex u : frontier) {
      if (!inverse[u]) continue;
      for (Vertex w : g.tuple(*inverse[u])) {
        if (seen.insert(w).second) {
          next.push_back(w);
          if (visit(level, w)) return;
        }
      }
    }
    frontier = std::move(next);
  }
}

void require_vertex(const Hypergraph& g, const Orientation& h, Vertex v) {
  if (v >= g.n()) throw std::out_of_range("vertex out of range");
  if (h.n != g.n() || h.assignment.size() != g.edge_count()) {
    throw std::invalid_argument("orientation does not match hypergraph");
  }
}

}  // namespace

std::uint64_t h_neighborhood_size(const Hypergraph& g, const Orientation& h, Vertex v, std::uint64_t t) {
  require_vertex(g, h, v);
  const auto inverse = h.inverse();
  std::uint64_t count = 0;
  walk_levels(g, inverse, v, t, [&](std::uint64_t, Vertex) {
    ++count;
    return false;
  });
  return count;
}

std::optional<std::uint64_t> distance_to_free(const Hypergraph& g, const Orientation& h, Vertex v) {
  require_vertex(g, h, v);
  const auto inverse = h.inverse();
  std::optional<std::uint64_t> found;
  walk_levels(g, inverse, v, std::numeric_limits<std::uint64_t>::max(), [&](std::uint64_t level, Vertex u) {
    if (!inverse[u]) {
      found = level;
      return true;
    }
    return false;
  });
  return found;
}

std::vector<std::optional<std::uint64_t>> distances_to_free(const Hypergraph& g, const Orientation& h) {
  if (h.n != g.n() || h.assignment.size() != g.edge_count()) {
    throw std::invalid_argument("orientation does not match hypergraph");
  }
  // reverse[u] lists the vertices whose oriented edge contains u.
  std::vector<std::vector<Vertex>> reverse(g.n());
  std::vector<bool> occupied(g.n(), false);
  for (EdgeId e = 0; e < h.assignment.size(); ++e) {
    const Vertex owner = h.assignment[e];
    occupied[owner] = true;
    for (Vertex u : g.projected(e)) {
      if (u != owner) reverse[u].push_back(owner);
    }
  }
  std::vector<std::optional<std::uint64_t>> dist(g.n());
  std::vector<Vertex> queue;
  for (std::uint64_t v = 0; v < g.n(); ++v) {
    if (!occupied[v]) {
      dist[v] = 0;
      queue.push_back(static_cast<Vertex>(v));
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    for (Vertex w : reverse[u]) {
      if (!dist[w]) {
        dist[w] = *dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Density

Rational Rational::parse(const std::string& text) {
  auto fail = [&]() -> Rational { throw std::invalid_argument("Rational::parse: cannot parse '" + text + "'"); };
  if (text.empty()) return fail();
  auto digits_to_int = [&](const std::string& s) -> std::int64_t {
    if (s.empty() || s.size() > 18 || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      fail();
    }
    return std::stoll(s);
  };
  Rational r;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    r.num = digits_to_int(text.substr(0, slash));
    r.den = digits_to_int(text.substr(slash + 1));
    if (r.den == 0) return fail();
  } else if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string whole = dot == 0 ? "0" : text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || whole.size() + frac.size() > 18) return fail();
    r.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) r.den *= 10;
    r.num = digits_to_int(whole) * r.den + digits_to_int(frac);
  } else {
    r.num = digits_to_int(text);
    r.den = 1;
  }
  return r.reduced();
}

Rational Rational::reduced() const {
  const std::int64_t d = std::gcd(num, den);
  if (d == 0) return {0, 1};
  return {num / d, den / d};
}

std::uint64_t induced_edge_count(const Hypergraph& g, std::span<const Vertex> vertex_set) {
  std::vector<bool> inside(g.n(), false);
  for (Vertex v : vertex_set) inside.at(v) = true;
  std::uint64_t count = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto t = g.tuple(e);
    if (std::all_of(t.begin(), t.end(), [&](Vertex v) { return inside[v]; })) ++count;
  }
  return count;
}

namespace {

struct Closure {
  bool positive = false;  // some nonempty V' has q e(V') >= p |V'|
  std::vector<Vertex> vertices;
};

// Maximum-weight closure on the edge/vertex incidence network. Edge nodes
// weigh (N+1)q, vertex nodes (N+1)p - 1, with N the number of non-isolated
// vertices. The closure value is (N+1)(q e(V') - p|V'|) + |V'|, positive
// exactly when a nonempty V' satisfies q e(V') >= p|V'|, and its maximizer
// also maximizes q e(V') - p|V'|.
Closure max_closure(const Hypergraph& g, std::int64_t p, std::int64_t q) {
  const std::size_t m = g.edge_count();
  std::vector<std::int64_t> node_of(g.n(), -1);
  std::vector<Vertex> used;
  for (EdgeId e = 0; e < m; ++e) {
    for (Vertex v : g.tuple(e)) {
      if (node_of[v] < 0) {
        node_of[v] = 0;
        used.push_back(v);
      }
    }
  }
  std::sort(used.begin(), used.end());
  const std::size_t source = 0;
  const std::size_t sink = 1;
  for (std::size_t i = 0; i < used.size(); ++i) node_of[used[i]] = static_cast<std::int64_t>(2 + m + i);

  const auto scale = static_cast<__int128>(used.size()) + 1;
  const __int128 edge_weight = scale * q;
  const __int128 vertex_weight = scale * p - 1;
  if (edge_weight * static_cast<__int128>(m + 1) > MaxFlow::kInfinite || vertex_weight < 0) {
    throw std::overflow_error("density flow: capacities overflow");
  }

  MaxFlow flow(2 + m + used.size());
  for (EdgeId e = 0; e < m; ++e) {
    flow.add_arc(source, 2 + e, static_cast<MaxFlow::Cap>(edge_weight));
    for (Vertex v : g.projected(e)) flow.add_arc(2 + e, static_cast<std::size_t>(node_of[v]), MaxFlow::kInfinite);
  }
  for (std::size_t i = 0; i < used.size(); ++i) {
    flow.add_arc(2 + m + i, sink, static_cast<MaxFlow::Cap>(vertex_weight));
  }
  const MaxFlow::Cap cut = flow.solve(source, sink);
  const __int128 best = edge_weight * static_cast<__int128>(m) - cut;

  Closure out;
  out.positive = best > 0;
  if (out.positive) {
    const auto side = flow.source_side(source);
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (side[2 + m + i]) out.vertices.push_back(used[i]);
    }
  }
  return out;
}

void require_delta(Rational delta) {
  if (delta.den <= 0 || delta.num < 0 || delta.num >= delta.den) {
    throw std::domain_error("check_density: delta must lie in [0, 1)");
  }
}

}  // namespace

std::optional<std::vector<Vertex>> find_dense_subset(const Hypergraph& g, Rational rho) {
  if (rho.den <= 0 || rho.num <= 0) throw std::domain_error("find_dense_subset: rho must be positive");
  Closure c = max_closure(g, rho.num, rho.den);
  if (!c.positive) return std::nullopt;
  return std::move(c.vertices);
}

DensityCheck check_density(const Hypergraph& g, Rational delta, DensityMode mode) {
  require_delta(delta);
  // e(V') >= (1 - num/den)|V'|  <=>  den e(V') >= (den - num)|V'|
  const std::int64_t p = delta.den - delta.num;
  const std::int64_t q = delta.den;

  DensityCheck out;
  if (mode == DensityMode::kFlow) {
    if (auto witness = find_dense_subset(g, {p, q})) {
      out.holds = false;
      out.violating_set = std::move(*witness);
    }
    return out;
  }

  if (g.n() > 20) throw std::length_error("check_density: exact mode needs n <= 20");
  std::vector<std::uint32_t> masks;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    std::uint32_t mask = 0;
    for (Vertex v : g.tuple(e)) mask |= 1u << v;
    masks.push_back(mask);
  }
  const std::uint32_t full = (g.n() == 32) ? ~0u : ((1u << g.n()) - 1);
  for (std::uint32_t subset = 1; subset <= full && subset != 0; ++subset) {
    std::int64_t edges = 0;
    for (std::uint32_t mask : masks) edges += (mask & ~subset) == 0;
    if (q * edges >= p * std::popcount(subset)) {
      out.holds = false;
      for (std::uint32_t v = 0; v < g.n(); ++v) {
        if (subset >> v & 1u) out.violating_set.push_back(v);
      }
      return out;
    }
  }
  return out;
}

MaxDensity max_density(const Hypergraph& g) {
  MaxDensity out{{0, 1}, {}};
  if (g.edge_count() == 0) return out;
  // Dinkelbach iteration: start from the whole support, then repeatedly move
  // to the set maximizing e(V') - rho|V'| until no set beats rho.
  std::vector<Vertex> best;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (Vertex v : g.tuple(e)) best.push_back(v);
  }
  std::sort(best.begin(), best.end());
  best.erase(std::unique(best.begin(), best.end()), best.end());
  Rational rho{static_cast<std::int64_t>(g.edge_count()), static_cast<std::int64_t>(best.size())};

  while (true) {
    Closure c = max_closure(g, rho.num, rho.den);
    if (!c.positive) break;  // cannot happen: best itself reaches rho
    const auto edges = static_cast<std::int64_t>(induced_edge_count(g, c.vertices));
    const auto size = static_cast<std::int64_t>(c.vertices.size());
    const __int128 gain = static_cast<__int128>(rho.den) * edges - static_cast<__int128>(rho.num) * size;
    if (gain <= 0) break;
    rho = Rational{edges, size}.reduced();
    best = std::move(c.vertices);
  }
  out.value = rho.reduced();
  out.witness = std::move(best);
  return out;
}

// ---------------------------------------------------------------------------
// Expansion

double expansion_slack(std::uint64_t n, int k, std::uint64_t s) {
  if (k < 2 || s == 0) throw std::domain_error("expansion_slack: need k >= 2 and s >= 1");
  const double log_k = std::log(static_cast<double>(k));
  const double ratio = std::log(static_cast<double>(n) / static_cast<double>(s)) / log_k;
  if (ratio <= 1.0) throw std::domain_error("expansion_slack: log_k(n/s) <= 1");
  return ((std::log(static_cast<double>(k - 1)) + k) / log_k) / (ratio - 1.0);
}

std::optional<double> expansion_requirement(std::uint64_t n, int k, std::uint64_t s) {
  const double log_log_n = n > 1 ? std::log(std::log(static_cast<double>(n))) : -HUGE_VAL;
  const auto size = static_cast<double>(s);
  if (size <= log_log_n) return (k - 1) * size;
  if (size < static_cast<double>(n) / k) return (k - 1 - expansion_slack(n, k, s)) * size;
  return std::nullopt;
}

namespace {

ExpansionCheck expansion_exact(const Hypergraph& g) {
  const std::size_t m = g.edge_count();
  if (m > 20) throw std::length_error("check_expansion: exact mode needs |E| <= 20");
  std::vector<std::vector<Vertex>> proj(m);
  for (EdgeId e = 0; e < m; ++e) proj[e] = g.projected(e);

  // Gray-code walk over subsets with per-vertex multiplicities.
  std::vector<std::uint32_t> cover(g.n(), 0);
  std::uint64_t distinct = 0;
  ExpansionCheck out;
  std::uint32_t best_mask = 0;
  int best_size = std::numeric_limits<int>::max();
  std::uint32_t gray = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << m); ++i) {
    const int flip = std::countr_zero(i);
    gray ^= 1u << flip;
    const bool adding = gray >> flip & 1u;
    for (Vertex v : proj[flip]) {
      if (adding) {
        distinct += cover[v]++ == 0;
      } else {
        distinct -= --cover[v] == 0;
      }
    }
    const int size = std::popcount(gray);
    ++out.subsets_checked;
    const auto need = expansion_requirement(g.n(), g.k(), static_cast<std::uint64_t>(size));
    if (need && static_cast<double>(distinct) < *need && size < best_size) {
      best_size = size;
      best_mask = gray;
    }
  }
  if (best_mask != 0) {
    out.holds = false;
    for (EdgeId e = 0; e < m; ++e) {
      if (best_mask >> e & 1u) out.violating_edges.push_back(e);
    }
  }
  return out;
}

ExpansionCheck expansion_sampled(const Hypergraph& g, const ExpansionOptions& opts) {
  ExpansionCheck out;
  const std::size_t m = g.edge_count();
  if (m == 0 || opts.samples == 0) return out;

  // Sizes at or above n/k are unconstrained.
  const auto unconstrained_from = static_cast<std::uint64_t>(std::ceil(static_cast<double>(g.n()) / g.k()));
  std::uint64_t cap = unconstrained_from > 0 ? unconstrained_from - 1 : 0;
  if (opts.max_subset > 0) cap = std::min(cap, opts.max_subset);
  cap = std::min<std::uint64_t>(cap, m);
  if (cap == 0) return out;

  // CSR incidence over projected vertices.
  std::vector<std::vector<Vertex>> proj(m);
  std::vector<std::uint32_t> offset(g.n() + 1, 0);
  for (EdgeId e = 0; e < m; ++e) {
    proj[e] = g.projected(e);
    for (Vertex v : proj[e]) ++offset[v + 1];
  }
  for (std::uint64_t v = 0; v < g.n(); ++v) offset[v + 1] += offset[v];
  std::vector<EdgeId> incident(offset.back());
  {
    std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
    for (EdgeId e = 0; e < m; ++e) {
      for (Vertex v : proj[e]) incident[fill[v]++] = e;
    }
  }

  std::mt19937_64 rng(opts.seed);
  std::vector<std::uint64_t> edge_stamp(m, 0);
  std::vector<std::uint64_t> vertex_stamp(g.n(), 0);
  std::vector<EdgeId> chosen;
  std::vector<EdgeId> frontier;
  const double log_cap = std::log(static_cast<double>(cap));

  for (std::uint64_t sample = 1; sample <= opts.samples; ++sample) {
    // Log-uniform target size so small and large subsets are both exercised.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto target = std::clamp<std::uint64_t>(
        static_cast<std::uint64_t>(std::floor(std::exp(unit(rng) * (log_cap + std::log1p(1.0 / cap))))), 1, cap);
    std::uniform_int_distribution<EdgeId> start_dist(0, static_cast<EdgeId>(m - 1));

    chosen.clear();
    frontier.assign(1, start_dist(rng));
    std::uint64_t distinct = 0;
    while (chosen.size() < target && !frontier.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
      std::swap(frontier[pick(rng)], frontier.back());
      const EdgeId e = frontier.back();
      frontier.pop_back();
      if (edge_stamp[e] == sample) continue;
      edge_stamp[e] = sample;
      chosen.push_back(e);
      for (Vertex v : proj[e]) {
        if (vertex_stamp[v] == sample) continue;
        vertex_stamp[v] = sample;
        ++distinct;
        for (std::uint32_t i = offset[v]; i < offset[v + 1]; ++i) {
          if (edge_stamp[incident[i]] != sample) frontier.push_back(incident[i]);
        }
      }
      ++out.subsets_checked;
      const auto need = expansion_requirement(g.n(), g.k(), chosen.size());
      if (need && static_cast<double>(distinct) < *need) {
        out.holds = false;
        out.violating_edges = chosen;
        std::sort(out.violating_edges.begin(), out.violating_edges.end());
        return out;
      }
    }
  }
  return out;
}

}  // namespace

ExpansionCheck check_expansion(const Hypergraph& g, ExpansionMode mode, const ExpansionOptions& opts) {
  return mode == ExpansionMode::kExact ? expansion_exact(g) : expansion_sampled(g, opts);
}

}  // namespace cuckoo_rw
