#pragma once

// k-bounded multi-hypergraphs: the choice structure of a set of items, with
// orientability, 2-core stripping, orientation neighborhoods and the density
// and expansion properties that govern random-walk insertion.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuckoo_rw/hash_family.hpp"

namespace cuckoo_rw {

using EdgeId = std::uint32_t;

class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(std::uint64_t n, int k);

  /// Appends an ordered k-tuple. Throws on wrong arity or out-of-range vertex.
  EdgeId add_edge(std::span<const Vertex> tuple);

  std::uint64_t n() const { return n_; }
  int k() const { return k_; }
  std::size_t edge_count() const { return k_ == 0 ? 0 : tuples_.size() / k_; }

  /// The ordered tuple, repeats included.
  std::span<const Vertex> tuple(EdgeId e) const {
    return {tuples_.data() + std::size_t{e} * k_, static_cast<std::size_t>(k_)};
  }

  /// Distinct vertices of edge e, ascending.
  std::vector<Vertex> projected(EdgeId e) const;

  /// "n m k" header, then one line of k vertices per edge.
  void write_text(std::ostream& os) const;
  static Hypergraph read_text(std::istream& is);

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::uint64_t n_ = 0;
  int k_ = 0;
  std::vector<Vertex> tuples_;
};

/// m i.i.d. uniform ordered k-tuples over [n]. Edge i is the tuple of item i
/// under HashFamily(k, n, seed), so smaller m yields a prefix of larger m.
Hypergraph sample_hypergraph(std::uint64_t n, std::uint64_t m, int k, std::uint64_t seed);

/// Injective edge -> incident vertex map.
struct Orientation {
  static constexpr Vertex kUnassigned = ~Vertex{0};

  std::uint64_t n = 0;
  std::vector<Vertex> assignment;  // indexed by EdgeId

  /// For each vertex, the edge oriented to it, if any.
  std::vector<std::optional<EdgeId>> inverse() const;
  std::vector<Vertex> free_vertices() const;
  std::size_t free_count() const;
};

/// True iff `h` is injective, total, and maps each edge into itself.
bool is_valid_orientation(const Hypergraph& g, const Orientation& h);

/// An orientation exists iff every vertex set V' spans at most |V'| edges
/// (Hall). Decided by maximum bipartite matching; returns the witness.
std::optional<Orientation> find_orientation(const Hypergraph& g);
inline bool is_orientable(const Hypergraph& g) { return find_orientation(g).has_value(); }

struct PeelStep {
  Vertex vertex;
  EdgeId edge;
};

struct CoreResult {
  std::vector<Vertex> core_vertices;  // ascending
  std::vector<EdgeId> core_edges;     // ascending
  std::vector<PeelStep> peel_order;
};

/// Repeatedly deletes a degree-1 vertex together with its edge. A vertex
/// repeated r times inside one edge counts r towards its degree. With
/// `tie_break_seed` the next degree-1 vertex is drawn at random instead of
/// LIFO; the resulting core is the same.
CoreResult strip_core(const Hypergraph& g, std::optional<std::uint64_t> tie_break_seed = std::nullopt);

/// N_{h,t}(v): vertices within h-distance t of v, v itself included.
std::uint64_t h_neighborhood_size(const Hypergraph& g, const Orientation& h, Vertex v, std::uint64_t t);

/// d_h(v, F_h); nullopt when no free vertex is reachable.
std::optional<std::uint64_t> distance_to_free(const Hypergraph& g, const Orientation& h, Vertex v);

/// d_h(v, F_h) for every vertex at once by reverse BFS from the free set.
std::vector<std::optional<std::uint64_t>> distances_to_free(const Hypergraph& g, const Orientation& h);

/// Nonnegative fraction num/den, den > 0. Not normalized.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Parses "0.01", "3/7" or "2" exactly.
  static Rational parse(const std::string& text);
  Rational reduced() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
};

/// Number of edges whose projected vertex set lies inside the given set.
std::uint64_t induced_edge_count(const Hypergraph& g, std::span<const Vertex> vertex_set);

enum class DensityMode { kExact, kFlow };

struct DensityCheck {
  bool holds = true;
  std::vector<Vertex> violating_set;  // nonempty V' with e(V') >= (1-delta)|V'| when !holds
};

/// Property D_delta: every nonempty V' has e(V') < (1 - delta)|V'|.
/// Exact mode enumerates subsets and needs n <= 20.
DensityCheck check_density(const Hypergraph& g, Rational delta, DensityMode mode);

/// Nonempty V' with e(V') >= rho |V'| if one exists; rho > 0. Max-closure
/// flow reduction, exact in integers.
std::optional<std::vector<Vertex>> find_dense_subset(const Hypergraph& g, Rational rho);

struct MaxDensity {
  Rational value;  // reduced
  std::vector<Vertex> witness;
};

/// max over nonempty V' of e(V')/|V'|.
MaxDensity max_density(const Hypergraph& g);

enum class ExpansionMode { kExact, kSampled };

struct ExpansionOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  /// Largest connected subset grown per sample; 0 means just below n/k.
  std::uint64_t max_subset = 0;
};

struct ExpansionCheck {
  bool holds = true;
  std::uint64_t subsets_checked = 0;
  std::vector<EdgeId> violating_edges;
};

/// x_s = log_k((k-1)e^k) / (log_k(n/s) - 1). Domain error when log_k(n/s) <= 1.
double expansion_slack(std::uint64_t n, int k, std::uint64_t s);

/// Minimum |V(E')| demanded of an edge subset of size s, or nullopt when
/// sets of that size are unconstrained.
std::optional<double> expansion_requirement(std::uint64_t n, int k, std::uint64_t s);

/// Property E. Exact mode enumerates all edge subsets (|E| <= 20); sampled
/// mode grows random connected subsets and checks every prefix.
ExpansionCheck check_expansion(const Hypergraph& g, ExpansionMode mode, const ExpansionOptions& opts = {});

}  // namespace cuckoo_rw
