#pragma once

// Seeded, trial-parallel experiments over the table and hypergraph modules.
// Every trial derives its randomness from mix_seed(master, trial), so output
// depends only on the configuration, never on thread count or scheduling.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cuckoo_rw/analytics.hpp"
#include "cuckoo_rw/hypergraph.hpp"

namespace cuckoo_rw {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { kThresholds, kScan, kInsertBench, kCore, kAudit };
enum class OutputFormat { kCsv, kJson };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kThresholds;
  int k = 3;
  std::uint64_t n = 10000;
  std::vector<double> c_grid;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  double zeta = 0.1;
  std::optional<std::uint64_t> step_cap;  // default_step_cap(n) when empty
  std::string out;                        // empty or "-" means stdout
  OutputFormat format = OutputFormat::kCsv;
  unsigned threads = 1;
  bool timing = false;  // measured times are nondeterministic; off by default
  std::vector<Rational> deltas{Rational{1, 100}};
  std::uint64_t expansion_samples = 10000;
  std::uint64_t neighborhood_probes = 1000;
  std::optional<std::string> fixture;  // hypergraph text file replacing sampling

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
  std::uint64_t effective_step_cap() const;
};

/// "a:b:step", inclusive of b up to rounding; values rounded to 1e-12.
std::vector<double> parse_c_grid(const std::string& text);

/// Overlays keys of a JSON config object onto `cfg`. Unknown keys are errors.
void apply_json_config(const nlohmann::json& j, ExperimentConfig& cfg);

struct ScanRow {
  int k;
  std::uint64_t n;
  double c;
  std::uint64_t trials;
  std::uint64_t orientable_count;
  double orientable_fraction;
  double mean_matching_time_ms;
};

struct InsertBenchRow {
  int k;
  std::uint64_t n;
  std::uint64_t m;
  std::uint64_t seed;
  std::uint64_t success_count;
  std::uint64_t max_steps;
  std::uint64_t p50_steps;
  std::uint64_t p99_steps;
  std::uint64_t total_steps;
  std::uint64_t failures;
};

struct CoreRow {
  int k;
  std::uint64_t n;
  double c;
  std::uint64_t trial;
  std::uint64_t seed;
  double predicted_vertex_fraction;
  double empirical_vertex_fraction;
  double vertex_deviation;
  double predicted_edge_fraction;
  double empirical_edge_fraction;
  double edge_deviation;
};

struct AuditRow {
  int k;
  std::uint64_t n;
  double c;
  std::uint64_t trial;
  std::uint64_t seed;
  bool orientable;
  Rational delta;
  bool density_ok;
  Rational max_density;
  std::uint64_t expansion_subsets;
  std::uint64_t expansion_violations;
  std::uint64_t neighborhood_probes;
  std::uint64_t neighborhood_violations;
  std::optional<std::int64_t> free_distance_bound;  // C(0.1, 1 - max_density)
  std::optional<double> fraction_within_bound;
};

std::vector<ScanRow> run_scan(const ExperimentConfig& cfg);
std::vector<InsertBenchRow> run_insert_bench(const ExperimentConfig& cfg);
std::vector<CoreRow> run_core(const ExperimentConfig& cfg);
std::vector<AuditRow> run_audit(const ExperimentConfig& cfg);

/// Steps of every insertion of one insert-bench trial, in insertion order.
std::vector<std::uint64_t> insertion_steps(int k, std::uint64_t n, std::uint64_t m, std::uint64_t trial_seed,
                                           std::uint64_t step_cap);

// Row-oriented report used by both output formats.
using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

Report to_report(const analytics::ThresholdReport& r);
Report to_report(const std::vector<ScanRow>& rows);
Report to_report(const std::vector<InsertBenchRow>& rows);
Report to_report(const std::vector<CoreRow>& rows);
Report to_report(const std::vector<AuditRow>& rows);

/// Header line then one line per row; doubles as %.6g.
std::string format_csv(const Report& report);
/// Array of objects, or a single object when `single` is set.
std::string format_json(const Report& report, bool single = false);

/// Runs the configured experiment and returns the formatted output.
std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace cuckoo_rw
