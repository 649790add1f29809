#include "cuckoo_rw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cuckoo_rw/cuckoo_table.hpp"
#include "cuckoo_rw/seeding.hpp"

namespace cuckoo_rw {

// ---------------------------------------------------------------------------
// Configuration

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kThresholds: return "thresholds";
    case ExperimentKind::kScan: return "scan";
    case ExperimentKind::kInsertBench: return "insert-bench";
    case ExperimentKind::kCore: return "core";
    case ExperimentKind::kAudit: return "audit";
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& text) {
  for (auto kind : {ExperimentKind::kThresholds, ExperimentKind::kScan, ExperimentKind::kInsertBench,
                    ExperimentKind::kCore, ExperimentKind::kAudit}) {
    if (to_string(kind) == text) return kind;
  }
  throw ConfigError("unknown experiment kind '" + text + "'");
}

std::vector<double> parse_c_grid(const std::string& text) {
  double lo = 0;
  double hi = 0;
  double step = 0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream is(text);
  if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof()) {
    throw ConfigError("c-grid must look like a:b:step, got '" + text + "'");
  }
  if (!(step > 0) || hi < lo) throw ConfigError("c-grid needs step > 0 and a <= b");
  std::vector<double> out;
  for (std::uint64_t i = 0;; ++i) {
    const double raw = lo + static_cast<double>(i) * step;
    if (raw > hi + step * 1e-9) break;
    out.push_back(std::round(raw * 1e12) / 1e12);
    if (out.size() > 100000) throw ConfigError("c-grid has too many points");
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (k < 3) throw ConfigError("--k must be >= 3");
  if (kind == ExperimentKind::kThresholds) return;
  if (k > kMaxChoices) throw ConfigError("--k must be <= 16 for simulations");
  if (!fixture) {
    if (n < 1 || n > (std::uint64_t{1} << 31)) throw ConfigError("--n must lie in [1, 2^31]");
    if (c_grid.empty()) throw ConfigError("--c or --c-grid is required");
    for (double c : c_grid) {
      if (!(c > 0.0 && c < 1.0)) throw ConfigError("load values must lie in (0,1)");
    }
  }
  if (trials < 1) throw ConfigError("--trials must be >= 1");
  if (threads < 1) throw ConfigError("--threads must be >= 1");
  if (step_cap && *step_cap < 1) throw ConfigError("--step-cap must be >= 1");
  if (!(zeta > 0.0)) throw ConfigError("--zeta must be > 0");
  for (const Rational& d : deltas) {
    if (d.den <= 0 || d.num < 0 || d.num >= d.den) throw ConfigError("--delta values must lie in [0,1)");
  }
  if (kind == ExperimentKind::kInsertBench && fixture) throw ConfigError("insert-bench does not take a fixture");
}

std::uint64_t ExperimentConfig::effective_step_cap() const {
  return step_cap.value_or(default_step_cap(n));
}

void apply_json_config(const nlohmann::json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "kind") {
        cfg.kind = parse_kind(value.get<std::string>());
      } else if (key == "k") {
        cfg.k = value.get<int>();
      } else if (key == "n") {
        cfg.n = value.get<std::uint64_t>();
      } else if (key == "c") {
        cfg.c_grid = {value.get<double>()};
      } else if (key == "c_grid" || key == "c-grid") {
        cfg.c_grid = value.is_string() ? parse_c_grid(value.get<std::string>()) : value.get<std::vector<double>>();
      } else if (key == "trials") {
        cfg.trials = value.get<std::uint64_t>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "zeta") {
        cfg.zeta = value.get<double>();
      } else if (key == "step_cap" || key == "step-cap") {
        cfg.step_cap = value.get<std::uint64_t>();
      } else if (key == "out") {
        cfg.out = value.get<std::string>();
      } else if (key == "format") {
        const auto f = value.get<std::string>();
        if (f != "csv" && f != "json") throw ConfigError("format must be csv or json");
        cfg.format = f == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
      } else if (key == "threads") {
        cfg.threads = value.get<unsigned>();
      } else if (key == "timing") {
        cfg.timing = value.get<bool>();
      } else if (key == "delta") {
        cfg.deltas.clear();
        auto parse_one = [](const nlohmann::json& v) {
          return v.is_string() ? Rational::parse(v.get<std::string>()) : Rational::parse(v.dump());
        };
        if (value.is_array()) {
          for (const auto& v : value) cfg.deltas.push_back(parse_one(v));
        } else {
          cfg.deltas.push_back(parse_one(value));
        }
      } else if (key == "samples") {
        cfg.expansion_samples = value.get<std::uint64_t>();
      } else if (key == "probes") {
        cfg.neighborhood_probes = value.get<std::uint64_t>();
      } else if (key == "fixture") {
        cfg.fixture = value.get<std::string>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Trial execution

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers; results are
// stored by index.
template <typename Result, typename Fn>
std::vector<Result> run_trials(unsigned threads, std::size_t count, Fn&& fn) {
  std::vector<Result> results(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::uint64_t edges_for(double c, std::uint64_t n) {
  return static_cast<std::uint64_t>(std::floor(c * static_cast<double>(n)));
}

Hypergraph load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture '" + path + "'");
  try {
    return Hypergraph::read_text(in);
  } catch (const std::exception& e) {
    throw ConfigError("fixture '" + path + "': " + e.what());
  }
}

Hypergraph prefix(const Hypergraph& g, std::uint64_t m) {
  Hypergraph out(g.n(), g.k());
  for (EdgeId e = 0; e < m; ++e) out.add_edge(g.tuple(e));
  return out;
}

std::uint64_t nearest_rank(const std::vector<std::uint64_t>& sorted, double p) {
  if (sorted.empty()) return 0;
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

// Cases of a simulation: one per (load, trial), or a single fixture case.
struct Case {
  double c;
  std::uint64_t trial;
  std::uint64_t seed;
};

std::vector<Case> cases_of(const ExperimentConfig& cfg, const std::optional<Hypergraph>& fixture) {
  std::vector<Case> out;
  if (fixture) {
    out.push_back({static_cast<double>(fixture->edge_count()) / static_cast<double>(fixture->n()), 0,
                   mix_seed(cfg.seed, 0)});
    return out;
  }
  std::vector<double> grid = cfg.c_grid;
  std::sort(grid.begin(), grid.end());
  for (double c : grid) {
    for (std::uint64_t t = 0; t < cfg.trials; ++t) out.push_back({c, t, mix_seed(cfg.seed, t)});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// scan

std::vector<ScanRow> run_scan(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<Hypergraph> fixture;
  if (cfg.fixture) fixture = load_fixture(*cfg.fixture);
  const int k = fixture ? fixture->k() : cfg.k;
  const std::uint64_t n = fixture ? fixture->n() : cfg.n;

  struct Outcome {
    bool orientable = false;
    double ms = 0.0;
  };
  std::vector<double> grid = cfg.c_grid;
  std::sort(grid.begin(), grid.end());
  if (fixture) grid = {static_cast<double>(fixture->edge_count()) / static_cast<double>(n)};
  const std::uint64_t trials = fixture ? 1 : cfg.trials;

  // One trial samples the largest instance once; smaller loads are its
  // prefixes, which couples the orientability outcomes across the grid.
  auto per_trial = run_trials<std::vector<Outcome>>(cfg.threads, trials, [&](std::size_t t) {
    const Hypergraph full = fixture ? *fixture : sample_hypergraph(n, edges_for(grid.back(), n), k, mix_seed(cfg.seed, t));
    std::vector<Outcome> outcomes;
    for (double c : grid) {
      const Hypergraph g = fixture ? full : prefix(full, edges_for(c, n));
      const auto start = std::chrono::steady_clock::now();
      const bool ok = is_orientable(g);
      const auto stop = std::chrono::steady_clock::now();
      outcomes.push_back({ok, cfg.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0});
    }
    return outcomes;
  });

  std::vector<ScanRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ScanRow row{k, n, grid[i], trials, 0, 0.0, 0.0};
    for (const auto& outcomes : per_trial) {
      row.orientable_count += outcomes[i].orientable;
      row.mean_matching_time_ms += outcomes[i].ms;
    }
    row.orientable_fraction = static_cast<double>(row.orientable_count) / static_cast<double>(trials);
    row.mean_matching_time_ms /= static_cast<double>(trials);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// insert-bench

std::vector<std::uint64_t> insertion_steps(int k, std::uint64_t n, std::uint64_t m, std::uint64_t trial_seed,
                                           std::uint64_t step_cap) {
  const HashFamily family(k, n, mix_seed(trial_seed, 1));
  CuckooTable table(family, mix_seed(trial_seed, 2));
  std::vector<std::uint64_t> steps;
  steps.reserve(m);
  for (ItemId item = 0; item < m; ++item) steps.push_back(table.insert(item, step_cap).steps);
  return steps;
}

std::vector<InsertBenchRow> run_insert_bench(const ExperimentConfig& cfg) {
  cfg.validate();
  const double threshold = analytics::load_threshold(cfg.k);
  for (double c : cfg.c_grid) {
    if (c >= threshold) {
      std::cerr << "warning: load " << c << " is at or above the threshold " << threshold << " for k=" << cfg.k
                << "; failures are expected\n";
    }
  }
  const std::uint64_t cap = cfg.effective_step_cap();
  const auto cases = cases_of(cfg, std::nullopt);
  return run_trials<InsertBenchRow>(cfg.threads, cases.size(), [&](std::size_t i) {
    const Case& cs = cases[i];
    const std::uint64_t m = edges_for(cs.c, cfg.n);
    const HashFamily family(cfg.k, cfg.n, mix_seed(cs.seed, 1));
    CuckooTable table(family, mix_seed(cs.seed, 2));
    std::vector<std::uint64_t> steps;
    steps.reserve(m);
    InsertBenchRow row{cfg.k, cfg.n, m, cs.seed, 0, 0, 0, 0, 0, 0};
    for (ItemId item = 0; item < m; ++item) {
      const InsertionOutcome outcome = table.insert(item, cap);
      steps.push_back(outcome.steps);
      row.total_steps += outcome.steps;
      if (outcome.success) {
        ++row.success_count;
      } else {
        ++row.failures;
      }
    }
    std::sort(steps.begin(), steps.end());
    row.max_steps = steps.empty() ? 0 : steps.back();
    row.p50_steps = nearest_rank(steps, 0.50);
    row.p99_steps = nearest_rank(steps, 0.99);
    return row;
  });
}

// ---------------------------------------------------------------------------
// core

std::vector<CoreRow> run_core(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<Hypergraph> fixture;
  if (cfg.fixture) fixture = load_fixture(*cfg.fixture);
  const auto cases = cases_of(cfg, fixture);
  return run_trials<CoreRow>(cfg.threads, cases.size(), [&](std::size_t i) {
    const Case& cs = cases[i];
    const Hypergraph g = fixture ? *fixture : sample_hypergraph(cfg.n, edges_for(cs.c, cfg.n), cfg.k, cs.seed);
    const auto n = static_cast<double>(g.n());
    const CoreResult core = strip_core(g);
    const analytics::CorePrediction pred =
        (cs.c > 0.0 && cs.c < 1.0) ? analytics::core_prediction(cs.c, g.k()) : analytics::CorePrediction{};
    CoreRow row{};
    row.k = g.k();
    row.n = g.n();
    row.c = cs.c;
    row.trial = cs.trial;
    row.seed = cs.seed;
    row.predicted_vertex_fraction = pred.vertex_fraction;
    row.empirical_vertex_fraction = static_cast<double>(core.core_vertices.size()) / n;
    row.vertex_deviation = std::abs(row.empirical_vertex_fraction - row.predicted_vertex_fraction);
    row.predicted_edge_fraction = pred.edge_fraction;
    row.empirical_edge_fraction = static_cast<double>(core.core_edges.size()) / n;
    row.edge_deviation = std::abs(row.empirical_edge_fraction - row.predicted_edge_fraction);
    return row;
  });
}

// ---------------------------------------------------------------------------
// audit

std::vector<AuditRow> run_audit(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<Hypergraph> fixture;
  if (cfg.fixture) fixture = load_fixture(*cfg.fixture);
  const auto cases = cases_of(cfg, fixture);
  auto per_case = run_trials<std::vector<AuditRow>>(cfg.threads, cases.size(), [&](std::size_t i) {
    const Case& cs = cases[i];
    const Hypergraph g = fixture ? *fixture : sample_hypergraph(cfg.n, edges_for(cs.c, cfg.n), cfg.k, cs.seed);
    const int k = g.k();

    AuditRow base{};
    base.k = k;
    base.n = g.n();
    base.c = cs.c;
    base.trial = cs.trial;
    base.seed = cs.seed;

    const MaxDensity dens = max_density(g);
    base.max_density = dens.value;

    ExpansionOptions opts;
    opts.samples = cfg.expansion_samples;
    opts.seed = mix_seed(cs.seed, 3);
    const ExpansionCheck exp = check_expansion(g, ExpansionMode::kSampled, opts);
    base.expansion_subsets = exp.subsets_checked;
    base.expansion_violations = exp.holds ? 0 : 1;

    const auto orientation = find_orientation(g);
    base.orientable = orientation.has_value();
    if (orientation) {
      std::mt19937_64 rng(mix_seed(cs.seed, 4));
      std::uniform_int_distribution<Vertex> pick_vertex(0, static_cast<Vertex>(g.n() - 1));
      const double log_n = std::log(static_cast<double>(g.n())) / std::log(static_cast<double>(k - 1));
      std::uniform_int_distribution<std::uint64_t> pick_t(0, static_cast<std::uint64_t>(std::ceil(std::max(log_n, 1.0))));
      for (std::uint64_t probe = 0; probe < cfg.neighborhood_probes; ++probe) {
        const Vertex v = pick_vertex(rng);
        const std::uint64_t t = pick_t(rng);
        const std::uint64_t size = h_neighborhood_size(g, *orientation, v, t);
        const long double bound = std::pow(static_cast<long double>(k - 1), static_cast<long double>(t + 1));
        ++base.neighborhood_probes;
        if (static_cast<long double>(size) > bound) ++base.neighborhood_violations;
      }
      const double delta_estimate = 1.0 - dens.value.to_double();
      if (delta_estimate > 0.0 && delta_estimate < 1.0) {
        const std::int64_t bound = analytics::stripping_constant(0.1, delta_estimate);
        const auto dist = distances_to_free(g, *orientation);
        const auto within = std::count_if(dist.begin(), dist.end(), [&](const auto& d) {
          return d && *d <= static_cast<std::uint64_t>(bound);
        });
        base.free_distance_bound = bound;
        base.fraction_within_bound = static_cast<double>(within) / static_cast<double>(g.n());
      }
    }

    std::vector<AuditRow> rows;
    for (const Rational& delta : cfg.deltas) {
      AuditRow row = base;
      row.delta = delta.reduced();
      row.density_ok = check_density(g, delta, DensityMode::kFlow).holds;
      rows.push_back(row);
    }
    return rows;
  });
  std::vector<AuditRow> rows;
  for (auto& chunk : per_case) rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string rational_text(const Rational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

template <typename T>
Cell optional_cell(const std::optional<T>& v) {
  if (!v) return std::string{};
  return *v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

Report to_report(const analytics::ThresholdReport& r) {
  return {{"k", "xi_star", "c_star", "lambda_k", "walk_exponent"},
          {{std::int64_t{r.k}, r.xi_star, r.c_star, r.lambda_k, r.walk_exponent}}};
}

Report to_report(const std::vector<ScanRow>& rows) {
  Report rep{{"k", "n", "c", "trials", "orientable_count", "orientable_fraction", "mean_matching_time_ms"}, {}};
  for (const auto& r : rows) {
    rep.rows.push_back({std::int64_t{r.k}, r.n, r.c, r.trials, r.orientable_count, r.orientable_fraction,
                        r.mean_matching_time_ms});
  }
  return rep;
}

Report to_report(const std::vector<InsertBenchRow>& rows) {
  Report rep{{"k", "n", "m", "seed", "success_count", "max_steps", "p50_steps", "p99_steps", "total_steps",
              "failures"},
             {}};
  for (const auto& r : rows) {
    rep.rows.push_back({std::int64_t{r.k}, r.n, r.m, r.seed, r.success_count, r.max_steps, r.p50_steps, r.p99_steps,
                        r.total_steps, r.failures});
  }
  return rep;
}

Report to_report(const std::vector<CoreRow>& rows) {
  Report rep{{"k", "n", "c", "trial", "seed", "predicted_vertex_fraction", "empirical_vertex_fraction",
              "vertex_deviation", "predicted_edge_fraction", "empirical_edge_fraction", "edge_deviation"},
             {}};
  for (const auto& r : rows) {
    rep.rows.push_back({std::int64_t{r.k}, r.n, r.c, r.trial, r.seed, r.predicted_vertex_fraction,
                        r.empirical_vertex_fraction, r.vertex_deviation, r.predicted_edge_fraction,
                        r.empirical_edge_fraction, r.edge_deviation});
  }
  return rep;
}

Report to_report(const std::vector<AuditRow>& rows) {
  Report rep{{"k", "n", "c", "trial", "seed", "orientable", "delta", "density_ok", "max_density",
              "max_density_value", "expansion_subsets", "expansion_violations", "neighborhood_probes",
              "neighborhood_violations", "free_distance_bound", "fraction_within_bound"},
             {}};
  for (const auto& r : rows) {
    rep.rows.push_back({std::int64_t{r.k}, r.n, r.c, r.trial, r.seed, r.orientable, rational_text(r.delta),
                        r.density_ok, rational_text(r.max_density), r.max_density.to_double(), r.expansion_subsets,
                        r.expansion_violations, r.neighborhood_probes, r.neighborhood_violations,
                        optional_cell(r.free_distance_bound), optional_cell(r.fraction_within_bound)});
  }
  return rep;
}

std::string format_csv(const Report& report) {
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) out += (i ? "," : "") + report.columns[i];
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::visit(
          [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              return format_double(v);
            } else if constexpr (std::is_same_v<T, bool>) {
              return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
              return v;
            } else {
              return std::to_string(v);
            }
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_json(const Report& report, bool single) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              obj[report.columns[i]] = v.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
            } else {
              obj[report.columns[i]] = v;
            }
          },
          row[i]);
    }
    arr.push_back(std::move(obj));
  }
  if (single && arr.size() == 1) return arr[0].dump(2) + "\n";
  return arr.dump(2) + "\n";
}

std::string run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool json = cfg.format == OutputFormat::kJson;
  auto emit = [&](const Report& rep, bool single = false) { return json ? format_json(rep, single) : format_csv(rep); };
  switch (cfg.kind) {
    case ExperimentKind::kThresholds: return emit(to_report(analytics::threshold_report(cfg.k)), true);
    case ExperimentKind::kScan: return emit(to_report(run_scan(cfg)));
    case ExperimentKind::kInsertBench: return emit(to_report(run_insert_bench(cfg)));
    case ExperimentKind::kCore: return emit(to_report(run_core(cfg)));
    case ExperimentKind::kAudit: return emit(to_report(run_audit(cfg)));
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace cuckoo_rw
