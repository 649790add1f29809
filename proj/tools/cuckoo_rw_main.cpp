// cuckoo-rw: experiment runner for random-walk cuckoo hashing.
//
//   cuckoo-rw <thresholds|scan|insert-bench|core|audit> --k INT --n INT
//             [--c FLOAT | --c-grid a:b:step] --trials INT --seed INT
//             [--zeta FLOAT] [--step-cap INT] --out PATH --format csv|json
//
// Exit status: 0 on success, 2 on a configuration error, 1 on any other failure.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cuckoo_rw/experiments.hpp"

namespace {

constexpr int kConfigErrorExit = 2;

}  // namespace

int main(int argc, char** argv) {
  using cuckoo_rw::ConfigError;
  using cuckoo_rw::ExperimentConfig;

  CLI::App app{"Random-walk cuckoo hashing experiments"};
  app.set_version_flag("--version", "cuckoo-rw 1.0.0");

  std::string kind;
  std::string config_path;
  int k = 3;
  std::uint64_t n = 0;
  double c = 0;
  std::string c_grid;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  double zeta = 0.1;
  std::uint64_t step_cap = 0;
  std::string out;
  std::string format = "csv";
  unsigned threads = 1;
  std::vector<std::string> deltas;
  std::uint64_t samples = 0;
  std::uint64_t probes = 0;
  std::string fixture;
  bool timing = false;

  app.add_option("kind", kind, "Experiment: thresholds, scan, insert-bench, core, audit")
      ->required()
      ->check(CLI::IsMember({"thresholds", "scan", "insert-bench", "core", "audit"}));
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  auto* k_opt = app.add_option("--k", k, "Hash functions per item");
  auto* n_opt = app.add_option("--n", n, "Table size / vertex count");
  auto* c_opt = app.add_option("--c", c, "Load m/n");
  auto* grid_opt = app.add_option("--c-grid", c_grid, "Load grid a:b:step (inclusive)");
  c_opt->excludes(grid_opt);
  auto* trials_opt = app.add_option("--trials", trials, "Trials per load value");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  auto* zeta_opt = app.add_option("--zeta", zeta, "Walk exponent slack");
  auto* cap_opt = app.add_option("--step-cap", step_cap, "Walk step cap (default ceil(log2(n)^4))");
  auto* out_opt = app.add_option("--out", out, "Output path, '-' for stdout");
  auto* format_opt = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads for trials");
  auto* delta_opt = app.add_option("--delta", deltas, "Density slack values for audit, e.g. 0.01 or 1/100");
  auto* samples_opt = app.add_option("--samples", samples, "Expansion samples per audit trial");
  auto* probes_opt = app.add_option("--probes", probes, "Neighborhood probes per audit trial");
  auto* fixture_opt = app.add_option("--fixture", fixture, "Hypergraph text file used instead of sampling");
  auto* timing_opt = app.add_flag("--timing", timing, "Record matching times (output no longer reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigErrorExit;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config '" + config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
      }
      cuckoo_rw::apply_json_config(j, cfg);
    }
    cfg.kind = cuckoo_rw::parse_kind(kind);
    if (k_opt->count()) cfg.k = k;
    if (n_opt->count()) cfg.n = n;
    if (c_opt->count()) cfg.c_grid = {c};
    if (grid_opt->count()) cfg.c_grid = cuckoo_rw::parse_c_grid(c_grid);
    if (trials_opt->count()) cfg.trials = trials;
    if (seed_opt->count()) cfg.seed = seed;
    if (zeta_opt->count()) cfg.zeta = zeta;
    if (cap_opt->count()) cfg.step_cap = step_cap;
    if (out_opt->count()) cfg.out = out;
    if (format_opt->count()) cfg.format = format == "json" ? cuckoo_rw::OutputFormat::kJson : cuckoo_rw::OutputFormat::kCsv;
    if (threads_opt->count()) cfg.threads = threads;
    if (delta_opt->count()) {
      cfg.deltas.clear();
      for (const auto& d : deltas) cfg.deltas.push_back(cuckoo_rw::Rational::parse(d));
    }
    if (samples_opt->count()) cfg.expansion_samples = samples;
    if (probes_opt->count()) cfg.neighborhood_probes = probes;
    if (fixture_opt->count()) cfg.fixture = fixture;
    if (timing_opt->count()) cfg.timing = timing;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  }

  try {
    const std::string text = cuckoo_rw::run_experiment(cfg);
    if (cfg.out.empty() || cfg.out == "-") {
      std::cout << text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) {
        std::cerr << "cannot write '" << cfg.out << "'\n";
        return 1;
      }
      file << text;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
