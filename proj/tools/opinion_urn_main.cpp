// opinion-urn: command line front end for the coupled urn library.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "urn/checks.hpp"
#include "urn/dynamics.hpp"
#include "urn/ensemble.hpp"
#include "urn/error.hpp"
#include "urn/graph.hpp"
#include "urn/io.hpp"
#include "urn/spectral.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitCheckFailed = 2;

struct RunConfig {
  std::string graph = "path:5";
  std::vector<double> x0;
  std::vector<double> u0;
  std::vector<double> g0{1.0};
  std::uint64_t steps = 10000;
  std::size_t trajectories = 1000;
  std::uint64_t seed = 7;
  std::string samples = "log:20";
  std::string out;
  std::vector<double> fit_window{100.0, 10000.0};
  bool quick = false;
};

urn::Vector broadcast(const std::vector<double>& v, std::size_t n, const char* flag) {
  if (v.size() == 1) return urn::Vector(n, v[0]);
  if (v.size() == n) return v;
  throw urn::Error(urn::Errc::InvalidConfig, std::string(flag) + " needs 1 or " + std::to_string(n) +
                                                 " values, got " + std::to_string(v.size()));
}

// Returns (u0, g0). x0 converts to u0 = x0 * g0.
std::pair<urn::Vector, urn::Vector> initial_weights(const RunConfig& cfg, const urn::Graph& g) {
  const std::size_t n = g.n_vertices();
  const urn::Vector g0 = broadcast(cfg.g0, n, "--g0");
  if (!cfg.u0.empty() && !cfg.x0.empty()) {
    throw urn::Error(urn::Errc::InvalidConfig, "--u0 and --x0 are mutually exclusive");
  }
  if (!cfg.u0.empty()) return {broadcast(cfg.u0, n, "--u0"), g0};
  if (cfg.x0.empty()) throw urn::Error(urn::Errc::InvalidConfig, "--x0 or --u0 is required");
  urn::Vector x0 = broadcast(cfg.x0, n, "--x0");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x0[i] >= 0.0 && x0[i] <= 1.0)) {
      throw urn::Error(urn::Errc::OpinionOutOfRange, "--x0[" + std::to_string(i) + "] = " + std::to_string(x0[i]));
    }
    x0[i] *= g0[i];
  }
  return {x0, g0};
}

std::vector<std::uint64_t> parse_samples(const std::string& spec, std::uint64_t steps) {
  if (spec.rfind("log:", 0) == 0) {
    try {
      return urn::default_sample_times(steps, std::stoi(spec.substr(4)));
    } catch (const std::logic_error&) {
      throw urn::Error(urn::Errc::InvalidConfig, "--samples: bad density in '" + spec + "'");
    }
  }
  std::vector<std::uint64_t> times;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      times.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw urn::Error(urn::Errc::InvalidConfig, "--samples: '" + item + "' is not a step index");
    }
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] > steps || (k > 0 && times[k] <= times[k - 1])) {
      throw urn::Error(urn::Errc::InvalidConfig, "--samples must be strictly increasing within [0, --steps]");
    }
  }
  return times;
}

nlohmann::json config_echo(const RunConfig& cfg, const char* subcommand) {
  return {{"subcommand", subcommand}, {"graph", cfg.graph}, {"x0", cfg.x0},
          {"u0", cfg.u0},             {"g0", cfg.g0},       {"steps", cfg.steps},
          {"trajectories", cfg.trajectories}, {"seed", cfg.seed}, {"samples", cfg.samples},
          {"fit_window", cfg.fit_window}};
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw urn::Error(urn::Errc::InvalidConfig, "--out: cannot write '" + path + "'");
  f << text;
}

int run_spectrum(const RunConfig& cfg) {
  const urn::Graph g = urn::parse_graph_spec(cfg.graph);
  nlohmann::json j = urn::spectrum_to_json(urn::eigenbasis(g));
  j["graph"] = urn::graph_to_json(g);
  j["config"] = config_echo(cfg, "spectrum");
  const std::string text = j.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.out, text);
  }
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  const urn::Graph g = urn::parse_graph_spec(cfg.graph);
  const auto [u0, g0] = initial_weights(cfg, g);
  const auto times = parse_samples(cfg.samples, cfg.steps);
  const urn::TrajectoryRecord rec = urn::run_trajectory(g, u0, g0, cfg.steps, cfg.seed, times);

  std::ostringstream csv;
  urn::write_trajectory_csv(csv, rec);
  nlohmann::json meta = urn::trajectory_metadata(rec);
  meta["config"] = config_echo(cfg, "simulate");
  if (cfg.out.empty()) {
    std::cout << csv.str();
    std::cerr << meta.dump(2) << "\n";
  } else {
    write_text(cfg.out, csv.str());
    write_text(cfg.out + ".meta.json", meta.dump(2) + "\n");
  }
  return 0;
}

int run_ensemble_cmd(const RunConfig& cfg) {
  const urn::Graph g = urn::parse_graph_spec(cfg.graph);
  const auto [u0, g0] = initial_weights(cfg, g);
  if (cfg.trajectories < 1) throw urn::Error(urn::Errc::InvalidConfig, "--trajectories must be at least 1");
  if (cfg.fit_window.size() != 2 || !(cfg.fit_window[0] > 0.0) || !(cfg.fit_window[1] > cfg.fit_window[0])) {
    throw urn::Error(urn::Errc::InvalidConfig, "--fit-window needs two increasing positive times");
  }

  urn::EnsembleConfig ec;
  ec.graph = g;
  ec.u0 = u0;
  ec.g0 = g0;
  ec.n_steps = cfg.steps;
  ec.n_trajectories = cfg.trajectories;
  ec.base_seed = cfg.seed;
  ec.sample_times = parse_samples(cfg.samples, cfg.steps);

  const auto start = std::chrono::steady_clock::now();
  const urn::EnsembleStats stats = urn::run_ensemble(ec);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json summary;
  summary["config"] = config_echo(cfg, "ensemble");
  summary["graph"] = urn::graph_to_json(g);
  summary["graph_hash"] = urn::graph_hash(g);
  summary["rng"] = std::string(urn::Rng::kAlgorithm);
  summary["seeds"] = {{"base", cfg.seed},
                      {"derivation", "trajectory i uses splitmix64(base + 0x9E3779B97F4A7C15 * (i + 1))"}};
  summary["lambda"] = urn::eigenbasis(g).gap;
  try {
    const urn::PowerLawFit fit = urn::fit_power_law(stats, cfg.fit_window[0], cfg.fit_window[1]);
    summary["fit"] = {{"exponent", fit.exponent},
                      {"amplitude", fit.amplitude},
                      {"r_squared", fit.r_squared},
                      {"window", {fit.t_min, fit.t_max}}};
  } catch (const urn::Error& e) {
    summary["fit"] = {{"error", e.what()}, {"window", cfg.fit_window}};
  }
  if (stats.sample_times.size() >= 3) {
    const urn::ConvergenceReport r = urn::convergence_report(stats);
    summary["convergence"] = {{"t_early", r.t_early},       {"t_late", r.t_late},
                              {"z_early", r.z_early},       {"z_late", r.z_late},
                              {"decay_ok", r.decay_ok},     {"var_recent", r.var_recent},
                              {"var_prior", r.var_prior},   {"cauchy_ok", r.cauchy_ok}};
  }
  summary["metadata"] = {{"timestamp", utc_timestamp()},
                         {"runtime_seconds", runtime},
                         {"threads", urn::resolve_threads(0, cfg.trajectories)}};

  std::ostringstream csv;
  urn::write_ensemble_csv(csv, stats);
  if (cfg.out.empty()) {
    std::cout << csv.str();
    std::cerr << summary.dump(2) << "\n";
  } else {
    write_text(cfg.out, csv.str());
    write_text(cfg.out + ".summary.json", summary.dump(2) + "\n");
  }
  return 0;
}

int run_verify(const RunConfig& cfg) {
  const auto results = urn::run_verification(cfg.quick, cfg.seed);
  std::vector<std::string> failed;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.passed) failed.push_back(r.name);
  }
  if (failed.empty()) return 0;
  std::cerr << "failed checks:";
  for (const auto& name : failed) std::cerr << ' ' << name;
  std::cerr << "\n";
  return kExitCheckFailed;
}

int run_graph_export(const RunConfig& cfg) {
  const std::string text = urn::graph_to_json(urn::parse_graph_spec(cfg.graph)).dump() + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Polya urn opinion dynamics on graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.allow_config_extras(false);

  RunConfig cfg;
  auto add_graph = [&cfg](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph, "path:N, cycle:N, complete:N, gnp:N:P:SEED, or a graph JSON file")
        ->capture_default_str();
  };
  auto add_init = [&cfg](CLI::App* sub) {
    sub->add_option("--x0", cfg.x0, "initial opinions (one value broadcasts)")->delimiter(',');
    sub->add_option("--u0", cfg.u0, "initial U weights (one value broadcasts)")->delimiter(',');
    sub->add_option("--g0", cfg.g0, "initial total weights (one value broadcasts)")->delimiter(',');
    sub->add_option("--steps", cfg.steps, "number of conversations")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "log:K (K per decade) or comma list of times")->capture_default_str();
    sub->add_option("--out", cfg.out, "output CSV path (default: stdout, metadata to stderr)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "print the influence matrix spectrum as JSON");
  add_graph(spectrum);
  spectrum->add_option("--out", cfg.out, "output path (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "run one trajectory and write its snapshots as CSV");
  add_graph(simulate);
  add_init(simulate);

  auto* ensemble = app.add_subcommand("ensemble", "run many trajectories; write CSV and a fit summary");
  add_graph(ensemble);
  add_init(ensemble);
  ensemble->add_option("--trajectories", cfg.trajectories, "ensemble size")->capture_default_str();
  ensemble->add_option("--fit-window", cfg.fit_window, "t_min,t_max for the power-law fit")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_flag("--quick", cfg.quick, "reduced sample sizes");
  verify->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();

  auto* graph = app.add_subcommand("graph", "graph utilities");
  graph->require_subcommand(1);
  auto* graph_export = graph->add_subcommand("export", "write a graph as JSON");
  add_graph(graph_export);
  graph_export->add_option("--out", cfg.out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(cfg);
    if (simulate->parsed()) return run_simulate(cfg);
    if (ensemble->parsed()) return run_ensemble_cmd(cfg);
    if (verify->parsed()) return run_verify(cfg);
    if (graph_export->parsed()) return run_graph_export(cfg);
  } catch (const urn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
