#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urn/dynamics.hpp"
#include "urn/graph.hpp"
#include "urn/linalg.hpp"

namespace urn {

struct EnsembleConfig {
  Graph graph;
  Vector u0;
  Vector g0;
  std::uint64_t n_steps = 0;
  std::size_t n_trajectories = 1;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> sample_times;  // empty: default_sample_times(n_steps)
  std::size_t threads = 0;                  // 0: OPINION_URN_THREADS, else hardware concurrency
};

/// Per-sample-time aggregates over an ensemble. Row r of a_paths / s_paths
/// belongs to trajectory r (seed split_seed(base_seed, r)).
struct EnsembleStats {
  std::vector<std::uint64_t> sample_times;
  Vector mean_z_sq;
  Vector mean_a;
  Vector var_a;
  Vector mean_m_increment;  // one-step increment m_t - m_{t-1}; 0 at t = 0
  Vector se_m_increment;
  std::size_t n_trajectories = 0;
  Matrix a_paths;
  Matrix s_paths;

  friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

struct PowerLawFit {
  double exponent;
  double amplitude;
  double r_squared;
  double t_min;
  double t_max;

  double operator()(double t) const;
};

/// 0 plus log-spaced integer times in [1, n_steps] (`per_decade` per factor of
/// ten, deduplicated), always ending at n_steps.
std::vector<std::uint64_t> default_sample_times(std::uint64_t n_steps, int per_decade = 20);

/// Worker count: `hint` if nonzero, else OPINION_URN_THREADS, else hardware
/// concurrency; never more than `work_items`.
std::size_t resolve_threads(std::size_t hint, std::size_t work_items);

/// Runs n_trajectories independent trajectories. Results do not depend on the
/// worker count: per-trajectory buffers are merged in index order with
/// compensated summation.
EnsembleStats run_ensemble(const EnsembleConfig& config);

/// Least squares line through (log t, log y) for t in [t_min, t_max], t > 0.
/// Throws InsufficientData below 5 points, NonpositiveValues for y <= 0.
PowerLawFit fit_power_law(std::span<const std::uint64_t> times, std::span<const double> values, double t_min,
                          double t_max);
PowerLawFit fit_power_law(const EnsembleStats& stats, double t_min, double t_max);

struct HoeffdingCell {
  Vertex vertex;
  double threshold;
  double frequency;
  double bound;
  double standard_error;
  bool passed;
};

struct HoeffdingReport {
  std::uint64_t n_steps;
  std::size_t n_trials;
  std::vector<HoeffdingCell> cells;
  bool passed;
};

/// 2 exp(-2 a^2 / t).
double hoeffding_bound(double a, double t);

/// Empirical tail frequency of |g_t - g_0 - t d_i / |E|| > a per vertex, against
/// hoeffding_bound(a, t) + 3 binomial standard errors. Default thresholds are
/// sqrt(t) and 2 sqrt(t).
HoeffdingReport hoeffding_check(const Graph& graph, std::uint64_t n_steps, std::size_t n_trials,
                                std::uint64_t seed, std::vector<double> thresholds = {});

/// Single Polya urn: draw U with probability u/g, then add one ball of the
/// drawn colour. Consumes engine words exactly as step() does on K2.
class ReferenceUrn {
 public:
  ReferenceUrn(double u, double g) : u_(u), g_(g) {}
  void draw(Rng& rng);
  double fraction() const { return u_ / g_; }

 private:
  double u_;
  double g_;
};

struct PolyaReport {
  std::size_t n_trials;
  std::uint64_t n_steps;
  bool coupled_identical;
  double ks_statistic;
  double ks_threshold;
  bool passed;
};

/// Couples the K2 model with a single reference urn on one engine stream and
/// demands bit-identical opinion paths (throws TrajectoryMismatch otherwise);
/// then compares terminal opinions of independently seeded runs by a two-sample
/// KS statistic against 0.05.
PolyaReport polya_equivalence(double u0, double g0, std::uint64_t n_steps, std::size_t n_trials, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic; ties are handled exactly.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct ConvergenceReport {
  std::uint64_t t_early;
  std::uint64_t t_late;
  double z_early;
  double z_late;
  double decay_ratio_threshold;
  bool decay_ok;
  std::uint64_t t_quarter;
  std::uint64_t t_half;
  double var_recent;  // Var(a_T - a_{T/2})
  double var_prior;   // Var(a_{T/2} - a_{T/4})
  bool cauchy_ok;
  bool passed;
};

/// Disagreement decay between t ~ T/100 and T, and the Cauchy proxy
/// Var(a_T - a_{T/2}) <= Var(a_{T/2} - a_{T/4}). Throws InsufficientData with
/// fewer than 3 sample times.
ConvergenceReport convergence_report(const EnsembleStats& stats, double decay_ratio_threshold = 0.55);

}  // namespace urn
