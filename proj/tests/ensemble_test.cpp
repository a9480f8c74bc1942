#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "urn/dynamics.hpp"
#include "urn/ensemble.hpp"
#include "urn/error.hpp"
#include "urn/spectral.hpp"

namespace urn {
namespace {

EnsembleConfig path_config(std::size_t n_traj, std::uint64_t n_steps) {
  EnsembleConfig c;
  c.graph = path_graph(5);
  c.u0 = {1, 1, 0, 0, 0};
  c.g0 = Vector(5, 1.0);
  c.n_steps = n_steps;
  c.n_trajectories = n_traj;
  c.base_seed = 7;
  c.threads = 1;
  return c;
}

TEST(SampleTimes, DefaultGrid) {
  const auto t = default_sample_times(10000);
  EXPECT_EQ(t.front(), 0U);
  EXPECT_EQ(t.back(), 10000U);
  EXPECT_EQ(t[1], 1U);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LT(t[k - 1], t[k]);
  EXPECT_EQ(default_sample_times(0), (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(default_sample_times(37).back(), 37U);
  EXPECT_THROW(default_sample_times(10, 0), Error);
}

TEST(Threads, Resolution) {
  EXPECT_EQ(resolve_threads(4, 2), 2U);
  EXPECT_EQ(resolve_threads(3, 100), 3U);
  ::setenv("OPINION_URN_THREADS", "5", 1);
  EXPECT_EQ(resolve_threads(0, 100), 5U);
  ::unsetenv("OPINION_URN_THREADS");
  EXPECT_GE(resolve_threads(0, 100), 1U);
}

TEST(Ensemble, SingleTrajectoryMatchesDirectRun) {
  EnsembleConfig c = path_config(1, 500);
  c.sample_times = {0, 10, 100, 500};
  const EnsembleStats stats = run_ensemble(c);
  const TrajectoryRecord r = run_trajectory(c.graph, c.u0, c.g0, 500, split_seed(7, 0), c.sample_times);
  const InfluenceSpectrum spec = eigenbasis(c.graph);
  for (std::size_t k = 0; k < c.sample_times.size(); ++k) {
    const double a = consensus_coordinate(spec.p, r.snapshots[k].x);
    EXPECT_EQ(stats.mean_a[k], a);
    double z = 0.0;
    for (double x : r.snapshots[k].x) z += (x - a) * (x - a);
    EXPECT_EQ(stats.mean_z_sq[k], z);
    EXPECT_EQ(stats.var_a[k], 0.0);
  }
}

TEST(Ensemble, CompleteTwoHasNoDisagreement) {
  EnsembleConfig c;
  c.graph = complete_graph(2);
  c.u0 = {0.5, 0.5};
  c.g0 = {1, 1};
  c.n_steps = 200;
  c.n_trajectories = 20;
  c.base_seed = 3;
  c.threads = 1;
  const EnsembleStats stats = run_ensemble(c);
  for (double z : stats.mean_z_sq) EXPECT_EQ(z, 0.0);
  for (double s : stats.s_paths.data()) EXPECT_NEAR(s, 0.0, 1e-15);
}

TEST(Ensemble, IndependentOfThreadCount) {
  EnsembleConfig c = path_config(37, 300);
  c.threads = 1;
  const EnsembleStats one = run_ensemble(c);
  c.threads = 4;
  const EnsembleStats four = run_ensemble(c);
  c.threads = 16;
  const EnsembleStats many = run_ensemble(c);
  EXPECT_EQ(one, four);
  EXPECT_EQ(one, many);
}

TEST(Ensemble, SeedIsolation) {
  EnsembleConfig small = path_config(5, 200);
  EnsembleConfig large = path_config(12, 200);
  const EnsembleStats a = run_ensemble(small);
  const EnsembleStats b = run_ensemble(large);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t k = 0; k < a.sample_times.size(); ++k) EXPECT_EQ(a.a_paths(r, k), b.a_paths(r, k));
  }
  large.base_seed = 8;
  EXPECT_NE(run_ensemble(large).a_paths, b.a_paths);
}

TEST(Ensemble, RejectsBadConfig) {
  EnsembleConfig c = path_config(0, 10);
  EXPECT_THROW(run_ensemble(c), Error);
  c = path_config(2, 10);
  c.sample_times = {0, 20};
  EXPECT_THROW(run_ensemble(c), Error);
  c.sample_times = {3, 3};
  EXPECT_THROW(run_ensemble(c), Error);
  c = path_config(2, 10);
  c.u0 = {2, 0, 0, 0, 0};
  EXPECT_THROW(run_ensemble(c), Error);
}

TEST(Ensemble, SmallPartSettles) {
  EnsembleConfig c = path_config(200, 10000);
  c.sample_times = {0, 100, 1000, 10000};
  const EnsembleStats stats = run_ensemble(c);
  double early = 0.0, late = 0.0, size = 0.0;
  for (std::size_t r = 0; r < stats.n_trajectories; ++r) {
    early += std::abs(stats.s_paths(r, 2) - stats.s_paths(r, 1));
    late += std::abs(stats.s_paths(r, 3) - stats.s_paths(r, 2));
    size += std::abs(stats.s_paths(r, 3));
  }
  EXPECT_LT(late, 0.5 * early);
  EXPECT_GT(stats.var_a[3], 0.0);
}

TEST(PowerLaw, RecoversSyntheticExponent) {
  std::vector<std::uint64_t> t;
  Vector y;
  for (std::uint64_t k = 1; k <= 10000; k *= 2) {
    t.push_back(k);
    y.push_back(3.5 * std::pow(static_cast<double>(k), -0.42));
  }
  const PowerLawFit fit = fit_power_law(t, y, 1, 10000);
  EXPECT_NEAR(fit.exponent, -0.42, 1e-12);
  EXPECT_NEAR(fit.amplitude, 3.5, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit(100.0), 3.5 * std::pow(100.0, -0.42), 1e-10);
}

TEST(PowerLaw, WindowAndErrors) {
  std::vector<std::uint64_t> t{0, 1, 2, 3, 4, 5, 6, 7};
  Vector y{9, 1, 0.5, 0.3, 0.25, 0.2, 0.18, 0.15};
  EXPECT_NO_THROW(fit_power_law(t, y, 1, 7));
  EXPECT_THROW(fit_power_law(t, y, 5, 7), Error);
  y[3] = 0.0;
  try {
    fit_power_law(t, y, 1, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonpositiveValues);
  }
  const Vector short_y{1, 2};
  EXPECT_THROW(fit_power_law(t, short_y, 1, 7), Error);
}

TEST(Hoeffding, BoundValues) {
  EXPECT_DOUBLE_EQ(hoeffding_bound(100.0, 10000.0), 2.0 * std::exp(-2.0));
  EXPECT_DOUBLE_EQ(hoeffding_bound(200.0, 10000.0), 2.0 * std::exp(-8.0));
}

TEST(Hoeffding, SmallRunPasses) {
  const HoeffdingReport r = hoeffding_check(path_graph(5), 1000, 200, 1);
  EXPECT_EQ(r.cells.size(), 10U);
  EXPECT_TRUE(r.passed);
  EXPECT_THROW(hoeffding_check(path_graph(5), 0, 10, 1), Error);
}

TEST(Polya, CoupledAndDistributionallyEqual) {
  const PolyaReport r = polya_equivalence(1.0, 2.0, 500, 1000, 5);
  EXPECT_TRUE(r.coupled_identical);
  EXPECT_LT(r.ks_statistic, 0.08);
  EXPECT_THROW(polya_equivalence(3.0, 2.0, 10, 10, 1), Error);
  EXPECT_THROW(polya_equivalence(0.0, 0.0, 10, 10, 1), Error);
}

TEST(ReferenceUrnTest, SpendsTwoWords) {
  Rng a(9), b(9);
  ReferenceUrn urn(1, 2);
  urn.draw(a);
  b.next();
  b.next();
  EXPECT_EQ(a.next(), b.next());
  EXPECT_TRUE(urn.fraction() == 1.0 / 3.0 || urn.fraction() == 2.0 / 3.0);
}

TEST(Statistics, KolmogorovSmirnov) {
  EXPECT_EQ(ks_statistic({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_EQ(ks_statistic({1, 2}, {3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(ks_statistic({1, 1, 2, 2}, {1, 2, 2, 2}), 0.25);
  EXPECT_THROW(ks_statistic({}, {1}), Error);
}

TEST(Statistics, Spearman) {
  const Vector x{1, 2, 3, 4, 5};
  const Vector up{2, 4, 8, 16, 32};
  const Vector down{5, 4, 3, 2, 1};
  const Vector ties{1, 1, 2, 2, 3};
  EXPECT_NEAR(spearman(x, up), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, down), -1.0, 1e-15);
  EXPECT_NEAR(spearman(x, ties), 0.9486832980505138, 1e-12);
  EXPECT_THROW(spearman(x, Vector{1, 2}), Error);
}

TEST(Convergence, PathFiveSmall) {
  EnsembleConfig c = path_config(300, 10000);
  c.threads = 0;
  const EnsembleStats stats = run_ensemble(c);
  const ConvergenceReport r = convergence_report(stats);
  EXPECT_EQ(r.t_late, 10000U);
  EXPECT_GE(r.t_early, 100U);
  EXPECT_TRUE(r.decay_ok) << r.z_late << " vs " << r.z_early;
  EXPECT_TRUE(r.cauchy_ok) << r.var_recent << " vs " << r.var_prior;
}

TEST(Convergence, NeedsThreeSamples) {
  EnsembleConfig c = path_config(3, 10);
  c.sample_times = {0, 10};
  const EnsembleStats stats = run_ensemble(c);
  try {
    convergence_report(stats);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InsufficientData);
  }
}

}  // namespace
}  // namespace urn
