// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "urn/dynamics.hpp"
#include "urn/ensemble.hpp"
#include "urn/graph.hpp"
#include "urn/linalg.hpp"
#include "urn/spectral.hpp"

namespace {

using namespace urn;

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool passed;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

std::vector<Graph> she_graphs(std::uint64_t seed) {
  return {complete_graph(2), path_graph(3), path_graph(5), complete_graph(4), erdos_renyi(10, 0.5, seed)};
}

UrnState random_state(const Graph& g, Rng& rng) {
  const std::size_t n = g.n_vertices();
  Vector u0(n), g0(n);
  for (std::size_t i = 0; i < n; ++i) {
    g0[i] = 0.5 + 4.0 * rng.uniform();
    u0[i] = g0[i] * rng.uniform();
  }
  return init_state(g, u0, g0);
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (double& v : m.row(i)) v = 2.0 * rng.uniform() - 1.0;
  }
  return m;
}

Vector random_vector(std::size_t n, Rng& rng) {
  Vector v(n);
  for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

Outcome spectral_gap_i5() {
  const auto start = Clock::now();
  const InfluenceSpectrum s = eigenbasis(path_graph(5));
  const double elapsed = seconds_since(start);
  const double expected = (13.0 - std::sqrt(73.0)) / 24.0;
  const double err = std::abs(s.gap - expected);
  std::ostringstream d;
  d.precision(17);
  d << "lambda=" << s.gap << " expected=" << expected << " |err|=" << err << " runtime=" << elapsed << "s";
  return {err < 1e-9 && elapsed < 1.0, d.str()};
}

Outcome headline_decay() {
  EnsembleConfig c;
  c.graph = path_graph(5);
  c.u0 = {1, 1, 0, 0, 0};
  c.g0 = Vector(5, 1.0);
  c.n_steps = 10000;
  c.n_trajectories = 1000;
  c.base_seed = 7;
  const auto start = Clock::now();
  const EnsembleStats stats = run_ensemble(c);
  const double elapsed = seconds_since(start);
  const PowerLawFit fit = fit_power_law(stats, 100.0, 10000.0);
  constexpr double kExponent = -0.371334;
  const double ratio = fit(1000.0) / (2.02 * std::pow(1000.0, kExponent));
  const bool exponent_ok = std::abs(fit.exponent - kExponent) <= 0.10;
  const bool ratio_ok = ratio >= 0.5 && ratio <= 2.0;
  std::ostringstream d;
  d << "exponent=" << fit.exponent << " (target " << kExponent << " +/- 0.10) amplitude=" << fit.amplitude
    << " r2=" << fit.r_squared << " ratio@1000=" << ratio << " runtime=" << elapsed << "s for 1e7 steps";
  return {exponent_ok && ratio_ok && elapsed <= 60.0, d.str()};
}

Outcome she_identity() {
  const auto graphs = she_graphs(split_seed(kSeed, 30));
  Rng rng(split_seed(kSeed, 3));
  constexpr std::uint64_t kTotal = 100000;
  double worst = 0.0;
  std::uint64_t done = 0;
  std::size_t restarts = 0;
  while (done < kTotal) {
    const Graph& g = graphs[restarts++ % graphs.size()];
    UrnState state = random_state(g, rng);
    const std::uint64_t len = 1 + rng.below(2000);
    for (std::uint64_t k = 0; k < len && done < kTotal; ++k, ++done) {
      const UrnState pre = state;
      const StepRecord rec = step(g, state, rng);
      worst = std::max(worst, she_residual(g, pre, rec, state));
    }
  }
  std::ostringstream d;
  d << done << " steps over 5 graphs, max residual " << worst;
  return {worst < 1e-12, d.str()};
}

Outcome lambda_products() {
  const auto graphs = she_graphs(split_seed(kSeed, 40));
  Rng rng(split_seed(kSeed, 4));
  double worst_excess = -1e300;
  double worst_excess_eigen = -1e300;
  double worst_row = 0.0;
  double min_entry = 0.0;
  for (int w = 0; w < 500; ++w) {
    const Graph& g = graphs[rng.below(graphs.size())];
    const std::size_t n = g.n_vertices();
    UrnState state = random_state(g, rng);
    const std::uint64_t start = rng.below(1000);
    const std::uint64_t len = 1 + rng.below(1000);
    while (state.t < start) step(g, state, rng);
    Matrix product = Matrix::identity(n);
    for (std::uint64_t k = 0; k < len; ++k) {
      const UrnState pre = state;
      const StepRecord rec = step(g, state, rng);
      const Matrix lam = lambda_matrix(state, diffusion_matrix(g, pre, rec.edge));
      for (double r : row_sums(lam)) worst_row = std::max(worst_row, std::abs(r - 1.0));
      for (double v : lam.data()) min_entry = std::min(min_entry, v);
      product = lam * product;
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    worst_excess = std::max(worst_excess, operator_norm(product) - root_n);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(product));
    worst_excess_eigen = std::max(worst_excess_eigen, svd.singularValues()(0) - root_n);
  }
  std::ostringstream d;
  d << "500 windows, max(norm - sqrt|V|)=" << worst_excess << " (SVD oracle " << worst_excess_eigen
    << "), max row-sum error " << worst_row << ", min entry " << min_entry;
  return {worst_excess <= 1e-9 && worst_excess_eigen <= 1e-9 && worst_row <= 1e-14 && min_entry >= 0.0, d.str()};
}

Outcome gautschi_sweep() {
  std::size_t cases = 0, violations = 0;
  double worst = -1e300;
  for (double lam : {0.1, 0.185667, 0.5, 0.9}) {
    for (std::uint64_t j = 1; j <= 50; ++j) {
      for (std::uint64_t t = j; t <= 200; ++t) {
        const GautschiBounds b = gautschi_bounds(j, t, lam);
        ++cases;
        worst = std::max({worst, b.lower - b.product, b.product - b.upper});
        if (b.lower > b.product + 1e-12 || b.product > b.upper + 1e-12) ++violations;
      }
    }
  }
  std::ostringstream d;
  d << cases << " cases, " << violations << " violations, max excess " << worst;
  return {violations == 0, d.str()};
}

Outcome eigenstructure() {
  Rng rng(split_seed(kSeed, 6));
  double worst_row = 0.0, worst_recon = 0.0, worst_ak = -1e300, worst_kernel = 0.0, worst_d2 = 0.0;
  std::size_t simple_failures = 0;
  std::size_t largest_n = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 2 + rng.below(29);
    const double p = 0.2 + 0.6 * rng.uniform();
    const Graph g = erdos_renyi(n, p, rng.next());
    largest_n = std::max(largest_n, n);
    const InfluenceSpectrum s = eigenbasis(g);

    for (double r : row_sums(s.L)) worst_row = std::max(worst_row, std::abs(r));
    const Matrix recon = s.P * s.D() * s.P_inv;
    worst_recon = std::max(worst_recon, frobenius_norm(recon - s.L) / frobenius_norm(s.L));

    const Eigen::MatrixXd L = to_eigen(s.L);
    const Eigen::EigenSolver<Eigen::MatrixXd> oracle(L);
    std::size_t zeros = 0;
    for (auto mu : oracle.eigenvalues()) zeros += std::abs(mu) < 1e-9;
    if (zeros != 1) ++simple_failures;

    for (std::uint64_t kk = 1; kk <= 50; ++kk) {
      const Eigen::MatrixXd ak = to_eigen(a_k_matrix(s.L, kk));
      const Eigen::EigenSolver<Eigen::MatrixXd> ak_eigs(ak, false);
      std::vector<double> moduli;
      std::size_t unit = 0;
      for (Eigen::Index i = 0; i < ak_eigs.eigenvalues().size(); ++i) {
        moduli.push_back(std::abs(ak_eigs.eigenvalues()(i)));
        if (std::abs(ak_eigs.eigenvalues()(i) - 1.0) < std::abs(ak_eigs.eigenvalues()(unit) - 1.0)) unit = i;
      }
      for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (i == unit) continue;
        worst_ak = std::max(worst_ak, moduli[i] - (1.0 - s.gap / static_cast<double>(kk)));
      }
    }

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(L.transpose());
    const Eigen::MatrixXd kernel = lu.kernel();
    if (kernel.cols() != 1) {
      ++simple_failures;
    } else {
      const Eigen::VectorXd kv = kernel.col(0) / kernel.col(0).sum();
      double d2 = 0.0;
      for (std::size_t d : g.degrees()) d2 += static_cast<double>(d * d);
      for (std::size_t i = 0; i < n; ++i) {
        worst_kernel = std::max(worst_kernel, std::abs(s.p[i] - kv(static_cast<Eigen::Index>(i))));
        worst_d2 = std::max(worst_d2, std::abs(s.p[i] - static_cast<double>(g.degree(i) * g.degree(i)) / d2));
      }
    }
  }
  std::ostringstream d;
  d << "20 graphs (n<=" << largest_n << "): row sums " << worst_row << ", reconstruction " << worst_recon
    << ", non-simple zero " << simple_failures << ", A_k excess " << worst_ak << ", p vs kernel " << worst_kernel
    << ", p vs d^2 " << worst_d2;
  return {worst_row <= 1e-13 && worst_recon <= 1e-9 && simple_failures == 0 && worst_ak <= 1e-12 &&
              worst_kernel <= 1e-9 && worst_d2 <= 1e-9,
          d.str()};
}

Outcome decomposition() {
  const Graph g = path_graph(5);
  const InfluenceSpectrum spec = eigenbasis(g);
  const Vector u0{1, 1, 0, 0, 0};
  const Vector g0(5, 1.0);
  constexpr std::uint64_t kSteps = 1000;
  constexpr std::size_t kRuns = 100;
  const std::uint64_t base = split_seed(kSeed, 7);

  double worst_identity = 0.0;
  const std::vector<std::uint64_t> ends{0, kSteps};
  for (std::size_t r = 0; r < kRuns; ++r) {
    const TrajectoryRecord rec = run_trajectory(g, u0, g0, kSteps, split_seed(base, r), ends, true);
    const ConsensusDecomposition dec = decompose_consensus(rec, spec, false);
    for (std::size_t k = 0; k < dec.a.size(); ++k) {
      worst_identity = std::max(worst_identity, std::abs(dec.a[k] - dec.a[0] - dec.m[k] - dec.s[k]));
    }
  }

  EnsembleConfig c;
  c.graph = g;
  c.u0 = u0;
  c.g0 = g0;
  c.n_steps = kSteps;
  c.n_trajectories = kRuns;
  c.base_seed = base;
  const EnsembleStats stats = run_ensemble(c);
  std::size_t outside = 0;
  double worst_z = 0.0;
  for (std::size_t k = 0; k < stats.sample_times.size(); ++k) {
    const double mean = stats.mean_m_increment[k];
    const double se = stats.se_m_increment[k];
    if (std::abs(mean) > 3.0 * se) ++outside;
    if (se > 0.0) worst_z = std::max(worst_z, std::abs(mean) / se);
  }
  std::ostringstream d;
  d << kRuns << " runs, T=" << kSteps << ": max |a-a0-m-s|=" << worst_identity << "; m-increment outside 3SE at "
    << outside << "/" << stats.sample_times.size() << " sample times (max |mean|/SE " << worst_z << ")";
  return {worst_identity < 1e-10 && outside == 0, d.str()};
}

Outcome polya() {
  const PolyaReport r = polya_equivalence(1.0, 2.0, 5000, 2000, split_seed(kSeed, 8));
  std::ostringstream d;
  d << r.n_trials << " coupled runs bit-identical, KS=" << r.ks_statistic << " (< " << r.ks_threshold << ")";
  return {r.coupled_identical && r.ks_statistic < 0.05, d.str()};
}

Outcome hoeffding() {
  const double a = 2.0 * std::sqrt(1e4);
  const HoeffdingReport r = hoeffding_check(path_graph(5), 10000, 2000, split_seed(kSeed, 9), {a});
  double worst = 0.0;
  double limit = 0.0;
  for (const HoeffdingCell& c : r.cells) {
    worst = std::max(worst, c.frequency);
    limit = c.bound + 3.0 * c.standard_error;
  }
  std::ostringstream d;
  d << "a=2sqrt(t)=" << a << ", max tail frequency " << worst << " vs bound+3SE " << limit;
  return {r.passed, d.str()};
}

Outcome hadamard() {
  Rng rng(split_seed(kSeed, 10));
  double worst_sub = -1e300;
  double worst_assoc = 0.0;
  std::size_t violations = 0;
  for (int c = 0; c < 200; ++c) {
    const std::size_t m = 1 + rng.below(8);
    const std::size_t n = 1 + rng.below(8);
    const Matrix a = random_matrix(m, n, rng);
    const Vector right = random_vector(n, rng);
    const Vector left = random_vector(m, rng);
    const double e1 = operator_norm(hadamard_right(a, right)) - operator_norm(a) * norm2(right);
    const double e2 = operator_norm(hadamard_left(left, a)) - operator_norm(a) * norm2(left);
    worst_sub = std::max({worst_sub, e1, e2});
    if (e1 >= 1e-12 || e2 >= 1e-12) ++violations;
  }
  for (int c = 0; c < 200; ++c) {
    const std::size_t m = 1 + rng.below(8);
    const std::size_t n = 1 + rng.below(8);
    const std::size_t q = 1 + rng.below(8);
    const Matrix a1 = random_matrix(m, n, rng);
    const Matrix a2 = random_matrix(n, q, rng);
    const Vector b = random_vector(n, rng);
    const double gap = max_abs_diff(a1 * hadamard_left(b, a2), hadamard_right(a1, b) * a2);
    worst_assoc = std::max(worst_assoc, gap);
    if (gap >= 1e-12) ++violations;
  }
  std::ostringstream d;
  d << "200+200 instances, max submultiplicativity excess " << worst_sub << ", max associativity gap " << worst_assoc;
  return {violations == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "spectral gap of I5", spectral_gap_i5},
      {"AC2", "disagreement decay on I5", headline_decay},
      {"AC3", "stochastic heat equation identity", she_identity},
      {"AC4", "Lambda product norm bound", lambda_products},
      {"AC5", "Gautschi sandwich", gautschi_sweep},
      {"AC6", "influence matrix eigenstructure", eigenstructure},
      {"AC7", "consensus decomposition", decomposition},
      {"AC8", "Polya urn coupling", polya},
      {"AC9", "Hoeffding concentration", hoeffding},
      {"AC10", "Hadamard algebra", hadamard},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s %s: %s (%.2fs)\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
    failures += o.passed ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
