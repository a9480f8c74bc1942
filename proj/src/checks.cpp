#include "urn/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "urn/dynamics.hpp"
#include "urn/ensemble.hpp"
#include "urn/graph.hpp"
#include "urn/linalg.hpp"
#include "urn/spectral.hpp"

namespace urn {

namespace {

std::vector<Graph> check_graphs(std::uint64_t seed) {
  return {complete_graph(2), path_graph(3), path_graph(5), complete_graph(4), erdos_renyi(10, 0.5, seed)};
}

Vector random_init(const Graph& g, Rng& rng, Vector& g0) {
  Vector u0(g.n_vertices());
  g0.assign(g.n_vertices(), 0.0);
  for (std::size_t i = 0; i < u0.size(); ++i) {
    g0[i] = 0.5 + 4.0 * rng.uniform();
    u0[i] = g0[i] * rng.uniform();
  }
  return u0;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (double& v : m.row(i)) v = 2.0 * rng.uniform() - 1.0;
  }
  return m;
}

CheckResult she_check(bool quick, std::uint64_t seed) {
  const std::uint64_t total = quick ? 5000 : 100000;
  const auto graphs = check_graphs(seed);
  Rng rng(split_seed(seed, 1));
  double worst = 0.0;
  std::uint64_t done = 0;
  for (std::size_t gi = 0; done < total; gi = (gi + 1) % graphs.size()) {
    const Graph& g = graphs[gi];
    Vector g0;
    const Vector u0 = random_init(g, rng, g0);
    UrnState state = init_state(g, u0, g0);
    for (int k = 0; k < 1000 && done < total; ++k, ++done) {
      const UrnState pre = state;
      const StepRecord rec = step(g, state, rng);
      worst = std::max(worst, she_residual(g, pre, rec, state));
    }
  }
  std::ostringstream d;
  d << done << " steps, max residual " << worst;
  return {"she_residual", worst < 1e-12, d.str()};
}

CheckResult hadamard_check(bool quick, std::uint64_t seed) {
  const int n_cases = quick ? 50 : 200;
  Rng rng(split_seed(seed, 2));
  double worst_sub = -1e300;
  double worst_assoc = 0.0;
  for (int c = 0; c < n_cases; ++c) {
    const std::size_t m = 1 + rng.below(6);
    const std::size_t n = 1 + rng.below(6);
    const Matrix a = random_matrix(m, n, rng);
    const Matrix col = random_matrix(n, 1, rng);
    const Matrix row = random_matrix(m, 1, rng);
    const Vector b = col.col(0);
    const Vector bl = row.col(0);
    worst_sub = std::max(worst_sub, operator_norm(hadamard_right(a, b)) - operator_norm(a) * norm2(b));
    worst_sub = std::max(worst_sub, operator_norm(hadamard_left(bl, a)) - operator_norm(a) * norm2(bl));

    const Matrix a1 = random_matrix(m, n, rng);
    const Matrix a2 = random_matrix(n, 1 + rng.below(6), rng);
    worst_assoc = std::max(worst_assoc, max_abs_diff(a1 * hadamard_left(b, a2), hadamard_right(a1, b) * a2));
  }
  std::ostringstream d;
  d << n_cases << " cases, max submultiplicativity excess " << worst_sub << ", max associativity gap " << worst_assoc;
  return {"hadamard_algebra", worst_sub < 1e-12 && worst_assoc < 1e-12, d.str()};
}

CheckResult gautschi_check() {
  const double lams[] = {0.1, 0.185667, 0.5, 0.9};
  std::size_t violations = 0;
  std::size_t cases = 0;
  for (double lam : lams) {
    for (std::uint64_t j = 1; j <= 50; ++j) {
      for (std::uint64_t t = j; t <= 200; ++t) {
        const GautschiBounds b = gautschi_bounds(j, t, lam);
        ++cases;
        if (b.lower > b.product + 1e-12 || b.product > b.upper + 1e-12) ++violations;
      }
    }
  }
  std::ostringstream d;
  d << cases << " cases, " << violations << " violations";
  return {"gautschi_sandwich", violations == 0, d.str()};
}

CheckResult lambda_product_check(bool quick, std::uint64_t seed) {
  const int n_windows = quick ? 50 : 500;
  const std::uint64_t max_len = quick ? 200 : 1000;
  const auto graphs = check_graphs(seed);
  Rng rng(split_seed(seed, 3));
  double worst_excess = -1e300;
  double worst_row = 0.0;
  double most_negative = 0.0;
  for (int w = 0; w < n_windows; ++w) {
    const Graph& g = graphs[rng.below(graphs.size())];
    const std::size_t n = g.n_vertices();
    Vector g0;
    const Vector u0 = random_init(g, rng, g0);
    UrnState state = init_state(g, u0, g0);
    const std::uint64_t start = rng.below(500);
    const std::uint64_t len = 1 + rng.below(max_len);
    while (state.t < start) step(g, state, rng);
    Matrix product = Matrix::identity(n);
    for (std::uint64_t k = 0; k < len; ++k) {
      const UrnState pre = state;
      const StepRecord rec = step(g, state, rng);
      const Matrix lam = lambda_matrix(state, diffusion_matrix(g, pre, rec.edge));
      for (double s : row_sums(lam)) worst_row = std::max(worst_row, std::abs(s - 1.0));
      for (double v : lam.data()) most_negative = std::min(most_negative, v);
      product = lam * product;
    }
    worst_excess = std::max(worst_excess, operator_norm(product) - std::sqrt(static_cast<double>(n)));
  }
  std::ostringstream d;
  d << n_windows << " windows, max norm excess over sqrt|V| " << worst_excess << ", max row-sum error " << worst_row
    << ", min entry " << most_negative;
  return {"lambda_product_norm", worst_excess <= 1e-9 && worst_row <= 1e-14 && most_negative >= 0.0, d.str()};
}

CheckResult row_norm_check(bool quick, std::uint64_t seed) {
  const int n_cases = quick ? 50 : 200;
  Rng rng(split_seed(seed, 4));
  int violations = 0;
  for (int c = 0; c < n_cases; ++c) {
    const std::size_t n = 1 + rng.below(8);
    const RowNormBounds b = row_norm_bounds(random_matrix(n, n, rng));
    const double slack = 1e-9 * b.op_norm;
    if (b.max_row_norm > b.op_norm + slack || b.op_norm > std::sqrt(static_cast<double>(n)) * b.max_row_norm + slack) {
      ++violations;
    }
  }
  std::ostringstream d;
  d << n_cases << " matrices, " << violations << " violations";
  return {"row_norm_sandwich", violations == 0, d.str()};
}

CheckResult spectrum_check() {
  const InfluenceSpectrum s = eigenbasis(path_graph(5));
  const double expected = (13.0 - std::sqrt(73.0)) / 24.0;
  std::ostringstream d;
  d << "I5 gap " << s.gap << " vs " << expected;
  return {"spectral_gap_I5", std::abs(s.gap - expected) < 1e-9, d.str()};
}

CheckResult polya_check(bool quick, std::uint64_t seed) {
  const std::size_t trials = quick ? 400 : 2000;
  const std::uint64_t steps = quick ? 500 : 5000;
  try {
    const PolyaReport r = polya_equivalence(1.0, 2.0, steps, trials, seed);
    std::ostringstream d;
    d << trials << " coupled runs identical, KS " << r.ks_statistic;
    // 0.05 is calibrated for 2000 trials; scale the quick run to the same
    // significance.
    const double limit = r.ks_threshold * std::sqrt(2000.0 / static_cast<double>(trials));
    return {"polya_coupling", r.coupled_identical && r.ks_statistic < limit, d.str()};
  } catch (const std::exception& e) {
    return {"polya_coupling", false, e.what()};
  }
}

CheckResult hoeffding_check_result(bool quick, std::uint64_t seed) {
  const std::uint64_t t = quick ? 1000 : 10000;
  const std::size_t trials = quick ? 200 : 2000;
  const HoeffdingReport r = hoeffding_check(path_graph(5), t, trials, seed);
  double worst = 0.0;
  for (const auto& c : r.cells) worst = std::max(worst, c.frequency - c.bound);
  std::ostringstream d;
  d << trials << " trials at t=" << t << ", max frequency excess over bound " << worst;
  return {"hoeffding_concentration", r.passed, d.str()};
}

}  // namespace

std::vector<CheckResult> run_verification(bool quick, std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto guarded = [&out](const char* name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  guarded("spectral_gap_I5", [] { return spectrum_check(); });
  guarded("she_residual", [&] { return she_check(quick, seed); });
  guarded("hadamard_algebra", [&] { return hadamard_check(quick, seed); });
  guarded("gautschi_sandwich", [] { return gautschi_check(); });
  guarded("lambda_product_norm", [&] { return lambda_product_check(quick, seed); });
  guarded("row_norm_sandwich", [&] { return row_norm_check(quick, seed); });
  guarded("polya_coupling", [&] { return polya_check(quick, seed); });
  guarded("hoeffding_concentration", [&] { return hoeffding_check_result(quick, seed); });
  return out;
}

}  // namespace urn
