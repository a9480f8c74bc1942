#include "urn/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <string>
#include <thread>

#include "urn/error.hpp"
#include "urn/spectral.hpp"

namespace urn {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct TrajectorySamples {
  Vector z_sq;
  Vector a;
  Vector s;
  Vector m_increment;
};

TrajectorySamples simulate_one(const EnsembleConfig& config, const InfluenceSpectrum& spectrum,
                               std::span<const std::uint64_t> times, std::uint64_t seed) {
  const Graph& graph = config.graph;
  const std::size_t n_samples = times.size();
  TrajectorySamples out{Vector(n_samples), Vector(n_samples), Vector(n_samples), Vector(n_samples)};

  UrnState state = init_state(graph, config.u0, config.g0);
  UrnState pre = state;
  ConsensusTracker tracker(graph, spectrum, state);
  Rng rng(seed);

  std::size_t next = 0;
  auto capture = [&] {
    while (next < n_samples && times[next] == state.t) {
      const Vector x = state.opinions();
      const double a = consensus_coordinate(spectrum.p, x);
      double z_sq = 0.0;
      for (double xi : x) z_sq += (xi - a) * (xi - a);
      out.z_sq[next] = z_sq;
      out.a[next] = a;
      out.s[next] = tracker.s();
      out.m_increment[next] = state.t == 0 ? 0.0 : tracker.last_m_increment();
      ++next;
    }
  };
  capture();
  while (state.t < config.n_steps) {
    pre.t = state.t;
    std::copy(state.u.begin(), state.u.end(), pre.u.begin());
    std::copy(state.g.begin(), state.g.end(), pre.g.begin());
    const StepRecord rec = step(graph, state, rng);
    tracker.observe(pre, rec, state);
    capture();
  }
  return out;
}

}  // namespace

double PowerLawFit::operator()(double t) const { return amplitude * std::pow(t, exponent); }

std::vector<std::uint64_t> default_sample_times(std::uint64_t n_steps, int per_decade) {
  if (per_decade < 1) throw Error(Errc::InvalidConfig, "sample density must be at least 1 per decade");
  std::set<std::uint64_t> times{0};
  if (n_steps > 0) {
    const double top = std::log10(static_cast<double>(n_steps));
    for (int k = 0; static_cast<double>(k) / per_decade <= top + 1e-12; ++k) {
      const auto t = static_cast<std::uint64_t>(std::llround(std::pow(10.0, static_cast<double>(k) / per_decade)));
      if (t >= 1 && t <= n_steps) times.insert(t);
    }
    times.insert(n_steps);
  }
  return {times.begin(), times.end()};
}

std::size_t resolve_threads(std::size_t hint, std::size_t work_items) {
  std::size_t n = hint;
  if (n == 0) {
    if (const char* env = std::getenv("OPINION_URN_THREADS"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(env, &end, 10);
      if (end != nullptr && *end == '\0' && parsed > 0) n = static_cast<std::size_t>(parsed);
    }
  }
  if (n == 0) n = std::max(1U, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, work_items));
}

EnsembleStats run_ensemble(const EnsembleConfig& config) {
  if (config.n_trajectories < 1) throw Error(Errc::InvalidConfig, "n_trajectories must be at least 1");
  const std::vector<std::uint64_t> times =
      config.sample_times.empty() ? default_sample_times(config.n_steps) : config.sample_times;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] > config.n_steps) {
      throw Error(Errc::InvalidConfig, "sample time " + std::to_string(times[k]) + " exceeds n_steps");
    }
    if (k > 0 && times[k] <= times[k - 1]) {
      throw Error(Errc::InvalidConfig, "sample times must be strictly increasing at index " + std::to_string(k));
    }
  }
  // Validate the initial condition once, before any worker starts.
  (void)init_state(config.graph, config.u0, config.g0);

  const InfluenceSpectrum spectrum = eigenbasis(config.graph);
  const std::size_t n_traj = config.n_trajectories;
  std::vector<TrajectorySamples> results(n_traj);

  const std::size_t n_workers = resolve_threads(config.threads, n_traj);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < n_traj; i = cursor.fetch_add(1)) {
      results[i] = simulate_one(config, spectrum, times, split_seed(config.base_seed, i));
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  const std::size_t n_samples = times.size();
  EnsembleStats stats;
  stats.sample_times = times;
  stats.n_trajectories = n_traj;
  stats.mean_z_sq.resize(n_samples);
  stats.mean_a.resize(n_samples);
  stats.var_a.resize(n_samples);
  stats.mean_m_increment.resize(n_samples);
  stats.se_m_increment.resize(n_samples);
  stats.a_paths = Matrix(n_traj, n_samples);
  stats.s_paths = Matrix(n_traj, n_samples);

  const double count = static_cast<double>(n_traj);
  for (std::size_t k = 0; k < n_samples; ++k) {
    CompensatedSum z_sum, a_sum, m_sum;
    for (std::size_t i = 0; i < n_traj; ++i) {
      z_sum.add(results[i].z_sq[k]);
      a_sum.add(results[i].a[k]);
      m_sum.add(results[i].m_increment[k]);
      stats.a_paths(i, k) = results[i].a[k];
      stats.s_paths(i, k) = results[i].s[k];
    }
    const double mean_a = a_sum.value() / count;
    const double mean_m = m_sum.value() / count;
    CompensatedSum a_dev, m_dev;
    for (std::size_t i = 0; i < n_traj; ++i) {
      a_dev.add((results[i].a[k] - mean_a) * (results[i].a[k] - mean_a));
      m_dev.add((results[i].m_increment[k] - mean_m) * (results[i].m_increment[k] - mean_m));
    }
    stats.mean_z_sq[k] = z_sum.value() / count;
    stats.mean_a[k] = mean_a;
    stats.mean_m_increment[k] = mean_m;
    if (n_traj > 1) {
      stats.var_a[k] = a_dev.value() / (count - 1.0);
      stats.se_m_increment[k] = std::sqrt(m_dev.value() / (count - 1.0) / count);
    }
  }
  return stats;
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> times, std::span<const double> values, double t_min,
                          double t_max) {
  if (times.size() != values.size()) {
    throw Error(Errc::DimensionMismatch, "power-law fit: " + std::to_string(times.size()) + " times, " +
                                             std::to_string(values.size()) + " values");
  }
  Vector lx, ly;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto t = static_cast<double>(times[k]);
    if (times[k] == 0 || t < t_min || t > t_max) continue;
    if (!(values[k] > 0.0)) {
      throw Error(Errc::NonpositiveValues, "value " + std::to_string(values[k]) + " at t=" + std::to_string(times[k]));
    }
    lx.push_back(std::log(t));
    ly.push_back(std::log(values[k]));
  }
  if (lx.size() < 5) {
    throw Error(Errc::InsufficientData,
                "power-law fit needs 5 positive points in the window, found " + std::to_string(lx.size()));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
    syy += (ly[k] - my) * (ly[k] - my);
  }
  if (sxx == 0.0) throw Error(Errc::InsufficientData, "power-law fit needs at least two distinct times");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double r = ly[k] - (intercept + slope * lx[k]);
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return {slope, std::exp(intercept), r2, t_min, t_max};
}

PowerLawFit fit_power_law(const EnsembleStats& stats, double t_min, double t_max) {
  return fit_power_law(stats.sample_times, stats.mean_z_sq, t_min, t_max);
}

double hoeffding_bound(double a, double t) { return 2.0 * std::exp(-2.0 * a * a / t); }

HoeffdingReport hoeffding_check(const Graph& graph, std::uint64_t n_steps, std::size_t n_trials, std::uint64_t seed,
                                std::vector<double> thresholds) {
  if (n_steps == 0 || n_trials == 0) throw Error(Errc::InvalidConfig, "Hoeffding check needs n_steps, n_trials >= 1");
  const double t = static_cast<double>(n_steps);
  if (thresholds.empty()) thresholds = {std::sqrt(t), 2.0 * std::sqrt(t)};
  const std::size_t n = graph.n_vertices();
  const double n_edges = static_cast<double>(graph.n_edges());

  const Vector g0(n, 1.0);
  const Vector u0(n, 0.5);
  std::vector<std::vector<std::size_t>> exceed(n, std::vector<std::size_t>(thresholds.size(), 0));
  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    UrnState state = init_state(graph, u0, g0);
    Rng rng(split_seed(seed, trial));
    while (state.t < n_steps) step(graph, state, rng);
    for (Vertex v = 0; v < n; ++v) {
      const double deviation = std::abs(state.g[v] - g0[v] - t * static_cast<double>(graph.degree(v)) / n_edges);
      for (std::size_t k = 0; k < thresholds.size(); ++k) {
        if (deviation > thresholds[k]) ++exceed[v][k];
      }
    }
  }

  HoeffdingReport report{n_steps, n_trials, {}, true};
  const double trials = static_cast<double>(n_trials);
  for (Vertex v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      const double bound = hoeffding_bound(thresholds[k], t);
      const double capped = std::min(bound, 1.0);
      const double se = std::sqrt(capped * (1.0 - capped) / trials);
      const double freq = static_cast<double>(exceed[v][k]) / trials;
      const bool ok = freq <= bound + 3.0 * se;
      report.cells.push_back({v, thresholds[k], freq, bound, se, ok});
      report.passed = report.passed && ok;
    }
  }
  return report;
}

void ReferenceUrn::draw(Rng& rng) {
  (void)rng.below(1);  // the K2 model spends one word choosing its only edge
  const bool white = rng.uniform() < u_ / g_;
  g_ += 1.0;
  if (white) u_ += 1.0;
}

PolyaReport polya_equivalence(double u0, double g0, std::uint64_t n_steps, std::size_t n_trials, std::uint64_t seed) {
  if (!(g0 > 0.0)) throw Error(Errc::NonpositiveTotalWeight, "g0 = " + std::to_string(g0));
  if (!(u0 >= 0.0 && u0 <= g0)) throw Error(Errc::OpinionOutOfRange, "u0 = " + std::to_string(u0));
  if (n_trials == 0) throw Error(Errc::InvalidConfig, "Polya equivalence needs n_trials >= 1");

  const Graph k2 = complete_graph(2);
  const Vector u0v{u0, u0};
  const Vector g0v{g0, g0};

  auto run_model = [&](std::uint64_t s, ReferenceUrn* coupled) {
    UrnState state = init_state(k2, u0v, g0v);
    Rng rng(s);
    Rng twin(s);
    while (state.t < n_steps) {
      step(k2, state, rng);
      if (coupled != nullptr) {
        coupled->draw(twin);
        const double x = state.opinion(0);
        if (x != state.opinion(1) || x != coupled->fraction()) {
          throw Error(Errc::TrajectoryMismatch, "seed " + std::to_string(s) + " diverged at t=" +
                                                    std::to_string(state.t));
        }
      }
    }
    return state.opinion(0);
  };

  const std::uint64_t reference_base = mix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  std::vector<double> model_terminal, reference_terminal;
  model_terminal.reserve(n_trials);
  reference_terminal.reserve(n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    ReferenceUrn coupled(u0, g0);
    model_terminal.push_back(run_model(split_seed(seed, i), &coupled));

    ReferenceUrn independent(u0, g0);
    Rng rng(split_seed(reference_base, i));
    for (std::uint64_t t = 0; t < n_steps; ++t) independent.draw(rng);
    reference_terminal.push_back(independent.fraction());
  }

  constexpr double kThreshold = 0.05;
  const double ks = ks_statistic(std::move(model_terminal), std::move(reference_terminal));
  return {n_trials, n_steps, true, ks, kThreshold, ks < kThreshold};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::InsufficientData, "KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      v = a[i];
    } else {
      v = b[j];
    }
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return worst;
}

namespace {

Vector average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  Vector ranks(v.size());
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi + 1 < order.size() && v[order[hi + 1]] == v[order[lo]]) ++hi;
    const double rank = 0.5 * static_cast<double>(lo + hi) + 1.0;
    for (std::size_t k = lo; k <= hi; ++k) ranks[order[k]] = rank;
    lo = hi + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::size_t nearest_sample(std::span<const std::uint64_t> times, double target) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs(static_cast<double>(times[k]) - target) < std::abs(static_cast<double>(times[best]) - target)) {
      best = k;
    }
  }
  return best;
}

double variance_of_difference(const Matrix& paths, std::size_t late, std::size_t early) {
  const std::size_t n = paths.rows();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t r = 0; r < n; ++r) mean += paths(r, late) - paths(r, early);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double d = paths(r, late) - paths(r, early) - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(n - 1);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::DimensionMismatch, "Spearman correlation of unequal lengths");
  if (x.size() < 2) throw Error(Errc::InsufficientData, "Spearman correlation needs two points");
  const Vector rx = average_ranks(x);
  const Vector ry = average_ranks(y);
  return pearson(rx, ry);
}

ConvergenceReport convergence_report(const EnsembleStats& stats, double decay_ratio_threshold) {
  const auto& times = stats.sample_times;
  if (times.size() < 3) {
    throw Error(Errc::InsufficientData, "convergence report needs 3 sample times, got " + std::to_string(times.size()));
  }
  const std::size_t late = times.size() - 1;
  const double horizon = static_cast<double>(times[late]);
  std::size_t early = 0;
  while (early < late && static_cast<double>(times[early]) < std::max(1.0, horizon / 100.0)) ++early;

  ConvergenceReport r{};
  r.t_early = times[early];
  r.t_late = times[late];
  r.z_early = stats.mean_z_sq[early];
  r.z_late = stats.mean_z_sq[late];
  r.decay_ratio_threshold = decay_ratio_threshold;
  r.decay_ok = r.z_late <= decay_ratio_threshold * r.z_early;

  const std::size_t half = nearest_sample(times, horizon / 2.0);
  const std::size_t quarter = nearest_sample(times, horizon / 4.0);
  r.t_half = times[half];
  r.t_quarter = times[quarter];
  r.var_recent = variance_of_difference(stats.a_paths, late, half);
  r.var_prior = variance_of_difference(stats.a_paths, half, quarter);
  r.cauchy_ok = r.var_recent <= r.var_prior;
  r.passed = r.decay_ok && r.cauchy_ok;
  return r;
}

}  // namespace urn
