#include "urn/dynamics.hpp"

#include <cmath>
#include <string>

#include "urn/error.hpp"

namespace urn {

Vector UrnState::opinions() const {
  Vector x(size());
  for (std::size_t i = 0; i < size(); ++i) x[i] = u[i] / g[i];
  return x;
}

Vector UrnState::damping() const {
  Vector gamma(size());
  for (std::size_t i = 0; i < size(); ++i) gamma[i] = 1.0 / g[i];
  return gamma;
}

UrnState init_state(const Graph& graph, std::span<const double> u0, std::span<const double> g0) {
  const std::size_t n = graph.n_vertices();
  if (u0.size() != n || g0.size() != n) {
    throw Error(Errc::DimensionMismatch, "initial weights must have " + std::to_string(n) + " entries, got u0=" +
                                             std::to_string(u0.size()) + " g0=" + std::to_string(g0.size()));
  }
  if (graph.n_edges() == 0) throw Error(Errc::TooSmall, "graph has no edges to converse on");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g0[i] > 0.0) || !std::isfinite(g0[i])) {
      throw Error(Errc::NonpositiveTotalWeight, "g0[" + std::to_string(i) + "] = " + std::to_string(g0[i]));
    }
    if (!(u0[i] >= 0.0 && u0[i] <= g0[i])) {
      throw Error(Errc::OpinionOutOfRange, "u0[" + std::to_string(i) + "] = " + std::to_string(u0[i]) +
                                               " outside [0, g0[" + std::to_string(i) + "] = " + std::to_string(g0[i]) + "]");
    }
  }
  return UrnState{0, Vector(u0.begin(), u0.end()), Vector(g0.begin(), g0.end())};
}

double pooled_opinion(const Graph& graph, const UrnState& state, EdgeIndex edge) {
  const Edge& e = graph.edge(edge);
  return (state.u[e.lo] + state.u[e.hi]) / (state.g[e.lo] + state.g[e.hi]);
}

StepRecord apply_step(const Graph& graph, UrnState& state, EdgeIndex edge, int outcome) {
  const Edge& e = graph.edge(edge);
  const double p = pooled_opinion(graph, state, edge);
  state.g[e.lo] += 1.0;
  state.g[e.hi] += 1.0;
  if (outcome == 1) {
    state.u[e.lo] += 1.0;
    state.u[e.hi] += 1.0;
  }
  ++state.t;
  return StepRecord{state.t, edge, p, outcome, static_cast<double>(outcome) - p};
}

StepRecord step(const Graph& graph, UrnState& state, Rng& rng) {
  const EdgeIndex edge = rng.below(graph.n_edges());
  const double draw = rng.uniform();
  const int outcome = draw < pooled_opinion(graph, state, edge) ? 1 : 0;
  return apply_step(graph, state, edge, outcome);
}

TrajectoryRecord run_trajectory(const Graph& graph, std::span<const double> u0, std::span<const double> g0,
                                std::uint64_t n_steps, std::uint64_t seed,
                                std::span<const std::uint64_t> sample_times, bool keep_steps) {
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] > n_steps) {
      throw Error(Errc::InvalidConfig, "sample time " + std::to_string(sample_times[k]) + " exceeds n_steps " +
                                           std::to_string(n_steps));
    }
    if (k > 0 && sample_times[k] <= sample_times[k - 1]) {
      throw Error(Errc::InvalidConfig, "sample times must be strictly increasing at index " + std::to_string(k));
    }
  }

  UrnState state = init_state(graph, u0, g0);
  TrajectoryRecord rec{graph, state.u, state.g, seed, n_steps, {}, std::nullopt};
  rec.snapshots.reserve(sample_times.size());
  if (keep_steps) {
    rec.steps.emplace();
    rec.steps->reserve(n_steps);
  }

  Rng rng(seed);
  std::size_t next = 0;
  auto capture = [&] {
    while (next < sample_times.size() && sample_times[next] == state.t) {
      rec.snapshots.push_back({state.t, state.opinions(), state.g});
      ++next;
    }
  };
  capture();
  while (state.t < n_steps) {
    const StepRecord s = step(graph, state, rng);
    if (keep_steps) rec.steps->push_back(s);
    capture();
  }
  return rec;
}

UrnState replay_state(const TrajectoryRecord& record, std::uint64_t t) {
  if (!record.steps) throw Error(Errc::MissingStepRecords, "trajectory was recorded without step records");
  if (t > record.steps->size()) {
    throw Error(Errc::InvalidConfig, "cannot replay to t=" + std::to_string(t) + ", only " +
                                         std::to_string(record.steps->size()) + " steps recorded");
  }
  UrnState state = init_state(record.graph, record.u0, record.g0);
  for (std::uint64_t k = 0; k < t; ++k) {
    const StepRecord& s = (*record.steps)[k];
    apply_step(record.graph, state, s.edge, s.outcome);
  }
  return state;
}

Matrix diffusion_matrix(const Graph& graph, const UrnState& pre, EdgeIndex edge) {
  const Edge& e = graph.edge(edge);
  const std::size_t i = e.lo;
  const std::size_t j = e.hi;
  const double total = pre.g[i] + pre.g[j];
  Matrix l(graph.n_vertices(), graph.n_vertices());
  l(i, j) = pre.g[j] / total;
  l(i, i) = -l(i, j);
  l(j, i) = pre.g[i] / total;
  l(j, j) = -l(j, i);
  return l;
}

Matrix lambda_matrix(const UrnState& post, const Matrix& diffusion) {
  return Matrix::identity(post.size()) + hadamard_left(post.damping(), diffusion);
}

double she_residual(const Graph& graph, const UrnState& pre, const StepRecord& rec, const UrnState& post) {
  if (post.t != pre.t + 1 || rec.t != post.t) {
    throw Error(Errc::MismatchedStates, "pre t=" + std::to_string(pre.t) + ", record t=" + std::to_string(rec.t) +
                                            ", post t=" + std::to_string(post.t));
  }
  if (pre.size() != post.size() || pre.size() != graph.n_vertices()) {
    throw Error(Errc::DimensionMismatch, "states do not match the graph");
  }
  const Vector x_pre = pre.opinions();
  const Vector x_post = post.opinions();
  const Vector drift = diffusion_matrix(graph, pre, rec.edge) * x_pre;

  Vector noise(graph.n_vertices(), 0.0);
  const Edge& e = graph.edge(rec.edge);
  noise[e.lo] += rec.fluctuation;
  noise[e.hi] += rec.fluctuation;

  double sum_sq = 0.0;
  for (std::size_t i = 0; i < graph.n_vertices(); ++i) {
    const double predicted = (drift[i] + noise[i]) / post.g[i];
    const double r = (x_post[i] - x_pre[i]) - predicted;
    sum_sq += r * r;
  }
  return std::sqrt(sum_sq);
}

}  // namespace urn
