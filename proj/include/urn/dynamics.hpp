#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "urn/graph.hpp"
#include "urn/linalg.hpp"
#include "urn/rng.hpp"

namespace urn {

/// Urn weights of every vertex after t conversations.
///
/// u is the weight on state U, g the total weight; the opinion of vertex i is
/// x_i = u_i / g_i. Invariant: g_i > 0 and 0 <= u_i <= g_i.
struct UrnState {
  std::uint64_t t = 0;
  Vector u;
  Vector g;

  std::size_t size() const noexcept { return g.size(); }
  double opinion(Vertex i) const { return u[i] / g[i]; }
  Vector opinions() const;
  /// gamma_i = 1 / g_i.
  Vector damping() const;
};

/// One transition t-1 -> t.
struct StepRecord {
  std::uint64_t t = 0;
  EdgeIndex edge = 0;
  double p = 0.0;        // pooled opinion before the increment
  int outcome = 0;       // 1 when the pair agreed on U
  double fluctuation = 0.0;  // outcome - p
};

struct Snapshot {
  std::uint64_t t;
  Vector x;
  Vector g;
};

struct TrajectoryRecord {
  Graph graph;
  Vector u0;
  Vector g0;
  std::uint64_t seed = 0;
  std::uint64_t n_steps = 0;
  std::vector<Snapshot> snapshots;
  std::optional<std::vector<StepRecord>> steps;
};

/// Throws NonpositiveTotalWeight, OpinionOutOfRange, DimensionMismatch, or
/// TooSmall for a graph with no edges. u0 = 0 is allowed.
UrnState init_state(const Graph& graph, std::span<const double> u0, std::span<const double> g0);

/// (u_i + u_j) / (g_i + g_j) for edge (i, j).
double pooled_opinion(const Graph& graph, const UrnState& state, EdgeIndex edge);

/// Applies a conversation with a known outcome on `edge`. The pooled opinion
/// is taken from the weights before the increment.
StepRecord apply_step(const Graph& graph, UrnState& state, EdgeIndex edge, int outcome);

/// Draws an edge (one engine word) then a uniform compared against p (one
/// engine word) and applies the step.
StepRecord step(const Graph& graph, UrnState& state, Rng& rng);

/// Runs n_steps from (u0, g0) with Rng(seed). Snapshots are taken at each of
/// `sample_times`, which must be strictly increasing and lie in [0, n_steps].
TrajectoryRecord run_trajectory(const Graph& graph, std::span<const double> u0, std::span<const double> g0,
                                std::uint64_t n_steps, std::uint64_t seed,
                                std::span<const std::uint64_t> sample_times, bool keep_steps = false);

/// Replays recorded steps to reconstruct the state at time `t`.
UrnState replay_state(const TrajectoryRecord& record, std::uint64_t t);

/// Realized diffusion matrix L_t for `edge` chosen at step t+1, from the
/// pre-step state. Four nonzero entries, rows summing to zero.
Matrix diffusion_matrix(const Graph& graph, const UrnState& pre, EdgeIndex edge);

/// I + gamma_{t+1} o_L L_t, with `post` the state after the step.
Matrix lambda_matrix(const UrnState& post, const Matrix& diffusion);

/// Norm of (x_{t+1} - x_t) - gamma_{t+1} o (L_t x_t + W_{t+1}) for one executed
/// step. Throws MismatchedStates unless post.t == pre.t + 1 == rec.t.
double she_residual(const Graph& graph, const UrnState& pre, const StepRecord& rec, const UrnState& post);

}  // namespace urn
