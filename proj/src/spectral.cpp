#include "urn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "urn/error.hpp"

namespace urn {

Matrix influence_matrix(const Graph& graph) {
  const std::size_t n = graph.n_vertices();
  Matrix L(n, n);
  for (const Edge& e : graph.edges()) {
    const double di = static_cast<double>(graph.degree(e.lo));
    const double dj = static_cast<double>(graph.degree(e.hi));
    L(e.lo, e.hi) = (dj / di) / (di + dj);
    L(e.hi, e.lo) = (di / dj) / (di + dj);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) off += L(i, j);
    }
    L(i, i) = -off;
  }
  return L;
}

Matrix symmetrize(const Matrix& L, std::span<const std::size_t> degrees) {
  if (!L.square() || L.rows() != degrees.size()) {
    throw Error(Errc::DimensionMismatch, "symmetrize: " + std::to_string(L.rows()) + "x" + std::to_string(L.cols()) +
                                             " matrix with " + std::to_string(degrees.size()) + " degrees");
  }
  const std::size_t n = L.rows();
  Matrix S(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (degrees[i] == 0) throw Error(Errc::DomainError, "vertex " + std::to_string(i) + " has degree 0");
    for (std::size_t j = 0; j < n; ++j) {
      S(i, j) = static_cast<double>(degrees[i]) * L(i, j) / static_cast<double>(degrees[j]);
    }
  }
  return S;
}

InfluenceSpectrum eigenbasis(const Graph& graph) {
  const std::size_t n = graph.n_vertices();
  const auto& deg = graph.degrees();

  InfluenceSpectrum out;
  out.L = influence_matrix(graph);
  const EigenDecomposition eig = jacobi_eigs(symmetrize(out.L, deg));

  // The symmetrization is negative semidefinite, so 0 is the top eigenvalue.
  constexpr double kZeroTol = 1e-9;
  if (std::abs(eig.values[0]) > kZeroTol) {
    throw Error(Errc::ZeroEigenvalueNotSimple, "largest eigenvalue " + std::to_string(eig.values[0]) + " is not zero");
  }
  if (n > 1 && std::abs(eig.values[1]) <= kZeroTol) {
    throw Error(Errc::ZeroEigenvalueNotSimple, "second eigenvalue " + std::to_string(eig.values[1]) + " is also zero");
  }

  // S v = mu v  =>  L (E^{-1} v) = mu (E^{-1} v). With P = E^{-1} V C for a
  // diagonal rescaling C, P^{-1} = C^{-1} V^T E since V is orthogonal.
  Vector scale(n);
  Vector consensus_col(n);
  for (std::size_t r = 0; r < n; ++r) consensus_col[r] = eig.vectors(r, 0) / static_cast<double>(deg[r]);
  scale[0] = static_cast<double>(n) / std::accumulate(consensus_col.begin(), consensus_col.end(), 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double v = eig.vectors(r, k) / static_cast<double>(deg[r]);
      sq += v * v;
    }
    scale[k] = 1.0 / std::sqrt(sq);
  }

  out.P = Matrix(n, n);
  out.P_inv = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    out.P(r, 0) = 1.0;
    for (std::size_t k = 1; k < n; ++k) out.P(r, k) = eig.vectors(r, k) * scale[k] / static_cast<double>(deg[r]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < n; ++c) {
      out.P_inv(k, c) = eig.vectors(c, k) * static_cast<double>(deg[c]) / scale[k];
    }
  }

  out.p = Vector(out.P_inv.row(0).begin(), out.P_inv.row(0).end());
  const double total = std::accumulate(out.p.begin(), out.p.end(), 0.0);
  for (double& v : out.p) v /= total;
  std::copy(out.p.begin(), out.p.end(), out.P_inv.row(0).begin());

  out.eigenvalues = eig.values;
  out.eigenvalues[0] = 0.0;
  out.gap = spectral_gap(out);
  return out;
}

double spectral_gap(const InfluenceSpectrum& spectrum) {
  double largest = 0.0;
  for (std::size_t k = 1; k < spectrum.eigenvalues.size(); ++k) {
    largest = std::max(largest, std::abs(1.0 + spectrum.eigenvalues[k]));
  }
  // Treat roundoff-level moduli as an exactly vanishing nonunit spectrum.
  constexpr double kVanishing = 1e-12;
  if (largest <= kVanishing) return 0.5;
  return 1.0 - largest;
}

Matrix a_k_matrix(const Matrix& L, std::uint64_t k) {
  if (k == 0) throw Error(Errc::DomainError, "A_k needs k >= 1");
  return Matrix::identity(L.rows()) + L * (1.0 / static_cast<double>(k));
}

Matrix expected_damped_diffusion(const Graph& graph, const UrnState& state) {
  const std::size_t n = graph.n_vertices();
  const double n_edges = static_cast<double>(graph.n_edges());
  Matrix out(n, n);
  for (const Edge& e : graph.edges()) {
    const double gi = state.g[e.lo];
    const double gj = state.g[e.hi];
    out(e.lo, e.hi) = gj / (n_edges * (gi + 1.0) * (gi + gj));
    out(e.hi, e.lo) = gi / (n_edges * (gj + 1.0) * (gi + gj));
    out(e.lo, e.lo) -= out(e.lo, e.hi);
    out(e.hi, e.hi) -= out(e.hi, e.lo);
  }
  return out;
}

Matrix delta_matrix(const Graph& graph, const Matrix& L, const UrnState& state, std::uint64_t j) {
  return expected_damped_diffusion(graph, state) - L * (1.0 / static_cast<double>(j + 1));
}

double consensus_coordinate(std::span<const double> p, std::span<const double> x) { return dot(p, x); }

Vector disagreement(std::span<const double> x, double a) {
  Vector z(x.begin(), x.end());
  for (double& v : z) v -= a;
  return z;
}

ConsensusTracker::ConsensusTracker(const Graph& graph, const InfluenceSpectrum& spectrum, const UrnState& initial)
    : graph_(graph), spectrum_(spectrum), a0_(consensus_coordinate(spectrum.p, initial.opinions())) {}

void ConsensusTracker::observe(const UrnState& pre, const StepRecord& rec, const UrnState& post) {
  const Vector& p = spectrum_.p;
  const Matrix& L = spectrum_.L;
  const double n_edges = static_cast<double>(graph_.n_edges());
  auto x = [&pre](Vertex v) { return pre.u[v] / pre.g[v]; };

  // Realized gamma o L_j applied to x_j, plus the noise term; only the two
  // endpoints of the chosen edge move.
  const Edge& chosen = graph_.edge(rec.edge);
  const Vertex i = chosen.lo;
  const Vertex k = chosen.hi;
  const double pair_total = pre.g[i] + pre.g[k];
  const double realized = p[i] * (pre.g[k] / pair_total) * (x(k) - x(i)) / post.g[i] +
                          p[k] * (pre.g[i] / pair_total) * (x(i) - x(k)) / post.g[k];
  const double noise = p[i] * rec.fluctuation / post.g[i] + p[k] * rec.fluctuation / post.g[k];

  // Conditional expectation and the influence matrix, both supported on edges.
  double expected = 0.0;
  double influence = 0.0;
  for (const Edge& e : graph_.edges()) {
    const double ga = pre.g[e.lo];
    const double gb = pre.g[e.hi];
    const double diff = x(e.hi) - x(e.lo);
    expected += p[e.lo] * gb / (n_edges * (ga + 1.0) * (ga + gb)) * diff -
                p[e.hi] * ga / (n_edges * (gb + 1.0) * (ga + gb)) * diff;
    influence += p[e.lo] * L(e.lo, e.hi) * diff - p[e.hi] * L(e.hi, e.lo) * diff;
  }
  influence /= static_cast<double>(pre.t + 1);

  last_m_increment_ = realized - expected + noise;
  last_s_increment_ = expected - influence;
  m_ += last_m_increment_;
  s_ += last_s_increment_;
}

ConsensusDecomposition decompose_consensus(const TrajectoryRecord& trajectory, const InfluenceSpectrum& spectrum,
                                           bool with_delta_norms) {
  if (!trajectory.steps) throw Error(Errc::MissingStepRecords, "trajectory was recorded without step records");
  const Graph& graph = trajectory.graph;
  const auto& steps = *trajectory.steps;

  UrnState state = init_state(graph, trajectory.u0, trajectory.g0);
  ConsensusTracker tracker(graph, spectrum, state);

  ConsensusDecomposition out;
  out.times.reserve(steps.size() + 1);
  auto record = [&] {
    out.times.push_back(state.t);
    out.a.push_back(consensus_coordinate(spectrum.p, state.opinions()));
    out.m.push_back(tracker.m());
    out.s.push_back(tracker.s());
  };
  record();
  for (const StepRecord& s : steps) {
    if (with_delta_norms) out.delta_norms.push_back(operator_norm(delta_matrix(graph, spectrum.L, state, state.t)));
    const UrnState pre = state;
    const StepRecord replayed = apply_step(graph, state, s.edge, s.outcome);
    tracker.observe(pre, replayed, state);
    record();
  }
  return out;
}

GautschiBounds gautschi_bounds(std::uint64_t j, std::uint64_t t, double lam) {
  if (j < 1 || t < j) {
    throw Error(Errc::DomainError, "need 1 <= j <= t, got j=" + std::to_string(j) + " t=" + std::to_string(t));
  }
  if (!(lam > 0.0 && lam < 1.0)) throw Error(Errc::DomainError, "need 0 < lam < 1, got " + std::to_string(lam));
  double product = 1.0;
  for (std::uint64_t k = j; k <= t; ++k) product *= 1.0 - lam / static_cast<double>(k);
  const double lower = std::pow(static_cast<double>(j - 1) / static_cast<double>(t + 1), lam);
  const double upper = std::pow(static_cast<double>(j) / static_cast<double>(t), lam);
  return {lower, product, upper};
}

}  // namespace urn
