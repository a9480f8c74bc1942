#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "urn/dynamics.hpp"
#include "urn/graph.hpp"
#include "urn/linalg.hpp"

namespace urn {

/// Influence matrix L of a graph with its diagonalization L = P D P^{-1}.
///
/// Column 0 of P is exactly the all-ones vector and eigenvalues[0] is exactly
/// 0. Row 0 of P^{-1} is the consensus vector p (p L = 0, p . 1 = 1). The
/// remaining eigenvalues are in descending order, so eigenvalues[1] is the
/// one closest to zero.
struct InfluenceSpectrum {
  Matrix L;
  Matrix P;
  Matrix P_inv;
  Vector eigenvalues;
  double gap = 0.0;
  Vector p;

  Matrix D() const { return Matrix::diagonal(eigenvalues); }
};

/// a_t, m_t, s_t along one trajectory, for t = times[k].
struct ConsensusDecomposition {
  std::vector<std::uint64_t> times;
  Vector a;
  Vector m;
  Vector s;
  Vector delta_norms;  // ||Delta_j|| for j = 0 .. T-1
};

/// L^{ij} = (d_j / d_i) / (d_i + d_j) for i ~ j; rows sum to zero.
Matrix influence_matrix(const Graph& graph);

/// E L E^{-1} with E = diag(degrees). Symmetric for an influence matrix.
Matrix symmetrize(const Matrix& L, std::span<const std::size_t> degrees);

/// Diagonalizes L through its symmetrization. Throws ZeroEigenvalueNotSimple if
/// the zero eigenvalue is repeated (impossible on a connected graph).
InfluenceSpectrum eigenbasis(const Graph& graph);

/// 1 - max_{i>1} |1 + mu_i| over the nonzero eigenvalues mu_i of L, or 1/2 when
/// that maximum vanishes.
double spectral_gap(const InfluenceSpectrum& spectrum);

/// A_k = I + L / k.
Matrix a_k_matrix(const Matrix& L, std::uint64_t k);

/// E_t[gamma_{t+1} o L_t]: for i ~ j, g_j / (|E| (g_i + 1) (g_i + g_j)).
Matrix expected_damped_diffusion(const Graph& graph, const UrnState& state);

/// Delta_j = E_j[gamma_{j+1} o L_j] - L / (j + 1), for the state at time j.
Matrix delta_matrix(const Graph& graph, const Matrix& L, const UrnState& state, std::uint64_t j);

/// a = p . x.
double consensus_coordinate(std::span<const double> p, std::span<const double> x);

/// z = x - a 1.
Vector disagreement(std::span<const double> x, double a);

/// Streams the split a_t = a_0 + m_t + s_t one step at a time.
///
/// Per step j -> j+1 the martingale part gains
///   p . (gamma o L_j - E_j[gamma o L_j]) x_j + p . (gamma o w_{j+1})
/// and the small part gains p . Delta_j x_j. Everything is applied sparsely;
/// the cost per step is O(|V| + |E|).
class ConsensusTracker {
 public:
  ConsensusTracker(const Graph& graph, const InfluenceSpectrum& spectrum, const UrnState& initial);

  /// Feed one executed step. `pre` is the state before it, `post` after.
  void observe(const UrnState& pre, const StepRecord& rec, const UrnState& post);

  double a0() const noexcept { return a0_; }
  double m() const noexcept { return m_; }
  double s() const noexcept { return s_; }
  double last_m_increment() const noexcept { return last_m_increment_; }
  double last_s_increment() const noexcept { return last_s_increment_; }

 private:
  const Graph& graph_;
  const InfluenceSpectrum& spectrum_;
  double a0_ = 0.0;
  double m_ = 0.0;
  double s_ = 0.0;
  double last_m_increment_ = 0.0;
  double last_s_increment_ = 0.0;
};

/// Reconstructs a_t, m_t, s_t at every step of a trajectory recorded with
/// step records. Throws MissingStepRecords otherwise.
ConsensusDecomposition decompose_consensus(const TrajectoryRecord& trajectory, const InfluenceSpectrum& spectrum,
                                           bool with_delta_norms = true);

struct GautschiBounds {
  double lower;
  double product;
  double upper;
};

/// ((j-1)/(t+1))^lam <= prod_{k=j}^t (1 - lam/k) <= (j/t)^lam.
/// Throws DomainError unless 1 <= j <= t and 0 < lam < 1.
GautschiBounds gautschi_bounds(std::uint64_t j, std::uint64_t t, double lam);

}  // namespace urn
