#pragma once

#include <cstdint>
#include <vector>

#include "tanglekit/qstate.hpp"

namespace tanglekit {

struct EnsembleMember {
  Real probability;
  PureState state;
};

/// {p_i, |phi_i>} with p_i > 0 summing to tr(rho).
struct EnsembleDecomposition {
  std::vector<EnsembleMember> members;

  MatrixXc reconstruct() const;
  /// sum_i p_i tau_{1|2|3}(phi_i)
  Real average_three_tangle() const;
};

/// Eigenvectors (columns) and eigenvalues of a density matrix above a rank
/// threshold, eigenvalues descending.
struct EigenEnsemble {
  RVector<Real> weights;
  MatrixXc vectors;
  int rank() const { return static_cast<int>(weights.size()); }
};

inline constexpr Real kRankTolerance = 1e-10;
inline constexpr int kMaxEnsembleSize = 8;

EigenEnsemble eigen_ensemble(const DensityMatrix& rho, Real rank_tolerance = kRankTolerance);

/// Subnormalized ensemble vectors phi~_i = sum_k mixing(i, k) sqrt(mu_k) e_k,
/// as the columns of the returned matrix.
MatrixXc steer(const EigenEnsemble& eigen, const MatrixXc& mixing);

/// Ensemble decomposition realized by an m x r isometry on the eigen-ensemble.
/// Throws std::invalid_argument if r differs from rank(rho), m < r, or the
/// columns of `mixing` are not orthonormal within 1e-8.
EnsembleDecomposition decompose(const DensityMatrix& rho, const MatrixXc& mixing);

/// sum_i tau(phi~_i) / <phi~_i|phi~_i> over the columns of an 8 x m matrix,
/// which equals sum_i p_i tau(phi_i) for the normalized members.
Real ensemble_three_tangle(const MatrixXc& subnormalized);

struct ConvexRoofConfig {
  int max_ensemble_size = 0;  // 0: rank + 2, capped at 8
  int restarts = 32;
  int max_iterations = 2000;  // pattern-search sweeps per restart and smoothing stage
  Real tolerance = 1e-7;
  std::uint64_t seed = 0;
};

struct ConvexRoofResult {
  Real value = 0;  // best-found upper bound on the convex roof
  EnsembleDecomposition witness;
  int ensemble_size = 0;
  int restarts_used = 0;
  long iterations = 0;
  bool converged = false;       // the winning restart met the stopping rule
  Real eigen_ensemble_value = 0;  // average over the eigen-ensemble
};

/// Best-found value of min sum_i p_i tau_{1|2|3}(phi_i) over decompositions
/// of a three-qubit density matrix.
///
/// For each ensemble size m from rank(rho) to max_ensemble_size, runs
/// `restarts` independent pattern searches over m x m unitaries acting on
/// the eigen-ensemble. Moves are 2x2 unitaries mixing a pair of members.
/// Restart 0 starts from the eigen-ensemble itself, so the result never
/// exceeds the eigen-ensemble average. Restart seeds derive from
/// (seed, m, restart index) only; enlarging the search cannot raise the value.
///
/// The result is an upper bound on the convex roof, not a certified value.
ConvexRoofResult three_tangle_mixed(const DensityMatrix& rho, const ConvexRoofConfig& config = {});

}  // namespace tanglekit
