#include "tanglekit/convexroof.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "tanglekit/hermitian_eigen.hpp"
#include "tanglekit/invariants.hpp"
#include "tanglekit/parallel.hpp"

namespace tanglekit {
namespace {

constexpr Real kNegligibleWeight = 1e-15;
constexpr Real kInitialStep = 0.5;
constexpr Real kMinStep = 1e-8;
constexpr int kStallSweeps = 200;
constexpr Eigen::Index kDensePolls = 2;  // per ensemble member
// Smoothing schedule: each stage minimizes sum_i p_i sqrt(tau_i^2 + eps^2),
// which is within eps of the exact objective; the last stage is exact.
constexpr std::array<Real, 6> kSmoothing = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 0.0};

using Amplitudes = Eigen::Matrix<Complex, 8, 1>;
using Ensemble = Eigen::Matrix<Complex, 8, Eigen::Dynamic, 0, 8, kMaxEnsembleSize>;

template <typename Derived>
Real member_value(const Eigen::MatrixBase<Derived>& phi) {
  const Real p = phi.squaredNorm();
  return p > std::numeric_limits<Real>::min() ? three_tangle_amplitudes(phi) / p : Real(0);
}

// exp(i angle (n . sigma)) = cos(angle) I + i sin(angle) (n . sigma), |n| = 1.
Matrix2c pair_unitary(Real angle, Real nx, Real ny, Real nz) {
  const Real c = std::cos(angle);
  const Real s = std::sin(angle);
  const Complex i(0, 1);
  Matrix2c g;
  g(0, 0) = c + i * s * nz;
  g(0, 1) = i * s * Complex(nx, -ny);
  g(1, 0) = i * s * Complex(nx, ny);
  g(1, 1) = c - i * s * nz;
  return g;
}

MatrixXc random_unitary(Eigen::Index m, std::mt19937_64& rng) {
  std::normal_distribution<Real> gauss(0.0, 1.0);
  MatrixXc g(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      const Real re = gauss(rng);
      const Real im = gauss(rng);
      g(r, c) = Complex(re, im);
    }
  const MatrixXc h = (g + g.adjoint()) * 0.5;
  const auto eig = hermitian_eigen(h);
  VectorXc phases(m);
  for (Eigen::Index k = 0; k < m; ++k) phases[k] = std::polar(Real(1), eig.values[k]);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

struct SearchOutcome {
  Real value;
  MatrixXc phis;
  long iterations;
  bool converged;
};

// Pattern search over left multiplications of the ensemble by 2x2 unitaries
// on member pairs. A sweep polls every pair along the two real su(2)
// generators in both directions, then m random directions; the step doubles
// (up to kInitialStep) after a sweep with an accepted move and halves
// otherwise. Stops once the last kStallSweeps sweeps together gained less than
// the tolerance. Minimizes the eps-smoothed objective but reports the exact one.
SearchOutcome pattern_search(const MatrixXc& start, const ConvexRoofConfig& config,
                             std::mt19937_64& rng, Real eps = 0) {
  auto cost = [eps](const auto& phi) {
    const Real v = member_value(phi);
    if (eps == 0) return v;
    const Real p = phi.squaredNorm();
    return std::sqrt(v * v + eps * eps * p * p);
  };
  const Eigen::Index m = start.cols();
  Ensemble phis = start;
  std::array<Real, kMaxEnsembleSize> contrib{};
  for (Eigen::Index i = 0; i < m; ++i) contrib[static_cast<std::size_t>(i)] = cost(phis.col(i));
  auto total = [&]() { return std::accumulate(contrib.begin(), contrib.begin() + m, Real(0)); };

  if (m == 1) return {member_value(phis.col(0)), phis, 0, true};

  std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  Amplitudes a;
  Amplitudes b;

  auto try_move = [&](Eigen::Index i, Eigen::Index j, const Matrix2c& g) {
    a.noalias() = g(0, 0) * phis.col(i) + g(0, 1) * phis.col(j);
    b.noalias() = g(1, 0) * phis.col(i) + g(1, 1) * phis.col(j);
    const Real va = cost(a);
    const Real vb = cost(b);
    auto& ci = contrib[static_cast<std::size_t>(i)];
    auto& cj = contrib[static_cast<std::size_t>(j)];
    if (va + vb < ci + cj - 1e-15) {
      phis.col(i) = a;
      phis.col(j) = b;
      ci = va;
      cj = vb;
      return true;
    }
    return false;
  };

  // Random directions in all of u(m), applied as a product of pair rotations
  // with Gaussian coefficients; diagonal generators only rephase members and
  // cannot change the objective. Tried only after the pair polls fail, since
  // single-pair moves can stall where the objective is not smooth.
  Ensemble trial(phis.rows(), m);
  std::array<Real, kMaxEnsembleSize> trial_contrib{};
  const Eigen::Index n_pairs = m * (m - 1) / 2;
  std::vector<Real> coeff(static_cast<std::size_t>(2 * n_pairs));
  auto dense_poll = [&](Real step) {
    const Real current = total();
    for (Eigen::Index attempt = 0; attempt < kDensePolls * m; ++attempt) {
      Real norm2 = 0;
      for (auto& c : coeff) {
        c = gauss(rng);
        norm2 += c * c;
      }
      const Real scale = step / std::sqrt(norm2);
      trial = phis;
      std::size_t k = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j, k += 2) {
          const Real x = coeff[k] * scale;
          const Real y = coeff[k + 1] * scale;
          const Real angle = std::hypot(x, y);
          if (angle == 0) continue;
          const Matrix2c g = pair_unitary(angle, x / angle, y / angle, 0);
          a.noalias() = g(0, 0) * trial.col(i) + g(0, 1) * trial.col(j);
          trial.col(j) = g(1, 0) * trial.col(i) + g(1, 1) * trial.col(j);
          trial.col(i) = a;
        }
      }
      Real value = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        trial_contrib[static_cast<std::size_t>(i)] = cost(trial.col(i));
        value += trial_contrib[static_cast<std::size_t>(i)];
      }
      if (value < current - 1e-15) {
        phis = trial;
        contrib = trial_contrib;
        return true;
      }
    }
    return false;
  };

  Real step = kInitialStep;
  // history[s % kStallSweeps] holds the value after sweep s
  std::array<Real, kStallSweeps> history;
  history.fill(total());
  long sweeps = 0;
  bool converged = false;
  while (sweeps < config.max_iterations) {
    ++sweeps;
    bool moved = false;
    const std::array<Matrix2c, 4> axis_moves = {
        pair_unitary(step, 1, 0, 0), pair_unitary(-step, 1, 0, 0), pair_unitary(step, 0, 1, 0),
        pair_unitary(-step, 0, 1, 0)};
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j)
        for (const auto& g : axis_moves) {
          if (try_move(i, j, g)) {
            moved = true;
            break;
          }
        }
    for (Eigen::Index r = 0; r < m; ++r) {
      const Eigen::Index i = pick(rng);
      Eigen::Index j = pick(rng);
      if (j == i) j = (i + 1) % m;
      const Real x = gauss(rng);
      const Real y = gauss(rng);
      const Real z = gauss(rng);
      const Real len = std::sqrt(x * x + y * y + z * z);
      if (len == 0) continue;
      moved |= try_move(i, j, pair_unitary(step, x / len, y / len, z / len));
    }
    if (!moved) moved = dense_poll(step);
    step = moved ? std::min(2 * step, kInitialStep) : step / 2;
    auto& window_start = history[static_cast<std::size_t>(sweeps % kStallSweeps)];
    const bool stalled = sweeps >= kStallSweeps && window_start - total() < config.tolerance;
    window_start = total();
    if (stalled || step < kMinStep) {
      converged = true;
      break;
    }
  }

  for (Eigen::Index i = 0; i < m; ++i)
    contrib[static_cast<std::size_t>(i)] = member_value(phis.col(i));
  return {total(), phis, sweeps, converged};
}

EnsembleDecomposition members_from(const MatrixXc& phis, int n_qubits) {
  EnsembleDecomposition out;
  for (Eigen::Index i = 0; i < phis.cols(); ++i) {
    const Real p = phis.col(i).squaredNorm();
    if (p <= kNegligibleWeight) continue;
    VectorXc v = phis.col(i) / std::sqrt(p);
    out.members.push_back({p, make_state(v, n_qubits).state});
  }
  return out;
}

void validate(const ConvexRoofConfig& config) {
  if (config.restarts < 1) throw std::invalid_argument("convex roof: restarts must be >= 1");
  if (config.max_iterations < 1) {
    throw std::invalid_argument("convex roof: max_iterations must be >= 1");
  }
  if (!(config.tolerance > 0) || !std::isfinite(config.tolerance)) {
    throw std::invalid_argument("convex roof: tolerance must be positive");
  }
  if (config.max_ensemble_size < 0) {
    throw std::invalid_argument("convex roof: max_ensemble_size must be >= 0");
  }
}

}  // namespace

MatrixXc EnsembleDecomposition::reconstruct() const {
  if (members.empty()) return MatrixXc();
  const Eigen::Index d = members.front().state.dim();
  MatrixXc rho = MatrixXc::Zero(d, d);
  for (const auto& m : members) {
    rho += m.probability * m.state.amplitudes() * m.state.amplitudes().adjoint();
  }
  return rho;
}

Real EnsembleDecomposition::average_three_tangle() const {
  Real sum = 0;
  for (const auto& m : members) sum += m.probability * three_tangle_pure(m.state);
  return sum;
}

EigenEnsemble eigen_ensemble(const DensityMatrix& rho, Real rank_tolerance) {
  const auto eig = hermitian_eigen(rho.elements());
  Eigen::Index rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > rank_tolerance) ++rank;
  return {eig.values.head(rank), eig.vectors.leftCols(rank)};
}

MatrixXc steer(const EigenEnsemble& eigen, const MatrixXc& mixing) {
  const VectorXc roots = eigen.weights.cwiseSqrt().cast<Complex>();
  return eigen.vectors * roots.asDiagonal() * mixing.transpose();
}

EnsembleDecomposition decompose(const DensityMatrix& rho, const MatrixXc& mixing) {
  const EigenEnsemble eigen = eigen_ensemble(rho);
  if (mixing.cols() != eigen.rank()) {
    throw std::invalid_argument("mixing has " + std::to_string(mixing.cols()) +
                                " columns but rank(rho) = " + std::to_string(eigen.rank()));
  }
  if (mixing.rows() < mixing.cols()) {
    throw std::invalid_argument("ensemble size must be at least rank(rho)");
  }
  const MatrixXc gram = mixing.adjoint() * mixing;
  const Real dev = (gram - MatrixXc::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    throw std::invalid_argument("mixing columns are not orthonormal (deviation " +
                                std::to_string(dev) + ")");
  }
  return members_from(steer(eigen, mixing), rho.n_qubits());
}

Real ensemble_three_tangle(const MatrixXc& subnormalized) {
  if (subnormalized.rows() != 8) {
    throw std::invalid_argument("three-qubit ensemble vectors must have 8 amplitudes");
  }
  Real sum = 0;
  for (Eigen::Index i = 0; i < subnormalized.cols(); ++i) sum += member_value(subnormalized.col(i));
  return sum;
}

ConvexRoofResult three_tangle_mixed(const DensityMatrix& rho, const ConvexRoofConfig& config) {
  if (rho.n_qubits() != 3) {
    throw std::invalid_argument("convex-roof three-tangle needs a three-qubit density matrix");
  }
  validate(config);
  const EigenEnsemble eigen = eigen_ensemble(rho);
  const int rank = eigen.rank();
  const int max_size = config.max_ensemble_size == 0 ? std::min(rank + 2, kMaxEnsembleSize)
                                                     : config.max_ensemble_size;
  if (max_size < rank || max_size > kMaxEnsembleSize) {
    throw std::invalid_argument("convex roof: max_ensemble_size must lie in rank(rho).." +
                                std::to_string(kMaxEnsembleSize) + " (rank " +
                                std::to_string(rank) + ")");
  }

  ConvexRoofResult result;
  result.eigen_ensemble_value =
      ensemble_three_tangle(steer(eigen, MatrixXc::Identity(rank, rank)));

  Real best = std::numeric_limits<Real>::infinity();
  MatrixXc best_phis;
  for (int m = rank; m <= max_size; ++m) {
    for (int restart = 0; restart < config.restarts; ++restart) {
      std::mt19937_64 rng(derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(m)),
                                      static_cast<std::uint64_t>(restart)));
      const MatrixXc unitary = restart == 0 ? MatrixXc::Identity(m, m) : random_unitary(m, rng);
      MatrixXc phis = steer(eigen, unitary.leftCols(rank));
      SearchOutcome outcome{};
      for (const Real eps : kSmoothing) {
        outcome = pattern_search(phis, config, rng, eps);
        phis = std::move(outcome.phis);
        result.iterations += outcome.iterations;
      }
      ++result.restarts_used;
      if (outcome.value < best) {
        best = outcome.value;
        best_phis = std::move(phis);
        result.ensemble_size = m;
        result.converged = outcome.converged;
      }
    }
  }
  result.value = best;
  result.witness = members_from(best_phis, 3);
  return result;
}

}  // namespace tanglekit
