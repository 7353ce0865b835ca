#include "tanglekit/invariants.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "tanglekit/hermitian_eigen.hpp"
#include "tanglekit/symmetric.hpp"

namespace tanglekit {
namespace {

constexpr Real kNegativeEigenvalueLimit = -1e-8;

void require_two_qubit(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw std::invalid_argument("expected a two-qubit density matrix, got dimension " +
                                std::to_string(rho.dim()));
  }
}

void require_pair(const PureState& state, int focus, int j) {
  const int n = state.n_qubits();
  if (n < 2) throw std::invalid_argument("pair invariants need at least two qubits");
  if (focus < 1 || focus > n || j < 1 || j > n) {
    throw std::invalid_argument("qubit position out of range");
  }
  if (focus == j) throw std::invalid_argument("focus and partner qubit must differ");
}

// Amplitudes a_{x y I} for focus bit x, partner bit y, traced index I.
struct PairAmplitudes {
  std::array<VectorXc, 4> a;  // index 2x + y

  PairAmplitudes(const PureState& state, int focus, int j) {
    const int n = state.n_qubits();
    const auto traced = traced_positions(n, focus, j);
    const Eigen::Index k = Eigen::Index{1} << traced.size();
    for (auto& v : a) v.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto rest = MultiIndex::from_value(traced, static_cast<std::uint64_t>(i));
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          a[static_cast<std::size_t>(2 * x + y)][i] =
              state[static_cast<Eigen::Index>(pair_basis_index(n, focus, x, j, y, rest))];
        }
    }
  }

  const VectorXc& operator()(int x, int y) const { return a[static_cast<std::size_t>(2 * x + y)]; }
  Eigen::Index size() const { return a[0].size(); }

  Complex d(Eigen::Index i, Eigen::Index j) const {
    return (*this)(0, 0)[i] * (*this)(1, 1)[j] - (*this)(1, 0)[j] * (*this)(0, 1)[i];
  }
};

std::array<Real, 4> sorted_descending_clamped(const RVector<Real>& v) {
  std::array<Real, 4> out{};
  for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = std::max(Real(0), v[i]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

Matrix4c spin_flip(const DensityMatrix& rho) {
  require_two_qubit(rho);
  return spin_flip(rho.elements());
}

SpinFlipSpectrum flip_spectrum(const DensityMatrix& rho) {
  require_two_qubit(rho);
  const auto eig = hermitian_eigen(rho.elements());
  if (eig.values.minCoeff() < kNegativeEigenvalueLimit) {
    throw std::invalid_argument("density matrix has a negative eigenvalue below -1e-8");
  }
  Matrix4c factor = eig.vectors;
  for (int c = 0; c < 4; ++c) factor.col(c) *= std::sqrt(std::max(Real(0), eig.values[c]));

  const Matrix4c sym = factor.transpose() * sigma_yy<Real>() * factor;
  const Eigen::JacobiSVD<Matrix4c> svd(sym);
  const Eigen::Vector4d sv = svd.singularValues();

  SpinFlipSpectrum out;
  for (int i = 0; i < 4; ++i) out.roots[static_cast<std::size_t>(i)] = sv[i];
  std::sort(out.roots.begin(), out.roots.end(), std::greater<>());
  for (std::size_t i = 0; i < 4; ++i) out.lambdas[i] = out.roots[i] * out.roots[i];
  return out;
}

std::array<Real, 4> flip_spectrum_similarity(const DensityMatrix& rho) {
  require_two_qubit(rho);
  const auto eig = hermitian_eigen(rho.elements());
  Eigen::Vector4d root;
  for (int c = 0; c < 4; ++c) root[c] = std::sqrt(std::max(Real(0), eig.values[c]));
  const Matrix4c v = eig.vectors;
  const Matrix4c sqrt_rho = v * root.cast<Complex>().asDiagonal() * v.adjoint();
  const Matrix4c h = sqrt_rho * spin_flip(rho) * sqrt_rho;
  return sorted_descending_clamped(hermitian_eigen(h).values);
}

std::array<Real, 4> flip_power_sums(const DensityMatrix& rho) {
  require_two_qubit(rho);
  const Matrix4c m = rho.elements() * spin_flip(rho);
  std::array<Real, 4> p{};
  Matrix4c power = m;
  for (std::size_t k = 0; k < 4; ++k) {
    p[k] = power.trace().real();
    power = (power * m).eval();
  }
  return p;
}

std::array<Real, 4> newton_coefficients(const DensityMatrix& rho) {
  return newton_elementary(flip_power_sums(rho));
}

Concurrence concurrence(const SpinFlipSpectrum& spectrum) {
  const auto& r = spectrum.roots;
  const Real c = r[0] - r[1] - r[2] - r[3];
  return {c, std::max(Real(0), c)};
}

Concurrence concurrence(const DensityMatrix& rho) { return concurrence(flip_spectrum(rho)); }

PairInvariants pair_invariants(const SpinFlipSpectrum& spectrum) {
  PairInvariants inv;
  inv.spectrum = spectrum;
  const auto e = elementary_symmetric(spectrum.lambdas);
  inv.n4 = e[0];
  inv.n8 = e[1];
  inv.n12 = e[2];
  inv.n16 = e[3];

  const auto cc = concurrence(spectrum);
  inv.c_value = cc.c_value;
  inv.two_tangle = cc.two_tangle;

  const auto& r = spectrum.roots;
  const Real sqrt_n16 = r[0] * r[1] * r[2] * r[3];
  const Real c2 = inv.c_value * inv.c_value;
  inv.f16 = std::max(Real(0), sqrt_n16 * c2 * (inv.n4 - c2) + inv.n12 * c2);
  const Real sqrt_f16 = std::sqrt(inv.f16);
  inv.chi_plus = 8 * (sqrt_n16 + sqrt_f16);
  inv.chi_minus = 8 * sqrt_n16 - 8 * sqrt_f16 + 2 * inv.n4 * c2 - c2 * c2;
  return inv;
}

PairInvariants pair_invariants(const DensityMatrix& rho) {
  return pair_invariants(flip_spectrum(rho));
}

Real n4_relation_residual(const PairInvariants& inv) {
  const Real rhs = std::sqrt(std::max(Real(0), 4 * inv.n8 + inv.active_chi()));
  return std::abs(inv.n4 - inv.two_tangle * inv.two_tangle - rhs);
}

Real verify_n4_relation(const DensityMatrix& rho) {
  return n4_relation_residual(pair_invariants(rho));
}

Real one_tangle(const PureState& state, int focus) {
  const DensityMatrix rho = marginal(state, {focus});
  const Real det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  return std::clamp(4 * det, Real(0), Real(1));
}

Complex d_invariant(const PureState& state, int focus, int j, const MultiIndex& i_index,
                    const MultiIndex& j_index) {
  require_pair(state, focus, j);
  const int n = state.n_qubits();
  const auto traced = traced_positions(n, focus, j);
  if (i_index.positions() != traced || j_index.positions() != traced) {
    throw std::invalid_argument("multi-index must range over the qubits other than focus and j");
  }
  auto a = [&](int x, int y, const MultiIndex& rest) {
    return state[static_cast<Eigen::Index>(pair_basis_index(n, focus, x, j, y, rest))];
  };
  return a(0, 0, i_index) * a(1, 1, j_index) - a(1, 0, j_index) * a(0, 1, i_index);
}

MatrixXc symmetric_d_matrix(const PureState& state, int focus, int j) {
  require_pair(state, focus, j);
  const PairAmplitudes amps(state, focus, j);
  const Eigen::Index k = amps.size();
  MatrixXc s(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index l = 0; l < k; ++l) s(i, l) = amps.d(i, l) + amps.d(l, i);
  return s;
}

Real n4_from_invariants(const PureState& state, int focus, int j) {
  const MatrixXc s = symmetric_d_matrix(state, focus, j);
  Real off = 0;
  Real diag = 0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    diag += std::norm(s(i, i));
    for (Eigen::Index l = i + 1; l < s.cols(); ++l) off += std::norm(s(i, l));
  }
  return 2 * off + diag;
}

Real n8_from_invariants(const PureState& state, int focus, int j) {
  const MatrixXc s = symmetric_d_matrix(state, focus, j);
  const Eigen::Index k = s.rows();
  Real sum = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index kk = i + 1; kk < k; ++kk)
      for (Eigen::Index jj = 0; jj < k; ++jj)
        for (Eigen::Index l = jj + 1; l < k; ++l) {
          sum += std::norm(s(i, jj) * s(kk, l) - s(i, l) * s(kk, jj));
        }
  return sum;
}

Real one_tangle_from_invariants(const PureState& state, int focus) {
  const int n = state.n_qubits();
  if (n < 2) throw std::invalid_argument("one-tangle expansion needs at least two qubits");
  if (focus < 1 || focus > n) throw std::invalid_argument("focus qubit out of range");

  Real total = 0;
  for (int j = 1; j <= n; ++j) {
    if (j == focus) continue;
    const PairAmplitudes amps(state, focus, j);
    const auto traced = traced_positions(n, focus, j);
    const auto below = std::count_if(traced.begin(), traced.end(), [j](int p) { return p < j; });
    const Eigen::Index mask = (Eigen::Index{1} << below) - 1;

    Real group = 0;
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      group += std::norm(amps.d(i, i));
      for (Eigen::Index l = 0; l < amps.size(); ++l) {
        if (l == i || (i & mask) != (l & mask)) continue;
        group += std::norm(amps(0, 0)[i] * amps(1, 1)[l] - amps(0, 1)[l] * amps(1, 0)[i]);
      }
    }
    total += group;
  }
  return 4 * total;
}

Real three_tangle_pure(const PureState& state3, int focus, int j, int k) {
  if (state3.n_qubits() != 3) {
    throw std::invalid_argument("pure three-tangle needs exactly three qubits, got " +
                                std::to_string(state3.n_qubits()));
  }
  const int order[] = {focus, j, k};
  const PureState s = relabel(state3, order);
  return three_tangle_amplitudes(s.amplitudes());
}

}  // namespace tanglekit
