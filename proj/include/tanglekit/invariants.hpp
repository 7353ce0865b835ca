#pragma once

#include <array>

#include "tanglekit/qstate.hpp"

namespace tanglekit {

/// sigma_y x sigma_y in the two-qubit computational basis. Real, with
/// entries +-1 on the anti-diagonal.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> sigma_yy() {
  Eigen::Matrix<std::complex<Scalar>, 4, 4> y = Eigen::Matrix<std::complex<Scalar>, 4, 4>::Zero();
  y(0, 3) = Scalar(-1);
  y(1, 2) = Scalar(1);
  y(2, 1) = Scalar(1);
  y(3, 0) = Scalar(-1);
  return y;
}

/// (sigma_y x sigma_y) rho^* (sigma_y x sigma_y) for any 4x4 complex matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 4, 4> spin_flip(const Eigen::MatrixBase<Derived>& rho) {
  using C = typename Derived::Scalar;
  using Scalar = typename Eigen::NumTraits<C>::Real;
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("spin_flip: expected a 4x4 matrix");
  }
  const auto y = sigma_yy<Scalar>();
  return y * rho.conjugate() * y;
}

/// Spin flip of a two-qubit density matrix.
Matrix4c spin_flip(const DensityMatrix& rho);

/// Eigenvalues of rho * rho~, descending and clamped at zero, with their
/// square roots (the singular values the concurrence is built from).
struct SpinFlipSpectrum {
  std::array<Real, 4> lambdas{};
  std::array<Real, 4> roots{};
};

/// Computes the spectrum of rho * rho~ from the singular values of
/// Psi^T (sigma_y x sigma_y) Psi with rho = Psi Psi^H. That matrix is similar
/// to sqrt(rho) rho~ sqrt(rho); working with the factor keeps zero
/// eigenvalues of rank-deficient marginals at roundoff level instead of
/// sqrt(roundoff). Throws std::invalid_argument if rho has an eigenvalue
/// below -1e-8.
SpinFlipSpectrum flip_spectrum(const DensityMatrix& rho);

/// Same spectrum via the Hermitian matrix sqrt(rho) rho~ sqrt(rho) and the
/// Jacobi eigensolver. Accurate to ~1e-16 in lambda, so only ~1e-8 in
/// sqrt(lambda) near zero.
std::array<Real, 4> flip_spectrum_similarity(const DensityMatrix& rho);

/// tr((rho rho~)^k) for k = 1..4 from explicit matrix powers.
std::array<Real, 4> flip_power_sums(const DensityMatrix& rho);

/// Characteristic-polynomial coefficients n4..n16 via Newton's identities on
/// flip_power_sums.
std::array<Real, 4> newton_coefficients(const DensityMatrix& rho);

struct Concurrence {
  Real c_value;     // sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)
  Real two_tangle;  // max(0, c_value)
};

Concurrence concurrence(const SpinFlipSpectrum& spectrum);
Concurrence concurrence(const DensityMatrix& rho);

/// Coefficients of x^4 - n4 x^3 + n8 x^2 - n12 x + n16 for rho * rho~, plus
/// the quantities tying n4 to the two-tangle.
struct PairInvariants {
  Real n4 = 0;
  Real n8 = 0;
  Real n12 = 0;
  Real n16 = 0;
  Real c_value = 0;
  Real two_tangle = 0;
  Real f16 = 0;
  Real chi_plus = 0;
  Real chi_minus = 0;
  SpinFlipSpectrum spectrum;

  /// chi+ when C >= 0, chi- otherwise.
  bool plus_branch() const { return c_value >= 0; }
  Real active_chi() const { return plus_branch() ? chi_plus : chi_minus; }
};

PairInvariants pair_invariants(const SpinFlipSpectrum& spectrum);
PairInvariants pair_invariants(const DensityMatrix& rho);

/// |n4 - tau^2 - sqrt(4 n8 + chi)| with the active chi branch.
Real n4_relation_residual(const PairInvariants& inv);
Real verify_n4_relation(const DensityMatrix& rho);

/// 4 det(rho_focus).
Real one_tangle(const PureState& state, int focus = 1);

/// D_{focus j I J} = a_{0 0 I} a_{1 1 J} - a_{1 0 J} a_{0 1 I}, where the
/// first two subscripts are the focus and j bits.
Complex d_invariant(const PureState& state, int focus, int j, const MultiIndex& i_index,
                    const MultiIndex& j_index);

/// Symmetric matrix S_{IJ} = D_{IJ} + D_{JI} over the 2^(N-2) traced indices.
MatrixXc symmetric_d_matrix(const PureState& state, int focus, int j);

/// n4 = 2 sum_{I<J} |S_IJ|^2 + sum_I |S_II|^2, i.e. every ordered (I, J)
/// counted once.
Real n4_from_invariants(const PureState& state, int focus, int j);

/// n8 = sum_{I<K, J<L} |S_IJ S_KL - S_IL S_KJ|^2, each 2x2 minor of S once.
/// Cost grows as 2^(4(N-2)); intended for N <= 8.
Real n8_from_invariants(const PureState& state, int focus, int j);

/// One-tangle as a sum of squared 2x2 minors of the focus coefficient
/// matrix, grouped by the first partner qubit j at which the two columns
/// differ. Group j contributes sum_I |D_{jII}|^2 plus the minors
/// a_{00I} a_{11J} - a_{01J} a_{10I} over I != J agreeing below j.
Real one_tangle_from_invariants(const PureState& state, int focus = 1);

/// 4 |(D_01 + D_10)^2 - 4 D_00 D_11| of an (unnormalized) amplitude vector
/// over three qubits, basis index 4 i1 + 2 i2 + i3. Degree four in the
/// amplitudes.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real three_tangle_amplitudes(
    const Eigen::MatrixBase<Derived>& a) {
  using C = typename Derived::Scalar;
  auto d = [&](int i, int j) -> C {
    return a[0 + i] * a[6 + j] - a[4 + j] * a[2 + i];
  };
  const C sym = d(0, 1) + d(1, 0);
  return 4 * std::abs(sym * sym - C(4) * d(0, 0) * d(1, 1));
}

/// Pure-state three-tangle with (focus, j, k) relabeled to (1, 2, 3).
Real three_tangle_pure(const PureState& state3, int focus = 1, int j = 2, int k = 3);

}  // namespace tanglekit
