#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tanglekit/types.hpp"

namespace tanglekit {

inline constexpr int kMaxQubits = 12;

// Basis convention: index b = sum_m i_m 2^(N-m), qubit 1 most significant.
// Qubit positions are 1-based throughout the public API.

/// Bit of qubit `position` (1-based) in basis index `b` of an n-qubit register.
constexpr int qubit_bit(std::uint64_t b, int n_qubits, int position) {
  return static_cast<int>((b >> (n_qubits - position)) & 1U);
}

/// Normalized amplitude vector over the 2^N computational basis.
class PureState {
 public:
  /// Throws std::invalid_argument unless the length is 2^n_qubits and the
  /// squared norm is 1 within 1e-12.
  PureState(int n_qubits, VectorXc amplitudes);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const VectorXc& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index b) const { return amplitudes_[b]; }

 private:
  int n_qubits_;
  VectorXc amplitudes_;
};

/// Hermitian, PSD, unit-trace matrix over an ordered subset of qubits.
class DensityMatrix {
 public:
  /// Validates every invariant (Hermitian and unit trace within 1e-12,
  /// eigenvalues >= -1e-10). Throws std::invalid_argument otherwise.
  static DensityMatrix validated(MatrixXc elements, std::vector<int> qubit_labels);

  /// Pure-state projector |psi><psi|.
  static DensityMatrix projector(const PureState& state);

  int n_qubits() const { return static_cast<int>(qubit_labels_.size()); }
  Eigen::Index dim() const { return elements_.rows(); }
  const MatrixXc& elements() const { return elements_; }
  const std::vector<int>& qubit_labels() const { return qubit_labels_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return elements_(r, c); }

 private:
  DensityMatrix(MatrixXc elements, std::vector<int> qubit_labels)
      : elements_(std::move(elements)), qubit_labels_(std::move(qubit_labels)) {}
  friend DensityMatrix marginal(const PureState&, std::span<const int>);

  MatrixXc elements_;
  std::vector<int> qubit_labels_;
};

/// Value of a bit assignment over traced-out qubit positions.
///
/// Positions are held ascending; position t in that list carries weight 2^t,
/// i.e. the lowest traced position is least significant. For a fixed
/// (focus, j) pair this maps bit lists bijectively onto [0, 2^(N-2)).
class MultiIndex {
 public:
  static MultiIndex from_value(std::vector<int> positions, std::uint64_t value);
  static MultiIndex from_bits(std::vector<int> positions, const std::vector<int>& bits);

  const std::vector<int>& positions() const { return positions_; }
  std::uint64_t value() const { return value_; }
  int bit(std::size_t t) const { return static_cast<int>((value_ >> t) & 1U); }
  std::vector<int> bits() const;

 private:
  MultiIndex(std::vector<int> positions, std::uint64_t value)
      : positions_(std::move(positions)), value_(value) {}

  std::vector<int> positions_;
  std::uint64_t value_;
};

/// Ascending positions of 1..n excluding `a` and `b`.
std::vector<int> traced_positions(int n_qubits, int a, int b);

/// Basis index of the amplitude with qubit `focus` = i_focus, qubit `j` = i_j
/// and the remaining qubits set by `rest`.
std::uint64_t pair_basis_index(int n_qubits, int focus, int i_focus, int j, int i_j,
                               const MultiIndex& rest);

enum class FamilyTag { ghz, w, product, bell_times_rest, haar, file, ghz_w, gghz };

/// Family tag plus its parameter list.
///
/// Parameters per tag:
///   ghz, w            -- none
///   product           -- none (all |0>) or one angle per qubit,
///                        qubit m = cos(t_m)|0> + sin(t_m)|1>
///   bell_times_rest   -- none (Bell pair on qubits 1,2) or two positions
///   haar              -- none; uses `seed`
///   ghz_w             -- theta: cos(theta) GHZ_N + sin(theta) W_N, renormalized
///   gghz              -- theta: cos(theta)|0..0> + sin(theta)|1..1>
///   file              -- uses `path`
struct StateFamily {
  FamilyTag tag = FamilyTag::ghz;
  int n_qubits = 3;
  std::vector<Real> params;
  std::uint64_t seed = 0;
  std::string path;
};

FamilyTag parse_family(std::string_view name);
std::string_view family_name(FamilyTag tag);

struct NormalizedState {
  PureState state;
  Real input_norm;
};

/// Normalizes `coeffs` into a PureState. Throws on length mismatch or a
/// zero vector.
NormalizedState make_state(const VectorXc& coeffs, int n_qubits);
NormalizedState make_state(std::span<const Complex> coeffs, int n_qubits);

/// Matrix T with rows indexed by the kept qubits (in the given order, first
/// most significant) and columns by the remaining qubits (ascending), so
/// that marginal(state, keep) = T T^H.
MatrixXc split_amplitudes(const PureState& state, std::span<const int> keep);

/// Reduced density matrix over `keep`, in the given order.
DensityMatrix marginal(const PureState& state, std::span<const int> keep);
inline DensityMatrix marginal(const PureState& state, std::initializer_list<int> keep) {
  return marginal(state, std::span<const int>(keep.begin(), keep.size()));
}

/// Haar-random state from a normalized i.i.d. complex Gaussian vector.
PureState haar_random(int n_qubits, std::uint64_t seed);

PureState ghz_state(int n_qubits);
PureState w_state(int n_qubits);
PureState product_state(int n_qubits, std::span<const Real> angles = {});
PureState bell_times_rest(int n_qubits, int p = 1, int q = 2);

PureState named_state(const StateFamily& family);

/// Permutes qubits: qubit m of the result is qubit order[m-1] of `state`.
PureState relabel(const PureState& state, std::span<const int> order);

/// Order placing `focus` first and the other qubits ascending after it.
std::vector<int> focus_first_order(int n_qubits, int focus);
inline PureState focus_first(const PureState& state, int focus) {
  const auto order = focus_first_order(state.n_qubits(), focus);
  return relabel(state, order);
}

/// Applies U_1 x ... x U_N.
PureState apply_local(const PureState& state, std::span<const Matrix2c> unitaries);

/// Single-qubit unitary from Haar measure (QR of a complex Gaussian).
Matrix2c random_unitary2(std::uint64_t seed);

}  // namespace tanglekit
