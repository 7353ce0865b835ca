#include "tanglekit/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/QR>

#include "tanglekit/hermitian_eigen.hpp"

namespace tanglekit {
namespace {

constexpr Real kStateNormTolerance = 1e-12;

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in 1.." + std::to_string(kMaxQubits) +
                                ", got " + std::to_string(n_qubits));
  }
}

void check_position_list(std::span<const int> positions, int n_qubits) {
  if (positions.empty()) throw std::invalid_argument("qubit list is empty");
  std::vector<bool> seen(static_cast<std::size_t>(n_qubits) + 1, false);
  for (int p : positions) {
    if (p < 1 || p > n_qubits) {
      throw std::invalid_argument("qubit position " + std::to_string(p) + " out of range 1.." +
                                  std::to_string(n_qubits));
    }
    if (seen[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument("duplicate qubit position " + std::to_string(p));
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
}

std::uint64_t dimension(int n_qubits) { return std::uint64_t{1} << n_qubits; }

}  // namespace

PureState::PureState(int n_qubits, VectorXc amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  if (static_cast<std::uint64_t>(amplitudes_.size()) != dimension(n_qubits)) {
    throw std::invalid_argument("amplitude count " + std::to_string(amplitudes_.size()) +
                                " does not match 2^" + std::to_string(n_qubits));
  }
  const Real norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1) > kStateNormTolerance) {
    throw std::invalid_argument("state is not normalized (squared norm " +
                                std::to_string(norm2) + ")");
  }
}

DensityMatrix DensityMatrix::validated(MatrixXc elements, std::vector<int> qubit_labels) {
  const auto n = static_cast<int>(qubit_labels.size());
  check_qubit_count(n);
  if (elements.rows() != elements.cols() ||
      static_cast<std::uint64_t>(elements.rows()) != dimension(n)) {
    throw std::invalid_argument("density matrix dimension does not match its qubit labels");
  }
  const Real herm = (elements - elements.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) throw std::invalid_argument("density matrix is not Hermitian");
  const Complex trace = elements.trace();
  if (std::abs(trace - Complex(1)) > 1e-12) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  const auto eig = hermitian_eigen(elements);
  if (eig.values.minCoeff() < -1e-10) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
  return DensityMatrix(std::move(elements), std::move(qubit_labels));
}

DensityMatrix DensityMatrix::projector(const PureState& state) {
  std::vector<int> labels(static_cast<std::size_t>(state.n_qubits()));
  std::iota(labels.begin(), labels.end(), 1);
  return validated(state.amplitudes() * state.amplitudes().adjoint(), std::move(labels));
}

MultiIndex MultiIndex::from_value(std::vector<int> positions, std::uint64_t value) {
  std::sort(positions.begin(), positions.end());
  if (positions.size() >= 63 || value >= (std::uint64_t{1} << positions.size())) {
    throw std::invalid_argument("multi-index value out of range");
  }
  return MultiIndex(std::move(positions), value);
}

MultiIndex MultiIndex::from_bits(std::vector<int> positions, const std::vector<int>& bits) {
  if (bits.size() != positions.size()) {
    throw std::invalid_argument("multi-index bit count does not match positions");
  }
  // Bits are given in the order of `positions`; sort both together.
  std::vector<std::pair<int, int>> paired;
  for (std::size_t t = 0; t < bits.size(); ++t) {
    if (bits[t] != 0 && bits[t] != 1) throw std::invalid_argument("multi-index bit must be 0 or 1");
    paired.emplace_back(positions[t], bits[t]);
  }
  std::sort(paired.begin(), paired.end());
  std::uint64_t value = 0;
  for (std::size_t t = 0; t < paired.size(); ++t) {
    positions[t] = paired[t].first;
    value |= static_cast<std::uint64_t>(paired[t].second) << t;
  }
  return MultiIndex(std::move(positions), value);
}

std::vector<int> MultiIndex::bits() const {
  std::vector<int> out(positions_.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = bit(t);
  return out;
}

std::vector<int> traced_positions(int n_qubits, int a, int b) {
  std::vector<int> out;
  for (int m = 1; m <= n_qubits; ++m) {
    if (m != a && m != b) out.push_back(m);
  }
  return out;
}

std::uint64_t pair_basis_index(int n_qubits, int focus, int i_focus, int j, int i_j,
                               const MultiIndex& rest) {
  std::uint64_t b = (static_cast<std::uint64_t>(i_focus) << (n_qubits - focus)) |
                    (static_cast<std::uint64_t>(i_j) << (n_qubits - j));
  const auto& pos = rest.positions();
  for (std::size_t t = 0; t < pos.size(); ++t) {
    b |= static_cast<std::uint64_t>(rest.bit(t)) << (n_qubits - pos[t]);
  }
  return b;
}

FamilyTag parse_family(std::string_view name) {
  if (name == "ghz") return FamilyTag::ghz;
  if (name == "w") return FamilyTag::w;
  if (name == "product") return FamilyTag::product;
  if (name == "bell_times_rest") return FamilyTag::bell_times_rest;
  if (name == "haar") return FamilyTag::haar;
  if (name == "file") return FamilyTag::file;
  if (name == "ghz_w") return FamilyTag::ghz_w;
  if (name == "gghz") return FamilyTag::gghz;
  throw std::invalid_argument("unknown state family '" + std::string(name) + "'");
}

std::string_view family_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::ghz: return "ghz";
    case FamilyTag::w: return "w";
    case FamilyTag::product: return "product";
    case FamilyTag::bell_times_rest: return "bell_times_rest";
    case FamilyTag::haar: return "haar";
    case FamilyTag::file: return "file";
    case FamilyTag::ghz_w: return "ghz_w";
    case FamilyTag::gghz: return "gghz";
  }
  return "?";
}

NormalizedState make_state(const VectorXc& coeffs, int n_qubits) {
  check_qubit_count(n_qubits);
  if (static_cast<std::uint64_t>(coeffs.size()) != dimension(n_qubits)) {
    throw std::invalid_argument("length mismatch: " + std::to_string(coeffs.size()) +
                                " coefficients for " + std::to_string(n_qubits) + " qubits");
  }
  const Real norm = coeffs.norm();
  if (!(norm > 0) || !std::isfinite(norm)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  VectorXc amps = coeffs / norm;
  return {PureState(n_qubits, std::move(amps)), norm};
}

NormalizedState make_state(std::span<const Complex> coeffs, int n_qubits) {
  VectorXc v(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) v[static_cast<Eigen::Index>(i)] = coeffs[i];
  return make_state(v, n_qubits);
}

MatrixXc split_amplitudes(const PureState& state, std::span<const int> keep) {
  const int n = state.n_qubits();
  check_position_list(keep, n);
  std::vector<int> rest;
  for (int m = 1; m <= n; ++m) {
    if (std::find(keep.begin(), keep.end(), m) == keep.end()) rest.push_back(m);
  }
  const auto kept = static_cast<int>(keep.size());
  const auto traced = static_cast<int>(rest.size());
  MatrixXc t(Eigen::Index{1} << kept, Eigen::Index{1} << traced);
  for (std::uint64_t b = 0; b < dimension(n); ++b) {
    std::uint64_t row = 0;
    for (int p : keep) row = (row << 1) | static_cast<std::uint64_t>(qubit_bit(b, n, p));
    std::uint64_t col = 0;
    for (int p : rest) col = (col << 1) | static_cast<std::uint64_t>(qubit_bit(b, n, p));
    t(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
        state[static_cast<Eigen::Index>(b)];
  }
  return t;
}

DensityMatrix marginal(const PureState& state, std::span<const int> keep) {
  const MatrixXc t = split_amplitudes(state, keep);
  MatrixXc rho = t * t.adjoint();
  rho = ((rho + rho.adjoint()) * 0.5).eval();
  return DensityMatrix(std::move(rho), std::vector<int>(keep.begin(), keep.end()));
}

PureState haar_random(int n_qubits, std::uint64_t seed) {
  check_qubit_count(n_qubits);
  std::mt19937_64 engine(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  VectorXc v(static_cast<Eigen::Index>(dimension(n_qubits)));
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    const Real re = gauss(engine);
    const Real im = gauss(engine);
    v[b] = Complex(re, im);
  }
  return make_state(v, n_qubits).state;
}

PureState ghz_state(int n_qubits) {
  check_qubit_count(n_qubits);
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(dimension(n_qubits)));
  v[0] = 1;
  v[v.size() - 1] = 1;
  return make_state(v, n_qubits).state;
}

PureState w_state(int n_qubits) {
  check_qubit_count(n_qubits);
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(dimension(n_qubits)));
  for (int m = 1; m <= n_qubits; ++m) v[Eigen::Index{1} << (n_qubits - m)] = 1;
  return make_state(v, n_qubits).state;
}

PureState product_state(int n_qubits, std::span<const Real> angles) {
  check_qubit_count(n_qubits);
  if (!angles.empty() && static_cast<int>(angles.size()) != n_qubits) {
    throw std::invalid_argument("product state needs one angle per qubit");
  }
  VectorXc v(static_cast<Eigen::Index>(dimension(n_qubits)));
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    Real amp = 1;
    for (int m = 1; m <= n_qubits; ++m) {
      const Real theta = angles.empty() ? 0.0 : angles[static_cast<std::size_t>(m - 1)];
      amp *= qubit_bit(static_cast<std::uint64_t>(b), n_qubits, m) ? std::sin(theta)
                                                                    : std::cos(theta);
    }
    v[b] = amp;
  }
  return make_state(v, n_qubits).state;
}

PureState bell_times_rest(int n_qubits, int p, int q) {
  check_qubit_count(n_qubits);
  const int pq[] = {p, q};
  check_position_list(pq, n_qubits);
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(dimension(n_qubits)));
  v[0] = 1;
  v[(Eigen::Index{1} << (n_qubits - p)) | (Eigen::Index{1} << (n_qubits - q))] = 1;
  return make_state(v, n_qubits).state;
}

PureState named_state(const StateFamily& family) {
  const auto& params = family.params;
  auto require_arity = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi) {
      throw std::invalid_argument("family '" + std::string(family_name(family.tag)) +
                                  "' got " + std::to_string(params.size()) + " parameters");
    }
  };
  const int n = family.n_qubits;
  switch (family.tag) {
    case FamilyTag::ghz:
      require_arity(0, 0);
      return ghz_state(n);
    case FamilyTag::w:
      require_arity(0, 0);
      return w_state(n);
    case FamilyTag::product:
      if (!params.empty() && static_cast<int>(params.size()) != n) require_arity(0, 0);
      return product_state(n, params);
    case FamilyTag::bell_times_rest: {
      if (params.size() == 1) require_arity(0, 0);
      require_arity(0, 2);
      if (params.empty()) return bell_times_rest(n);
      const auto p = static_cast<int>(params[0]);
      const auto q = static_cast<int>(params[1]);
      if (p != params[0] || q != params[1]) {
        throw std::invalid_argument("bell_times_rest positions must be integers");
      }
      return bell_times_rest(n, p, q);
    }
    case FamilyTag::haar:
      require_arity(0, 0);
      return haar_random(n, family.seed);
    case FamilyTag::ghz_w: {
      require_arity(1, 1);
      const VectorXc v = std::cos(params[0]) * ghz_state(n).amplitudes() +
                         std::sin(params[0]) * w_state(n).amplitudes();
      return make_state(v, n).state;
    }
    case FamilyTag::gghz: {
      require_arity(1, 1);
      VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(dimension(n)));
      v[0] = std::cos(params[0]);
      v[v.size() - 1] = std::sin(params[0]);
      return make_state(v, n).state;
    }
    case FamilyTag::file:
      throw std::invalid_argument("file family is resolved by the state reader");
  }
  throw std::invalid_argument("unknown state family");
}

PureState relabel(const PureState& state, std::span<const int> order) {
  const int n = state.n_qubits();
  if (static_cast<int>(order.size()) != n) {
    throw std::invalid_argument("relabel order must list every qubit");
  }
  check_position_list(order, n);
  VectorXc out(state.dim());
  for (std::uint64_t b = 0; b < dimension(n); ++b) {
    std::uint64_t old = 0;
    for (int m = 1; m <= n; ++m) {
      old |= static_cast<std::uint64_t>(qubit_bit(b, n, m)) << (n - order[static_cast<std::size_t>(m - 1)]);
    }
    out[static_cast<Eigen::Index>(b)] = state[static_cast<Eigen::Index>(old)];
  }
  return PureState(n, std::move(out));
}

std::vector<int> focus_first_order(int n_qubits, int focus) {
  if (focus < 1 || focus > n_qubits) {
    throw std::invalid_argument("focus qubit " + std::to_string(focus) + " out of range");
  }
  std::vector<int> order{focus};
  for (int m = 1; m <= n_qubits; ++m) {
    if (m != focus) order.push_back(m);
  }
  return order;
}

PureState apply_local(const PureState& state, std::span<const Matrix2c> unitaries) {
  const int n = state.n_qubits();
  if (static_cast<int>(unitaries.size()) != n) {
    throw std::invalid_argument("apply_local needs one unitary per qubit");
  }
  VectorXc v = state.amplitudes();
  for (int m = 1; m <= n; ++m) {
    const Matrix2c& u = unitaries[static_cast<std::size_t>(m - 1)];
    const std::uint64_t stride = std::uint64_t{1} << (n - m);
    for (std::uint64_t b = 0; b < dimension(n); ++b) {
      if (b & stride) continue;
      const auto i0 = static_cast<Eigen::Index>(b);
      const auto i1 = static_cast<Eigen::Index>(b | stride);
      const Complex x0 = v[i0];
      const Complex x1 = v[i1];
      v[i0] = u(0, 0) * x0 + u(0, 1) * x1;
      v[i1] = u(1, 0) * x0 + u(1, 1) * x1;
    }
  }
  return make_state(v, n).state;
}

Matrix2c random_unitary2(std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  Matrix2c g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const Real re = gauss(engine);
      const Real im = gauss(engine);
      g(r, c) = Complex(re, im);
    }
  Eigen::HouseholderQR<Matrix2c> qr(g);
  Matrix2c q = qr.householderQ();
  const Matrix2c r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 2; ++c) {
    const Complex d = r(c, c);
    if (std::abs(d) > 0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

}  // namespace tanglekit
