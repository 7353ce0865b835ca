#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics; only the value types are shared.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline int bit_of(std::size_t b, int n, int pos) { return static_cast<int>((b >> (n - pos)) & 1U); }

/// Gaussian vector over 2^n amplitudes, normalized.
inline Vec random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(1 << n);
  for (auto& a : v) a = C(g(rng), g(rng));
  return v / v.norm();
}

/// Haar unitary from QR of a Ginibre matrix with the phase fix.
inline Mat random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) z(r, c) = C(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c) q.col(c) *= r(c, c) / std::abs(r(c, c));
  return q;
}

/// Reduced density matrix by brute-force index summation.
inline Mat marginal(const Vec& psi, int n, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  Mat rho = Mat::Zero(1 << k, 1 << k);
  const std::size_t dim = std::size_t{1} << n;
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      bool same_rest = true;
      for (int p = 1; p <= n && same_rest; ++p) {
        if (std::find(keep.begin(), keep.end(), p) != keep.end()) continue;
        same_rest = bit_of(a, n, p) == bit_of(b, n, p);
      }
      if (!same_rest) continue;
      int r = 0;
      int c = 0;
      for (int t = 0; t < k; ++t) {
        r = 2 * r + bit_of(a, n, keep[t]);
        c = 2 * c + bit_of(b, n, keep[t]);
      }
      rho(r, c) += psi[a] * std::conj(psi[b]);
    }
  }
  return rho;
}

inline double one_tangle(const Vec& psi, int n, int focus) {
  const Mat r = marginal(psi, n, {focus});
  return 4.0 * std::real(r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0));
}

/// Eigenvalues of rho * Y rho^* Y from a general complex eigensolver,
/// real parts sorted descending.
inline std::array<double, 4> wootters_lambdas(const Mat& rho) {
  Eigen::Matrix2cd sy;
  sy << 0, C(0, -1), C(0, 1), 0;
  Mat yy(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) yy(r, c) = sy(r / 2, c / 2) * sy(r % 2, c % 2);
  const Mat product = rho * (yy * rho.conjugate() * yy);
  Eigen::ComplexEigenSolver<Mat> es(product, false);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()[i].real();
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline double concurrence(const Mat& rho) {
  const auto l = wootters_lambdas(rho);
  double s[4];
  for (int i = 0; i < 4; ++i) s[i] = std::sqrt(std::max(0.0, l[i]));
  return s[0] - s[1] - s[2] - s[3];
}

/// Characteristic-polynomial coefficients e1..e4 of rho * rho~.
inline std::array<double, 4> char_poly(const Mat& rho) {
  const auto l = wootters_lambdas(rho);
  return {l[0] + l[1] + l[2] + l[3],
          l[0] * l[1] + l[0] * l[2] + l[0] * l[3] + l[1] * l[2] + l[1] * l[3] + l[2] * l[3],
          l[0] * l[1] * l[2] + l[0] * l[1] * l[3] + l[0] * l[2] * l[3] + l[1] * l[2] * l[3],
          l[0] * l[1] * l[2] * l[3]};
}

/// 4 |Cayley hyperdeterminant| of a three-qubit amplitude vector (index 4i+2j+k).
inline double three_tangle(const Vec& a) {
  auto x = [&](int i, int j, int k) { return a[4 * i + 2 * j + k]; };
  const C d1 = x(0, 0, 0) * x(0, 0, 0) * x(1, 1, 1) * x(1, 1, 1) +
               x(0, 0, 1) * x(0, 0, 1) * x(1, 1, 0) * x(1, 1, 0) +
               x(0, 1, 0) * x(0, 1, 0) * x(1, 0, 1) * x(1, 0, 1) +
               x(1, 0, 0) * x(1, 0, 0) * x(0, 1, 1) * x(0, 1, 1);
  const C d2 = x(0, 0, 0) * x(1, 1, 1) * x(0, 1, 1) * x(1, 0, 0) +
               x(0, 0, 0) * x(1, 1, 1) * x(1, 0, 1) * x(0, 1, 0) +
               x(0, 0, 0) * x(1, 1, 1) * x(1, 1, 0) * x(0, 0, 1) +
               x(0, 1, 1) * x(1, 0, 0) * x(1, 0, 1) * x(0, 1, 0) +
               x(0, 1, 1) * x(1, 0, 0) * x(1, 1, 0) * x(0, 0, 1) +
               x(1, 0, 1) * x(0, 1, 0) * x(1, 1, 0) * x(0, 0, 1);
  const C d3 = x(0, 0, 0) * x(1, 1, 0) * x(1, 0, 1) * x(0, 1, 1) +
               x(1, 1, 1) * x(0, 0, 1) * x(0, 1, 0) * x(1, 0, 0);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

/// Ensemble-average three-tangle over decompositions of rho obtained from
/// the first r columns of Haar m x m unitaries.
class RandomDecompositions {
 public:
  explicit RandomDecompositions(const Mat& rho, double rank_tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    for (int i = 0; i < rho.rows(); ++i) {
      if (es.eigenvalues()[i] > rank_tol) {
        scaled_.conservativeResize(rho.rows(), scaled_.cols() + 1);
        scaled_.col(scaled_.cols() - 1) = std::sqrt(es.eigenvalues()[i]) * es.eigenvectors().col(i);
      }
    }
  }

  int rank() const { return static_cast<int>(scaled_.cols()); }

  double sample(int m, std::mt19937_64& rng) const {
    const Mat u = random_unitary(std::max(m, rank()), rng);
    const Mat phis = scaled_ * u.leftCols(rank()).transpose();
    double total = 0;
    for (int i = 0; i < phis.cols(); ++i) {
      const double p = phis.col(i).squaredNorm();
      if (p > 1e-300) total += p * three_tangle(phis.col(i) / std::sqrt(p));
    }
    return total;
  }

 private:
  Mat scaled_;
};

inline double random_decomposition(const Mat& rho, int m, std::mt19937_64& rng) {
  return RandomDecompositions(rho).sample(m, rng);
}

/// Kronecker product of 2x2 unitaries, qubit 1 leftmost.
inline Mat local_unitary(const std::vector<Mat>& us) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& u : us) {
    Mat next(out.rows() * 2, out.cols() * 2);
    for (int r = 0; r < out.rows(); ++r)
      for (int c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * u;
    out = next;
  }
  return out;
}

}  // namespace oracle
