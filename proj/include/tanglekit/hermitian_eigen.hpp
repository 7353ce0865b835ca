#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "tanglekit/types.hpp"

namespace tanglekit {

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
template <typename Scalar>
struct HermitianEigen {
  RVector<Scalar> values;
  CMatrix<Scalar> vectors;  // column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for small dense Hermitian matrices.
///
/// Each rotation zeroes one off-diagonal pair (p, q). The element is first
/// made real by a phase on column q, then a real Jacobi rotation finishes it.
/// Sweeps continue until the off-diagonal Frobenius norm falls below
/// `eps * ||A||_F`. Throws ConvergenceError after `max_sweeps`.
///
/// Only the lower triangle's conjugate symmetry is assumed; the input is
/// Hermitized as (A + A^H) / 2 before iterating.
template <typename Derived>
HermitianEigen<typename Eigen::NumTraits<typename Derived::Scalar>::Real> hermitian_eigen(
    const Eigen::MatrixBase<Derived>& input, int max_sweeps = 64) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using C = std::complex<Scalar>;

  const Eigen::Index n = input.rows();
  if (input.cols() != n) {
    throw std::invalid_argument("hermitian_eigen: matrix must be square");
  }
  CMatrix<Scalar> a = input.template cast<C>();
  a = ((a + a.adjoint()) * Scalar(0.5)).eval();
  CMatrix<Scalar> v = CMatrix<Scalar>::Identity(n, n);

  const Scalar norm = a.norm();
  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
  const Scalar target = eps * std::max(norm, std::numeric_limits<Scalar>::min());

  auto off_norm = [&]() {
    Scalar s = 0;
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += std::norm(a(p, q));
    return std::sqrt(Scalar(2) * s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const C apq = a(p, q);
        const Scalar mag = std::abs(apq);
        if (mag <= Scalar(0.1) * target / Scalar(n)) continue;

        const C phase = apq / mag;
        const Scalar app = a(p, p).real();
        const Scalar aqq = a(q, q).real();
        const Scalar tau = (aqq - app) / (Scalar(2) * mag);
        const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = t * c;

        // J = [[c, s], [-s * conj(phase), c * conj(phase)]] on (p, q).
        const C jpp = c;
        const C jpq = s;
        const C jqp = -s * std::conj(phase);
        const C jqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {  // A <- A J
          const C akp = a(k, p);
          const C akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- J^H A
          const C apk = a(p, k);
          const C aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = C(0);
        a(q, p) = C(0);
        a(p, p) = C(a(p, p).real(), 0);
        a(q, q) = C(a(q, q).real(), 0);

        for (Eigen::Index k = 0; k < n; ++k) {  // V <- V J
          const C vkp = v(k, p);
          const C vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }
  if (off_norm() > target) {
    throw ConvergenceError("hermitian_eigen: iteration cap exceeded");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });

  HermitianEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace tanglekit
