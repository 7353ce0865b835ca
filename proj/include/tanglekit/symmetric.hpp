#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace tanglekit {

/// Elementary symmetric polynomials e_1..e_4 of four values, expanded
/// term by term. With nonnegative inputs no cancellation occurs.
template <typename Scalar>
std::array<Scalar, 4> elementary_symmetric(const std::array<Scalar, 4>& x) {
  const Scalar e1 = x[0] + x[1] + x[2] + x[3];
  const Scalar e2 = x[0] * x[1] + x[0] * x[2] + x[0] * x[3] + x[1] * x[2] + x[1] * x[3] +
                    x[2] * x[3];
  const Scalar e3 = x[0] * x[1] * x[2] + x[0] * x[1] * x[3] + x[0] * x[2] * x[3] +
                    x[1] * x[2] * x[3];
  const Scalar e4 = x[0] * x[1] * x[2] * x[3];
  return {e1, e2, e3, e4};
}

/// Newton's identities: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i.
/// `power_sums[i]` holds p_{i+1}; returns e_1..e_K.
template <typename Scalar, std::size_t K>
std::array<Scalar, K> newton_elementary(const std::array<Scalar, K>& power_sums) {
  std::array<Scalar, K + 1> e{};
  e[0] = Scalar(1);
  for (std::size_t k = 1; k <= K; ++k) {
    Scalar acc = 0;
    Scalar sign = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      acc += sign * e[k - i] * power_sums[i - 1];
      sign = -sign;
    }
    e[k] = acc / Scalar(k);
  }
  std::array<Scalar, K> out{};
  for (std::size_t k = 0; k < K; ++k) out[k] = e[k + 1];
  return out;
}

}  // namespace tanglekit
