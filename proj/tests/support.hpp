#pragma once

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tanglekit/qstate.hpp"

namespace testing {

inline tanglekit::PureState to_state(const oracle::Vec& v) {
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(v.size()))));
  return tanglekit::PureState(n, v);
}

inline tanglekit::PureState basis_state(int n, std::size_t index) {
  tanglekit::VectorXc v = tanglekit::VectorXc::Zero(std::size_t{1} << n);
  v[static_cast<Eigen::Index>(index)] = 1;
  return tanglekit::PureState(n, v);
}

inline tanglekit::PureState random_pure(int n, std::mt19937_64& rng) {
  return to_state(oracle::random_state(n, rng));
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
