#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tanglekit {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = CMatrix<Real>;
using VectorXc = CVector<Real>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Matrix8c = Eigen::Matrix<Complex, 8, 8>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;
using Vector8c = Eigen::Matrix<Complex, 8, 1>;

/// Raised when a numerical iteration exceeds its cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or schema-violating input files.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tanglekit
