#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ncbayes {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Numerical thresholds shared by the operator-algebra modules.
struct Tolerances {
  double tol = 1e-10;           // absolute residual tolerance on unit-normalized data
  double faithful = 1e-12;      // smallest density eigenvalue for a faithful state
  double rank_drop = 1e-12;     // Gram-Schmidt residual below which a vector is discarded
  double ill_conditioned = 1e-8;  // upper edge of the near-singular warning band
  int max_closure_rounds = 50;
  int max_ambient_dim = 64;
};

}  // namespace ncbayes
