#include "ncbayes/matrices.hpp"

#include <cmath>

#include "ncbayes/errors.hpp"

namespace ncbayes {

using Eigen::Index;

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix matrix_unit(Index i, Index j, Index n) {
  if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument("matrix_unit index out of range");
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  return (a.adjoint() * b).trace() / static_cast<double>(a.rows());
}

double hs_norm(const CMatrix& a) { return a.norm() / std::sqrt(static_cast<double>(a.rows())); }

CMatrix hermitian_function(const CMatrix& h, const std::function<Complex(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& w = es.eigenvalues();
  CVector fw(w.size());
  for (Index k = 0; k < w.size(); ++k) fw(k) = f(w(k));
  return es.eigenvectors() * fw.asDiagonal() * es.eigenvectors().adjoint();
}

double hermiticity_residual(const CMatrix& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

CMatrix gibbs_density(const CMatrix& h, double beta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& w = es.eigenvalues();
  // shift by the ground energy so the largest weight is exactly 1
  const double e0 = w.minCoeff();
  RVector weights = (-beta * (w.array() - e0)).exp();
  weights /= weights.sum();
  return es.eigenvectors() * weights.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix random_complex_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

CMatrix random_unitary(Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex_matrix(n, n, rng));
  CMatrix q = qr.householderQ();
  // fix column phases so the distribution is Haar
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_density(Index n, std::mt19937_64& rng, double floor) {
  const CMatrix g = random_complex_matrix(n, n, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (1.0 - n * floor) * rho + floor * CMatrix::Identity(n, n);
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace ncbayes
