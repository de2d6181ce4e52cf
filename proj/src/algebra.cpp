#include "ncbayes/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncbayes/errors.hpp"
#include "ncbayes/matrices.hpp"

namespace ncbayes {

using Eigen::Index;

namespace {

CVector vectorize(const CMatrix& x) {
  return Eigen::Map<const CVector>(x.data(), x.size()) / std::sqrt(static_cast<double>(x.rows()));
}

CMatrix unvectorize(const CVector& v, Index n) {
  return Eigen::Map<const CMatrix>(v.data(), n, n) * std::sqrt(static_cast<double>(n));
}

// Appends the component of `x` orthogonal to the current frame, if it is not negligible.
// `scale` bounds the norm x would have without rounding; x is dropped below drop * scale.
bool absorb(CMatrix& frame, Index& cols, const CMatrix& x, double drop, double scale = 0.0) {
  CVector v = vectorize(x);
  const double norm = v.norm();
  if (norm == 0.0 || norm <= drop * scale) return false;
  v /= norm;
  const auto q = frame.leftCols(cols);
  for (int pass = 0; pass < 2; ++pass) v -= q * (q.adjoint() * v);
  const double residual = v.norm();
  if (residual < drop) return false;
  if (cols == frame.cols()) frame.conservativeResize(Eigen::NoChange, std::max<Index>(2 * cols, 4));
  frame.col(cols++) = v / residual;
  return true;
}

void check_square(const CMatrix& x, Index n, const char* what) {
  if (x.rows() != n || x.cols() != n)
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(n) + "x" + std::to_string(n) +
                          " matrix, got " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
}

}  // namespace

AlgebraBasis::AlgebraBasis(Index ambient_dim, std::vector<CMatrix> orthonormal_basis, const Tolerances& tol)
    : n_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (n_ < 1) throw InvalidArgument("ambient dimension must be positive");
  for (const auto& b : basis_) check_square(b, n_, "AlgebraBasis");
  build_frame();
  if (orthonormality_residual() > tol.tol) throw InvalidArgument("basis is not orthonormal");
  if (!contains_identity_) throw InvalidArgument("span does not contain the identity");
  if (closure_residual() > tol.tol) throw InvalidArgument("span is not closed under product and adjoint");
}

AlgebraBasis AlgebraBasis::from_spanning_set(Index ambient_dim, const std::vector<CMatrix>& spanning,
                                             const Tolerances& tol) {
  if (ambient_dim < 1) throw InvalidArgument("ambient dimension must be positive");
  CMatrix frame(ambient_dim * ambient_dim, std::max<Index>(static_cast<Index>(spanning.size()), 1));
  Index cols = 0;
  for (const auto& x : spanning) {
    check_square(x, ambient_dim, "from_spanning_set");
    absorb(frame, cols, x, tol.rank_drop);
  }
  AlgebraBasis out;
  out.n_ = ambient_dim;
  out.basis_.reserve(static_cast<std::size_t>(cols));
  for (Index k = 0; k < cols; ++k) out.basis_.push_back(unvectorize(frame.col(k), ambient_dim));
  out.build_frame();
  return out;
}

void AlgebraBasis::build_frame() {
  frame_.resize(n_ * n_, dim());
  for (Index k = 0; k < dim(); ++k) frame_.col(k) = vectorize(basis_[static_cast<std::size_t>(k)]);
  contains_identity_ = dim() > 0 && projection_residual(CMatrix::Identity(n_, n_)) <= 1e-10;
}

CVector AlgebraBasis::coordinates(const CMatrix& x) const { return frame_.adjoint() * vectorize(x); }

CMatrix AlgebraBasis::from_coordinates(const CVector& c) const {
  return unvectorize(frame_ * c, n_);
}

CMatrix AlgebraBasis::project(const CMatrix& x) const { return from_coordinates(coordinates(x)); }

double AlgebraBasis::projection_residual(const CMatrix& x) const {
  const CVector v = vectorize(x);
  return (v - frame_ * (frame_.adjoint() * v)).norm();
}

double AlgebraBasis::orthonormality_residual() const {
  if (dim() == 0) return 0.0;
  return (frame_.adjoint() * frame_ - CMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

double AlgebraBasis::closure_residual() const {
  double worst = 0.0;
  for (const auto& a : basis_) {
    worst = std::max(worst, projection_residual(a.adjoint()));
    for (const auto& b : basis_) worst = std::max(worst, projection_residual(a * b));
  }
  return worst;
}

AlgebraBasis generate_algebra(Index n, const std::vector<CMatrix>& generators, const Tolerances& tol) {
  if (n < 1) throw InvalidArgument("ambient dimension must be positive");
  if (n > tol.max_ambient_dim)
    throw DimensionOverflow("ambient dimension " + std::to_string(n) + " exceeds the configured maximum " +
                            std::to_string(tol.max_ambient_dim));
  const Index cap = n * n;
  CMatrix frame(cap, std::min<Index>(cap, 4));
  Index cols = 0;
  absorb(frame, cols, CMatrix::Identity(n, n), tol.rank_drop);
  for (const auto& g : generators) {
    check_square(g, n, "generate_algebra");
    absorb(frame, cols, g, tol.rank_drop);
    absorb(frame, cols, g.adjoint(), tol.rank_drop);
  }

  for (int round = 0;; ++round) {
    if (round >= tol.max_closure_rounds)
      throw DimensionOverflow("closure did not saturate within " + std::to_string(tol.max_closure_rounds) +
                              " rounds");
    const Index before = cols;
    std::vector<CMatrix> current;
    current.reserve(static_cast<std::size_t>(before));
    for (Index k = 0; k < before; ++k) current.push_back(unvectorize(frame.col(k), n));
    // basis elements have unit normalized HS norm, so products are bounded by sqrt(n)
    const double product_scale = std::sqrt(static_cast<double>(n));
    for (const auto& a : current) {
      absorb(frame, cols, a.adjoint(), tol.rank_drop);
      for (const auto& b : current) absorb(frame, cols, a * b, tol.rank_drop, product_scale);
      if (cols > cap) throw DimensionOverflow("closure exceeded n^2 dimensions");
    }
    if (cols == before) break;
  }

  std::vector<CMatrix> spanning;
  spanning.reserve(static_cast<std::size_t>(cols));
  for (Index k = 0; k < cols; ++k) spanning.push_back(unvectorize(frame.col(k), n));
  return AlgebraBasis::from_spanning_set(n, spanning, tol);
}

AlgebraBasis commutant(const AlgebraBasis& alg, const Tolerances& tol) {
  const Index n = alg.ambient_dim();
  const Index n2 = n * n;
  const CMatrix id = CMatrix::Identity(n, n);
  // vec(xa - ax) = (a^T (x) 1 - 1 (x) a) vec(x) with column-major vec
  CMatrix gram = CMatrix::Zero(n2, n2);
  for (const auto& a : alg.basis()) {
    const CMatrix c = kron(a.transpose(), id) - kron(id, a);
    gram.noalias() += c.adjoint() * c;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const RVector& w = es.eigenvalues();
  const double scale = std::max(w.cwiseAbs().maxCoeff(), 1.0);
  std::vector<CMatrix> null_vectors;
  for (Index k = 0; k < n2; ++k) {
    if (w(k) <= 1e-10 * scale) null_vectors.push_back(unvectorize(es.eigenvectors().col(k), n));
  }
  return AlgebraBasis::from_spanning_set(n, null_vectors, tol);
}

AlgebraBasis full_matrix_algebra(Index n) {
  std::vector<CMatrix> units;
  units.reserve(static_cast<std::size_t>(n * n));
  // identity first keeps the first basis element equal to 1
  units.push_back(CMatrix::Identity(n, n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) units.push_back(matrix_unit(i, j, n));
  return AlgebraBasis::from_spanning_set(n, units);
}

AlgebraBasis diagonal_algebra(Index n) {
  std::vector<CMatrix> units{CMatrix::Identity(n, n)};
  for (Index i = 0; i < n; ++i) units.push_back(matrix_unit(i, i, n));
  return AlgebraBasis::from_spanning_set(n, units);
}

AlgebraBasis scalar_algebra(Index n) { return AlgebraBasis::from_spanning_set(n, {CMatrix::Identity(n, n)}); }

AlgebraBasis tensor_factor_algebra(Index d1, Index d2, TensorSlot slot) {
  const Index d = slot == TensorSlot::First ? d1 : d2;
  std::vector<CMatrix> units{CMatrix::Identity(d1 * d2, d1 * d2)};
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const CMatrix e = matrix_unit(i, j, d);
      units.push_back(slot == TensorSlot::First ? kron(e, CMatrix::Identity(d2, d2))
                                                : kron(CMatrix::Identity(d1, d1), e));
    }
  return AlgebraBasis::from_spanning_set(d1 * d2, units);
}

double containment_residual(const AlgebraBasis& sub, const AlgebraBasis& alg) {
  if (sub.ambient_dim() != alg.ambient_dim()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& b : sub.basis()) worst = std::max(worst, alg.projection_residual(b));
  return worst;
}

double span_distance(const AlgebraBasis& a, const AlgebraBasis& b) {
  return std::max(containment_residual(a, b), containment_residual(b, a));
}

}  // namespace ncbayes
