#pragma once

#include <memory>
#include <vector>

#include "ncbayes/types.hpp"

namespace ncbayes {

/// A unital *-subalgebra of M_n(C), held as a basis orthonormal under
/// <a, b> = tr(a^dagger b) / n.
///
/// Construction goes through from_spanning_set() (orthonormalize only) or
/// generate_algebra() (closure). The constructor that takes a ready basis
/// validates orthonormality, *-closure and the identity, and throws
/// InvalidArgument otherwise.
class AlgebraBasis {
 public:
  AlgebraBasis(Eigen::Index ambient_dim, std::vector<CMatrix> orthonormal_basis,
               const Tolerances& tol = {});

  /// Orthonormalizes `spanning` (modified Gram-Schmidt, twice) without closing it.
  /// The result is not validated as an algebra; use for spans known to be closed.
  static AlgebraBasis from_spanning_set(Eigen::Index ambient_dim, const std::vector<CMatrix>& spanning,
                                        const Tolerances& tol = {});

  Eigen::Index ambient_dim() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(basis_.size()); }
  const std::vector<CMatrix>& basis() const noexcept { return basis_; }
  const CMatrix& operator[](Eigen::Index i) const { return basis_[static_cast<std::size_t>(i)]; }
  bool contains_identity() const noexcept { return contains_identity_; }

  /// Coefficients <b_i, x> of the orthogonal projection.
  CVector coordinates(const CMatrix& x) const;
  CMatrix from_coordinates(const CVector& c) const;
  CMatrix project(const CMatrix& x) const;
  /// Normalized Hilbert-Schmidt norm of x - project(x).
  double projection_residual(const CMatrix& x) const;
  bool contains(const CMatrix& x, double tol) const { return projection_residual(x) <= tol; }

  double orthonormality_residual() const;
  /// Largest projection residual of b_i b_j and b_i^dagger over all basis pairs.
  double closure_residual() const;

 private:
  AlgebraBasis() = default;
  void build_frame();

  Eigen::Index n_ = 0;
  std::vector<CMatrix> basis_;
  CMatrix frame_;  // columns vec(b_i) / sqrt(n); orthonormal in C^{n^2}
  bool contains_identity_ = false;
};

using AlgebraPtr = std::shared_ptr<const AlgebraBasis>;

/// Smallest unital *-closed span containing the generators.
AlgebraBasis generate_algebra(Eigen::Index ambient_dim, const std::vector<CMatrix>& generators,
                              const Tolerances& tol = {});

/// {x : xa = ax for every basis element a}.
AlgebraBasis commutant(const AlgebraBasis& alg, const Tolerances& tol = {});

AlgebraBasis full_matrix_algebra(Eigen::Index n);
AlgebraBasis diagonal_algebra(Eigen::Index n);
AlgebraBasis scalar_algebra(Eigen::Index n);

enum class TensorSlot { First, Second };
/// M_{d1} (x) 1 or 1 (x) M_{d2} inside M_{d1 d2}.
AlgebraBasis tensor_factor_algebra(Eigen::Index d1, Eigen::Index d2, TensorSlot slot);

/// max over both bases of the projection residual onto the other span.
double span_distance(const AlgebraBasis& a, const AlgebraBasis& b);

/// Largest residual of `sub` basis elements outside `alg`.
double containment_residual(const AlgebraBasis& sub, const AlgebraBasis& alg);

template <typename... Args>
AlgebraPtr make_algebra(Args&&... args) {
  return std::make_shared<const AlgebraBasis>(std::forward<Args>(args)...);
}
inline AlgebraPtr share(AlgebraBasis alg) { return std::make_shared<const AlgebraBasis>(std::move(alg)); }

}  // namespace ncbayes
