#include <gtest/gtest.h>

#include "ncbayes/algebra.hpp"
#include "ncbayes/errors.hpp"
#include "support.hpp"

using namespace ncbayes;
using namespace ncbayes::testing;

TEST(GenerateAlgebra, EmptyGeneratorsGiveScalars) {
  const auto a = generate_algebra(2, {});
  EXPECT_EQ(a.dim(), 1);
  EXPECT_TRUE(a.contains_identity());
}

TEST(GenerateAlgebra, SigmaXAgainstBruteForce) {
  const auto a = generate_algebra(2, {pauli_x()});
  EXPECT_EQ(a.dim(), closure_dimension_bruteforce(2, {pauli_x()}));
  EXPECT_EQ(a.dim(), 2);
  EXPECT_TRUE(a.contains(pauli_x(), 1e-12));
  EXPECT_FALSE(a.contains(pauli_z(), 1e-3));
}

TEST(GenerateAlgebra, SigmaXSigmaZIsFull) {
  const auto a = generate_algebra(2, {pauli_x(), pauli_z()});
  EXPECT_EQ(a.dim(), closure_dimension_bruteforce(2, {pauli_x(), pauli_z()}));
  EXPECT_EQ(a.dim(), 4);
}

TEST(GenerateAlgebra, NonHermitianGeneratorAgainstBruteForce) {
  // e_01 alone generates all of M_2 once adjoints are adjoined; diag(1,2,3) only the diagonal
  const CMatrix e01 = matrix_unit(0, 1, 3);
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, 3.0;
  for (const auto& gens : std::vector<std::vector<CMatrix>>{{e01}, {d}, {d, e01}, {e01 + matrix_unit(1, 2, 3)}}) {
    EXPECT_EQ(generate_algebra(3, gens).dim(), closure_dimension_bruteforce(3, gens));
  }
}

TEST(GenerateAlgebra, BasisIsOrthonormalAndClosed) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const auto sub = random_subalgebra(n, rng);
    const auto a = generate_algebra(n, sub.algebra.basis());
    EXPECT_LE(a.orthonormality_residual(), 1e-10);
    EXPECT_LE(a.closure_residual(), 1e-10);
    EXPECT_EQ(a.dim(), sub.shape.expected_dim());
  }
}

TEST(GenerateAlgebra, Idempotent) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<CMatrix> gens = {random_complex_matrix(n, n, rng)};
    if (trial % 3 == 0) gens = random_subalgebra(n, rng).algebra.basis();
    const auto a = generate_algebra(n, gens);
    const auto b = generate_algebra(n, a.basis());
    EXPECT_EQ(a.dim(), b.dim());
    EXPECT_LE(span_distance(a, b), 1e-10);
  }
}

TEST(GenerateAlgebra, DimensionOverflow) {
  EXPECT_THROW(generate_algebra(65, {}), DimensionOverflow);
  Tolerances small;
  small.max_ambient_dim = 3;
  EXPECT_THROW(generate_algebra(4, {}, small), DimensionOverflow);
}

TEST(GenerateAlgebra, SizeMismatchRejected) {
  EXPECT_THROW(generate_algebra(2, {CMatrix::Identity(3, 3)}), InvalidArgument);
}

TEST(Commutant, Examples) {
  EXPECT_EQ(commutant(full_matrix_algebra(2)).dim(), 1);
  const auto diag = diagonal_algebra(2);
  const auto c = commutant(diag);
  EXPECT_EQ(c.dim(), 2);
  EXPECT_LE(span_distance(c, diag), 1e-12);
  EXPECT_EQ(commutant(scalar_algebra(2)).dim(), 4);
}

TEST(Commutant, NullSpaceOracle) {
  // direct oracle: null space of x -> [x, a] stacked over the basis, by SVD
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 3;
    const auto sub = random_subalgebra(n, rng);
    const auto& basis = sub.algebra.basis();
    const Eigen::Index n2 = n * n;
    CMatrix map(n2 * static_cast<Eigen::Index>(basis.size()), n2);
    for (Eigen::Index c = 0; c < n2; ++c) {
      CMatrix x = CMatrix::Zero(n, n);
      x(c % n, c / n) = 1.0;
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const CMatrix comm = x * basis[k] - basis[k] * x;
        map.block(static_cast<Eigen::Index>(k) * n2, c, n2, 1) = Eigen::Map<const CVector>(comm.data(), n2);
      }
    }
    Eigen::JacobiSVD<CMatrix> svd(map);
    int nullity = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) < 1e-9) ++nullity;
    const auto comm = commutant(sub.algebra);
    EXPECT_EQ(comm.dim(), nullity);
    int expected = 0;
    for (auto [k, m] : sub.shape.blocks) expected += m * m;
    EXPECT_EQ(comm.dim(), expected);
    for (const auto& x : comm.basis())
      for (const auto& a : basis) EXPECT_LE(max_abs(x * a - a * x), 1e-10);
  }
}

TEST(Commutant, DoubleCommutantUpToSix) {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 4; ++trial) {
      const auto sub = random_subalgebra(n, rng);
      const auto generated = generate_algebra(n, sub.algebra.basis());
      const auto bicommutant = commutant(commutant(generated));
      EXPECT_LE(span_distance(bicommutant, generated), 1e-10) << "n = " << n;
    }
}

TEST(AlgebraBasis, ValidatingConstructorRejectsNonAlgebra) {
  const std::vector<CMatrix> not_closed = {CMatrix::Identity(2, 2), matrix_unit(0, 1, 2) * std::sqrt(2.0)};
  EXPECT_THROW(AlgebraBasis(2, not_closed), InvalidArgument);
  const std::vector<CMatrix> no_identity = {pauli_z()};
  EXPECT_THROW(AlgebraBasis(2, no_identity), InvalidArgument);
}

TEST(AlgebraBasis, TensorFactors) {
  const auto first = tensor_factor_algebra(2, 3, TensorSlot::First);
  const auto second = tensor_factor_algebra(2, 3, TensorSlot::Second);
  EXPECT_EQ(first.dim(), 4);
  EXPECT_EQ(second.dim(), 9);
  EXPECT_LE(span_distance(commutant(first), second), 1e-10);
  EXPECT_TRUE(first.contains(kron(pauli_y(), CMatrix::Identity(3, 3)), 1e-12));
}

TEST(AlgebraBasis, ProjectionAndCoordinates) {
  const auto diag = diagonal_algebra(3);
  CMatrix x = CMatrix::Constant(3, 3, Complex(1, 2));
  const CMatrix p = diag.project(x);
  EXPECT_LE(max_abs(p - CMatrix(x.diagonal().asDiagonal())), 1e-14);
  EXPECT_LE(max_abs(diag.from_coordinates(diag.coordinates(x)) - p), 1e-14);
  EXPECT_NEAR(diag.projection_residual(x), std::sqrt(6.0 * 5.0 / 3.0), 1e-12);
}
