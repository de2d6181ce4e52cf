#pragma once

#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncbayes/algebra.hpp"
#include "ncbayes/matrices.hpp"

namespace ncbayes::testing {

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Block structure sum_i M_{k_i} (x) 1_{m_i} with sum k_i m_i = n.
struct BlockShape {
  std::vector<std::pair<int, int>> blocks;  // (k, multiplicity)
  int expected_dim() const {
    int d = 0;
    for (auto [k, m] : blocks) d += k * k;
    return d;
  }
};

inline BlockShape random_shape(int n, std::mt19937_64& rng) {
  BlockShape shape;
  int left = n;
  while (left > 0) {
    std::uniform_int_distribution<int> pick_k(1, left);
    const int k = pick_k(rng);
    std::uniform_int_distribution<int> pick_m(1, left / k);
    const int m = pick_m(rng);
    shape.blocks.emplace_back(k, m);
    left -= k * m;
  }
  return shape;
}

/// U (sum_i M_{k_i} (x) 1_{m_i}) U^dagger as an explicit spanning set.
inline std::vector<CMatrix> block_spanning_set(int n, const BlockShape& shape, const CMatrix& u) {
  std::vector<CMatrix> out;
  int offset = 0;
  for (auto [k, m] : shape.blocks) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        CMatrix e = CMatrix::Zero(n, n);
        e.block(offset, offset, k * m, k * m) = kron(matrix_unit(i, j, k), CMatrix::Identity(m, m));
        out.push_back(u * e * u.adjoint());
      }
    offset += k * m;
  }
  return out;
}

struct RandomSubalgebra {
  BlockShape shape;
  AlgebraBasis algebra;
};

inline RandomSubalgebra random_subalgebra(int n, std::mt19937_64& rng) {
  BlockShape shape = random_shape(n, rng);
  const CMatrix u = random_unitary(n, rng);
  return {shape, AlgebraBasis::from_spanning_set(n, block_spanning_set(n, shape, u))};
}

/// Numerical rank of a family of matrices, via the singular values of their vectorizations.
inline int span_rank(const std::vector<CMatrix>& family, double tol = 1e-9) {
  if (family.empty()) return 0;
  const auto n2 = family.front().size();
  CMatrix stacked(n2, static_cast<Eigen::Index>(family.size()));
  for (std::size_t k = 0; k < family.size(); ++k)
    stacked.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const CVector>(family[k].data(), n2);
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * std::max(1.0, svd.singularValues()(0))) ++r;
  return r;
}

/// Dimension of the unital *-algebra generated by `gens`, by enumerating words
/// in the generators and their adjoints until the rank stops growing.
inline int closure_dimension_bruteforce(int n, const std::vector<CMatrix>& gens) {
  std::vector<CMatrix> letters;
  for (const auto& g : gens) {
    letters.push_back(g);
    letters.push_back(g.adjoint());
  }
  std::vector<CMatrix> words = {CMatrix::Identity(n, n)};
  std::vector<CMatrix> frontier = words;
  int rank = 1;
  for (int len = 1; len <= 2 * n * n && !letters.empty(); ++len) {
    std::vector<CMatrix> next;
    for (const auto& w : frontier)
      for (const auto& l : letters) next.push_back(w * l);
    words.insert(words.end(), next.begin(), next.end());
    const int r = span_rank(words);
    frontier = std::move(next);
    if (r == rank && len > 1) break;
    rank = r;
    if (frontier.size() > 4096) frontier.resize(4096);
  }
  return span_rank(words);
}

}  // namespace ncbayes::testing
