#pragma once

#include <functional>
#include <random>

#include "ncbayes/types.hpp"

namespace ncbayes {

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// e_{ij} in M_n (zero-based indices).
CMatrix matrix_unit(Eigen::Index i, Eigen::Index j, Eigen::Index n);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Normalized Hilbert-Schmidt inner product tr(a^dagger b) / n.
Complex hs_inner(const CMatrix& a, const CMatrix& b);
double hs_norm(const CMatrix& a);

/// f(h) for Hermitian h, through its eigendecomposition.
CMatrix hermitian_function(const CMatrix& h, const std::function<Complex(double)>& f);

double hermiticity_residual(const CMatrix& a);

/// e^{-beta h} / Z for Hermitian h.
CMatrix gibbs_density(const CMatrix& h, double beta);

/// Ginibre-style matrix with i.i.d. standard complex normal entries.
CMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng);
/// Full-rank density matrix with spectrum bounded away from zero by `floor`.
CMatrix random_density(Eigen::Index n, std::mt19937_64& rng, double floor = 1e-3);

}  // namespace ncbayes
