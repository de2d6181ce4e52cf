#pragma once

#include <iosfwd>
#include <vector>

#include "ncbayes/multiprecision.hpp"
#include "ncbayes/types.hpp"

namespace ncbayes {

// Conventions: hbar = 1, quadratures ordered (x_1..x_M, p_1..p_M),
// [R_j, R_k] = i Omega_jk with Omega = [[0, 1], [-1, 0]], covariance
// gamma_jk = <{R_j, R_k}>/2 so the vacuum has symplectic eigenvalue 1/2.

/// Nearest-neighbour chain H = 1/2 sum p_j^2 + 1/2 x^T K x with Dirichlet ends,
/// K = tridiag(-kappa, m^2 + 2 kappa, -kappa).
struct HarmonicChain {
  int sites = 2;
  double mass = 1e-3;
  double coupling = 1.0;

  HarmonicChain(int sites, double mass, double coupling = 1.0);

  template <typename Scalar = double>
  Matrix<Scalar> coupling_matrix() const;
  /// Exact eigenpairs of K: omega_k^2 = m^2 + 2 kappa (1 - cos(pi k / (N+1))),
  /// modes sqrt(2/(N+1)) sin(pi j k / (N+1)), k = 1..N.
  template <typename Scalar = double>
  Vector<Scalar> squared_frequencies() const;
  template <typename Scalar = double>
  Matrix<Scalar> normal_modes() const;
};

template <typename Scalar>
Matrix<Scalar> symplectic_form(Eigen::Index modes);

template <typename Scalar>
class GaussianState {
 public:
  /// Validates symmetry and the uncertainty relation gamma + (i/2) Omega >= 0.
  explicit GaussianState(Matrix<Scalar> cov, double tol = 1e-10);

  Eigen::Index modes() const noexcept { return cov_.rows() / 2; }
  const Matrix<Scalar>& cov() const noexcept { return cov_; }
  auto x_block() const { return cov_.topLeftCorner(modes(), modes()); }
  auto p_block() const { return cov_.bottomRightCorner(modes(), modes()); }
  /// True when the x-p cross block vanishes.
  bool block_diagonal() const noexcept { return block_diagonal_; }

 private:
  Matrix<Scalar> cov_;
  bool block_diagonal_ = false;
};

/// gamma = S diag(nu, nu) S^T with S symplectic; nu sorted descending.
template <typename Scalar>
struct WilliamsonForm {
  Vector<Scalar> nu;
  Matrix<Scalar> symplectic;
};

/// Williamson normal form of a symmetric positive-definite 2M x 2M matrix.
/// Block-diagonal input goes through a Cholesky factor of the x block and the
/// symmetric eigenproblem of L^T P L, at any precision. Correlated input uses
/// the Hermitian eigenproblem of gamma^{1/2} (i Omega) gamma^{1/2} and is only
/// available in double precision.
template <typename Scalar>
WilliamsonForm<Scalar> williamson(const Matrix<Scalar>& positive);

template <typename Scalar>
Vector<Scalar> symplectic_spectrum(const GaussianState<Scalar>& state);

template <typename Scalar>
bool is_pure(const GaussianState<Scalar>& state, double tol = 1e-10);

/// Smallest eigenvalue of gamma + (i/2) Omega.
double uncertainty_margin(const GaussianState<double>& state);

template <typename Scalar>
GaussianState<Scalar> ground_state(const HarmonicChain& chain);

/// restrict(ground_state(chain), region) without forming the full covariance.
template <typename Scalar>
GaussianState<Scalar> restricted_ground_state(const HarmonicChain& chain, const std::vector<int>& region);

/// Sub-covariance on the chosen modes. Throws EmptyRegion.
template <typename Scalar>
GaussianState<Scalar> restrict(const GaussianState<Scalar>& state, const std::vector<int>& region);

/// rho = exp(-1/2 R^T kernel R) / Z.
template <typename Scalar>
struct EntanglementHamiltonian {
  Matrix<Scalar> kernel;
  Vector<Scalar> nu;             // symplectic spectrum, descending
  Vector<Scalar> mode_energies;  // eps_k = log((nu_k + 1/2)/(nu_k - 1/2)), same order as the spectrum
  Scalar log_norm;               // log Z
  double reconstruction_residual = 0.0;  // max |gibbs_covariance(kernel, 1) - gamma|
};

/// Smallest admissible nu - 1/2 at the working precision: epsilon^{3/4}.
template <typename Scalar>
Scalar faithfulness_floor();

/// Throws NonFaithfulReduced when some nu_k - 1/2 is below faithfulness_floor().
template <typename Scalar>
EntanglementHamiltonian<Scalar> entanglement_hamiltonian(const GaussianState<Scalar>& state);

/// Covariance of exp(-beta H) / Z for H = 1/2 R^T h R, h positive definite.
/// Block-diagonal h is handled at any precision; correlated h in double only.
template <typename Scalar>
Matrix<Scalar> gibbs_covariance(const Matrix<Scalar>& h, const Scalar& beta);

/// Pure state on two copies whose restriction to the first copy is
/// Gibbs(h, beta); modes ordered (copy 1, copy 2).
template <typename Scalar>
GaussianState<Scalar> tfd(const Matrix<Scalar>& h, const Scalar& beta);

/// Linear map exp(t Omega h) generated by H = 1/2 R^T h R on the quadratures.
RMatrix quadratic_flow(const RMatrix& h, double t);

GaussianState<double> thermal_mode(double omega, double beta);
GaussianState<double> two_mode_squeezed(double r);

/// Entanglement data for a ground-state reduction, computed in HighPrecision
/// with the working precision raised until every symplectic eigenvalue is
/// resolved from 1/2. Everything returned is rounded to double.
struct ReducedModularData {
  unsigned digits = 0;
  RMatrix kernel;
  RVector nu;
  RVector mode_energies;
  double min_log_gap = 0.0;  // log10(min nu_k - 1/2)
  double reconstruction_residual = 0.0;
};

ReducedModularData reduced_modular_data(const HarmonicChain& chain, const std::vector<int>& region,
                                        unsigned max_digits = 6000);

enum class ChainHalf { Left, Right };

struct ProfileRow {
  int site = 0;
  double distance = 0.0;  // from the entangling cut, in lattice units
  double he_weight = 0.0; // diagonal x-block entry of the entanglement kernel
  double bw_weight = 0.0; // 2 pi distance K_jj
  double rel_dev = 0.0;
};

struct BoostComparison {
  int sites = 0;
  double mass = 0.0;
  int window = 0;
  std::vector<ProfileRow> profile;  // ordered by distance from the cut
  double summary_deviation = 0.0;   // mean rel_dev over the `window` sites nearest the cut
  double slope_ratio = 0.0;         // least-squares he_weight / bw_weight over the window
  bool increasing_first_quarter = false;
  unsigned digits = 0;
  double reconstruction_residual = 0.0;
};

/// Compares the half-chain entanglement kernel with the discretized boost
/// weight 2 pi d_j K_jj near the cut.
BoostComparison boost_comparison(const HarmonicChain& chain, ChainHalf half = ChainHalf::Left, int window = 6);

/// CSV with header site_index,h_E_weight,bw_weight,rel_dev.
void write_profile_csv(std::ostream& os, const BoostComparison& report);

extern template class GaussianState<double>;
extern template class GaussianState<HighPrecision>;

}  // namespace ncbayes
