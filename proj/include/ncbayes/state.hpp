#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ncbayes/algebra.hpp"

namespace ncbayes {

/// A state on an AlgebraBasis, omega(a) = tr(rho a).
///
/// The stored density is the Hilbert-Schmidt projection of the supplied
/// matrix onto the algebra, i.e. the density of omega relative to the ambient
/// trace restricted to the algebra. Expectations on the algebra are
/// unchanged by this, and modular objects (log rho, rho^{it}) then belong to
/// the algebra itself.
class AlgState {
 public:
  AlgState(AlgebraPtr algebra, const CMatrix& density, const Tolerances& tol = {});

  const AlgebraBasis& algebra() const noexcept { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const noexcept { return algebra_; }
  const CMatrix& density() const noexcept { return density_; }

  Complex expect(const CMatrix& a) const;
  Complex operator()(const CMatrix& a) const { return expect(a); }

  /// Ascending eigenvalues of the density.
  const RVector& spectrum() const noexcept { return spectrum_; }
  double min_eigenvalue() const { return spectrum_(0); }
  bool faithful() const noexcept { return faithful_; }
  /// Faithful, but with the smallest eigenvalue inside the near-singular band.
  bool ill_conditioned() const noexcept { return ill_conditioned_; }

  /// Same functional viewed on a subalgebra.
  AlgState restrict_to(AlgebraPtr sub) const;

 private:
  AlgebraPtr algebra_;
  CMatrix density_;
  RVector spectrum_;
  bool faithful_ = false;
  bool ill_conditioned_ = false;
  Tolerances tol_;
};

/// rho = 1/n: the unbiased (tracial) state.
AlgState tracial_state(AlgebraPtr alg, const Tolerances& tol = {});

/// Classical probability space over m labelled outcomes; sigma is the power set.
class FiniteProbabilitySpace {
 public:
  FiniteProbabilitySpace(std::vector<std::string> outcomes, std::vector<double> mu, double tol = 1e-10);
  /// Uniform measure over outcomes "1".."m".
  static FiniteProbabilitySpace uniform(std::size_t m);

  std::size_t size() const noexcept { return mu_.size(); }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  const std::vector<double>& mu() const noexcept { return mu_; }

 private:
  std::vector<std::string> outcomes_;
  std::vector<double> mu_;
};

/// Zero-based outcome indices; duplicates are ignored.
using Event = std::vector<std::size_t>;

double probability(const FiniteProbabilitySpace& space, const Event& event);
/// Diagonal projection onto the event inside M_m.
CMatrix indicator(const Event& event, std::size_t m);
Event intersection(const Event& a, const Event& b);

struct ClassicalEmbedding {
  AlgebraPtr algebra;
  AlgState state;
};

/// Diagonal subalgebra of M_m with rho = diag(mu).
ClassicalEmbedding embed_classical(const FiniteProbabilitySpace& space, const Tolerances& tol = {});

}  // namespace ncbayes
