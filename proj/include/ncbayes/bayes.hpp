#pragma once

#include <numbers>
#include <optional>
#include <variant>

#include "ncbayes/modular.hpp"

namespace ncbayes {

/// Uniform-prior conditioning |A n B| / |B|. Throws ZeroConditioningEvent for empty B.
double classical_posterior(const FiniteProbabilitySpace& space, const Event& b_event, const Event& a_event);

/// The unbiased noncommutative prior: the tracial state. Only finite
/// dimensions are covered; an infinite algebra has no such state.
AlgState nc_prior(AlgebraPtr alg, const Tolerances& tol = {});

struct TracialPrior {};
using PriorPolicy = std::variant<TracialPrior, AlgState>;

struct InferenceProblem {
  AlgebraPtr total_algebra;
  AlgebraPtr accessible;
  AlgState true_state;
  PriorPolicy prior_policy = TracialPrior{};
};

/// Linear functional on an algebra, stored by its values on the basis.
class Posterior {
 public:
  Posterior(AlgebraPtr algebra, CVector values) : algebra_(std::move(algebra)), values_(std::move(values)) {}

  const CVector& values() const noexcept { return values_; }
  const AlgebraBasis& algebra() const noexcept { return *algebra_; }
  /// Extends by linearity through the orthonormal coordinates of x.
  Complex operator()(const CMatrix& x) const { return evaluate(x); }
  Complex evaluate(const CMatrix& x) const;

 private:
  AlgebraPtr algebra_;
  CVector values_;
};

struct InferenceDiagnostics {
  double takesaki_residual = 0.0;
  std::optional<CondExpectationResiduals> ce;
  bool ill_conditioned_prior = false;
};

struct InferenceResult {
  AlgState prior;
  std::optional<Posterior> posterior;  // present iff feasible
  bool feasible = false;
  InferenceDiagnostics diagnostics;
  std::optional<CondExpectation> expectation;
};

/// posterior(a) = omega_accessible(E(a)), E the prior-preserving conditional
/// expectation onto the accessible algebra. Infeasibility is reported in the
/// result, not thrown. Throws NonFaithfulPrior for a singular prior.
InferenceResult nc_bayes_update(const InferenceProblem& problem, const Tolerances& tol = {});

/// |posterior(P_{A n B}) / posterior(P_B) - classical_posterior(B, A)| through
/// the diagonal embedding with accessible algebra span{1, P_B}.
double classical_equivalence_check(const FiniteProbabilitySpace& space, const Event& b_event, const Event& a_event,
                                   const Tolerances& tol = {});

/// Thermofield-double surrogate of the vacuum-restriction prior.
struct WedgeDemo {
  Eigen::Index levels = 0;
  double beta = 0.0;
  AlgebraPtr total;          // M_d (x) M_d
  AlgebraPtr wedge;          // M_d (x) 1, the "W1" factor
  AlgState vacuum;           // pure TFD state on the total algebra
  CMatrix boost_hamiltonian; // diag(0, 1, ..., d-1) on one factor
  double kms_residual = 0.0; // reduced state against boost_hamiltonian (x) 1 at beta
  InferenceResult result;
};

/// Modified recipe: prior = product of the two one-sided restrictions of the
/// TFD (its wedge marginal is Gibbs(h_boost, beta)), CE onto M_d (x) 1.
WedgeDemo modified_bayes_demo(Eigen::Index levels, double beta = 2.0 * std::numbers::pi,
                              const Tolerances& tol = {});

}  // namespace ncbayes
