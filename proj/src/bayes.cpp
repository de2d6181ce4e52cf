#include "ncbayes/bayes.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "ncbayes/errors.hpp"
#include "ncbayes/matrices.hpp"

namespace ncbayes {

using Eigen::Index;

double classical_posterior(const FiniteProbabilitySpace& space, const Event& b_event, const Event& a_event) {
  const auto uniform = FiniteProbabilitySpace::uniform(space.size());
  const double pb = probability(uniform, b_event);
  if (!(pb > 0.0)) throw ZeroConditioningEvent("conditioning event is empty");
  return probability(uniform, intersection(a_event, b_event)) / pb;
}

AlgState nc_prior(AlgebraPtr alg, const Tolerances& tol) { return tracial_state(std::move(alg), tol); }

Complex Posterior::evaluate(const CMatrix& x) const {
  // x = sum_i <b_i, x> b_i, so the functional is sum_i <b_i, x> value_i
  return algebra_->coordinates(x).cwiseProduct(values_).sum();
}

InferenceResult nc_bayes_update(const InferenceProblem& problem, const Tolerances& tol) {
  const AlgebraPtr& total = problem.total_algebra;
  const AlgebraPtr& accessible = problem.accessible;
  if (!total || !accessible) throw InvalidArgument("inference problem needs both algebras");
  if (!accessible->contains_identity()) throw NotASubalgebra("accessible algebra is not unital");
  const double inside = containment_residual(*accessible, *total);
  if (!(inside <= tol.tol)) {
    std::ostringstream os;
    os << "accessible algebra is not contained in the total algebra (residual " << inside << ")";
    throw NotASubalgebra(os.str());
  }
  if (problem.true_state.algebra().ambient_dim() != total->ambient_dim())
    throw InvalidArgument("true state lives on a different ambient space");

  AlgState prior = std::holds_alternative<TracialPrior>(problem.prior_policy)
                       ? nc_prior(total, tol)
                       : std::get<AlgState>(problem.prior_policy).restrict_to(total);
  if (!prior.faithful()) {
    std::ostringstream os;
    os << "prior is not faithful (smallest density eigenvalue " << prior.min_eigenvalue() << ")";
    throw NonFaithfulPrior(os.str());
  }

  InferenceResult result{prior, std::nullopt, false, {}, std::nullopt};
  result.diagnostics.ill_conditioned_prior = prior.ill_conditioned();
  result.diagnostics.takesaki_residual = takesaki_check(prior, *accessible);
  if (!(result.diagnostics.takesaki_residual <= tol.tol)) return result;

  CondExpectation e = gns_projection(prior, accessible, tol);
  const CondExpectationResiduals residuals = ce_residuals(e, prior);
  result.diagnostics.ce = residuals;
  if (!(residuals.max() <= tol.tol)) {
    std::ostringstream os;
    os << "conditional expectation axioms fail (max residual " << residuals.max() << ")";
    throw PropertyFailure(os.str());
  }

  const auto& images = e.images();
  CVector values(static_cast<Index>(images.size()));
  const AlgState& truth = problem.true_state;
  for (std::size_t i = 0; i < images.size(); ++i) values(static_cast<Index>(i)) = truth.expect(images[i]);
  result.posterior.emplace(total, std::move(values));
  result.feasible = true;
  result.expectation.emplace(std::move(e));
  return result;
}

double classical_equivalence_check(const FiniteProbabilitySpace& space, const Event& b_event, const Event& a_event,
                                   const Tolerances& tol) {
  const double classical = classical_posterior(space, b_event, a_event);
  const auto m = space.size();
  auto embedding = embed_classical(space, tol);
  const CMatrix pb = indicator(b_event, m);
  auto accessible = share(generate_algebra(static_cast<Index>(m), {pb}, tol));

  InferenceProblem problem{embedding.algebra, accessible, embedding.state, TracialPrior{}};
  const InferenceResult result = nc_bayes_update(problem, tol);
  if (!result.feasible) throw PropertyFailure("tracial prior rejected by the modular gate");

  const Complex mass_b = (*result.posterior)(pb);
  if (!(std::abs(mass_b) > tol.tol))
    throw ZeroConditioningEvent("posterior assigns no mass to the conditioning event");
  const Complex joint = (*result.posterior)(indicator(intersection(a_event, b_event), m));
  return std::abs(joint / mass_b - classical);
}

WedgeDemo modified_bayes_demo(Index levels, double beta, const Tolerances& tol) {
  if (levels < 2) throw InvalidArgument("modified_bayes_demo needs at least 2 levels");
  if (!(beta > 0.0)) throw InvalidArgument("modified_bayes_demo needs beta > 0");
  const Index d = levels;

  RVector weights(d);
  for (Index k = 0; k < d; ++k) weights(k) = std::exp(-beta * static_cast<double>(k));
  weights /= weights.sum();

  CVector omega = CVector::Zero(d * d);
  for (Index k = 0; k < d; ++k) omega(k * d + k) = std::sqrt(weights(k));

  auto total = share(full_matrix_algebra(d * d));
  auto wedge = share(tensor_factor_algebra(d, d, TensorSlot::First));
  AlgState vacuum(total, omega * omega.adjoint(), tol);

  CMatrix boost = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) boost(k, k) = static_cast<double>(k);

  const CMatrix marginal = weights.cast<Complex>().asDiagonal();
  AlgState prior(total, kron(marginal, marginal), tol);

  InferenceProblem problem{total, wedge, vacuum, prior};
  InferenceResult result = nc_bayes_update(problem, tol);
  const double kms = kms_residual(vacuum.restrict_to(wedge), kron(boost, CMatrix::Identity(d, d)), beta);
  return WedgeDemo{d, beta, total, wedge, vacuum, boost, kms, std::move(result)};
}

}  // namespace ncbayes
