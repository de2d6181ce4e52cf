#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/QR>

#include "ncbayes/state.hpp"

namespace ncbayes {

/// H_mod = -log rho. Throws NonFaithfulState when rho is singular.
///
/// Sign convention: sigma_t(a) = rho^{it} a rho^{-it} = e^{-it H} a e^{it H},
/// so sigma_t is generated by -H_mod and the reversed flow sigma_{-t} by +H_mod.
/// The state is KMS at beta = 1 for sigma_{-t}:
/// kms_residual(state, modular_hamiltonian(state), 1) vanishes.
CMatrix modular_hamiltonian(const AlgState& state);

/// sigma_t(a) = rho^{it} a rho^{-it}.
CMatrix modular_flow(const AlgState& state, const CMatrix& a, double t);

/// max over basis pairs (a, b) of |omega(a e^{-beta h} b e^{beta h}) - omega(b a)|.
/// The flow alpha_t(b) = e^{ith} b e^{-ith} is KMS at beta iff this vanishes.
/// Throws KmsOverflow when beta * ||h|| is beyond `exp_bound`.
double kms_residual(const AlgState& state, const CMatrix& h, double beta, double exp_bound = 350.0);

/// Derivation form of the modular constraint: max over sub basis elements of
/// the residual of [H_mod, a] outside span(sub). Zero iff sigma_t preserves sub.
double takesaki_check(const AlgState& state, const AlgebraBasis& sub);

/// Linear map from the state's algebra onto a subalgebra, realized as the
/// orthogonal projection for <a, b>_omega = omega(a^dagger b), solved as the
/// least-squares fit of a rho^{1/2} by elements of span{b rho^{1/2}}.
class CondExpectation {
 public:
  CondExpectation(AlgebraPtr source, AlgebraPtr target, const AlgState& state);

  const AlgebraBasis& source() const noexcept { return *source_; }
  const AlgebraBasis& target() const noexcept { return *target_; }
  const AlgebraPtr& target_ptr() const noexcept { return target_; }

  CMatrix apply(const CMatrix& a) const;
  CMatrix operator()(const CMatrix& a) const { return apply(a); }
  /// Coefficients of E(a) in the target basis.
  CVector target_coordinates(const CMatrix& a) const;
  /// E applied to each source basis element.
  const std::vector<CMatrix>& images() const noexcept { return images_; }

 private:
  AlgebraPtr source_;
  AlgebraPtr target_;
  CMatrix sqrt_density_;
  Eigen::ColPivHouseholderQR<CMatrix> fit_;
  std::vector<CMatrix> images_;
};

/// Residuals of the five conditional-expectation axioms.
struct CondExpectationResiduals {
  double unital = 0.0;
  double idempotent = 0.0;
  double module = 0.0;
  double state_preserving = 0.0;
  double positivity = 0.0;  // max(0, -min eig) plus non-Hermiticity of E(x^dagger x)

  double max() const;
};

/// The GNS projection, built whether or not the modular constraint holds.
CondExpectation gns_projection(const AlgState& state, AlgebraPtr sub, const Tolerances& tol = {});

/// Evaluates every axiom; positivity uses `samples` random x drawn with `seed`.
CondExpectationResiduals ce_residuals(const CondExpectation& e, const AlgState& state, std::uint64_t seed = 0,
                                      int samples = 100);

/// State-preserving conditional expectation, gated on takesaki_check.
/// Throws ModularViolation when the gate fails and PropertyFailure when an
/// axiom residual exceeds tol after construction.
CondExpectation conditional_expectation(const AlgState& state, AlgebraPtr sub, const Tolerances& tol = {});

}  // namespace ncbayes
