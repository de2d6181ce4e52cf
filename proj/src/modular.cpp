#include "ncbayes/modular.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ncbayes/errors.hpp"
#include "ncbayes/matrices.hpp"

namespace ncbayes {

using Eigen::Index;

namespace {

void require_faithful(const AlgState& state, const char* where) {
  if (!state.faithful()) {
    std::ostringstream os;
    os << where << ": state is not faithful (smallest density eigenvalue " << state.min_eigenvalue() << ")";
    throw NonFaithfulState(os.str());
  }
}

void require_subalgebra(const AlgebraBasis& sub, const AlgebraBasis& alg, double tol) {
  const double r = containment_residual(sub, alg);
  if (!(r <= tol)) {
    std::ostringstream os;
    os << "subalgebra is not contained in the state's algebra (residual " << r << ")";
    throw NotASubalgebra(os.str());
  }
}

// tr(a b) for square matrices
Complex trace_product(const CMatrix& a, const CMatrix& b) { return (a.transpose().array() * b.array()).sum(); }

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

CMatrix modular_hamiltonian(const AlgState& state) {
  require_faithful(state, "modular_hamiltonian");
  CMatrix h = hermitian_function(state.density(), [](double p) { return Complex(-std::log(p)); });
  return 0.5 * (h + h.adjoint());
}

CMatrix modular_flow(const AlgState& state, const CMatrix& a, double t) {
  require_faithful(state, "modular_flow");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(state.density());
  const RVector& p = es.eigenvalues();
  CVector phase(p.size());
  for (Index k = 0; k < p.size(); ++k) phase(k) = std::polar(1.0, t * std::log(p(k)));
  const CMatrix& u = es.eigenvectors();
  const CMatrix forward = u * phase.asDiagonal() * u.adjoint();
  return forward * a * forward.adjoint();
}

double kms_residual(const AlgState& state, const CMatrix& h, double beta, double exp_bound) {
  const Index n = state.algebra().ambient_dim();
  if (h.rows() != n || h.cols() != n) throw InvalidArgument("kms_residual: Hamiltonian has the wrong shape");
  if (hermiticity_residual(h) > 1e-10 * std::max(1.0, max_abs(h)))
    throw InvalidArgument("kms_residual: Hamiltonian is not Hermitian");
  const CMatrix hh = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hh);
  const RVector& w = es.eigenvalues();
  const double radius = std::abs(beta) * w.cwiseAbs().maxCoeff();
  if (radius > exp_bound) {
    std::ostringstream os;
    os << "kms_residual: beta*||h|| = " << radius << " exceeds the exponential bound " << exp_bound;
    throw KmsOverflow(os.str());
  }
  const CMatrix& u = es.eigenvectors();
  const CMatrix down = u * (-beta * w).array().exp().matrix().cast<Complex>().asDiagonal() * u.adjoint();
  const CMatrix up = u * (beta * w).array().exp().matrix().cast<Complex>().asDiagonal() * u.adjoint();

  const auto& basis = state.algebra().basis();
  const CMatrix& rho = state.density();
  std::vector<CMatrix> rho_a;
  rho_a.reserve(basis.size());
  for (const auto& a : basis) rho_a.push_back(rho * a);

  double worst = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const CMatrix continued = down * basis[j] * up;  // alpha_{i beta}(b)
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Complex lhs = trace_product(rho_a[i], continued);
      const Complex rhs = trace_product(rho * basis[j], basis[i]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double takesaki_check(const AlgState& state, const AlgebraBasis& sub) {
  require_subalgebra(sub, state.algebra(), 1e-10);
  const CMatrix h = modular_hamiltonian(state);
  double worst = 0.0;
  for (const auto& a : sub.basis()) worst = std::max(worst, sub.projection_residual(h * a - a * h));
  return worst;
}

CondExpectation::CondExpectation(AlgebraPtr source, AlgebraPtr target, const AlgState& state)
    : source_(std::move(source)), target_(std::move(target)) {
  const auto& tb = target_->basis();
  const Index n = target_->ambient_dim();
  sqrt_density_ = hermitian_function(state.density(), [](double p) { return Complex(std::sqrt(std::max(p, 0.0))); });
  CMatrix columns(n * n, target_->dim());
  for (Index i = 0; i < target_->dim(); ++i) {
    const CMatrix weighted = tb[static_cast<std::size_t>(i)] * sqrt_density_;
    columns.col(i) = Eigen::Map<const CVector>(weighted.data(), n * n);
  }
  fit_.compute(columns);
  images_.reserve(source_->basis().size());
  for (const auto& a : source_->basis()) images_.push_back(apply(a));
}

CVector CondExpectation::target_coordinates(const CMatrix& a) const {
  const CMatrix weighted = a * sqrt_density_;
  return fit_.solve(CVector(Eigen::Map<const CVector>(weighted.data(), weighted.size())));
}

CMatrix CondExpectation::apply(const CMatrix& a) const {
  const CVector c = target_coordinates(a);
  CMatrix out = CMatrix::Zero(a.rows(), a.cols());
  for (Index i = 0; i < c.size(); ++i) out += c(i) * target_->basis()[static_cast<std::size_t>(i)];
  return out;
}

double CondExpectationResiduals::max() const {
  return std::max({unital, idempotent, module, state_preserving, positivity});
}

CondExpectation gns_projection(const AlgState& state, AlgebraPtr sub, const Tolerances& tol) {
  require_faithful(state, "gns_projection");
  require_subalgebra(*sub, state.algebra(), tol.tol);
  return CondExpectation(state.algebra_ptr(), std::move(sub), state);
}

CondExpectationResiduals ce_residuals(const CondExpectation& e, const AlgState& state, std::uint64_t seed,
                                      int samples) {
  CondExpectationResiduals r;
  const auto& src = e.source().basis();
  const auto& tgt = e.target().basis();
  const Index n = e.source().ambient_dim();
  const CMatrix id = CMatrix::Identity(n, n);

  r.unital = max_abs(e(id) - id);

  for (std::size_t i = 0; i < src.size(); ++i) {
    const CMatrix& ea = e.images()[i];
    r.idempotent = std::max(r.idempotent, max_abs(e(ea) - ea));
    r.state_preserving = std::max(r.state_preserving, std::abs(state(ea) - state(src[i])));
  }
  for (const auto& b : tgt) r.idempotent = std::max(r.idempotent, max_abs(e(b) - b));

  for (const auto& b : tgt)
    for (const auto& c : tgt)
      for (std::size_t i = 0; i < src.size(); ++i)
        r.module = std::max(r.module, max_abs(e(b * src[i] * c) - b * e.images()[i] * c));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < samples; ++s) {
    CMatrix x = CMatrix::Zero(n, n);
    for (const auto& a : src) {
      const double re = normal(rng);
      const double im = normal(rng);
      x += Complex(re, im) * a;
    }
    x /= hs_norm(x);
    const CMatrix y = e(x.adjoint() * x);
    const CMatrix herm = 0.5 * (y + y.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    const double violation = std::max(0.0, -es.eigenvalues()(0)) + 0.5 * max_abs(y - y.adjoint());
    r.positivity = std::max(r.positivity, violation);
  }
  return r;
}

CondExpectation conditional_expectation(const AlgState& state, AlgebraPtr sub, const Tolerances& tol) {
  const double gate = takesaki_check(state, *sub);
  if (!(gate <= tol.tol)) {
    std::ostringstream os;
    os << "modular flow does not preserve the subalgebra (residual " << gate << ")";
    throw ModularViolation(os.str(), gate);
  }
  CondExpectation e = gns_projection(state, std::move(sub), tol);
  const CondExpectationResiduals r = ce_residuals(e, state);
  if (!(r.max() <= tol.tol)) {
    std::ostringstream os;
    os << "conditional expectation axioms fail after construction: unital " << r.unital << ", idempotent "
       << r.idempotent << ", module " << r.module << ", state " << r.state_preserving << ", positivity "
       << r.positivity;
    throw PropertyFailure(os.str());
  }
  return e;
}

}  // namespace ncbayes
