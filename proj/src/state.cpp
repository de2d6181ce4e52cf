#include "ncbayes/state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ncbayes/errors.hpp"
#include "ncbayes/matrices.hpp"

namespace ncbayes {

using Eigen::Index;

AlgState::AlgState(AlgebraPtr algebra, const CMatrix& density, const Tolerances& tol)
    : algebra_(std::move(algebra)), tol_(tol) {
  if (!algebra_) throw InvalidArgument("state needs an algebra");
  const Index n = algebra_->ambient_dim();
  if (density.rows() != n || density.cols() != n) throw InvalidArgument("density has the wrong shape");
  if (hermiticity_residual(density) > tol.tol) throw InvalidArgument("density is not Hermitian");
  if (std::abs(density.trace() - Complex(1.0)) > tol.tol) throw InvalidArgument("density trace is not 1");

  // a density already in the algebra is kept as given: the projection would add rounding
  // noise that distorts log rho when the spectrum spans many decades
  const bool inside = algebra_->dim() == n * n || algebra_->projection_residual(density) <= 1e-13;
  const CMatrix projected = inside ? density : algebra_->project(density);
  density_ = 0.5 * (projected + projected.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(density_, Eigen::EigenvaluesOnly);
  spectrum_ = es.eigenvalues();
  if (spectrum_(0) < -tol.tol) throw InvalidArgument("density has a negative eigenvalue");
  faithful_ = spectrum_(0) > tol.faithful;
  ill_conditioned_ = faithful_ && spectrum_(0) <= tol.ill_conditioned;
}

Complex AlgState::expect(const CMatrix& a) const {
  // tr(rho a) without forming the product
  return (density_.transpose().array() * a.array()).sum();
}

AlgState AlgState::restrict_to(AlgebraPtr sub) const { return AlgState(std::move(sub), density_, tol_); }

AlgState tracial_state(AlgebraPtr alg, const Tolerances& tol) {
  const Index n = alg->ambient_dim();
  return AlgState(std::move(alg), CMatrix::Identity(n, n) / static_cast<double>(n), tol);
}

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<std::string> outcomes, std::vector<double> mu,
                                               double tol)
    : outcomes_(std::move(outcomes)), mu_(std::move(mu)) {
  if (mu_.empty()) throw InvalidArgument("probability space needs at least one outcome");
  if (outcomes_.size() != mu_.size()) throw InvalidArgument("outcome labels and probabilities differ in length");
  double total = 0.0;
  for (double p : mu_) {
    if (!(p >= 0.0)) throw InvalidArgument("probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > tol) throw InvalidArgument("probabilities do not sum to 1");
}

FiniteProbabilitySpace FiniteProbabilitySpace::uniform(std::size_t m) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m; ++i) labels.push_back(std::to_string(i + 1));
  return FiniteProbabilitySpace(std::move(labels), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

namespace {
std::set<std::size_t> normalized(const Event& e, std::size_t m) {
  std::set<std::size_t> out;
  for (auto i : e) {
    if (i >= m) throw InvalidArgument("event index " + std::to_string(i) + " out of range");
    out.insert(i);
  }
  return out;
}
}  // namespace

double probability(const FiniteProbabilitySpace& space, const Event& event) {
  double p = 0.0;
  for (auto i : normalized(event, space.size())) p += space.mu()[i];
  return p;
}

CMatrix indicator(const Event& event, std::size_t m) {
  const auto n = static_cast<Index>(m);
  CMatrix p = CMatrix::Zero(n, n);
  for (auto i : normalized(event, m)) p(static_cast<Index>(i), static_cast<Index>(i)) = 1.0;
  return p;
}

Event intersection(const Event& a, const Event& b) {
  const std::set<std::size_t> sa(a.begin(), a.end());
  Event out;
  for (auto i : std::set<std::size_t>(b.begin(), b.end()))
    if (sa.count(i)) out.push_back(i);
  return out;
}

ClassicalEmbedding embed_classical(const FiniteProbabilitySpace& space, const Tolerances& tol) {
  const auto m = static_cast<Index>(space.size());
  auto alg = share(diagonal_algebra(m));
  RVector mu = Eigen::Map<const RVector>(space.mu().data(), m);
  CMatrix rho = mu.cast<Complex>().asDiagonal();
  // renormalize away rounding in the supplied probabilities
  rho /= rho.trace().real();
  AlgState state(alg, rho, tol);
  return {std::move(alg), std::move(state)};
}

}  // namespace ncbayes
