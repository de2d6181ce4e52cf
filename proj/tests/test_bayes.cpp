#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "ncbayes/bayes.hpp"
#include "ncbayes/errors.hpp"
#include "support.hpp"

using namespace ncbayes;
using namespace ncbayes::testing;

namespace {

// independent oracle: count outcomes
double count_ratio(const Event& b, const Event& a) {
  std::set<std::size_t> sb(b.begin(), b.end()), sa(a.begin(), a.end());
  std::size_t both = 0;
  for (auto x : sb) both += sa.count(x);
  return double(both) / double(sb.size());
}

InferenceResult update(AlgebraPtr total, AlgebraPtr acc, const CMatrix& truth, PriorPolicy prior = TracialPrior{}) {
  return nc_bayes_update({total, acc, AlgState(total, truth), std::move(prior)});
}

}  // namespace

TEST(ClassicalPosterior, Examples) {
  const auto dice = FiniteProbabilitySpace::uniform(6);
  EXPECT_NEAR(classical_posterior(dice, {1, 3, 5}, {1}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(classical_posterior(dice, {0, 1, 2, 3, 4, 5}, {0, 4}), 2.0 / 6.0, 1e-15);
  const auto four = FiniteProbabilitySpace::uniform(4);
  EXPECT_NEAR(classical_posterior(four, {0, 1, 2}, {2, 3}), count_ratio({0, 1, 2}, {2, 3}), 1e-15);
  EXPECT_NEAR(classical_posterior(four, {0, 1, 2}, {2, 3}), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(classical_posterior(dice, {}, {1}), ZeroConditioningEvent);
}

TEST(NcBayes, PinchingExample) {
  std::mt19937_64 rng(1);
  const auto m2 = share(full_matrix_algebra(2));
  const CMatrix truth = random_density(2, rng);
  const auto r = update(m2, share(diagonal_algebra(2)), truth);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(std::abs((*r.posterior)(matrix_unit(0, 0, 2)) - truth(0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs((*r.posterior)(pauli_x())), 0.0, 1e-12);
  EXPECT_NEAR(std::abs((*r.posterior)(pauli_y())), 0.0, 1e-12);
}

TEST(NcBayes, FullAndTrivialAccessible) {
  std::mt19937_64 rng(2);
  const auto m3 = share(full_matrix_algebra(3));
  const CMatrix truth = random_density(3, rng);
  const AlgState omega(m3, truth);
  const auto full = update(m3, m3, truth);
  const auto none = update(m3, share(scalar_algebra(3)), truth);
  ASSERT_TRUE(full.feasible && none.feasible);
  const AlgState tau = tracial_state(m3);
  for (const auto& b : m3->basis()) {
    EXPECT_LE(std::abs((*full.posterior)(b) - omega(b)), 1e-10);
    EXPECT_LE(std::abs((*none.posterior)(b) - tau(b)), 1e-10);
  }
}

TEST(NcBayes, NormalizationPositivityAndConsistency) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    const auto m = share(full_matrix_algebra(n));
    const auto acc = share(random_subalgebra(n, rng).algebra);
    const AlgState omega(m, random_density(n, rng));
    const auto r = nc_bayes_update({m, acc, omega, TracialPrior{}});
    ASSERT_TRUE(r.feasible);
    EXPECT_LE(r.diagnostics.takesaki_residual, 1e-10);
    const Posterior& post = *r.posterior;
    EXPECT_LE(std::abs(post(CMatrix::Identity(n, n)) - 1.0), 1e-10);
    for (const auto& a : acc->basis()) EXPECT_LE(std::abs(post(a) - omega(a)), 1e-10);
    for (int k = 0; k < 100; ++k) {
      const CMatrix x = random_complex_matrix(n, n, rng);
      const Complex v = post(x.adjoint() * x);
      EXPECT_GE(v.real(), -1e-10);
      EXPECT_LE(std::abs(v.imag()), 1e-10);
    }
  }
}

TEST(NcBayes, InfeasibleIsAResult) {
  const auto m2 = share(full_matrix_algebra(2));
  CMatrix prior = CMatrix::Zero(2, 2);
  prior.diagonal() << 0.9, 0.1;
  const auto r = update(m2, share(generate_algebra(2, {pauli_x()})), CMatrix::Identity(2, 2) / 2.0, AlgState(m2, prior));
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.posterior.has_value());
  EXPECT_GT(r.diagnostics.takesaki_residual, 0.1);
}

TEST(NcBayes, Errors) {
  const auto m2 = share(full_matrix_algebra(2));
  CMatrix pure = CMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  EXPECT_THROW(update(m2, m2, pure, AlgState(m2, pure)), NonFaithfulPrior);
  const auto d2 = share(diagonal_algebra(2));
  EXPECT_THROW(update(d2, m2, CMatrix::Identity(2, 2) / 2.0), NotASubalgebra);
}

TEST(NcBayes, ProductPriorGivesSliceMap) {
  std::mt19937_64 rng(4);
  const int d1 = 2, d2 = 3;
  const auto total = share(full_matrix_algebra(d1 * d2));
  const auto first = share(tensor_factor_algebra(d1, d2, TensorSlot::First));
  const CMatrix r1 = random_density(d1, rng), r2 = random_density(d2, rng);
  const AlgState prior(total, kron(r1, r2));
  const auto e = conditional_expectation(prior, first);
  for (int k = 0; k < 5; ++k) {
    const CMatrix a = random_complex_matrix(d1, d1, rng), b = random_complex_matrix(d2, d2, rng);
    // slice map: a (x) b -> tr(r2 b) a (x) 1
    const CMatrix expected = (r2 * b).trace() * kron(a, CMatrix::Identity(d2, d2));
    EXPECT_LE(max_abs(e(kron(a, b)) - expected), 1e-10);
  }
}

TEST(NcBayes, EntangledPriorSearchFindsObstruction) {
  // random entangled (non-product) priors on M_2 (x) M_2 never preserve the first factor
  std::mt19937_64 rng(5);
  const auto total = share(full_matrix_algebra(4));
  const auto first = share(tensor_factor_algebra(2, 2, TensorSlot::First));
  int found = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const AlgState prior(total, random_density(4, rng, 0.02));
    const auto r = nc_bayes_update({total, first, prior, prior});
    if (!r.feasible && r.diagnostics.takesaki_residual > 1e-8) ++found;
  }
  EXPECT_EQ(found, 20);
}

TEST(ClassicalEquivalence, Examples) {
  const auto dice = FiniteProbabilitySpace::uniform(6);
  EXPECT_LE(classical_equivalence_check(dice, {1, 3, 5}, {1}), 1e-12);
  EXPECT_LE(classical_equivalence_check(dice, {0, 1, 2, 3, 4, 5}, {2, 3}), 1e-12);
}

TEST(ClassicalEquivalence, RandomSpaces) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 8);
    std::vector<double> mu(m);
    double total = 0.0;
    for (auto& w : mu) total += (w = u(rng));
    for (auto& w : mu) w /= total;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < m; ++k) labels.push_back(std::to_string(k));
    const FiniteProbabilitySpace space(labels, mu);
    Event a, b;
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < m; ++k) {
      if (coin(rng)) a.push_back(k);
      if (coin(rng)) b.push_back(k);
    }
    if (b.empty()) b.push_back(m - 1);
    EXPECT_LE(classical_equivalence_check(space, b, a), 1e-10);
    EXPECT_NEAR(classical_posterior(space, b, a), count_ratio(b, a), 1e-15);
  }
}

TEST(ModifiedBayes, TwoLevelsAtTwoPi) {
  const WedgeDemo demo = modified_bayes_demo(2);
  EXPECT_DOUBLE_EQ(demo.beta, 2.0 * std::numbers::pi);
  EXPECT_LE(demo.kms_residual, 1e-10);
  ASSERT_TRUE(demo.result.feasible);
  EXPECT_LE(demo.result.diagnostics.takesaki_residual, 1e-10);
  // the global state is pure
  EXPECT_NEAR(demo.vacuum.spectrum().maxCoeff(), 1.0, 1e-12);
}

TEST(ModifiedBayes, PosteriorOnWedgeIsReducedState) {
  std::mt19937_64 rng(7);
  for (int d : {2, 3}) {
    const WedgeDemo demo = modified_bayes_demo(d);
    ASSERT_TRUE(demo.result.feasible) << d;
    const CMatrix eye = CMatrix::Identity(d, d);
    for (int k = 0; k < 5; ++k) {
      const CMatrix a = random_complex_matrix(d, d, rng);
      EXPECT_LE(std::abs((*demo.result.posterior)(kron(a, eye)) - demo.vacuum(kron(a, eye))), 1e-10);
    }
  }
}

TEST(ModifiedBayes, FourLevelProductPriorIsSingularAtTwoPi) {
  // smallest product weight is about e^{-12 pi}, below the faithfulness threshold
  EXPECT_THROW(modified_bayes_demo(4), NonFaithfulPrior);
  EXPECT_TRUE(modified_bayes_demo(4, 1.0).result.feasible);
}

TEST(ModifiedBayes, SecondFactorObservableExplicit) {
  // explicit 4x4 computation: E(1 (x) b) = tr(rho_2 b) 1, rho_2 = Gibbs(diag(0,1), 2 pi)
  const double beta = 2.0 * std::numbers::pi;
  const WedgeDemo demo = modified_bayes_demo(2, beta);
  const double p0 = 1.0 / (1.0 + std::exp(-beta)), p1 = 1.0 - p0;
  const CMatrix b = pauli_z();
  const Complex expected = p0 * 1.0 + p1 * -1.0;
  const CMatrix observable = kron(CMatrix::Identity(2, 2), b);
  EXPECT_LE(std::abs((*demo.result.posterior)(observable) - expected), 1e-12);
  EXPECT_LE(max_abs((*demo.result.expectation)(observable) - expected * CMatrix::Identity(4, 4)), 1e-12);
}

TEST(ModifiedBayes, KmsOnlyAtItsOwnTemperature) {
  const WedgeDemo demo = modified_bayes_demo(3, 1.5);
  EXPECT_LE(demo.kms_residual, 1e-10);
  const AlgState reduced = demo.vacuum.restrict_to(demo.wedge);
  EXPECT_GT(kms_residual(reduced, kron(demo.boost_hamiltonian, CMatrix::Identity(3, 3)), 2.0 * std::numbers::pi), 1e-3);
}
