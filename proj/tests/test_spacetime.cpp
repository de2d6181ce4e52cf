#include <gtest/gtest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncbayes/spacetime.hpp"

using namespace ncbayes;

namespace {
RVector vec(std::initializer_list<double> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}
}  // namespace

TEST(Killing, Examples) {
  EXPECT_EQ(killing_residual(translation<int>(4, 0)), 0);
  EXPECT_EQ(killing_residual(lorentz_generator<int>(4, 0, 1)), 0);
  EXPECT_EQ(killing_residual(dilation<int>(4)), 2);
}

TEST(Killing, BoostMatrixOracle) {
  // L_01 = x_0 d_1 - x_1 d_0 = -x^0 d_1 - x^1 d_0
  const auto l01 = lorentz_generator<int>(4, 0, 1);
  Matrix<int> expected = Matrix<int>::Zero(4, 4);
  expected(1, 0) = -1;
  expected(0, 1) = -1;
  EXPECT_EQ(l01.linear, expected);
  const Matrix<int> eta = FlatSpace(4).metric<int>();
  const Matrix<int> lowered = eta * expected;
  EXPECT_EQ((lowered + lowered.transpose()).cwiseAbs().maxCoeff(), 0);
}

TEST(Killing, AllGeneratorsExact) {
  for (int d : {4, 5}) {
    const auto gens = poincare_generators<int>(d);
    EXPECT_EQ(static_cast<int>(gens.size()), d * (d + 1) / 2);
    for (const auto& g : gens) EXPECT_EQ(killing_residual(g), 0) << g.name;
  }
}

TEST(Killing, IsometryAlgebraDimension) {
  EXPECT_EQ(isometry_algebra_dim(FlatSpace(4)), 10);
  EXPECT_EQ(isometry_algebra_dim(FlatSpace(5)), 15);
  EXPECT_EQ(isometry_algebra_dim(FlatSpace(2)), 3);
  EXPECT_THROW(FlatSpace(1), InvalidArgument);
}

TEST(Wedges, Examples) {
  EXPECT_EQ(wedge_classify(vec({0, 0, 0, 0})), WedgeLabel::Bifurcation);
  EXPECT_EQ(wedge_classify(vec({1, 0, 0, 0})), WedgeLabel::W1);
  EXPECT_EQ(wedge_classify(vec({0, 1, 0, 0})), WedgeLabel::W3);
  EXPECT_EQ(wedge_classify(vec({-1, 0.5, 0, 0})), WedgeLabel::W2);
  EXPECT_EQ(wedge_classify(vec({0.5, -1, 0, 0})), WedgeLabel::W4);
  EXPECT_EQ(wedge_classify(vec({2, 2, 0, 0})), WedgeLabel::HorizonA);
  EXPECT_EQ(wedge_classify(vec({-2, 2, 0, 0})), WedgeLabel::HorizonB);
  EXPECT_EQ(wedge_classify(vec({0, 0, 3, -1})), WedgeLabel::Bifurcation);
}

TEST(Wedges, TilingMatchesInequalityOracle) {
  // independent inequality oracle; off the horizons exactly one region applies
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 2000; ++k) {
    const RVector x = vec({normal(rng), normal(rng), normal(rng), normal(rng)});
    const double t = x(0), s = x(1);
    const bool w1 = std::abs(s) < t && t > 0;
    const bool w2 = std::abs(s) < -t && t < 0;
    const bool w3 = std::abs(s) > std::abs(t) && s > 0;
    const bool w4 = std::abs(s) > std::abs(t) && s < 0;
    ASSERT_EQ(int(w1) + int(w2) + int(w3) + int(w4), 1);
    const WedgeLabel label = wedge_classify(x);
    const WedgeLabel expected = w1 ? WedgeLabel::W1 : w2 ? WedgeLabel::W2 : w3 ? WedgeLabel::W3 : WedgeLabel::W4;
    EXPECT_EQ(label, expected);
  }
}

TEST(Wedges, HorizonBand) {
  EXPECT_EQ(wedge_classify(vec({1 + 1e-13, 1, 0, 0})), WedgeLabel::HorizonA);
  EXPECT_EQ(wedge_classify(vec({1 + 1e-6, 1, 0, 0})), WedgeLabel::W1);
  EXPECT_EQ(wedge_classify(vec({1 + 1e-6, 1, 0, 0}), 1e-5), WedgeLabel::HorizonA);
}

TEST(BoostFlow, Examples) {
  const RVector x = vec({0.3, -1.2, 2.0, 0.5});
  EXPECT_LE((boost_flow(x, 0.0) - x).cwiseAbs().maxCoeff(), 0.0);
  for (double t : {-2.0, 0.5, 3.0}) {
    const RVector y = boost_flow(vec({0, 1, 0, 0}), t);
    EXPECT_NEAR(y(0), std::sinh(t), 1e-14);
    EXPECT_NEAR(y(1), std::cosh(t), 1e-14);
  }
}

TEST(BoostFlow, MatchesExponentialOfGenerator) {
  // flow of -L_01, whose matrix is [[0, 1], [1, 0]] in the (x^0, x^1) block
  const RMatrix gen = -lorentz_generator<double>(4, 0, 1).linear;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 20; ++k) {
    const RVector x = vec({normal(rng), normal(rng), normal(rng), normal(rng)});
    const double t = normal(rng);
    const RMatrix e = (t * gen).exp();
    EXPECT_LE((boost_flow(x, t) - e * x).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BoostFlow, PreservesIntervalAndFixesBifurcation) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> ut(-5, 5);
  for (int k = 0; k < 100; ++k) {
    const RVector x = vec({normal(rng), normal(rng), normal(rng), normal(rng)});
    const double t = ut(rng);
    const RVector y = boost_flow(x, t);
    EXPECT_NEAR(minkowski_product(y, y), minkowski_product(x, x), 1e-12 * std::max(1.0, std::cosh(2 * t)) * x.squaredNorm());
    const RVector s = vec({0, 0, normal(rng), normal(rng)});
    EXPECT_LE((boost_flow(s, t) - s).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(BoostFlow, LabelInvariance) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::uniform_real_distribution<double> ut(-5, 5);
  for (int k = 0; k < 1000; ++k) {
    const RVector x = vec({normal(rng), normal(rng), normal(rng), normal(rng)});
    const double t = ut(rng);
    EXPECT_EQ(wedge_classify(boost_flow(x, t)), wedge_classify(x));
  }
  // horizons are preserved as sets
  for (double t : {-3.0, 1.0, 4.0}) {
    EXPECT_EQ(wedge_classify(boost_flow(vec({1, 1, 0, 0}), t), 1e-9), WedgeLabel::HorizonA);
    EXPECT_EQ(wedge_classify(boost_flow(vec({-1, 1, 0, 0}), t), 1e-9), WedgeLabel::HorizonB);
  }
}

TEST(Timelike, Examples) {
  const auto l01 = lorentz_generator<double>(4, 0, 1);
  EXPECT_EQ(timelike_character(l01, vec({0, 1, 0, 0})), CausalCharacter::Timelike);
  EXPECT_EQ(timelike_character(l01, vec({1, 0, 0, 0})), CausalCharacter::Spacelike);
  EXPECT_EQ(timelike_character(l01, vec({1, 1, 0, 0})), CausalCharacter::Null);
}

TEST(Timelike, AuditOfWedgeLabels) {
  const auto l01 = lorentz_generator<double>(4, 0, 1);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  int w12 = 0, w34 = 0;
  for (int k = 0; k < 1000; ++k) {
    const RVector x = vec({normal(rng), normal(rng), normal(rng), normal(rng)});
    const WedgeLabel label = wedge_classify(x);
    const CausalCharacter c = timelike_character(l01, x);
    if (label == WedgeLabel::W1 || label == WedgeLabel::W2) {
      ++w12;
      EXPECT_EQ(c, CausalCharacter::Spacelike);
    } else if (label == WedgeLabel::W3 || label == WedgeLabel::W4) {
      ++w34;
      EXPECT_EQ(c, CausalCharacter::Timelike);
    }
  }
  EXPECT_GT(w12, 100);
  EXPECT_GT(w34, 100);
}

TEST(DeSitter, TangencyExamples) {
  const auto l01 = lorentz_generator<double>(5, 0, 1);
  const auto t2 = translation<double>(5, 2);
  for (const auto& p : sample_hyperboloid(5, 200, 7)) {
    EXPECT_LE(ds_tangency_residual(l01, p), 1e-12);
    EXPECT_NEAR(ds_tangency_residual(t2, p), std::abs(p(2)), 1e-15);
  }
  const RVector on_equator = vec({0, 1, 0, 0, 0});
  EXPECT_EQ(ds_tangency_residual(t2, on_equator), 0.0);
  EXPECT_THROW(ds_tangency_residual(l01, vec({0, 2, 0, 0, 0})), OffHyperboloid);
}

TEST(DeSitter, SamplesLieOnHyperboloid) {
  for (const auto& p : sample_hyperboloid(5, 1000, 9)) EXPECT_NEAR(minkowski_product(p, p), 1.0, 1e-10);
}

TEST(DeSitter, TangencyClosure) {
  const auto points = sample_hyperboloid(5, 1000, 11);
  for (const auto& f : lorentz_generators<double>(5)) {
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, ds_tangency_residual(f, p));
    EXPECT_LE(worst, 1e-10) << f.name;
  }
  for (int i = 0; i < 5; ++i) {
    const auto f = translation<double>(5, i);
    int bad = 0;
    for (const auto& p : points) bad += ds_tangency_residual(f, p) > 1e-10;
    EXPECT_GE(bad, 990) << f.name;
  }
}

TEST(DeSitter, InducedMetric) {
  const RVector p = vec({0, 1, 0, 0, 0});
  const RVector u = lorentz_generator<double>(5, 0, 1)(p);
  EXPECT_EQ(u, vec({-1, 0, 0, 0, 0}));
  EXPECT_EQ(induced_metric(p, u, u), -1.0);
  EXPECT_EQ(induced_metric(p, vec({0, 0, 1, 0, 0}), vec({0, 0, 0, 1, 0})), 0.0);
  EXPECT_THROW(induced_metric(p, vec({0, 1, 0, 0, 0}), u), NotTangent);

  // bilinearity on random tangent combinations
  const auto points = sample_hyperboloid(5, 20, 13);
  const auto gens = lorentz_generators<double>(5);
  std::mt19937_64 rng(14);
  std::normal_distribution<double> normal;
  for (const auto& q : points) {
    const RVector a = gens[0](q), b = gens[4](q), c = gens[7](q);
    const double s = normal(rng), t = normal(rng);
    const double lhs = induced_metric(q, s * a + t * b, c);
    const double rhs = s * induced_metric(q, a, c) + t * induced_metric(q, b, c);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)) * 10);
  }
}
