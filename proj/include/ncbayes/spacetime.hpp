#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncbayes/errors.hpp"
#include "ncbayes/types.hpp"

namespace ncbayes {

/// Flat space R^d with metric diag(-1, +1, ..., +1).
struct FlatSpace {
  int dim = 4;

  explicit FlatSpace(int d) : dim(d) {
    if (d < 2) throw InvalidArgument("flat space needs dimension >= 2");
  }

  template <typename Scalar = double>
  Matrix<Scalar> metric() const {
    Matrix<Scalar> eta = Matrix<Scalar>::Identity(dim, dim);
    eta(0, 0) = Scalar(-1);
    return eta;
  }
};

/// X(x) = A x + b. With an integer Scalar the field is stored exactly.
template <typename Scalar>
struct AffineKillingField {
  int dim = 0;
  Matrix<Scalar> linear;
  Vector<Scalar> shift;
  std::string name;

  template <typename Point>
  auto operator()(const Point& x) const {
    using R = typename Point::Scalar;
    return (linear.template cast<R>() * x + shift.template cast<R>()).eval();
  }

  template <typename Other>
  AffineKillingField<Other> cast() const {
    return {dim, linear.template cast<Other>(), shift.template cast<Other>(), name};
  }
};

/// T_(i) = d/dx^i.
template <typename Scalar = int>
AffineKillingField<Scalar> translation(int dim, int i) {
  AffineKillingField<Scalar> f{dim, Matrix<Scalar>::Zero(dim, dim), Vector<Scalar>::Zero(dim),
                               "T" + std::to_string(i)};
  f.shift(i) = Scalar(1);
  return f;
}

/// L_{mu nu} = x_mu d_nu - x_nu d_mu with indices lowered by eta.
template <typename Scalar = int>
AffineKillingField<Scalar> lorentz_generator(int dim, int mu, int nu) {
  const Matrix<Scalar> eta = FlatSpace(dim).metric<Scalar>();
  AffineKillingField<Scalar> f{dim, Matrix<Scalar>::Zero(dim, dim), Vector<Scalar>::Zero(dim),
                               "L" + std::to_string(mu) + std::to_string(nu)};
  // component rho: x_mu delta^rho_nu - x_nu delta^rho_mu
  f.linear.row(nu) += eta.row(mu);
  f.linear.row(mu) -= eta.row(nu);
  return f;
}

template <typename Scalar = int>
AffineKillingField<Scalar> dilation(int dim) {
  return {dim, Matrix<Scalar>::Identity(dim, dim), Vector<Scalar>::Zero(dim), "D"};
}

/// The d translations followed by the d(d-1)/2 generators L_{mu nu}, nu > mu.
template <typename Scalar = int>
std::vector<AffineKillingField<Scalar>> poincare_generators(int dim) {
  std::vector<AffineKillingField<Scalar>> out;
  for (int i = 0; i < dim; ++i) out.push_back(translation<Scalar>(dim, i));
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = mu + 1; nu < dim; ++nu) out.push_back(lorentz_generator<Scalar>(dim, mu, nu));
  return out;
}

template <typename Scalar = int>
std::vector<AffineKillingField<Scalar>> lorentz_generators(int dim) {
  std::vector<AffineKillingField<Scalar>> out;
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = mu + 1; nu < dim; ++nu) out.push_back(lorentz_generator<Scalar>(dim, mu, nu));
  return out;
}

/// max |(eta A) + (eta A)^T|: the Lie derivative of eta along X, exactly.
template <typename Scalar>
Scalar killing_residual(const AffineKillingField<Scalar>& field) {
  const Matrix<Scalar> lowered = FlatSpace(field.dim).metric<Scalar>() * field.linear;
  const Matrix<Scalar> sym = lowered + lowered.transpose();
  return sym.cwiseAbs().maxCoeff();
}

/// Dimension of the affine Killing algebra, as the nullity of (A, b) -> sym(eta A).
int isometry_algebra_dim(const FlatSpace& space);

enum class WedgeLabel { W1, W2, W3, W4, HorizonA, HorizonB, Bifurcation };
std::string to_string(WedgeLabel label);

/// Region of x with respect to the bifurcation surface x^0 = x^1 = 0.
/// W1/W2: |x^1| < |x^0| with x^0 > 0 / x^0 < 0; W3/W4: |x^1| > |x^0| with
/// x^1 > 0 / x^1 < 0; hA: x^0 = x^1; hB: x^0 = -x^1; S: both zero.
/// Horizon membership uses the band |x^0 -+ x^1| <= tol.
WedgeLabel wedge_classify(const RVector& x, double tol = 1e-12);

/// Flow of the boost field x^1 d_0 + x^0 d_1 (that is, -L_{01}) for parameter t.
RVector boost_flow(const RVector& x, double t);

double minkowski_product(const RVector& u, const RVector& v);

enum class CausalCharacter { Timelike, Null, Spacelike };
std::string to_string(CausalCharacter c);

/// Sign of eta(X(x), X(x)), with |.| <= tol * max(1, |X|^2) read as null.
CausalCharacter timelike_character(const AffineKillingField<double>& field, const RVector& x, double tol = 1e-12);

/// |eta(X(p), p)|; zero iff X(p) is tangent to the unit hyperboloid at p.
/// Throws OffHyperboloid when |eta(p, p) - 1| > tol.
double ds_tangency_residual(const AffineKillingField<double>& field, const RVector& p, double tol = 1e-10);

/// Pullback of eta to the hyperboloid: eta(u, v) for tangent u, v at p.
/// Throws NotTangent when either vector leaves the tangent space.
double induced_metric(const RVector& p, const RVector& u, const RVector& v, double tol = 1e-10);

/// Points (sinh tau, cosh tau n) with n uniform on S^{d-2} and tau uniform in [-tau_max, tau_max].
std::vector<RVector> sample_hyperboloid(int dim, std::size_t count, std::uint64_t seed, double tau_max = 2.0);

}  // namespace ncbayes
