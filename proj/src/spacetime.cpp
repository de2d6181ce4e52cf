#include "ncbayes/spacetime.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace ncbayes {

int isometry_algebra_dim(const FlatSpace& space) {
  const int d = space.dim;
  const RMatrix eta = space.metric();
  // columns: the d^2 entries of A (column-major), then the d entries of b
  RMatrix map = RMatrix::Zero(d * d, d * d + d);
  for (int c = 0; c < d * d; ++c) {
    RMatrix a = RMatrix::Zero(d, d);
    a(c % d, c / d) = 1.0;
    const RMatrix lowered = eta * a;
    const RMatrix sym = lowered + lowered.transpose();
    map.col(c) = Eigen::Map<const RVector>(sym.data(), d * d);
  }
  Eigen::FullPivLU<RMatrix> lu(map);
  return static_cast<int>(map.cols() - lu.rank());
}

std::string to_string(WedgeLabel label) {
  switch (label) {
    case WedgeLabel::W1: return "W1";
    case WedgeLabel::W2: return "W2";
    case WedgeLabel::W3: return "W3";
    case WedgeLabel::W4: return "W4";
    case WedgeLabel::HorizonA: return "hA";
    case WedgeLabel::HorizonB: return "hB";
    case WedgeLabel::Bifurcation: return "S";
  }
  return "?";
}

WedgeLabel wedge_classify(const RVector& x, double tol) {
  if (x.size() < 2) throw InvalidArgument("wedge_classify needs at least two coordinates");
  const double t = x(0);
  const double s = x(1);
  if (std::abs(t) <= tol && std::abs(s) <= tol) return WedgeLabel::Bifurcation;
  if (std::abs(t - s) <= tol) return WedgeLabel::HorizonA;
  if (std::abs(t + s) <= tol) return WedgeLabel::HorizonB;
  if (std::abs(s) < std::abs(t)) return t > 0 ? WedgeLabel::W1 : WedgeLabel::W2;
  return s > 0 ? WedgeLabel::W3 : WedgeLabel::W4;
}

RVector boost_flow(const RVector& x, double t) {
  if (x.size() < 2) throw InvalidArgument("boost_flow needs at least two coordinates");
  RVector y = x;
  const double c = std::cosh(t);
  const double s = std::sinh(t);
  y(0) = x(0) * c + x(1) * s;
  y(1) = x(0) * s + x(1) * c;
  return y;
}

double minkowski_product(const RVector& u, const RVector& v) {
  if (u.size() != v.size() || u.size() < 1) throw InvalidArgument("minkowski_product: size mismatch");
  return u.dot(v) - 2.0 * u(0) * v(0);
}

std::string to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Null: return "null";
    case CausalCharacter::Spacelike: return "spacelike";
  }
  return "?";
}

CausalCharacter timelike_character(const AffineKillingField<double>& field, const RVector& x, double tol) {
  const RVector v = field(x);
  const double norm2 = minkowski_product(v, v);
  if (std::abs(norm2) <= tol * std::max(1.0, v.squaredNorm())) return CausalCharacter::Null;
  return norm2 < 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;
}

namespace {
void require_on_hyperboloid(const RVector& p, double tol) {
  const double q = minkowski_product(p, p);
  if (!(std::abs(q - 1.0) <= tol)) {
    std::ostringstream os;
    os << "point is off the unit hyperboloid (eta(p,p) = " << q << ")";
    throw OffHyperboloid(os.str());
  }
}
}  // namespace

double ds_tangency_residual(const AffineKillingField<double>& field, const RVector& p, double tol) {
  require_on_hyperboloid(p, tol);
  return std::abs(minkowski_product(field(p), p));
}

double induced_metric(const RVector& p, const RVector& u, const RVector& v, double tol) {
  require_on_hyperboloid(p, tol);
  for (const RVector* w : {&u, &v}) {
    const double r = std::abs(minkowski_product(*w, p));
    if (!(r <= tol * std::max(1.0, w->norm()))) {
      std::ostringstream os;
      os << "vector is not tangent to the hyperboloid (eta(u, p) = " << r << ")";
      throw NotTangent(os.str());
    }
  }
  return minkowski_product(u, v);
}

std::vector<RVector> sample_hyperboloid(int dim, std::size_t count, std::uint64_t seed, double tau_max) {
  if (dim < 2) throw InvalidArgument("sample_hyperboloid needs dimension >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-tau_max, tau_max);
  std::vector<RVector> out;
  out.reserve(count);
  while (out.size() < count) {
    RVector n(dim - 1);
    for (int i = 0; i < dim - 1; ++i) n(i) = normal(rng);
    const double len = n.norm();
    if (len == 0.0) continue;
    const double tau = uniform(rng);
    RVector p(dim);
    p(0) = std::sinh(tau);
    p.tail(dim - 1) = std::cosh(tau) * n / len;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace ncbayes
