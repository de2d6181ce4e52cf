#include "ncbayes/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <type_traits>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncbayes/errors.hpp"

namespace ncbayes {

using Eigen::Index;

namespace {

template <typename Scalar>
double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

template <typename Scalar>
double max_abs(const Matrix<Scalar>& m) {
  if (m.size() == 0) return 0.0;
  double worst = 0.0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      using std::abs;
      worst = std::max(worst, to_double(Scalar(abs(m(i, j)))));
    }
  return worst;
}

template <typename Scalar>
Scalar coth(const Scalar& x) {
  using std::tanh;
  return Scalar(1) / tanh(x);
}

template <typename Scalar>
Scalar pi() {
  using std::acos;
  return acos(Scalar(-1));
}

template <typename Scalar>
bool cross_block_zero(const Matrix<Scalar>& m) {
  const Index k = m.rows() / 2;
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      if (m(i, k + j) != Scalar(0) || m(k + i, j) != Scalar(0)) return false;
  return true;
}

std::vector<Index> checked_region(const std::vector<int>& region, Index modes) {
  if (region.empty()) throw EmptyRegion("region selects no modes");
  std::vector<Index> out;
  for (int r : region) {
    if (r < 0 || r >= modes) throw InvalidArgument("region index " + std::to_string(r) + " out of range");
    if (std::find(out.begin(), out.end(), Index(r)) != out.end())
      throw InvalidArgument("region index " + std::to_string(r) + " repeated");
    out.push_back(r);
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> block_diag(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

template <typename Scalar>
Matrix<Scalar> symmetrized(const Matrix<Scalar>& m) {
  return (Scalar(0.5) * (m + m.transpose())).eval();
}

// Reverses mode order within both quadrature halves.
template <typename Scalar>
WilliamsonForm<Scalar> descending(const Vector<Scalar>& nu_ascending, const Matrix<Scalar>& s) {
  const Index m = nu_ascending.size();
  WilliamsonForm<Scalar> out{nu_ascending.reverse(), Matrix<Scalar>(s.rows(), s.cols())};
  for (Index k = 0; k < m; ++k) {
    out.symplectic.col(k) = s.col(m - 1 - k);
    out.symplectic.col(m + k) = s.col(2 * m - 1 - k);
  }
  return out;
}

template <typename Scalar>
WilliamsonForm<Scalar> williamson_block(const Matrix<Scalar>& gamma) {
  using std::sqrt;
  const Index m = gamma.rows() / 2;
  const Matrix<Scalar> x = gamma.topLeftCorner(m, m);
  const Matrix<Scalar> p = gamma.bottomRightCorner(m, m);
  Eigen::LLT<Matrix<Scalar>> llt(x);
  if (llt.info() != Eigen::Success) throw UncertaintyViolation("x block is not positive definite");
  const Matrix<Scalar> l = llt.matrixL();
  const Matrix<Scalar> c = symmetrized<Scalar>(l.transpose() * p * l);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(c);
  if (es.info() != Eigen::Success) throw UncertaintyViolation("Williamson eigenproblem failed");
  if (!(es.eigenvalues()(0) > Scalar(0))) throw UncertaintyViolation("p block is not positive definite");
  Vector<Scalar> nu(m);
  for (Index k = 0; k < m; ++k) nu(k) = sqrt(es.eigenvalues()(k));
  const Matrix<Scalar>& u = es.eigenvectors();
  Vector<Scalar> root(m), inv_root(m);
  for (Index k = 0; k < m; ++k) {
    root(k) = sqrt(nu(k));
    inv_root(k) = Scalar(1) / root(k);
  }
  Matrix<Scalar> s = Matrix<Scalar>::Zero(2 * m, 2 * m);
  s.topLeftCorner(m, m) = l * u * inv_root.asDiagonal();
  s.bottomRightCorner(m, m) = llt.matrixU().solve(u) * root.asDiagonal();
  return descending<Scalar>(nu, s);
}

// S^{-1} = Omega S^T Omega^T for symplectic S, written out blockwise.
template <typename Scalar>
Matrix<Scalar> symplectic_inverse(const Matrix<Scalar>& s) {
  const Index m = s.rows() / 2;
  Matrix<Scalar> out(2 * m, 2 * m);
  out.topLeftCorner(m, m) = s.bottomRightCorner(m, m).transpose();
  out.topRightCorner(m, m) = -s.topRightCorner(m, m).transpose();
  out.bottomLeftCorner(m, m) = -s.bottomLeftCorner(m, m).transpose();
  out.bottomRightCorner(m, m) = s.topLeftCorner(m, m).transpose();
  return out;
}

WilliamsonForm<double> williamson_general(const RMatrix& gamma) {
  const Index m = gamma.rows() / 2;
  Eigen::SelfAdjointEigenSolver<RMatrix> root_solver(gamma);
  if (root_solver.eigenvalues()(0) <= 0.0) throw UncertaintyViolation("covariance is not positive definite");
  const RMatrix root = root_solver.operatorSqrt();
  const CMatrix i_omega = Complex(0, 1) * symplectic_form<double>(m).cast<Complex>();
  CMatrix g = root.cast<Complex>() * i_omega * root.cast<Complex>();
  g = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  // eigenvalues come as -nu (lower half) and +nu (upper half)
  RVector nu = es.eigenvalues().tail(m);
  if (nu(0) <= 0.0) throw UncertaintyViolation("degenerate symplectic spectrum");
  const CMatrix v = es.eigenvectors().rightCols(m);
  RMatrix o(2 * m, 2 * m);
  o.leftCols(m) = std::sqrt(2.0) * v.real();
  o.rightCols(m) = -std::sqrt(2.0) * v.imag();
  RVector scale(2 * m);
  scale << nu, nu;
  const RMatrix s = root * o * scale.cwiseSqrt().cwiseInverse().asDiagonal();
  return descending<double>(nu, s);
}

}  // namespace

// ---------------------------------------------------------------------------
// HarmonicChain

HarmonicChain::HarmonicChain(int n, double m, double kappa) : sites(n), mass(m), coupling(kappa) {
  if (n < 1) throw InvalidArgument("chain needs at least one site");
  if (!(m >= 0.0)) throw InvalidArgument("mass must be nonnegative");
  if (!(kappa > 0.0)) throw InvalidArgument("coupling must be positive");
}

template <typename Scalar>
Matrix<Scalar> HarmonicChain::coupling_matrix() const {
  Matrix<Scalar> k = Matrix<Scalar>::Zero(sites, sites);
  const Scalar diag = Scalar(mass) * Scalar(mass) + Scalar(2) * Scalar(coupling);
  for (int i = 0; i < sites; ++i) {
    k(i, i) = diag;
    if (i + 1 < sites) {
      k(i, i + 1) = -Scalar(coupling);
      k(i + 1, i) = -Scalar(coupling);
    }
  }
  return k;
}

template <typename Scalar>
Vector<Scalar> HarmonicChain::squared_frequencies() const {
  using std::cos;
  Vector<Scalar> w(sites);
  const Scalar step = pi<Scalar>() / Scalar(sites + 1);
  for (int k = 0; k < sites; ++k)
    w(k) = Scalar(mass) * Scalar(mass) + Scalar(2) * Scalar(coupling) * (Scalar(1) - cos(step * Scalar(k + 1)));
  return w;
}

template <typename Scalar>
Matrix<Scalar> HarmonicChain::normal_modes() const {
  using std::sin;
  using std::sqrt;
  // sin(pi j k / (N+1)) only depends on j k mod 2(N+1)
  const int period = 2 * (sites + 1);
  const Scalar step = pi<Scalar>() / Scalar(sites + 1);
  const Scalar norm = sqrt(Scalar(2) / Scalar(sites + 1));
  std::vector<Scalar> table(static_cast<std::size_t>(period));
  for (int r = 0; r < period; ++r) table[static_cast<std::size_t>(r)] = norm * sin(step * Scalar(r));
  Matrix<Scalar> u(sites, sites);
  for (int j = 0; j < sites; ++j)
    for (int k = 0; k < sites; ++k)
      u(j, k) = table[static_cast<std::size_t>(((j + 1) * (k + 1)) % period)];
  return u;
}

// ---------------------------------------------------------------------------
// GaussianState

template <typename Scalar>
Matrix<Scalar> symplectic_form(Index modes) {
  Matrix<Scalar> omega = Matrix<Scalar>::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes).setIdentity();
  omega.bottomLeftCorner(modes, modes) = -Matrix<Scalar>::Identity(modes, modes);
  return omega;
}

template <typename Scalar>
GaussianState<Scalar>::GaussianState(Matrix<Scalar> cov, double tol) : cov_(std::move(cov)) {
  if (cov_.rows() != cov_.cols() || cov_.rows() == 0 || cov_.rows() % 2 != 0)
    throw InvalidArgument("covariance must be a nonempty 2M x 2M matrix");
  const double scale = std::max(1.0, max_abs<Scalar>(cov_));
  const Matrix<Scalar> asym = cov_ - cov_.transpose();
  if (max_abs<Scalar>(asym) > tol * scale) throw InvalidArgument("covariance is not symmetric");
  block_diagonal_ = cross_block_zero(cov_);
  if constexpr (std::is_same_v<Scalar, double>) {
    const double margin = uncertainty_margin(*this);
    if (margin < -tol) {
      std::ostringstream os;
      os << "uncertainty relation violated (min eigenvalue " << margin << ")";
      throw UncertaintyViolation(os.str());
    }
  } else {
    // full check costs a Williamson decomposition; positivity of both blocks is checked here
    const Index m = modes();
    if (Eigen::LLT<Matrix<Scalar>>(x_block()).info() != Eigen::Success ||
        Eigen::LLT<Matrix<Scalar>>(p_block()).info() != Eigen::Success)
      throw UncertaintyViolation("covariance blocks are not positive definite");
    (void)m;
  }
}

template <typename Scalar>
WilliamsonForm<Scalar> williamson(const Matrix<Scalar>& positive) {
  if (positive.rows() != positive.cols() || positive.rows() % 2 != 0 || positive.rows() == 0)
    throw InvalidArgument("williamson needs a 2M x 2M matrix");
  if (cross_block_zero(positive)) return williamson_block(positive);
  if constexpr (std::is_same_v<Scalar, double>) {
    return williamson_general(positive);
  } else {
    throw InvalidArgument("correlated x-p blocks are only supported in double precision");
  }
}

template <typename Scalar>
Vector<Scalar> symplectic_spectrum(const GaussianState<Scalar>& state) {
  return williamson(state.cov()).nu;
}

template <typename Scalar>
bool is_pure(const GaussianState<Scalar>& state, double tol) {
  const Vector<Scalar> nu = symplectic_spectrum(state);
  for (Index k = 0; k < nu.size(); ++k) {
    using std::abs;
    if (to_double(Scalar(abs(nu(k) - Scalar(0.5)))) > tol) return false;
  }
  return true;
}

double uncertainty_margin(const GaussianState<double>& state) {
  CMatrix h = state.cov().cast<Complex>() + Complex(0, 0.5) * symplectic_form<double>(state.modes()).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <typename Scalar>
GaussianState<Scalar> ground_state(const HarmonicChain& chain) {
  std::vector<int> all(static_cast<std::size_t>(chain.sites));
  for (int i = 0; i < chain.sites; ++i) all[static_cast<std::size_t>(i)] = i;
  return restricted_ground_state<Scalar>(chain, all);
}

template <typename Scalar>
GaussianState<Scalar> restricted_ground_state(const HarmonicChain& chain, const std::vector<int>& region) {
  using std::sqrt;
  const auto rows = checked_region(region, chain.sites);
  const Vector<Scalar> w2 = chain.squared_frequencies<Scalar>();
  if (!(w2.minCoeff() > Scalar(1e-14))) throw SingularCoupling("coupling matrix is singular (zero mode)");
  const Matrix<Scalar> modes = chain.normal_modes<Scalar>();
  const Index n = static_cast<Index>(rows.size());
  Matrix<Scalar> u(n, chain.sites);
  for (Index i = 0; i < n; ++i) u.row(i) = modes.row(rows[static_cast<std::size_t>(i)]);
  Vector<Scalar> freq(chain.sites), inv_freq(chain.sites);
  for (Index k = 0; k < chain.sites; ++k) {
    freq(k) = sqrt(w2(k));
    inv_freq(k) = Scalar(1) / freq(k);
  }
  Matrix<Scalar> x = Scalar(0.5) * u * inv_freq.asDiagonal() * u.transpose();
  Matrix<Scalar> p = Scalar(0.5) * u * freq.asDiagonal() * u.transpose();
  return GaussianState<Scalar>(block_diag<Scalar>(symmetrized<Scalar>(x), symmetrized<Scalar>(p)));
}

template <typename Scalar>
GaussianState<Scalar> restrict(const GaussianState<Scalar>& state, const std::vector<int>& region) {
  const auto rows = checked_region(region, state.modes());
  const Index m = state.modes();
  const Index n = static_cast<Index>(rows.size());
  std::vector<Index> idx;
  for (auto r : rows) idx.push_back(r);
  for (auto r : rows) idx.push_back(m + r);
  Matrix<Scalar> sub(2 * n, 2 * n);
  for (Index i = 0; i < 2 * n; ++i)
    for (Index j = 0; j < 2 * n; ++j) sub(i, j) = state.cov()(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return GaussianState<Scalar>(std::move(sub));
}

// ---------------------------------------------------------------------------
// Entanglement Hamiltonian

template <typename Scalar>
Scalar faithfulness_floor() {
  using std::pow;
  return pow(Scalar(Eigen::NumTraits<Scalar>::epsilon()), Scalar(0.75));
}

template <typename Scalar>
Matrix<Scalar> gibbs_covariance(const Matrix<Scalar>& h, const Scalar& beta) {
  using std::sqrt;
  if (h.rows() != h.cols() || h.rows() % 2 != 0 || h.rows() == 0)
    throw InvalidArgument("gibbs_covariance needs a 2M x 2M matrix");
  if (!(beta > Scalar(0))) throw InvalidArgument("gibbs_covariance needs beta > 0");
  const Index m = h.rows() / 2;
  if (cross_block_zero(h)) {
    const Matrix<Scalar> hx = h.topLeftCorner(m, m);
    const Matrix<Scalar> hp = h.bottomRightCorner(m, m);
    Eigen::LLT<Matrix<Scalar>> llt(hp);
    if (llt.info() != Eigen::Success) throw InvalidArgument("Hamiltonian p block is not positive definite");
    const Matrix<Scalar> l = llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(symmetrized<Scalar>(l.transpose() * hx * l));
    if (!(es.eigenvalues()(0) > Scalar(0))) throw InvalidArgument("Hamiltonian x block is not positive definite");
    Vector<Scalar> xw(m), pw(m);
    for (Index k = 0; k < m; ++k) {
      const Scalar omega = sqrt(es.eigenvalues()(k));
      const Scalar c = coth(beta * omega / Scalar(2));
      xw(k) = c / (Scalar(2) * omega);
      pw(k) = c * omega / Scalar(2);
    }
    const Matrix<Scalar> lv = l * es.eigenvectors();
    const Matrix<Scalar> liv = llt.matrixU().solve(es.eigenvectors());
    return block_diag<Scalar>(symmetrized<Scalar>(lv * xw.asDiagonal() * lv.transpose()),
                              symmetrized<Scalar>(liv * pw.asDiagonal() * liv.transpose()));
  }
  if constexpr (std::is_same_v<Scalar, double>) {
    // gamma = 1/2 coth(beta i Omega h / 2) i Omega, evaluated through the
    // Hermitian matrix Y = h^{1/2} i Omega h^{1/2}
    Eigen::SelfAdjointEigenSolver<RMatrix> hs(h);
    if (hs.eigenvalues()(0) <= 0.0) throw InvalidArgument("Hamiltonian is not positive definite");
    const CMatrix root = hs.operatorSqrt().cast<Complex>();
    const CMatrix inv_root = hs.operatorInverseSqrt().cast<Complex>();
    const CMatrix i_omega = Complex(0, 1) * symplectic_form<double>(m).cast<Complex>();
    CMatrix y = root * i_omega * root;
    y = 0.5 * (y + y.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> ys(y);
    CVector f(2 * m);
    for (Index k = 0; k < 2 * m; ++k) f(k) = coth(beta * ys.eigenvalues()(k) / 2.0);
    const CMatrix fy = ys.eigenvectors() * f.asDiagonal() * ys.eigenvectors().adjoint();
    const RMatrix gamma = (0.5 * inv_root * fy * root * i_omega).real();
    return symmetrized<double>(gamma);
  } else {
    throw InvalidArgument("correlated Hamiltonians are only supported in double precision");
  }
}

template <typename Scalar>
EntanglementHamiltonian<Scalar> entanglement_hamiltonian(const GaussianState<Scalar>& state) {
  using std::exp;
  using std::log;
  const WilliamsonForm<Scalar> w = williamson(state.cov());
  const Index m = state.modes();
  const Scalar floor = faithfulness_floor<Scalar>();
  const Scalar half(0.5);
  EntanglementHamiltonian<Scalar> out;
  out.nu = w.nu;
  out.mode_energies.resize(m);
  out.log_norm = Scalar(0);
  for (Index k = 0; k < m; ++k) {
    const Scalar gap = w.nu(k) - half;
    if (!(gap > floor)) {
      std::ostringstream os;
      os << "symplectic eigenvalue " << k << " is 1/2 to working precision (nu - 1/2 = " << to_double(gap)
         << "); the reduced state is not faithful";
      throw NonFaithfulReduced(os.str());
    }
    const Scalar eps = log((w.nu(k) + half) / gap);
    out.mode_energies(k) = eps;
    // log Z = -sum log(2 sinh(eps/2))
    out.log_norm -= eps / Scalar(2) + log(Scalar(1) - exp(-eps));
  }
  if (cross_block_zero(w.symplectic)) {
    // S = diag(A, B) with A B^T = 1, so the kernel is diag(B E B^T, A E A^T)
    const Matrix<Scalar> a = w.symplectic.topLeftCorner(m, m);
    const Matrix<Scalar> b = w.symplectic.bottomRightCorner(m, m);
    out.kernel = block_diag<Scalar>(symmetrized<Scalar>(b * out.mode_energies.asDiagonal() * b.transpose()),
                                    symmetrized<Scalar>(a * out.mode_energies.asDiagonal() * a.transpose()));
  } else {
    const Matrix<Scalar> s_inv = symplectic_inverse<Scalar>(w.symplectic);
    Vector<Scalar> e(2 * m);
    e << out.mode_energies, out.mode_energies;
    out.kernel = symmetrized<Scalar>(s_inv.transpose() * e.asDiagonal() * s_inv);
  }
  out.reconstruction_residual = max_abs<Scalar>(Matrix<Scalar>(gibbs_covariance<Scalar>(out.kernel, Scalar(1)) - state.cov()));
  return out;
}

// ---------------------------------------------------------------------------
// Thermofield double and friends

template <typename Scalar>
GaussianState<Scalar> tfd(const Matrix<Scalar>& h, const Scalar& beta) {
  using std::sqrt;
  if (!(beta > Scalar(0))) throw InvalidArgument("tfd needs beta > 0");
  const WilliamsonForm<Scalar> w = williamson(h);
  const Index m = h.rows() / 2;
  // h = S_w diag(w, w) S_w^T, so the normal-mode frame is S_h = S_w^{-T}
  const Matrix<Scalar> s_h = symplectic_inverse<Scalar>(w.symplectic).transpose();

  // two-mode squeezed vacua, cosh 2r_k = coth(beta w_k / 2)
  Matrix<Scalar> tms = Matrix<Scalar>::Zero(4 * m, 4 * m);
  for (Index k = 0; k < m; ++k) {
    const Scalar c = coth(beta * w.nu(k) / Scalar(2));
    const Scalar s = sqrt(c * c - Scalar(1));
    const Index x1 = k, x2 = m + k, p1 = 2 * m + k, p2 = 3 * m + k;
    tms(x1, x1) = tms(x2, x2) = tms(p1, p1) = tms(p2, p2) = c / Scalar(2);
    tms(x1, x2) = tms(x2, x1) = s / Scalar(2);
    tms(p1, p2) = tms(p2, p1) = -s / Scalar(2);
  }

  // S_h on each copy; copy c has x at c*m + k and p at 2m + c*m + k
  Matrix<Scalar> t = Matrix<Scalar>::Zero(4 * m, 4 * m);
  auto global = [m](Index copy, Index local) { return local < m ? copy * m + local : 2 * m + copy * m + (local - m); };
  for (Index copy = 0; copy < 2; ++copy)
    for (Index i = 0; i < 2 * m; ++i)
      for (Index j = 0; j < 2 * m; ++j) t(global(copy, i), global(copy, j)) = s_h(i, j);

  return GaussianState<Scalar>(symmetrized<Scalar>(t * tms * t.transpose()));
}

RMatrix quadratic_flow(const RMatrix& h, double t) {
  const RMatrix generator = t * symplectic_form<double>(h.rows() / 2) * h;
  return generator.exp();
}

GaussianState<double> thermal_mode(double omega, double beta) {
  if (!(omega > 0.0) || !(beta > 0.0)) throw InvalidArgument("thermal_mode needs omega > 0 and beta > 0");
  return GaussianState<double>(RMatrix::Identity(2, 2) * 0.5 / std::tanh(beta * omega / 2.0));
}

GaussianState<double> two_mode_squeezed(double r) {
  const double c = std::cosh(2.0 * r) / 2.0;
  const double s = std::sinh(2.0 * r) / 2.0;
  RMatrix g = RMatrix::Zero(4, 4);
  g(0, 0) = g(1, 1) = g(2, 2) = g(3, 3) = c;
  g(0, 1) = g(1, 0) = s;
  g(2, 3) = g(3, 2) = -s;
  return GaussianState<double>(g);
}

// ---------------------------------------------------------------------------
// High-precision reductions and the boost comparison

ReducedModularData reduced_modular_data(const HarmonicChain& chain, const std::vector<int>& region,
                                        unsigned max_digits) {
  unsigned digits = 40 + 5 * static_cast<unsigned>(region.size());
  for (;;) {
    try {
      PrecisionGuard guard(digits);
      const auto state = restricted_ground_state<HighPrecision>(chain, region);
      const auto eh = entanglement_hamiltonian(state);
      const auto& spectrum = eh.nu;
      ReducedModularData out;
      out.digits = digits;
      out.kernel = eh.kernel.unaryExpr([](const HighPrecision& v) { return static_cast<double>(v); });
      out.nu = spectrum.unaryExpr([](const HighPrecision& v) { return static_cast<double>(v); });
      out.mode_energies = eh.mode_energies.unaryExpr([](const HighPrecision& v) { return static_cast<double>(v); });
      const HighPrecision gap = spectrum.minCoeff() - HighPrecision(0.5);
      out.min_log_gap = static_cast<double>(log10(gap));
      out.reconstruction_residual = eh.reconstruction_residual;
      return out;
    } catch (const NonFaithfulReduced&) {
      if (digits >= max_digits) throw;
      digits = std::min(max_digits, digits + digits / 2);
    }
  }
}

BoostComparison boost_comparison(const HarmonicChain& chain, ChainHalf half, int window) {
  if (chain.sites < 4) throw InvalidArgument("boost_comparison needs at least 4 sites");
  if (window < 1) throw InvalidArgument("window must be positive");
  const int n = chain.sites / 2;
  std::vector<int> region;
  for (int i = 0; i < n; ++i) region.push_back(half == ChainHalf::Left ? i : chain.sites - n + i);

  const ReducedModularData data = reduced_modular_data(chain, region);
  const double k_diag = chain.mass * chain.mass + 2.0 * chain.coupling;

  BoostComparison out;
  out.sites = chain.sites;
  out.mass = chain.mass;
  out.window = std::min(window, n);
  out.digits = data.digits;
  out.reconstruction_residual = data.reconstruction_residual;
  for (int k = 0; k < n; ++k) {
    // k-th site away from the cut
    const int local = half == ChainHalf::Left ? n - 1 - k : k;
    ProfileRow row;
    row.site = region[static_cast<std::size_t>(local)];
    row.distance = k + 0.5;
    row.he_weight = data.kernel(local, local);
    row.bw_weight = 2.0 * std::numbers::pi * row.distance * k_diag;
    row.rel_dev = std::abs(row.he_weight - row.bw_weight) / row.bw_weight;
    out.profile.push_back(row);
  }

  double dev = 0.0, num = 0.0, den = 0.0;
  for (int k = 0; k < out.window; ++k) {
    const auto& row = out.profile[static_cast<std::size_t>(k)];
    dev += row.rel_dev;
    num += row.he_weight * row.bw_weight;
    den += row.bw_weight * row.bw_weight;
  }
  out.summary_deviation = dev / out.window;
  out.slope_ratio = num / den;

  const int quarter = std::max(2, n / 4);
  out.increasing_first_quarter = true;
  for (int k = 0; k + 1 < quarter && k + 1 < n; ++k)
    if (!(out.profile[static_cast<std::size_t>(k + 1)].he_weight > out.profile[static_cast<std::size_t>(k)].he_weight))
      out.increasing_first_quarter = false;
  return out;
}

void write_profile_csv(std::ostream& os, const BoostComparison& report) {
  os << "site_index,h_E_weight,bw_weight,rel_dev\n";
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(12);
  for (const auto& row : report.profile)
    os << row.site << ',' << row.he_weight << ',' << row.bw_weight << ',' << row.rel_dev << '\n';
  os.flags(flags);
  os.precision(precision);
}

// ---------------------------------------------------------------------------
// Instantiations

#define NCBAYES_INSTANTIATE_GAUSSIAN(S)                                                                   \
  template class GaussianState<S>;                                                                       \
  template Matrix<S> HarmonicChain::coupling_matrix<S>() const;                                           \
  template Vector<S> HarmonicChain::squared_frequencies<S>() const;                                       \
  template Matrix<S> HarmonicChain::normal_modes<S>() const;                                              \
  template Matrix<S> symplectic_form<S>(Index);                                                           \
  template WilliamsonForm<S> williamson<S>(const Matrix<S>&);                                             \
  template Vector<S> symplectic_spectrum<S>(const GaussianState<S>&);                                     \
  template bool is_pure<S>(const GaussianState<S>&, double);                                              \
  template GaussianState<S> ground_state<S>(const HarmonicChain&);                                        \
  template GaussianState<S> restricted_ground_state<S>(const HarmonicChain&, const std::vector<int>&);    \
  template GaussianState<S> restrict<S>(const GaussianState<S>&, const std::vector<int>&);                \
  template S faithfulness_floor<S>();                                                                     \
  template EntanglementHamiltonian<S> entanglement_hamiltonian<S>(const GaussianState<S>&);               \
  template Matrix<S> gibbs_covariance<S>(const Matrix<S>&, const S&);                                     \
  template GaussianState<S> tfd<S>(const Matrix<S>&, const S&);

NCBAYES_INSTANTIATE_GAUSSIAN(double)
NCBAYES_INSTANTIATE_GAUSSIAN(HighPrecision)

#undef NCBAYES_INSTANTIATE_GAUSSIAN

}  // namespace ncbayes
