#include "szego/rational.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace szego {

int poly_degree(const Vec& coeffs) {
  double scale = 0.0;
  for (int i = 0; i < coeffs.size(); ++i) scale = std::max(scale, std::abs(coeffs[i]));
  if (scale == 0.0) return 0;
  for (int d = static_cast<int>(coeffs.size()) - 1; d > 0; --d) {
    if (std::abs(coeffs[d]) > 1e-13 * scale) return d;
  }
  return 0;
}

Complex poly_eval(const Vec& coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) acc = acc * z + coeffs[i];
  return acc;
}

std::vector<Complex> poly_roots(const Vec& coeffs) {
  int d = poly_degree(coeffs);
  if (d == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -coeffs[i] / coeffs[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, /*computeEigenvectors=*/false);
  std::vector<Complex> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

void RationalState::validate(double root_tol, double pole_tol) const {
  if (poly_degree(denom) == 0 && std::abs(denom[0]) == 0.0)
    throw Error("RationalState: zero denominator");
  auto rb = poly_roots(denom);
  for (const auto& q : rb) {
    if (std::abs(q) <= 1.0 + pole_tol)
      throw PoleOnDiscError("RationalState: denominator root in the closed unit disc");
  }
  auto ra = poly_roots(numer);
  for (const auto& a : ra)
    for (const auto& b : rb)
      if (std::abs(a - b) <= root_tol)
        throw Error("RationalState: numerator and denominator share a root");
}

FourierState rational_to_fourier(const RationalState& r, int n, double tau_tail) {
  r.validate();
  const Vec& a = r.numer;
  const Vec& b = r.denom;
  int db = poly_degree(b);
  Vec u = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    Complex acc = (k < a.size()) ? a[k] : Complex(0.0, 0.0);
    for (int j = 1; j <= std::min(k, db); ++j) acc -= b[j] * u[k - j];
    u[k] = acc / b[0];
  }
  FourierState out(std::move(u));
  if (!out.resolved(tau_tail))
    throw UnresolvedStateError("rational_to_fourier: tail above tolerance, increase n");
  return out;
}

Vec BlaschkeProduct::numerator() const {
  Vec p = Vec::Zero(degree() + 1);
  p[0] = 1.0;
  for (int j = 0; j < degree(); ++j) {
    // multiply by (z - p_j)
    Vec q = Vec::Zero(p.size());
    for (int i = j; i >= 0; --i) {
      q[i + 1] += p[i];
      q[i] -= zeros[static_cast<size_t>(j)] * p[i];
    }
    p = q;
  }
  return p;
}

Vec BlaschkeProduct::denominator() const {
  Vec p = numerator();
  Vec d = Vec::Zero(p.size());
  int n = degree();
  for (int i = 0; i <= n; ++i) d[i] = std::conj(p[n - i]);
  return d;
}

void BlaschkeProduct::validate() const {
  for (const auto& p : zeros)
    if (std::abs(p) >= 1.0) throw Error("BlaschkeProduct: zero outside the open disc");
}

Complex blaschke_eval(const BlaschkeProduct& psi, Complex z) {
  Complex acc = std::polar(1.0, -psi.angle);
  for (const auto& p : psi.zeros) acc *= (z - p) / (1.0 - std::conj(p) * z);
  return acc;
}

FourierState compose_with_blaschke(const FourierState& u, const BlaschkeProduct& chi,
                                   const GridPlan& plan, double tol) {
  chi.validate();
  int m = plan.grid_size();
  int n_out = plan.truncation();
  double scale = std::max(u.l2_norm(), 1e-30);

  // w = z chi(z) on the grid, then u(w) by Horner
  Vec w(m);
  for (int j = 0; j < m; ++j) {
    Complex z = std::polar(1.0, 2.0 * M_PI * j / m);
    w[j] = z * blaschke_eval(chi, z);
  }
  int n = u.truncation();
  Vec vals = Vec::Constant(m, u.coeff(n - 1));
  for (int k = n - 2; k >= 0; --k) vals = vals.cwiseProduct(w) + Vec::Constant(m, u.coeff(k)).eval();

  TwoSided spec = from_grid(vals, plan);
  double neg = 0.0;
  for (int k = spec.k_min; k < 0; ++k) neg = std::max(neg, std::abs(spec.at(k)));
  if (neg > tol * scale)
    throw AliasingError("compose_with_blaschke: negative-frequency leakage, grid too small");
  double high = 0.0;
  for (int k = n_out; k <= spec.k_max(); ++k) high = std::max(high, std::abs(spec.at(k)));
  if (high > tol * scale)
    throw AliasingError("compose_with_blaschke: output truncation too small");
  return szego_project(spec, n_out);
}

}  // namespace szego
