#include "szego/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace szego {

namespace {

constexpr double kAgmTol = 1e-14;

void require_modulus(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error("elliptic: modulus must satisfy 0 <= k < 1");
}

// Carlson symmetric integral R_F by duplication.
double carlson_rf(double x, double y, double z) {
  double a = (x + y + z) / 3.0;
  double dx, dy, dz;
  do {
    double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    double lam = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    a = 0.25 * (a + lam);
    dx = (a - x) / a;
    dy = (a - y) / a;
    dz = (a - z) / a;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) > 1e-8);
  double e2 = dx * dy + dy * dz + dz * dx;
  double e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

}  // namespace

double elliptic_K(double k) {
  require_modulus(k);
  return carlson_rf(0.0, (1.0 - k) * (1.0 + k), 1.0);
}

double elliptic_F(double phi, double k) {
  require_modulus(k);
  // periodic reduction: F(phi + n pi, k) = F(phi, k) + 2 n K
  double n = std::round(phi / M_PI);
  double r = phi - n * M_PI;  // r in [-pi/2, pi/2]
  double base = (n == 0.0) ? 0.0 : 2.0 * n * elliptic_K(k);
  if (r == 0.0) return base;
  double s = std::sin(r), c = std::cos(r);
  double f = s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0);
  return base + f;
}

namespace {

// Jacobi amplitude am(x, k) by the descending Landen / AGM recursion:
// a_{n+1} = (a_n + b_n)/2, b_{n+1} = sqrt(a_n b_n), c_{n+1} = (a_n - b_n)/2,
// phi_N = 2^N a_N x, phi_{n-1} = (phi_n + asin(c_n/a_n sin phi_n)) / 2.
double jacobi_am(double x, double k) {
  if (k == 0.0) return x;
  double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k)), c = k;
  double as[64], cs[64];
  int n = 0;
  while (std::abs(c) > kAgmTol * std::abs(a) && n < 63) {
    double an = 0.5 * (a + b);
    double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    ++n;
    as[n] = a;
    cs[n] = c;
  }
  double phi = std::ldexp(a * x, n);
  for (int i = n; i >= 1; --i)
    phi = 0.5 * (phi + std::asin(std::clamp(cs[i] / as[i] * std::sin(phi), -1.0, 1.0)));
  return phi;
}

}  // namespace

double jacobi_sn(double x, double k) {
  require_modulus(k);
  return std::sin(jacobi_am(x, k));
}

double jacobi_cn(double x, double k) {
  require_modulus(k);
  return std::cos(jacobi_am(x, k));
}

CrossingOracleParams crossing_params(std::complex<double> p) {
  double p2 = std::norm(p);
  if (!(p2 > 0.0 && p2 < 1.0))
    throw Error("crossing_params: need 0 < |p| < 1");
  // a, b > 0 with ab = p^2(1-p^2) and b - a = 5/4 - 2 p^2: b is the positive
  // root of q^2 - (b-a) q - ab restricted to the larger branch.
  double diff = 1.25 - 2.0 * p2;       // b - a
  double prod = p2 * (1.0 - p2);       // a b
  double disc = std::sqrt(diff * diff + 4.0 * prod);
  CrossingOracleParams out;
  out.p = p;
  out.b = 0.5 * (diff + disc);
  out.a = out.b - diff;
  if (!(out.a > 0.0 && out.b > 0.0))
    throw Error("crossing_params: branch selection failed");
  if (std::abs(out.a * out.b - prod) > 1e-12 * std::max(1.0, prod))
    throw Error("crossing_params: product constraint violated");
  out.modulus = std::sqrt(out.a / (out.a + out.b));
  if (!(out.modulus > 0.0 && out.modulus < 1.0))
    throw Error("crossing_params: modulus out of range");
  out.rate = std::sqrt(out.a + out.b);
  out.phase = elliptic_K(out.modulus);
  return out;
}

double crossing_oracle_I(double t, const CrossingOracleParams& params) {
  return std::sqrt(params.a) * jacobi_cn(params.rate * t + params.phase, params.modulus);
}

std::pair<double, double> crossing_oracle_spectra(double t, const CrossingOracleParams& params) {
  double i = crossing_oracle_I(t, params);
  return {1.0 + i, 1.0 - i};
}

}  // namespace szego
