#pragma once

// Incomplete elliptic integral of the first kind, Jacobi sn/cn on real
// arguments with modulus 0 <= k < 1, and the closed-form oracle for the
// spectral-gap motion of the rank-one crossing example.

#include <complex>

#include "szego/errors.hpp"

namespace szego {

// F(phi, k) = int_0^phi dtheta / sqrt(1 - k^2 sin^2 theta), any real phi.
double elliptic_F(double phi, double k);
// Complete integral K(k) = F(pi/2, k).
double elliptic_K(double k);

// Jacobi amplitude via the descending Landen / AGM recursion, then
// sn = sin am, cn = cos am.
double jacobi_sn(double x, double k);
double jacobi_cn(double x, double k);

// Parameters of the crossing oracle for u_0 = (z-p)/(1-pz), alpha = 1:
//   a b = |p|^2 (1 - |p|^2),  b - a = 5/4 - 2|p|^2,  a, b > 0,
//   I(t) = sqrt(a) cn(sqrt(a+b) t + K(k), k),  k = sqrt(a/(a+b)).
struct CrossingOracleParams {
  std::complex<double> p;
  double a = 0.0;
  double b = 0.0;
  double modulus = 0.0;   // k
  double rate = 0.0;      // sqrt(a+b)
  double phase = 0.0;     // K(k), places the first crossing at t = 0
};

CrossingOracleParams crossing_params(std::complex<double> p);

// I(t) = (rho_1^2 - rho_2^2)/2 along the crossing orbit; I(0) = 0.
double crossing_oracle_I(double t, const CrossingOracleParams& params);
// (rho_1^2, rho_2^2) = (1 + I, 1 - I).
std::pair<double, double> crossing_oracle_spectra(double t, const CrossingOracleParams& params);

}  // namespace szego
