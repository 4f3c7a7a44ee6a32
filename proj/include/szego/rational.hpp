#pragma once

// Rational representations of finite-rank states: coprime polynomial pairs
// u = A/B with all poles outside the closed unit disc (the Kronecker-type
// characterisation of rank-N states), and finite Blaschke products.

#include <optional>
#include <vector>

#include "szego/fourier.hpp"

namespace szego {

// Coefficients ascending in degree. Leading entries below
// 1e-13 * max|coeff| are ignored by degree().
int poly_degree(const Vec& coeffs);
Complex poly_eval(const Vec& coeffs, Complex z);
// Companion-matrix roots of the trimmed polynomial.
std::vector<Complex> poly_roots(const Vec& coeffs);

struct RationalState {
  Vec numer;  // A
  Vec denom;  // B

  int rank() const { return std::max(poly_degree(numer), poly_degree(denom)); }

  // Checks the membership invariants: A, B coprime (root separation above
  // root_tol), B root-free on the closed disc (modulus above 1 + pole_tol).
  void validate(double root_tol = 1e-9, double pole_tol = 1e-9) const;
};

// Power-series coefficients of A/B up to n modes via the linear recurrence
// B*u = A. Throws PoleOnDiscError / UnresolvedStateError.
FourierState rational_to_fourier(const RationalState& r, int n,
                                 double tau_tail = kDefaultTailTol);

// e^{-i angle} prod_j (z - p_j)/(1 - conj(p_j) z), all |p_j| < 1.
struct BlaschkeProduct {
  double angle = 0.0;
  std::vector<Complex> zeros;

  int degree() const { return static_cast<int>(zeros.size()); }
  // Monic numerator P(z) = prod (z - p_j), coefficients ascending.
  Vec numerator() const;
  // Normalized denominator D(z) = z^d conj(P)(1/z) = prod (1 - conj(p_j) z).
  Vec denominator() const;
  void validate() const;
};

Complex blaschke_eval(const BlaschkeProduct& psi, Complex z);

// Coefficients of u(z chi(z)). The substitution z -> z chi(z) is inner, so
// the result lies in the Hardy space; its truncation is plan.truncation()
// (size it as (deg chi + 1) * u.truncation()). Throws AliasingError when
// negative-frequency leakage or the output tail exceeds tol.
FourierState compose_with_blaschke(const FourierState& u, const BlaschkeProduct& chi,
                                   const GridPlan& plan, double tol = 1e-9);

}  // namespace szego
