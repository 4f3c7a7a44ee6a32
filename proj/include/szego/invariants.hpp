#pragma once

// Conserved quantities of the flow and their functional relations: the
// Hamiltonian E_alpha, mass Q, momentum M, the hierarchy L_n built from
// powers of K_u^2, the resolvent family (J_x, Z_x, F_x, E_x, L_x), the
// per-level quantities ell_k, and a finite-difference Poisson bracket for
// involution checks.

#include <vector>

#include "szego/spectral.hpp"

namespace szego {

struct InvariantSet {
  double energy = 0.0;    // E_alpha
  double mass = 0.0;      // Q
  double momentum = 0.0;  // M
  std::vector<double> hierarchy;  // L_0 .. L_n
  std::vector<double> per_level_ell;
  double alpha = 0.0;
};

// E_alpha(u) = 1/4 mean|u|^4 + alpha/2 |u(0)|^2. The quartic mean needs
// M >= 4N for exactness; plan_for() plans satisfy this.
double energy(const FourierState& u, double alpha, const GridPlan& plan);
double mass(const FourierState& u);      // Q = sum |u(k)|^2
double momentum(const FourierState& u);  // M = sum k |u(k)|^2

// L_n = (K^{2n} u | u) - alpha (K^{2n} 1 | 1), n = 0..n_max, from the m x m
// truncation of K^2.
std::vector<double> hierarchy_L(const FourierState& u, double alpha, int n_max, int m);

struct GeneratingValues {
  double x = 0.0;
  double J = 0.0;    // ((1-xH^2)^{-1} 1 | 1)
  Complex Z{0.0, 0.0};  // (1 | (1-xH^2)^{-1} u)
  double F = 0.0;    // ((1-xK^2)^{-1} u | u)
  double E = 0.0;    // ((1-xK^2)^{-1} 1 | 1)
  double L = 0.0;    // F - alpha E
  double residual_F = 0.0;  // |F - (J-1)/(xJ)|
  double residual_E = 0.0;  // |E - (J - x|Z|^2/J)|
};

// Resolvent solves at parameter x. With check_resonance, 1/x is required to
// stay clear of spec(H^2) and spec(K^2) by 10 * resonance_tol (relative),
// else NearResonanceError.
GeneratingValues generating_values(const FourierState& u, double alpha, double x, int m,
                                   bool check_resonance = true,
                                   double resonance_tol = 1e-6);

// ell_k = |u'_k|^2 - alpha |v'_k|^2, one per K-level of the decomposition
// (kernel level included when present).
std::vector<double> ell_k(const SpectralDecomposition& dec, double alpha);

// Functionals accepted by the Poisson bracket.
struct Functional {
  enum Kind { Lx, EnergyAlpha, Mass, Momentum } kind = Mass;
  double x = 0.0;      // Lx only
  double alpha = 0.0;  // Lx, EnergyAlpha
};

struct PoissonBracketResult {
  double bracket = 0.0;     // omega(X_F, X_G)
  double grad_norm_f = 0.0;
  double grad_norm_g = 0.0;
  bool noisy = false;       // gradient jitter above 10 percent
  // |bracket| measured against the symplectic bound 4 |X_F||X_G| =
  // |grad F||grad G| / 4
  double normalized() const;
};

// Real gradients by central differences (step h on each of the 2N real
// coordinates); Hamiltonian fields from dF(u) h = omega(h, X_F) with
// omega(u, v) = 4 Im(u|v). Sign convention: bracket = omega(X_F, X_G) =
// 1/4 sum_k (dF/db_k dG/da_k - dF/da_k dG/db_k); tests only use vanishing
// brackets, which are convention-independent.
PoissonBracketResult poisson_bracket(const Functional& f, const Functional& g,
                                     const FourierState& u, double h, int m);

double evaluate_functional(const Functional& f, const FourierState& u, int m);

}  // namespace szego
