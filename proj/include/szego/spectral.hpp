#pragma once

// Eigen-analysis of H_u^2 and K_u^2: eigenvalue clusters, dominance (is u
// orthogonal to the eigenspace or not), projections of u and 1 per level,
// the per-level Blaschke products, rank bookkeeping, and crossing detection
// along spectral traces.

#include <optional>
#include <vector>

#include "szego/hankel.hpp"
#include "szego/rational.hpp"

namespace szego {

enum class Family { H, K };

struct SpectralLevel {
  Family family = Family::H;
  double value = 0.0;     // tau (not squared)
  int multiplicity = 0;   // eigenvalue cluster size; kernel level: numerical defect
  bool dominant = false;  // projection of u onto the eigenspace is nonzero
  FourierState u_proj;
  FourierState one_proj;
  std::optional<BlaschkeProduct> blaschke;
};

struct SpectralDecomposition {
  std::vector<SpectralLevel> h_levels;  // positive clusters of H^2, descending
  std::vector<SpectralLevel> k_levels;  // positive clusters of K^2, descending,
                                        // plus a trailing kernel level when u
                                        // meets ker K^2
  int rank_h = 0;      // counts of kept positive eigenvalues
  int rank_k = 0;
  int dom_rank_h = 0;  // sums of dominant multiplicities (positive levels)
  int dom_rank_k = 0;
  double cluster_tol = 0.0;  // absolute tolerance on squared values
  int m = 0;

  std::vector<const SpectralLevel*> dominant(Family f) const;
  std::vector<std::string> warnings;
};

// Cluster tolerance is relative to the top eigenvalue of H^2. Throws
// AmbiguousClusterError when two clusters sit in the (tol, 10 tol) gap zone
// and Error when the dominant families fail to interlace.
SpectralDecomposition decompose(const FourierState& u, int m, double cluster_tol_rel = 1e-9);

// Fit the Blaschke product of a dominant level from the grid ratio
// tau u_tau / H_u(u_tau) (H levels) or K_u(u'_tau)/(tau u'_tau) (K levels).
// Expected degree: multiplicity - 1. Throws DegreeMismatchError when the
// ratio is not a Blaschke product of that degree within fit_tol.
BlaschkeProduct level_blaschke(const FourierState& u, const SpectralLevel& level,
                               const GridPlan& plan, double fit_tol = 1e-8);

// |measured - formula| for the eigenprojection norm identities
//   |u_j|^2  = prod_l (rho_j^2 - sigma_l^2) / prod_{l != j} (rho_j^2 - rho_l^2)
//   |u'_k|^2 = prod_l (rho_l^2 - sigma_k^2) / prod_{l != k} (sigma_l^2 - sigma_k^2)
// over the dominant levels. Levels closer than 10 tol to the opposite family
// are skipped.
struct NormResiduals {
  std::vector<double> h, k;
  double max() const;
};
NormResiduals verify_projection_norms(const SpectralDecomposition& dec);

// |v_j|^2 = |u_j|^2 / rho_j^2 per dominant H level.
std::vector<double> verify_v_norm(const SpectralDecomposition& dec);

struct Ranks {
  int rank_h = 0, rank_k = 0;
  int dom_rank_h = 0, dom_rank_k = 0;
};
// Numerical ranks at relative threshold tol plus dominant ranks; the two
// rank formulas are cross-checked. Throws ThresholdAmbiguityError when a
// singular value lands within a factor 10 of the threshold.
Ranks ranks(const FourierState& u, int m, double tol = 1e-8);

// Raw sorted singular values (no clustering), for trajectory traces.
struct SingularTrace {
  std::vector<double> h, k;
};
SingularTrace top_singular_values(const FourierState& u, int m, int count);

struct CrossingReport {
  double level = 0.0;                                 // sigma
  std::vector<double> times;                          // refined elements of T_c
  std::vector<std::pair<double, double>> gap_trace;   // (t, min_j |rho_j - sigma|)
  double min_gap = 0.0;
  bool undersampled = false;
};

// rho[i] = descending H singular values at times[i]. A local minimum of the
// gap refined below gap_tol counts as a crossing.
CrossingReport detect_crossings(const std::vector<double>& times,
                                const std::vector<std::vector<double>>& rho,
                                double sigma, double gap_tol);

}  // namespace szego
