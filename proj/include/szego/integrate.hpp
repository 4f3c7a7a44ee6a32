#pragma once

// Time evolution of the Galerkin-truncated flow
//   i u_t = P_N(|u|^2 u) + alpha (u|1),
// with an embedded Dormand-Prince 5(4) pair, PI step control, dense
// sampling, resolution guards, and finite-difference residual tests for the
// operator evolution identities.

#include <functional>
#include <string>
#include <vector>

#include "szego/invariants.hpp"

namespace szego {

struct SimulationConfig {
  double alpha = 1.0;
  int truncation = 64;   // N
  int grid_size = 0;     // M; 0 picks next_pow2(4N). Must be >= 3N, power of two.
  double rel_tol = 1e-11;
  double abs_tol = 1e-11;
  double t_max = 10.0;
  double sample_interval = 0.1;
  double tail_guard = 1e-12;  // abort when top-eighth modes exceed this

  // per-sample analysis
  bool audit_invariants = true;
  int hierarchy_n_max = 4;
  int hierarchy_m = 0;  // 0 = full truncation; negative = skip hierarchy
  int spectral_m = 0;   // 0 = no eigen-analysis at samples
  int spectral_count = 8;
  bool track_ell = false;
  int pole_rank = 0;    // 0 = no pole-radius estimate
  std::vector<double> sobolev_exponents = {0.5, 1.0, 2.0};

  double initial_step = 0.0;  // 0 = automatic

  int resolved_grid() const;  // grid_size or next_pow2(4N)
  void validate() const;
};

struct Sample {
  double t = 0.0;
  FourierState state;
  InvariantSet invariants;
  std::vector<double> hs_norms;     // one per sobolev exponent
  std::vector<double> rho, sigma;   // raw descending singular values
  std::vector<double> ell;          // per K-level, NaN when clustering failed
  double pole_radius = 0.0;
  double tail = 0.0;
};

struct Event {
  double t = 0.0;
  std::string kind;     // "tail-breach", "ambiguous-cluster", ...
  std::string message;
};

struct TrajectoryRecord {
  SimulationConfig config;
  std::vector<Sample> samples;
  std::vector<Event> events;
  bool completed = false;  // reached t_max with the guard intact
  double end_time = 0.0;
  long rhs_evaluations = 0;

  const Sample& at_or_before(double t) const;
  std::vector<double> times() const;
  std::vector<std::vector<double>> rho_trace() const;
};

// du/dt = -i (P_N(|u|^2 u) + alpha u(0) e_0); the cubic term is evaluated on
// the plan grid and projected back to modes < N (Galerkin truncation).
FourierState rhs(const FourierState& u, double alpha, const GridPlan& plan);

using SampleCallback = std::function<void(const Sample&)>;
TrajectoryRecord integrate(const SimulationConfig& config, const FourierState& u0,
                           const SampleCallback& on_sample = {});

// Re-integrates from the nearest recorded sample; t must lie inside the
// recorded window.
FourierState state_at(const TrajectoryRecord& traj, double t);

// | (K(t+dt) - K(t-dt))/2dt - [C_u, K_u] |_2 / |K(t)|_2 with the
// conjugate-linearity of K respected ([C, K] acts as C K - K conj(C) on the
// matrices).
double lax_residual_K(const TrajectoryRecord& traj, double t, double dt, int m);

// Same for H with the source -i alpha (u|1) H_1; include_source = false
// measures how badly the pure commutator identity fails.
double hu_evolution_residual(const TrajectoryRecord& traj, double t, double dt, int m,
                             bool include_source = true);

// FD check of du'_k/dt = -i T_{|u|^2} u'_k - i alpha (u|1) ((1|u'_k)/(u'_k|u'_k)) u'_k
// at a simple K-level away from crossings (else CrossingProximityError).
double projection_evolution_residual(const TrajectoryRecord& traj, double sigma_k,
                                     double t, double dt, int m);

struct ZeroTrace {
  double sigma = 0.0;
  std::vector<double> times;
  std::vector<std::vector<Complex>> zeros;  // matched across samples
  std::vector<double> angles;               // wrapped Blaschke angle
  double max_drift = 0.0;                   // sup_t max_j |z_j(t) - z_j(0)|
  std::vector<std::string> notes;
};

// Tracks the zeros of the Blaschke product attached to the K-level sigma_k
// across the trajectory (nearest-neighbour matching between samples).
ZeroTrace blaschke_orbit_trace(const TrajectoryRecord& traj, double sigma_k, int m);

// Largest pole-radius estimate |p| in (0,1): denominator fit of rank `rank`
// through the coefficient recurrence, decay-rate fallback when the fit is
// ill-conditioned.
double pole_radius_estimate(const FourierState& u, int rank);

}  // namespace szego
