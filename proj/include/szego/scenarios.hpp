#pragma once

// Scenario runner: configures and runs the dynamical regimes, evaluates the
// per-scenario checks from the emitted data tables, and writes plot-ready
// CSV plus JSON summaries. `check_run` re-evaluates a stored run directory
// with the same code paths.

#include <random>

#include "szego/elliptic.hpp"
#include "szego/io.hpp"

namespace szego {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<", ">", "in", ...
  std::string note;
};

struct RunArtifacts {
  std::string scenario;
  Json config;        // resolved scenario parameters
  Json measurements;  // scalar results the checks read
  std::map<std::string, Table> tables;
  std::vector<Event> events;
  Json checkpoint;    // final state, when a trajectory was run
};

struct ScenarioResult {
  RunArtifacts artifacts;
  std::vector<CheckResult> checks;
  int failures() const;
};

// Unset numeric fields (NaN / 0) fall back to per-scenario defaults.
struct ScenarioOptions {
  double alpha = std::numeric_limits<double>::quiet_NaN();
  int truncation = 0;
  int grid = 0;
  double t_max = std::numeric_limits<double>::quiet_NaN();
  double rel_tol = std::numeric_limits<double>::quiet_NaN();
  double sample_interval = std::numeric_limits<double>::quiet_NaN();
  double tail_guard = std::numeric_limits<double>::quiet_NaN();
  unsigned seed = 1;
  std::string data_file;  // rational datum {"A":..., "B":...}
  double p = 0.5;         // crossing pole
  double c = std::numeric_limits<double>::quiet_NaN();  // growth coefficient
  std::vector<Complex> chi_zeros;                       // lift Blaschke zeros
  bool trace_zeros = false;
  std::string datum;      // rank_drop_necessary: "one_plus_z" | "crossing"
};

const std::vector<std::string>& scenario_names();
ScenarioResult run_scenario(const std::string& name, const ScenarioOptions& opt = {});

void write_run(const ScenarioResult& result, const std::filesystem::path& dir);
// Reload a run directory and re-evaluate every check from the stored data.
ScenarioResult check_run(const std::filesystem::path& dir);

// u_0 = sqrt(alpha) + c z, verified to satisfy L_1 = 0 with a single
// K-level at |c| before returning (AssemblyCheckError otherwise).
FourierState builtin_growth_datum(double alpha, double c, int n);
// builtin_growth_datum composed with z*chi; L_1 invariance and the expected
// rank increase are verified.
FourierState builtin_lifted_datum(double alpha, double c, const BlaschkeProduct& chi,
                                  int n_base);

struct GrowthFit {
  double s = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

GrowthFit fit_line(const std::vector<double>& t, const std::vector<double>& y,
                   double t_lo, double t_hi);
// Least-squares slopes of log |u(t)|_{H^s} on [t_lo, t_hi] per exponent in
// `s_list` (matching config.sobolev_exponents entries).
std::vector<GrowthFit> fit_growth(const TrajectoryRecord& traj,
                                  const std::vector<double>& s_list, double t_lo,
                                  double t_hi);

// |1/(1 - p Psi)|_{H^s} by series/grid expansion; throws UnresolvedStateError
// when the mode budget cannot resolve the largest |p|.
double blaschke_resolvent_norm(const BlaschkeProduct& psi, double s, double p, int modes);

// Random rank-r states for property checks: poles at radius >= 2.2 so a
// 64-mode truncation resolves far below 1e-12; mass-normalized.
RationalState random_rational_state(int rank, std::mt19937_64& rng);
FourierState random_resolved_state(int rank, int n, std::mt19937_64& rng);

}  // namespace szego
