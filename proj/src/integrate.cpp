#include "szego/integrate.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace szego {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double opnorm(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// The autonomous right-hand side on raw coefficient vectors.
class Flow {
 public:
  Flow(const SimulationConfig& cfg)
      : n_(cfg.truncation), alpha_(cfg.alpha), plan_(cfg.resolved_grid(), cfg.truncation) {}

  const GridPlan& plan() const { return plan_; }

  Vec operator()(const Vec& y) const {
    int m = plan_.grid_size();
    Vec padded = Vec::Zero(m);
    padded.head(n_) = y;
    Vec g = plan_.synthesis(padded);
    for (int j = 0; j < m; ++j) g[j] *= std::norm(g[j]);
    Vec c = plan_.analysis(g);
    Vec du = c.head(n_);
    du[0] += alpha_ * y[0];
    return Complex(0.0, -1.0) * du;
  }

 private:
  int n_;
  double alpha_;
  GridPlan plan_;
};

// One adaptive DOPRI5 path; FSAL stage reused across accepted steps.
class Stepper {
 public:
  Stepper(const SimulationConfig& cfg, const Flow& flow, double t0, Vec y0)
      : cfg_(cfg), flow_(flow), t_(t0), y_(std::move(y0)) {}

  double t() const { return t_; }
  const Vec& y() const { return y_; }
  long evals() const { return evals_; }

  // Advance to exactly t_target (t_target >= t()).
  void advance_to(double t_target) {
    if (!have_k1_) {
      k1_ = eval(y_);
      have_k1_ = true;
    }
    if (h_ == 0.0) h_ = initial_step(t_target);
    while (t_ < t_target) {
      bool clipped = false;
      double h = h_;
      if (t_ + h >= t_target) {
        h = t_target - t_;
        clipped = true;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t_))) {
        t_ = t_target;  // nothing left to resolve
        break;
      }
      step(h, clipped);
    }
  }

 private:
  Vec eval(const Vec& y) {
    ++evals_;
    return flow_(y);
  }

  double error_norm(const Vec& err, const Vec& y0, const Vec& y1) const {
    double acc = 0.0;
    for (int i = 0; i < err.size(); ++i) {
      double sc = cfg_.abs_tol +
                  cfg_.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      double q = std::abs(err[i]) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / err.size());
  }

  double initial_step(double t_target) const {
    double d0 = y_.norm();
    double d1 = k1_.norm();
    double h = (d1 > 1e-12) ? 0.01 * (d0 + cfg_.abs_tol) / d1 : 1e-6;
    return std::min(h, std::max(t_target - t_, 1e-12));
  }

  void step(double h, bool clipped) {
    const Vec& y = y_;
    Vec k2 = eval(y + h * a21 * k1_);
    Vec k3 = eval(y + h * (a31 * k1_ + a32 * k2));
    Vec k4 = eval(y + h * (a41 * k1_ + a42 * k2 + a43 * k3));
    Vec k5 = eval(y + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
    Vec k6 = eval(y + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec y1 = y + h * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    Vec k7 = eval(y1);
    Vec err = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_norm = error_norm(err, y, y1);

    const double safe = 0.9, beta = 0.04, expo = 0.2 - beta * 0.75;
    double fac11 = std::pow(std::max(err_norm, 1e-32), expo);
    if (err_norm <= 1.0) {
      // accept
      t_ += h;
      y_ = std::move(y1);
      k1_ = std::move(k7);
      double fac = fac11 / std::pow(facold_, beta);
      fac = std::clamp(fac / safe, 0.2, reject_cooldown_ ? 1.0 : 10.0);
      double h_new = h / fac;
      h_ = clipped ? std::max(h_, h_new) : h_new;
      facold_ = std::max(err_norm, 1e-4);
      reject_cooldown_ = false;
    } else {
      h_ = h / std::min(fac11 / safe, 10.0);
      reject_cooldown_ = true;
      ++rejects_;
      if (h_ < 1e-13 * std::max(1.0, std::abs(t_)))
        throw StepFailureError("integrate: tolerance unreachable, step underflow");
      if (rejects_ > 1000000)
        throw StepFailureError("integrate: too many rejected steps");
    }
    if (evals_ > 400000000L)
      throw StepFailureError("integrate: evaluation budget exhausted");
  }

  const SimulationConfig& cfg_;
  const Flow& flow_;
  double t_;
  Vec y_;
  Vec k1_;
  bool have_k1_ = false;
  double h_ = 0.0;
  double facold_ = 1e-4;
  bool reject_cooldown_ = false;
  long evals_ = 0;
  long rejects_ = 0;
};

}  // namespace

int SimulationConfig::resolved_grid() const {
  return grid_size > 0 ? grid_size : next_pow2(4 * truncation);
}

void SimulationConfig::validate() const {
  if (truncation < 8) throw Error("SimulationConfig: truncation too small");
  int m = resolved_grid();
  if (m < 3 * truncation || (m & (m - 1)) != 0)
    throw Error("SimulationConfig: grid must be a power of two with M >= 3N");
  if (rel_tol < 1e-14 || rel_tol > 1e-6 || abs_tol < 1e-14 || abs_tol > 1e-6)
    throw Error("SimulationConfig: tolerances must lie in [1e-14, 1e-6]");
  if (sample_interval <= 0.0 || t_max < 0.0)
    throw Error("SimulationConfig: bad time parameters");
}

FourierState rhs(const FourierState& u, double alpha, const GridPlan& plan) {
  Vec vals = to_grid(u, plan);
  for (int j = 0; j < vals.size(); ++j) vals[j] *= std::norm(vals[j]);
  TwoSided cubic = from_grid(vals, plan);
  Vec du = Vec::Zero(u.truncation());
  for (int k = 0; k < u.truncation(); ++k) du[k] = cubic.at(k);
  du[0] += alpha * u.coeff(0);
  return FourierState(Vec(Complex(0.0, -1.0) * du));
}

const Sample& TrajectoryRecord::at_or_before(double t) const {
  if (samples.empty()) throw Error("TrajectoryRecord: no samples");
  const Sample* best = &samples.front();
  for (const auto& s : samples)
    if (s.t <= t + 1e-12) best = &s;
    else break;
  return *best;
}

std::vector<double> TrajectoryRecord::times() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.t);
  return out;
}

std::vector<std::vector<double>> TrajectoryRecord::rho_trace() const {
  std::vector<std::vector<double>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.rho);
  return out;
}

namespace {

Sample make_sample(double t, const Vec& y, const SimulationConfig& cfg,
                   const GridPlan& plan, std::vector<Event>& events) {
  Sample s;
  s.t = t;
  s.state = FourierState(y);
  s.tail = s.state.tail_max();
  for (double se : cfg.sobolev_exponents) s.hs_norms.push_back(sobolev_norm(s.state, se));

  if (cfg.audit_invariants) {
    s.invariants.alpha = cfg.alpha;
    s.invariants.energy = energy(s.state, cfg.alpha,
                                 plan.grid_size() >= 4 * cfg.truncation
                                     ? plan
                                     : plan_for(cfg.truncation));
    s.invariants.mass = mass(s.state);
    s.invariants.momentum = momentum(s.state);
    if (cfg.hierarchy_m >= 0) {
      int hm = cfg.hierarchy_m > 0 ? cfg.hierarchy_m : cfg.truncation;
      s.invariants.hierarchy = hierarchy_L(s.state, cfg.alpha, cfg.hierarchy_n_max, hm);
    }
  }
  if (cfg.spectral_m > 0) {
    SingularTrace tr = top_singular_values(s.state, cfg.spectral_m, cfg.spectral_count);
    s.rho = tr.h;
    s.sigma = tr.k;
    if (cfg.track_ell) {
      try {
        auto dec = decompose(s.state, cfg.spectral_m);
        s.ell = ell_k(dec, cfg.alpha);
        s.invariants.per_level_ell = s.ell;
      } catch (const AmbiguousClusterError& e) {
        events.push_back({t, "ambiguous-cluster", e.what()});
        s.ell.assign(1, kNan);
      }
    }
  }
  if (cfg.pole_rank > 0) s.pole_radius = pole_radius_estimate(s.state, cfg.pole_rank);
  return s;
}

}  // namespace

TrajectoryRecord integrate(const SimulationConfig& config, const FourierState& u0,
                           const SampleCallback& on_sample) {
  config.validate();
  if (!u0.resolved(config.tail_guard))
    throw UnresolvedStateError("integrate: initial state unresolved at the tail guard");

  TrajectoryRecord rec;
  rec.config = config;
  Flow flow(config);
  Vec y0 = u0.truncated(config.truncation).coeffs();
  Stepper stepper(config, flow, 0.0, std::move(y0));

  auto emit = [&](double t, const Vec& y) {
    Sample s = make_sample(t, y, config, flow.plan(), rec.events);
    if (on_sample) on_sample(s);
    rec.samples.push_back(std::move(s));
  };

  emit(0.0, stepper.y());
  long n_samples = static_cast<long>(std::ceil(config.t_max / config.sample_interval));
  bool breached = false;
  for (long i = 1; i <= n_samples && !breached; ++i) {
    double target = std::min(i * config.sample_interval, config.t_max);
    stepper.advance_to(target);
    emit(stepper.t(), stepper.y());
    const Sample& s = rec.samples.back();
    if (s.tail > config.tail_guard) {
      rec.events.push_back({s.t, "tail-breach",
                            "top-eighth modes exceed the tail guard; state unresolved"});
      breached = true;
    }
  }
  rec.completed = !breached;
  rec.end_time = stepper.t();
  rec.rhs_evaluations = stepper.evals();
  return rec;
}

FourierState state_at(const TrajectoryRecord& traj, double t) {
  if (t < -1e-12 || t > traj.end_time + 1e-12)
    throw Error("state_at: time outside the recorded window");
  const Sample& s = traj.at_or_before(t);
  if (std::abs(s.t - t) < 1e-13) return s.state;
  Flow flow(traj.config);
  Stepper stepper(traj.config, flow, s.t, s.state.coeffs());
  stepper.advance_to(t);
  return FourierState(stepper.y());
}

double lax_residual_K(const TrajectoryRecord& traj, double t, double dt, int m) {
  FourierState um = state_at(traj, t - dt);
  FourierState u0 = state_at(traj, t);
  FourierState up = state_at(traj, t + dt);

  Eigen::MatrixXcd km = shifted_hankel_matrix(um, m).entries;
  Eigen::MatrixXcd k0 = shifted_hankel_matrix(u0, m).entries;
  Eigen::MatrixXcd kp = shifted_hankel_matrix(up, m).entries;

  GridPlan plan(next_pow2(4 * u0.truncation()), u0.truncation());
  Eigen::MatrixXcd cu = bu_cu_matrices(u0, plan, m).second.entries;

  Eigen::MatrixXcd fd = (kp - km) / (2.0 * dt);
  Eigen::MatrixXcd commutator = cu * k0 - k0 * cu.conjugate();
  return opnorm(fd - commutator) / std::max(opnorm(k0), 1e-300);
}

double hu_evolution_residual(const TrajectoryRecord& traj, double t, double dt, int m,
                             bool include_source) {
  FourierState um = state_at(traj, t - dt);
  FourierState u0 = state_at(traj, t);
  FourierState up = state_at(traj, t + dt);

  Eigen::MatrixXcd hm = hankel_matrix(um, m).entries;
  Eigen::MatrixXcd h0 = hankel_matrix(u0, m).entries;
  Eigen::MatrixXcd hp = hankel_matrix(up, m).entries;

  GridPlan plan(next_pow2(4 * u0.truncation()), u0.truncation());
  Eigen::MatrixXcd bu = bu_cu_matrices(u0, plan, m).first.entries;

  Eigen::MatrixXcd fd = (hp - hm) / (2.0 * dt);
  Eigen::MatrixXcd rhs_mat = bu * h0 - h0 * bu.conjugate();
  if (include_source) {
    // -i alpha (u|1) H_1, and H_1 is the unit matrix E_00
    rhs_mat(0, 0) += Complex(0.0, -1.0) * traj.config.alpha * u0.coeff(0);
  }
  return opnorm(fd - rhs_mat) / std::max(opnorm(h0), 1e-300);
}

namespace {

const SpectralLevel* find_k_level(const SpectralDecomposition& dec, double sigma_k,
                                  double tol) {
  const SpectralLevel* best = nullptr;
  double best_d = tol;
  for (const auto& l : dec.k_levels) {
    double d = std::abs(l.value - sigma_k);
    if (d < best_d) {
      best_d = d;
      best = &l;
    }
  }
  return best;
}

}  // namespace

double projection_evolution_residual(const TrajectoryRecord& traj, double sigma_k,
                                     double t, double dt, int m) {
  auto level_at = [&](double tt) {
    FourierState u = state_at(traj, tt);
    auto dec = decompose(u, m);
    const SpectralLevel* l = find_k_level(dec, sigma_k, 0.05 * (sigma_k + 1.0));
    if (!l || !l->dominant)
      throw CrossingProximityError("projection_evolution_residual: level not dominant here");
    if (l->multiplicity != 1)
      throw CrossingProximityError("projection_evolution_residual: level not simple");
    for (const auto& h : dec.h_levels)
      if (std::abs(h.value - sigma_k) < 1e-3)
        throw CrossingProximityError("projection_evolution_residual: too close to a crossing");
    return std::pair<FourierState, FourierState>(u, l->u_proj);
  };

  auto [um, pm] = level_at(t - dt);
  auto [u0, p0] = level_at(t);
  auto [up, pp] = level_at(t + dt);

  Vec fd = (pp.coeffs() - pm.coeffs()) / (2.0 * dt);

  GridPlan plan(next_pow2(4 * u0.truncation()), u0.truncation());
  Vec uvals = to_grid(u0, plan);
  Vec b2(uvals.size());
  for (int j = 0; j < uvals.size(); ++j) b2[j] = std::norm(uvals[j]);
  FourierState tproj = apply_toeplitz(b2, p0, plan, p0.truncation());

  Complex u1 = u0.coeff(0);                    // (u|1)
  Complex one_uk = std::conj(p0.coeff(0));     // (1|u'_k)
  Complex coupling = traj.config.alpha * u1 * one_uk / Complex(p0.coeffs().squaredNorm());
  Vec rhs_vec = Complex(0.0, -1.0) * (tproj.coeffs() + coupling * p0.coeffs());

  return (fd - rhs_vec).norm() / std::max(rhs_vec.norm(), 1e-300);
}

ZeroTrace blaschke_orbit_trace(const TrajectoryRecord& traj, double sigma_k, int m) {
  ZeroTrace out;
  out.sigma = sigma_k;
  std::vector<Complex> reference;
  GridPlan plan(next_pow2(4 * m), m);
  for (const auto& s : traj.samples) {
    SpectralDecomposition dec;
    try {
      dec = decompose(s.state, m);
    } catch (const AmbiguousClusterError&) {
      out.notes.push_back("ambiguous clustering at t=" + std::to_string(s.t) + ", skipped");
      continue;
    }
    const SpectralLevel* l = find_k_level(dec, sigma_k, 0.05 * (sigma_k + 1.0));
    if (!l || !l->dominant) {
      out.notes.push_back("level not dominant at t=" + std::to_string(s.t) + ", skipped");
      continue;
    }
    BlaschkeProduct psi;
    try {
      psi = level_blaschke(s.state, *l, plan);
    } catch (const Error& e) {
      out.notes.push_back(std::string("fit failed at t=") + std::to_string(s.t) + ": " +
                          e.what());
      continue;
    }
    std::vector<Complex> zs = psi.zeros;
    if (!reference.empty()) {
      // nearest-neighbour matching against the first sample
      std::vector<Complex> matched(reference.size());
      std::vector<bool> used(zs.size(), false);
      for (size_t i = 0; i < reference.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        size_t arg = 0;
        for (size_t j = 0; j < zs.size(); ++j) {
          if (used[j]) continue;
          double d = std::abs(zs[j] - reference[i]);
          if (d < best) {
            best = d;
            arg = j;
          }
        }
        if (zs.empty()) break;
        used[arg] = true;
        matched[i] = zs[arg];
        out.max_drift = std::max(out.max_drift, std::abs(matched[i] - reference[i]));
      }
      zs = matched;
    } else {
      reference = zs;
    }
    out.times.push_back(s.t);
    out.zeros.push_back(zs);
    out.angles.push_back(psi.angle);
  }
  return out;
}

double pole_radius_estimate(const FourierState& u, int rank) {
  int n = u.truncation();
  double scale = u.coeffs().cwiseAbs().maxCoeff();
  if (scale <= 0.0) return 0.0;
  int last = n - 1;
  while (last > rank && std::abs(u.coeff(last)) < 1e-13 * scale) --last;

  // denominator fit: sum_j B_j u(k-j) = 0 for k = rank+1 .. last, B_0 = 1
  int rows = last - rank;
  if (rank >= 1 && rows >= 2 * rank) {
    Eigen::MatrixXcd a(rows, rank);
    Vec b(rows);
    for (int r = 0; r < rows; ++r) {
      int k = rank + 1 + r;
      for (int j = 1; j <= rank; ++j) a(r, j - 1) = u.coeff(k - j);
      b[r] = -u.coeff(k);
    }
    Vec sol = a.colPivHouseholderQr().solve(b);
    double rel = (a * sol - b).norm() / std::max(b.norm(), 1e-300);
    if (rel < 1e-6) {
      Vec denom = Vec::Zero(rank + 1);
      denom[0] = 1.0;
      denom.tail(rank) = sol;
      double radius = 0.0;
      bool ok = true;
      for (const auto& q : poly_roots(denom)) {
        double aq = std::abs(q);
        if (aq <= 1.0) ok = false;
        radius = std::max(radius, 1.0 / aq);
      }
      if (ok && radius > 0.0) return radius;
    }
  }

  // decay-rate fallback: slope of log|u(k)| over the usable window
  int lo = std::max(1, last / 4), hi = last;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int k = lo; k <= hi; ++k) {
    double a = std::abs(u.coeff(k));
    if (a < 1e-300) continue;
    double x = k, y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 3) return 0.0;
  double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return std::clamp(std::exp(slope), 0.0, 0.999999999999);
}

}  // namespace szego
