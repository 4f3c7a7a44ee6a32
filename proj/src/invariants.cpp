#include "szego/invariants.hpp"

#include <Eigen/LU>

#include <cmath>

namespace szego {

double energy(const FourierState& u, double alpha, const GridPlan& plan) {
  if (plan.grid_size() < 4 * u.truncation())
    throw Error("energy: quartic mean needs a plan with M >= 4N");
  double quartic = l4_norm_fourth(u, plan);
  return 0.25 * quartic + 0.5 * alpha * std::norm(u.coeff(0));
}

double mass(const FourierState& u) { return u.coeffs().squaredNorm(); }

double momentum(const FourierState& u) {
  double acc = 0.0;
  for (int k = 1; k < u.truncation(); ++k) acc += k * std::norm(u.coeff(k));
  return acc;
}

std::vector<double> hierarchy_L(const FourierState& u, double alpha, int n_max, int m) {
  Eigen::MatrixXcd k2 = k_square(u, m).entries;
  Vec uv = Vec::Zero(m);
  uv.head(std::min(m, u.truncation())) = u.coeffs().head(std::min(m, u.truncation()));
  Vec ev = Vec::Zero(m);
  ev[0] = 1.0;

  std::vector<double> out;
  Vec wu = uv, we = ev;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      wu = k2 * wu;
      we = k2 * we;
    }
    Complex a = uv.dot(wu);  // (K^{2n} u | u), dot conjugates the left factor
    Complex b = ev.dot(we);
    out.push_back(a.real() - alpha * b.real());
  }
  return out;
}

GeneratingValues generating_values(const FourierState& u, double alpha, double x, int m,
                                   bool check_resonance, double resonance_tol) {
  Eigen::MatrixXcd h2 = hankel_square(u, m).entries;
  Eigen::MatrixXcd k2 = k_square(u, m).entries;

  if (check_resonance && x != 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esh(h2, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esk(k2, Eigen::EigenvaluesOnly);
    double scale = std::max(std::abs(1.0 / x), 1.0);
    auto clear_of = [&](const Eigen::VectorXd& ev) {
      for (int i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i] - 1.0 / x) < 10.0 * resonance_tol * scale)
          throw NearResonanceError("generating_values: 1/x too close to the spectrum");
    };
    clear_of(esh.eigenvalues());
    clear_of(esk.eigenvalues());
  }

  Vec uv = Vec::Zero(m);
  uv.head(std::min(m, u.truncation())) = u.coeffs().head(std::min(m, u.truncation()));
  Vec ev = Vec::Zero(m);
  ev[0] = 1.0;

  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
  Eigen::PartialPivLU<Eigen::MatrixXcd> luh(id - x * h2);
  Eigen::PartialPivLU<Eigen::MatrixXcd> luk(id - x * k2);

  Vec rh_e = luh.solve(ev), rh_u = luh.solve(uv);
  Vec rk_u = luk.solve(uv), rk_e = luk.solve(ev);

  GeneratingValues g;
  g.x = x;
  g.J = ev.dot(rh_e).real();        // ((1-xH^2)^{-1} 1 | 1)
  g.Z = std::conj(Complex(rh_u[0]));  // (1 | w) = conj(w(0))
  g.F = uv.dot(rk_u).real();
  g.E = ev.dot(rk_e).real();
  g.L = g.F - alpha * g.E;
  if (x != 0.0) {
    g.residual_F = std::abs(g.F - (g.J - 1.0) / (x * g.J));
    g.residual_E = std::abs(g.E - (g.J - x * std::norm(g.Z) / g.J));
  } else {
    g.residual_F = std::abs(g.F - mass(u));
    g.residual_E = std::abs(g.E - 1.0);
  }
  if (check_resonance && (g.residual_F > 1e-8 * std::max(1.0, std::abs(g.F)) ||
                          g.residual_E > 1e-8 * std::max(1.0, std::abs(g.E))))
    throw Error("generating_values: lemma relations violated, solve ill-conditioned");
  return g;
}

std::vector<double> ell_k(const SpectralDecomposition& dec, double alpha) {
  std::vector<double> out;
  for (const auto& l : dec.k_levels) {
    double up = l.u_proj.l2_norm();
    double vp = l.one_proj.l2_norm();
    out.push_back(up * up - alpha * vp * vp);
  }
  return out;
}

double evaluate_functional(const Functional& f, const FourierState& u, int m) {
  switch (f.kind) {
    case Functional::Lx:
      return generating_values(u, f.alpha, f.x, m, /*check_resonance=*/false).L;
    case Functional::EnergyAlpha:
      return energy(u, f.alpha, plan_for(u.truncation()));
    case Functional::Mass:
      return mass(u);
    case Functional::Momentum:
      return momentum(u);
  }
  throw Error("evaluate_functional: unknown functional");
}

double PoissonBracketResult::normalized() const {
  double scale = grad_norm_f * grad_norm_g / 4.0;
  return (scale > 0.0) ? std::abs(bracket) / scale : 0.0;
}

namespace {

// Gradient with respect to the 2N real coordinates (re, im per mode).
// Returns (dF/da_k, dF/db_k) packed as a complex vector a + i b.
Vec fd_gradient(const Functional& f, const FourierState& u, double h, int m) {
  int n = u.truncation();
  Vec grad(n);
  Vec base = u.coeffs();
  for (int k = 0; k < n; ++k) {
    Vec c = base;
    c[k] = base[k] + h;
    double fp = evaluate_functional(f, FourierState(c), m);
    c[k] = base[k] - h;
    double fm = evaluate_functional(f, FourierState(c), m);
    double da = (fp - fm) / (2.0 * h);
    c[k] = base[k] + Complex(0.0, h);
    fp = evaluate_functional(f, FourierState(c), m);
    c[k] = base[k] - Complex(0.0, h);
    fm = evaluate_functional(f, FourierState(c), m);
    double db = (fp - fm) / (2.0 * h);
    grad[k] = Complex(da, db);
  }
  return grad;
}

}  // namespace

PoissonBracketResult poisson_bracket(const Functional& f, const Functional& g,
                                     const FourierState& u, double h, int m) {
  Vec gf = fd_gradient(f, u, h, m);
  Vec gg = fd_gradient(g, u, h, m);

  PoissonBracketResult out;
  out.grad_norm_f = gf.norm();
  out.grad_norm_g = gg.norm();
  // omega(X_F, X_G) = 1/4 sum_k (F_b G_a - F_a G_b)
  double acc = 0.0;
  for (int k = 0; k < gf.size(); ++k)
    acc += gf[k].imag() * gg[k].real() - gf[k].real() * gg[k].imag();
  out.bracket = 0.25 * acc;

  // jitter probe: one component at half step
  if (gf.size() > 0 && out.grad_norm_f > 0.0) {
    Vec base = u.coeffs();
    Vec c = base;
    c[0] = base[0] + 0.5 * h;
    double fp = evaluate_functional(f, FourierState(c), m);
    c[0] = base[0] - 0.5 * h;
    double fm = evaluate_functional(f, FourierState(c), m);
    double da_half = (fp - fm) / h;
    double ref = std::abs(gf[0].real()) + 1e-12 * out.grad_norm_f;
    if (std::abs(da_half - gf[0].real()) > 0.1 * ref) out.noisy = true;
  }
  return out;
}

}  // namespace szego
