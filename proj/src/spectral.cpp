#include "szego/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace szego {

namespace {

struct EigenLevels {
  // descending clusters of one operator
  std::vector<double> value_sq;         // cluster means
  std::vector<int> size;
  std::vector<Eigen::MatrixXcd> basis;  // eigenvectors per cluster (m x size)
};

// Cluster the (ascending) eigenvalues of a Hermitian matrix from the top,
// dropping everything below floor_abs into the kernel pool.
EigenLevels cluster_levels(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es,
                           double tol_abs, double floor_abs) {
  EigenLevels out;
  const auto& ev = es.eigenvalues();
  int m = static_cast<int>(ev.size());
  int i = m - 1;
  while (i >= 0 && ev[i] > floor_abs) {
    int j = i;
    while (j - 1 >= 0 && ev[j - 1] > floor_abs && (ev[j] - ev[j - 1]) <= tol_abs) --j;
    int size = i - j + 1;
    double mean = 0.0;
    for (int a = j; a <= i; ++a) mean += ev[a];
    mean /= size;
    out.value_sq.push_back(mean);
    out.size.push_back(size);
    out.basis.push_back(es.eigenvectors().middleCols(j, size));
    i = j - 1;
  }
  return out;
}

FourierState project(const Eigen::MatrixXcd& basis, const Vec& x) {
  return FourierState(Vec(basis * (basis.adjoint() * x)));
}

double prod_shifted(const std::vector<double>& vals, double x, int skip) {
  double p = 1.0;
  for (int i = 0; i < static_cast<int>(vals.size()); ++i) {
    if (i == skip) continue;
    p *= (vals[i] - x);
  }
  return p;
}

}  // namespace

std::vector<const SpectralLevel*> SpectralDecomposition::dominant(Family f) const {
  std::vector<const SpectralLevel*> out;
  const auto& levels = (f == Family::H) ? h_levels : k_levels;
  for (const auto& l : levels)
    if (l.dominant) out.push_back(&l);
  return out;
}

SpectralDecomposition decompose(const FourierState& u, int m, double cluster_tol_rel) {
  Eigen::MatrixXcd h2 = hankel_square(u, m).entries;
  Eigen::MatrixXcd k2 = k_square(u, m).entries;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esh(h2), esk(k2);
  if (esh.info() != Eigen::Success || esk.info() != Eigen::Success)
    throw Error("decompose: eigensolver failed");

  double lam_max = std::max(esh.eigenvalues().maxCoeff(), 0.0);
  if (lam_max == 0.0) {
    SpectralDecomposition empty;
    empty.m = m;
    return empty;
  }
  double tol_abs = cluster_tol_rel * lam_max;
  double dom_thresh = std::sqrt(tol_abs);

  SpectralDecomposition dec;
  dec.cluster_tol = tol_abs;
  dec.m = m;

  Vec u_m = Vec::Zero(m);
  u_m.head(std::min(m, u.truncation())) = u.coeffs().head(std::min(m, u.truncation()));
  Vec e0 = Vec::Zero(m);
  e0[0] = 1.0;

  auto build = [&](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es, Family fam) {
    EigenLevels cl = cluster_levels(es, tol_abs, tol_abs);
    // gap-zone check between adjacent kept clusters
    for (size_t i = 0; i + 1 < cl.value_sq.size(); ++i) {
      double gap = cl.value_sq[i] - cl.value_sq[i + 1];
      if (gap < 10.0 * tol_abs)
        throw AmbiguousClusterError("decompose: clusters separated by less than 10x tolerance");
    }
    std::vector<SpectralLevel> levels;
    for (size_t i = 0; i < cl.value_sq.size(); ++i) {
      SpectralLevel lvl;
      lvl.family = fam;
      lvl.value = std::sqrt(std::max(cl.value_sq[i], 0.0));
      lvl.multiplicity = cl.size[i];
      lvl.u_proj = project(cl.basis[i], u_m);
      lvl.one_proj = project(cl.basis[i], e0);
      lvl.dominant = lvl.u_proj.l2_norm() > dom_thresh;
      levels.push_back(std::move(lvl));
    }
    return levels;
  };

  dec.h_levels = build(esh, Family::H);
  dec.k_levels = build(esk, Family::K);

  for (const auto& l : dec.h_levels) {
    dec.rank_h += l.multiplicity;
    if (l.dominant) dec.dom_rank_h += l.multiplicity;
  }
  for (const auto& l : dec.k_levels) {
    dec.rank_k += l.multiplicity;
    if (l.dominant) dec.dom_rank_k += l.multiplicity;
  }

  // sigma = 0 joins Sigma_K when u meets the kernel of K^2
  Vec u_ker = u_m;
  Vec one_ker = e0;
  for (const auto& l : dec.k_levels) {
    u_ker -= l.u_proj.coeffs();
    one_ker -= l.one_proj.coeffs();
  }
  if (u_ker.norm() > dom_thresh) {
    SpectralLevel lvl;
    lvl.family = Family::K;
    lvl.value = 0.0;
    lvl.multiplicity = m - dec.rank_k;
    lvl.dominant = true;
    lvl.u_proj = FourierState(std::move(u_ker));
    lvl.one_proj = FourierState(std::move(one_ker));
    dec.k_levels.push_back(std::move(lvl));
  }

  // interlacing of the dominant families: rho_1 > sigma_1 > rho_2 > ...
  {
    auto hs = dec.dominant(Family::H);
    auto ks = dec.dominant(Family::K);
    double slack = 10.0 * tol_abs;
    size_t n = std::min(hs.size(), ks.size());
    for (size_t i = 0; i < n; ++i) {
      double rho2 = hs[i]->value * hs[i]->value;
      double sig2 = ks[i]->value * ks[i]->value;
      if (rho2 < sig2 - slack) throw Error("decompose: interlacing violated (rho_i < sigma_i)");
      if (i + 1 < hs.size()) {
        double rho2n = hs[i + 1]->value * hs[i + 1]->value;
        if (sig2 < rho2n - slack)
          throw Error("decompose: interlacing violated (sigma_i < rho_{i+1})");
      }
    }
    // near-crossing: an H doublet straddling a K value within tolerance
    for (const auto& h : dec.h_levels)
      for (const auto* k : ks)
        if (h.multiplicity >= 2 && std::abs(h.value - k->value) < std::sqrt(slack))
          dec.warnings.push_back("near-crossing: H doublet at a K level");
  }
  return dec;
}

BlaschkeProduct level_blaschke(const FourierState& u, const SpectralLevel& level,
                               const GridPlan& plan, double fit_tol) {
  if (level.u_proj.l2_norm() <= 0.0)
    throw Error("level_blaschke: level has no u-projection");
  if (level.family == Family::K && level.value == 0.0)
    throw Error("level_blaschke: kernel level carries no Blaschke product");
  int d = level.multiplicity - 1;
  int m = plan.grid_size();
  double tau = level.value;

  Vec a_vals, b_vals;
  if (level.family == Family::H) {
    a_vals = to_grid(level.u_proj, plan) * tau;
    b_vals = to_grid(apply_hankel(u, level.u_proj, plan, plan.truncation()), plan);
  } else {
    a_vals = to_grid(apply_shifted_hankel(u, level.u_proj, plan, plan.truncation()), plan);
    b_vals = to_grid(level.u_proj, plan) * tau;
  }

  BlaschkeProduct psi;
  if (d == 0) {
    Complex c = b_vals.dot(a_vals) / b_vals.squaredNorm();
    if (std::abs(std::abs(c) - 1.0) > 1e-6)
      throw DegreeMismatchError("level_blaschke: constant ratio is not unimodular");
    psi.angle = -std::arg(c);
  } else {
    // Least-squares rational fit: den(z) A(z_m) - num(z) B(z_m) = 0, smallest
    // singular vector of the (m x 2(d+1)) system.
    Eigen::MatrixXcd sys(m, 2 * (d + 1));
    for (int j = 0; j < m; ++j) {
      Complex z = std::polar(1.0, 2.0 * M_PI * j / m);
      double w = 1.0 / std::max(std::abs(a_vals[j]) + std::abs(b_vals[j]), 1e-30);
      Complex zp(1.0, 0.0);
      for (int i = 0; i <= d; ++i) {
        sys(j, i) = w * a_vals[j] * zp;            // den coefficients
        sys(j, d + 1 + i) = -w * b_vals[j] * zp;   // num coefficients
        zp *= z;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeThinV);
    Eigen::VectorXcd v = svd.matrixV().col(2 * (d + 1) - 1);
    Vec den = v.head(d + 1);
    Vec num = v.tail(d + 1);
    if (poly_degree(num) != d || std::abs(den[0]) < 1e-12 * den.norm())
      throw DegreeMismatchError("level_blaschke: fitted ratio has unexpected degree");
    auto zeros = poly_roots(num);
    for (const auto& p : zeros)
      if (std::abs(p) >= 1.0)
        throw DegreeMismatchError("level_blaschke: fitted zero outside the unit disc");
    psi.zeros = zeros;
    // num = s e^{-i psi} P, den = s D with D(0) = 1, so s = den(0)
    Complex phase = num[d] / den[0];
    if (std::abs(std::abs(phase) - 1.0) > 1e-4)
      throw DegreeMismatchError("level_blaschke: fitted ratio is not inner");
    psi.angle = -std::arg(phase);
  }

  // fitted product must reproduce the ratio wherever the denominator is alive
  double b_scale = b_vals.cwiseAbs().maxCoeff();
  double a_scale = std::max(a_vals.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    if (std::abs(b_vals[j]) < 0.05 * b_scale) continue;
    Complex z = std::polar(1.0, 2.0 * M_PI * j / m);
    worst = std::max(worst,
                     std::abs(blaschke_eval(psi, z) * b_vals[j] - a_vals[j]) / a_scale);
  }
  if (worst > fit_tol)
    throw DegreeMismatchError("level_blaschke: ratio deviates from fitted Blaschke product");
  return psi;
}

double NormResiduals::max() const {
  double r = 0.0;
  for (double x : h) r = std::max(r, x);
  for (double x : k) r = std::max(r, x);
  return r;
}

NormResiduals verify_projection_norms(const SpectralDecomposition& dec) {
  auto hs = dec.dominant(Family::H);
  auto ks = dec.dominant(Family::K);
  std::vector<double> rho2, sig2;
  for (auto* l : hs) rho2.push_back(l->value * l->value);
  for (auto* l : ks) sig2.push_back(l->value * l->value);

  double guard = 10.0 * dec.cluster_tol;
  NormResiduals out;
  for (size_t j = 0; j < rho2.size(); ++j) {
    bool near = false;
    for (double s : sig2) near = near || std::abs(rho2[j] - s) < guard;
    if (near) continue;
    double formula = prod_shifted(sig2, rho2[j], -1) * ((sig2.size() % 2) ? -1.0 : 1.0);
    // prod_l (rho_j^2 - sigma_l^2) = (-1)^{#sigma} prod_l (sigma_l^2 - rho_j^2)
    double denom = prod_shifted(rho2, rho2[j], static_cast<int>(j));
    denom *= ((rho2.size() - 1) % 2) ? -1.0 : 1.0;
    double measured = hs[j]->u_proj.l2_norm();
    out.h.push_back(std::abs(measured * measured - formula / denom));
  }
  for (size_t k = 0; k < sig2.size(); ++k) {
    bool near = false;
    for (double r : rho2) near = near || std::abs(sig2[k] - r) < guard;
    if (near) continue;
    double numer = prod_shifted(rho2, sig2[k], -1);
    double denom = prod_shifted(sig2, sig2[k], static_cast<int>(k));
    double measured = ks[k]->u_proj.l2_norm();
    out.k.push_back(std::abs(measured * measured - numer / denom));
  }
  return out;
}

std::vector<double> verify_v_norm(const SpectralDecomposition& dec) {
  std::vector<double> out;
  for (auto* l : dec.dominant(Family::H)) {
    double u2 = l->u_proj.l2_norm();
    double v2 = l->one_proj.l2_norm();
    out.push_back(std::abs(v2 * v2 - u2 * u2 / (l->value * l->value)));
  }
  return out;
}

Ranks ranks(const FourierState& u, int m, double tol) {
  auto count_rank = [&](const Eigen::MatrixXcd& g) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    const auto& sv = svd.singularValues();
    double top = sv.size() ? sv[0] : 0.0;
    if (top == 0.0) return 0;
    double th = tol * top;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i) {
      if (sv[i] > th * 10.0) ++r;
      else if (sv[i] > th / 10.0)
        throw ThresholdAmbiguityError("ranks: singular value within a factor 10 of threshold");
    }
    return r;
  };
  Ranks out;
  out.rank_h = count_rank(hankel_matrix(u, m).entries);
  out.rank_k = count_rank(shifted_hankel_matrix(u, m).entries);
  auto dec = decompose(u, m);
  out.dom_rank_h = dec.dom_rank_h;
  out.dom_rank_k = dec.dom_rank_k;
  // rk H = sum l_j + sum (m_k - 1), rk K = sum (l_j - 1) + sum m_k over the
  // dominant positive levels
  int n_h = 0, n_k = 0;
  for (const auto& l : dec.h_levels)
    if (l.dominant) ++n_h;
  for (const auto& l : dec.k_levels)
    if (l.dominant && l.value > 0.0) ++n_k;
  int rank_h_formula = dec.dom_rank_h + (dec.dom_rank_k - n_k);
  int rank_k_formula = dec.dom_rank_k + (dec.dom_rank_h - n_h);
  if (rank_h_formula != out.rank_h || rank_k_formula != out.rank_k)
    throw Error("ranks: rank formulas disagree with numerical ranks");
  return out;
}

SingularTrace top_singular_values(const FourierState& u, int m, int count) {
  SingularTrace out;
  auto top = [&](const Eigen::MatrixXcd& sq) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sq, Eigen::EigenvaluesOnly);
    std::vector<double> v;
    int n = static_cast<int>(es.eigenvalues().size());
    for (int i = n - 1; i >= 0 && static_cast<int>(v.size()) < count; --i)
      v.push_back(std::sqrt(std::max(es.eigenvalues()[i], 0.0)));
    return v;
  };
  out.h = top(hankel_square(u, m).entries);
  out.k = top(k_square(u, m).entries);
  return out;
}

CrossingReport detect_crossings(const std::vector<double>& times,
                                const std::vector<std::vector<double>>& rho,
                                double sigma, double gap_tol) {
  CrossingReport rep;
  rep.level = sigma;
  size_t n = times.size();
  std::vector<double> gap(n);
  for (size_t i = 0; i < n; ++i) {
    double g = std::numeric_limits<double>::infinity();
    for (double r : rho[i]) g = std::min(g, std::abs(r - sigma));
    gap[i] = g;
    rep.gap_trace.emplace_back(times[i], g);
  }
  rep.min_gap = *std::min_element(gap.begin(), gap.end());
  for (size_t i = 0; i + 1 < n; ++i) {
    double lo = std::min(gap[i], gap[i + 1]), hi = std::max(gap[i], gap[i + 1]);
    if (lo > gap_tol && hi / lo > 10.0) rep.undersampled = true;
  }

  // local minima of the squared gap, refined by a parabola through the
  // neighbouring samples
  auto consider = [&](size_t i) {
    double g2m = (i > 0) ? gap[i - 1] * gap[i - 1] : gap[i] * gap[i];
    double g20 = gap[i] * gap[i];
    double g2p = (i + 1 < n) ? gap[i + 1] * gap[i + 1] : gap[i] * gap[i];
    double t = times[i];
    double curv = g2m - 2.0 * g20 + g2p;
    double gmin2 = g20;
    if (i > 0 && i + 1 < n && curv > 0.0) {
      double h = 0.5 * (times[i + 1] - times[i - 1]);
      double delta = 0.5 * h * (g2m - g2p) / curv;
      delta = std::clamp(delta, -h, h);
      t = times[i] + delta;
      gmin2 = g20 - (g2m - g2p) * (g2m - g2p) / (8.0 * curv);
    }
    if (std::sqrt(std::max(gmin2, 0.0)) < gap_tol) rep.times.push_back(t);
  };
  for (size_t i = 0; i < n; ++i) {
    bool is_min = (i == 0 || gap[i] <= gap[i - 1]) && (i + 1 == n || gap[i] <= gap[i + 1]);
    if (is_min) consider(i);
  }
  return rep;
}

}  // namespace szego
