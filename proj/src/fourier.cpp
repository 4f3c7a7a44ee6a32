#include "szego/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace szego {

namespace {
// FFTW plan creation is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FourierState::FourierState(Vec coeffs) : coeffs_(std::move(coeffs)) {
  if (!coeffs_.allFinite()) throw Error("FourierState: non-finite coefficient");
}

FourierState::FourierState(std::initializer_list<Complex> coeffs)
    : FourierState(Eigen::Map<const Vec>(std::vector<Complex>(coeffs).data(),
                                         static_cast<long>(coeffs.size()))) {}

FourierState FourierState::zero(int n) { return FourierState(Vec::Zero(n)); }

FourierState FourierState::mode(int n, int k, Complex a) {
  Vec c = Vec::Zero(n);
  if (k < 0 || k >= n) throw Error("FourierState::mode: k out of range");
  c[k] = a;
  return FourierState(std::move(c));
}

double FourierState::tail_max() const {
  int n = truncation();
  double m = 0.0;
  for (int k = n - n / 8; k < n; ++k) m = std::max(m, std::abs(coeffs_[k]));
  return m;
}

FourierState FourierState::truncated(int n) const {
  Vec c = Vec::Zero(n);
  int keep = std::min(n, truncation());
  c.head(keep) = coeffs_.head(keep);
  return FourierState(std::move(c));
}

GridPlan::GridPlan(int grid_size, int truncation) : m_(grid_size), n_(truncation) {
  if (n_ < 1) throw Error("GridPlan: truncation must be positive");
  if (m_ < 3 * n_) throw Error("GridPlan: need M >= 3N for alias-free cubic products");
  if ((m_ & (m_ - 1)) != 0) throw Error("GridPlan: M must be a power of two");
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(m_));
  fwd_ = fftw_plan_dft_1d(m_, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_1d(m_, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!fwd_ || !bwd_) throw Error("GridPlan: fftw plan creation failed");
}

GridPlan::~GridPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

Vec GridPlan::synthesis(const Vec& padded) const {
  if (padded.size() != m_) throw Error("GridPlan::synthesis: size mismatch");
  Vec out = padded;
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
  return out;
}

Vec GridPlan::analysis(const Vec& values) const {
  if (values.size() != m_) throw Error("GridPlan::analysis: size mismatch");
  Vec out = values;
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
  out /= static_cast<double>(m_);
  return out;
}

FourierState szego_project(const TwoSided& f, int n_out) {
  Vec c = Vec::Zero(n_out);
  for (int k = 0; k < n_out; ++k) c[k] = f.at(k);
  return FourierState(std::move(c));
}

Complex inner_product(const FourierState& u, const FourierState& v) {
  int n = std::min(u.truncation(), v.truncation());
  if (n == 0) return {0.0, 0.0};
  // (u|v): linear in u, conjugate-linear in v
  return v.coeffs().head(n).dot(u.coeffs().head(n));
}

double sobolev_norm(const FourierState& u, double s) {
  if (s < 0) throw Error("sobolev_norm: s must be >= 0");
  double acc = 0.0;
  for (int k = 0; k < u.truncation(); ++k) {
    double kk = static_cast<double>(k);
    acc += std::pow(1.0 + kk * kk, s) * std::norm(u.coeff(k));
  }
  return std::sqrt(acc);
}

double l4_norm_fourth(const FourierState& u, const GridPlan& plan) {
  Vec vals = to_grid(u, plan);
  double acc = 0.0;
  for (int j = 0; j < vals.size(); ++j) {
    double a2 = std::norm(vals[j]);
    acc += a2 * a2;
  }
  return acc / static_cast<double>(plan.grid_size());
}

Vec to_grid(const FourierState& u, const GridPlan& plan) {
  int m = plan.grid_size();
  if (u.truncation() > m) throw AliasingError("to_grid: state exceeds grid");
  Vec padded = Vec::Zero(m);
  padded.head(u.truncation()) = u.coeffs();
  return plan.synthesis(padded);
}

TwoSided from_grid(const Vec& values, const GridPlan& plan) {
  Vec c = plan.analysis(values);
  int m = plan.grid_size();
  // reorder to k in [-M/2, M/2)
  TwoSided f;
  f.k_min = -m / 2;
  f.coeffs = Vec::Zero(m);
  for (int j = 0; j < m; ++j) {
    int k = (j < m / 2) ? j : j - m;
    f.coeffs[k - f.k_min] = c[j];
  }
  return f;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

GridPlan& plan_for(int truncation) {
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<GridPlan>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(truncation);
  if (it == cache.end()) {
    int m = next_pow2(4 * truncation);
    it = cache.emplace(truncation, std::make_unique<GridPlan>(m, truncation)).first;
  }
  return *it->second;
}

}  // namespace szego
