#pragma once

// Truncated Hardy-space representation of functions on the unit circle:
// non-negative Fourier modes, the projector that discards the rest, inner
// products and Sobolev norms, and FFT transforms between coefficients and
// equispaced circle samples.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "szego/errors.hpp"

namespace szego {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;

inline constexpr double kDefaultTailTol = 1e-12;

// u(z) = sum_{k=0}^{N-1} coeff(k) z^k on |z| = 1. Immutable in practice:
// every operation returns a fresh state.
class FourierState {
 public:
  FourierState() = default;
  explicit FourierState(Vec coeffs);
  FourierState(std::initializer_list<Complex> coeffs);

  static FourierState zero(int n);
  // a * z^k on an n-mode truncation
  static FourierState mode(int n, int k, Complex a = Complex(1.0, 0.0));

  int truncation() const { return static_cast<int>(coeffs_.size()); }
  const Vec& coeffs() const { return coeffs_; }
  Complex coeff(int k) const {
    return (k >= 0 && k < truncation()) ? coeffs_[k] : Complex(0.0, 0.0);
  }

  double l2_norm() const { return coeffs_.norm(); }

  // Largest coefficient modulus on the top eighth of the mode range.
  double tail_max() const;
  // Resolved at tol tau: tail_max() <= tau. Single-mode states (N < 8)
  // have an empty tail window and count as resolved.
  bool resolved(double tau = kDefaultTailTol) const { return tail_max() <= tau; }

  FourierState truncated(int n) const;  // crop or zero-pad to n modes

 private:
  Vec coeffs_;
};

// Two-sided spectrum produced by from_grid: modes k_min .. k_min+size-1.
struct TwoSided {
  int k_min = 0;
  Vec coeffs;

  Complex at(int k) const {
    int i = k - k_min;
    return (i >= 0 && i < coeffs.size()) ? coeffs[i] : Complex(0.0, 0.0);
  }
  int k_max() const { return k_min + static_cast<int>(coeffs.size()) - 1; }
};

// Equispaced circle grid of M points paired with a truncation N, M >= 3N and
// a power of two so cubic products are alias-free. FFT plans are created at
// construction and only read afterwards; a plan can be shared across threads.
class GridPlan {
 public:
  GridPlan(int grid_size, int truncation);
  ~GridPlan();
  GridPlan(const GridPlan&) = delete;
  GridPlan& operator=(const GridPlan&) = delete;

  int grid_size() const { return m_; }
  int truncation() const { return n_; }

  // values[j] = sum_k c(k) e^{2 pi i k j / M} for the zero-padded input
  Vec synthesis(const Vec& padded) const;
  // c(j) = (1/M) sum_m v[m] e^{-2 pi i j m / M}
  Vec analysis(const Vec& values) const;

 private:
  int m_ = 0;
  int n_ = 0;
  void* fwd_ = nullptr;  // fftw plans
  void* bwd_ = nullptr;
};

// Projector onto non-negative frequencies, truncated to n_out modes.
FourierState szego_project(const TwoSided& f, int n_out);

// (u|v) = sum_k u(k) conj(v(k)); shorter state zero-padded.
Complex inner_product(const FourierState& u, const FourierState& v);

// H^s norm with weight (1+k^2)^s: (sum_k (1+k^2)^s |u(k)|^2)^{1/2}, s >= 0.
double sobolev_norm(const FourierState& u, double s);

// Mean of |u|^4 over the plan grid; exact for trig polynomials once
// M >= 2N-1, callers use M >= 4N plans (see energy()).
double l4_norm_fourth(const FourierState& u, const GridPlan& plan);

// u sampled on the plan grid. Requires u.truncation() <= M.
Vec to_grid(const FourierState& u, const GridPlan& plan);
// Inverse transform; modes reported on (-M/2, M/2].
TwoSided from_grid(const Vec& values, const GridPlan& plan);

// Smallest power of two >= n.
int next_pow2(int n);

// Convenience: a plan sized for alias-free cubic products of an n-mode state
// (M = 4N rounded up to a power of two, which also covers |u|^4 averages).
GridPlan& plan_for(int truncation);

}  // namespace szego
