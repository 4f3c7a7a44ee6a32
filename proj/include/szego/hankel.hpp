#pragma once

// Finite matrix truncations of the operators attached to a state u:
// the Hankel operator H_u (conjugate-linear, entries u(k+l)), its shift
// K_u = T_z^* H_u (entries u(k+l+1)), Toeplitz operators T_b (entries
// b(k-l)), and the combinations H_u^2, K_u^2, B_u, C_u used by the flow.

#include <utility>

#include "szego/fourier.hpp"

namespace szego {

enum class OperatorKind { HankelH, ShiftedHankelK, Toeplitz, HankelSquare, KSquare, Bu, Cu };

// kind HankelH / ShiftedHankelK act conjugate-linearly: apply as
// entries * conj(h). Everything else is C-linear.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  OperatorKind kind;

  bool conjugates_input() const {
    return kind == OperatorKind::HankelH || kind == OperatorKind::ShiftedHankelK;
  }
  int size() const { return static_cast<int>(entries.rows()); }
};

// m x m block, entries u(k+l); indices past the truncation are zero, which
// is only faithful for resolved states.
OperatorMatrix hankel_matrix(const FourierState& u, int m);
// entries u(k+l+1)
OperatorMatrix shifted_hankel_matrix(const FourierState& u, int m);
// entries b(k-l) from grid samples of b; Hermitian when b is real
OperatorMatrix toeplitz_matrix(const Vec& b_grid, int m, const GridPlan& plan);

// H_u^2 as a C-linear matrix: (H^2)_{kl} = sum_j u(k+j) conj(u(l+j)), built
// from the full rectangular Hankel block so all available modes contribute.
OperatorMatrix hankel_square(const FourierState& u, int m);
// K_u^2 likewise; equals hankel_square minus the rank-one term (.|u)u.
OperatorMatrix k_square(const FourierState& u, int m);

// B_u = i/2 H_u^2 - i T_{|u|^2},  C_u = i/2 K_u^2 - i T_{|u|^2} (skew-Hermitian).
std::pair<OperatorMatrix, OperatorMatrix> bu_cu_matrices(const FourierState& u,
                                                         const GridPlan& plan, int m);

// Grid-based exact applications (alias-free on the given plan).
// H_u(h) = P(u conj(h)), truncated to n_out modes.
FourierState apply_hankel(const FourierState& u, const FourierState& h,
                          const GridPlan& plan, int n_out);
// K_u(h) = T_z^* H_u(h): H_u(h) with coefficients shifted down by one.
FourierState apply_shifted_hankel(const FourierState& u, const FourierState& h,
                                  const GridPlan& plan, int n_out);
// T_b(h) = P(b h) for grid samples b.
FourierState apply_toeplitz(const Vec& b_grid, const FourierState& h,
                            const GridPlan& plan, int n_out);

}  // namespace szego
