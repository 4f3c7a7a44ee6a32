#include "szego/hankel.hpp"

namespace szego {

namespace {

// Rectangular block R_{k,j} = u(k + j + shift), k < m, j < n. Row k of R is
// the coefficient tail starting at k + shift, so R R^H sums every mode the
// truncation knows about.
Eigen::MatrixXcd hankel_block(const FourierState& u, int m, int shift) {
  int n = u.truncation();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(m, n);
  for (int k = 0; k < m; ++k)
    for (int j = 0; k + j + shift < n; ++j) r(k, j) = u.coeff(k + j + shift);
  return r;
}

}  // namespace

OperatorMatrix hankel_matrix(const FourierState& u, int m) {
  if (m < 1) throw Error("hankel_matrix: m must be positive");
  Eigen::MatrixXcd g(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) g(k, l) = u.coeff(k + l);
  return {std::move(g), OperatorKind::HankelH};
}

OperatorMatrix shifted_hankel_matrix(const FourierState& u, int m) {
  if (m < 1) throw Error("shifted_hankel_matrix: m must be positive");
  Eigen::MatrixXcd g(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) g(k, l) = u.coeff(k + l + 1);
  return {std::move(g), OperatorKind::ShiftedHankelK};
}

OperatorMatrix toeplitz_matrix(const Vec& b_grid, int m, const GridPlan& plan) {
  TwoSided b = from_grid(b_grid, plan);
  Eigen::MatrixXcd t(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) t(k, l) = b.at(k - l);
  return {std::move(t), OperatorKind::Toeplitz};
}

OperatorMatrix hankel_square(const FourierState& u, int m) {
  Eigen::MatrixXcd r = hankel_block(u, m, 0);
  return {r * r.adjoint(), OperatorKind::HankelSquare};
}

OperatorMatrix k_square(const FourierState& u, int m) {
  Eigen::MatrixXcd r = hankel_block(u, m, 1);
  return {r * r.adjoint(), OperatorKind::KSquare};
}

std::pair<OperatorMatrix, OperatorMatrix> bu_cu_matrices(const FourierState& u,
                                                         const GridPlan& plan, int m) {
  Vec vals = to_grid(u, plan);
  Vec b2(vals.size());
  for (int j = 0; j < vals.size(); ++j) b2[j] = std::norm(vals[j]);
  Eigen::MatrixXcd t = toeplitz_matrix(b2, m, plan).entries;
  const Complex ih(0.0, 0.5);
  const Complex i1(0.0, 1.0);
  OperatorMatrix bu{ih * hankel_square(u, m).entries - i1 * t, OperatorKind::Bu};
  OperatorMatrix cu{ih * k_square(u, m).entries - i1 * t, OperatorKind::Cu};
  return {std::move(bu), std::move(cu)};
}

FourierState apply_hankel(const FourierState& u, const FourierState& h,
                          const GridPlan& plan, int n_out) {
  Vec uv = to_grid(u, plan);
  Vec hv = to_grid(h, plan);
  Vec prod = uv.cwiseProduct(hv.conjugate());
  return szego_project(from_grid(prod, plan), n_out);
}

FourierState apply_shifted_hankel(const FourierState& u, const FourierState& h,
                                  const GridPlan& plan, int n_out) {
  FourierState hu = apply_hankel(u, h, plan, n_out + 1);
  Vec shifted = Vec::Zero(n_out);
  shifted.head(n_out) = hu.coeffs().tail(n_out);
  return FourierState(std::move(shifted));
}

FourierState apply_toeplitz(const Vec& b_grid, const FourierState& h,
                            const GridPlan& plan, int n_out) {
  Vec hv = to_grid(h, plan);
  Vec prod = b_grid.cwiseProduct(hv);
  return szego_project(from_grid(prod, plan), n_out);
}

}  // namespace szego
