#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "szego/fourier.hpp"

using namespace szego;

TEST_CASE("szego projector keeps non-negative modes") {
  TwoSided f;
  f.k_min = -1;
  f.coeffs = Vec(3);
  f.coeffs << Complex(1, 0), Complex(2, 0), Complex(3, 0);  // modes -1, 0, 1
  FourierState u = szego_project(f, 4);
  CHECK(u.coeff(0) == Complex(2, 0));
  CHECK(u.coeff(1) == Complex(3, 0));
  CHECK(u.coeff(2) == Complex(0, 0));

  TwoSided z;
  z.k_min = -2;
  z.coeffs = Vec::Zero(5);
  FourierState uz = szego_project(z, 4);
  CHECK(uz.l2_norm() == 0.0);
}

TEST_CASE("projector on cos theta keeps z/2") {
  // cos has coefficients 1/2 at k = +-1
  GridPlan plan(32, 8);
  Vec vals(32);
  for (int j = 0; j < 32; ++j) vals[j] = std::cos(2.0 * M_PI * j / 32);
  FourierState u = szego_project(from_grid(vals, plan), 8);
  CHECK(std::abs(u.coeff(1) - 0.5) < 1e-14);
  CHECK(std::abs(u.coeff(0)) < 1e-14);
  CHECK(std::abs(u.coeff(2)) < 1e-14);
}

TEST_CASE("projector is idempotent and L2-decreasing") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  TwoSided f;
  f.k_min = -8;
  f.coeffs = Vec(20);
  for (int i = 0; i < 20; ++i) f.coeffs[i] = Complex(g(rng), g(rng));
  FourierState once = szego_project(f, 12);
  TwoSided again{0, once.coeffs()};
  FourierState twice = szego_project(again, 12);
  CHECK((once.coeffs() - twice.coeffs()).norm() == 0.0);
  CHECK(once.l2_norm() <= f.coeffs.norm());
}

TEST_CASE("inner product pairs modes") {
  FourierState a{Complex(1, 0), Complex(1, 0)};  // 1 + z
  CHECK(inner_product(a, a).real() == doctest::Approx(2.0));
  FourierState z{Complex(0, 0), Complex(1, 0)};
  FourierState one{Complex(1, 0)};
  CHECK(std::abs(inner_product(z, one)) == 0.0);

  // Blaschke factor (z - 1/2)/(1 - z/2): constant term -1/2
  Vec c(8);
  c[0] = -0.5;
  for (int k = 1; k < 8; ++k) c[k] = 0.75 * std::pow(0.5, k - 1);
  CHECK(inner_product(FourierState(c), one).real() == doctest::Approx(-0.5));
}

TEST_CASE("sobolev norm weight (1+k^2)^s") {
  FourierState one{Complex(1, 0)};
  CHECK(sobolev_norm(one, 0.0) == doctest::Approx(1.0));
  CHECK(sobolev_norm(one, 2.5) == doctest::Approx(1.0));
  FourierState z{Complex(0, 0), Complex(1, 0)};
  CHECK(sobolev_norm(z, 1.0) == doctest::Approx(std::sqrt(2.0)));
  FourierState a{Complex(1, 0), Complex(1, 0)};
  CHECK(sobolev_norm(a, 0.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(sobolev_norm(a, -1.0), Error);
}

TEST_CASE("quartic mean on the grid") {
  GridPlan plan(64, 16);
  FourierState one = FourierState::mode(16, 0);
  CHECK(l4_norm_fourth(one, plan) == doctest::Approx(1.0));
  FourierState zk = FourierState::mode(16, 5);
  CHECK(l4_norm_fourth(zk, plan) == doctest::Approx(1.0));
  Vec c = Vec::Zero(16);
  c[0] = 1;
  c[1] = 1;
  CHECK(l4_norm_fourth(FourierState(c), plan) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("grid transforms round trip") {
  GridPlan plan(64, 16);
  FourierState one = FourierState::mode(16, 0);
  Vec vals = to_grid(one, plan);
  for (int j = 0; j < 64; ++j) CHECK(std::abs(vals[j] - 1.0) < 1e-14);

  FourierState z = FourierState::mode(16, 1);
  Vec zv = to_grid(z, plan);
  CHECK(std::abs(zv[8] - std::polar(1.0, 2.0 * M_PI * 8 / 64)) < 1e-14);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Vec c(16);
  for (int i = 0; i < 16; ++i) c[i] = Complex(g(rng), g(rng));
  FourierState u(c);
  FourierState back = szego_project(from_grid(to_grid(u, plan), plan), 16);
  CHECK((back.coeffs() - u.coeffs()).norm() / u.l2_norm() < 1e-13);
}

TEST_CASE("tail resolution flag") {
  Vec c = Vec::Zero(64);
  c[0] = 1;
  FourierState u(c);
  CHECK(u.resolved(1e-12));
  c[60] = 1e-6;
  FourierState v(c);
  CHECK_FALSE(v.resolved(1e-12));
  CHECK(v.resolved(1e-5));
}

TEST_CASE("grid plan validates its invariants") {
  CHECK_THROWS_AS(GridPlan(60, 16), Error);   // not a power of two
  CHECK_THROWS_AS(GridPlan(32, 16), Error);   // M < 3N
  CHECK_NOTHROW(GridPlan(64, 16));
}
