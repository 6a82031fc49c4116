#include <doctest.h>

#include <cmath>

#include "cubiclab/errors.hpp"
#include "cubiclab/exp_sums.hpp"
#include "cubiclab/lattice_enum.hpp"
#include "cubiclab/quadrature.hpp"
#include "cubiclab/singular_integral.hpp"
#include "support.hpp"

using namespace cubiclab;
using namespace testing;

TEST_CASE("psi_L on the examples") {
  CHECK(psi_L(0, 3.5) == 3.5);
  CHECK(psi_L(1.0 / 4, 4) == 0);
  CHECK(psi_L(0.25, 2) == doctest::Approx(1.0));
  CHECK(psi_L(-0.25, 2) == psi_L(0.25, 2));
  CHECK_THROWS_AS(psi_L(0, 0), std::invalid_argument);
  std::vector<double> xi{0.1, -0.1};
  CHECK(Psi_L(xi, 4) == doctest::Approx(psi_L(0.1, 4) * psi_L(-0.1, 4)));
}

TEST_CASE("psi_L integrates to one") {
  for (double L : {0.5, 3.0, 40.0}) {
    auto f = [L](double x) { return Complex(psi_L(x, L), 0); };
    AdaptiveOptions ao;
    ao.abs_tol = 1e-13;
    auto left = integrate_adaptive(f, -1 / L, 0, ao);
    auto right = integrate_adaptive(f, 0, 1 / L, ao);
    CHECK(std::abs(left.value.real() + right.value.real() - 1.0) < 1e-12);
  }
}

TEST_CASE("schmidt_IL of the zero map is L times the integral of w") {
  auto zero_map = [](std::span<const double>, std::span<double> out) { out[0] = 0; };
  auto est = schmidt_IL(2, 1, zero_map, 5.0, 1 << 16, 3);
  const double w1 = 0.4439938161680794;  // integral of exp(-1/(1-t^2)) over (-1, 1)
  CHECK(est.value == doctest::Approx(5.0 * w1 * w1).epsilon(3e-3));
  CHECK(est.std_error >= 0);
}

TEST_CASE("schmidt_IL is deterministic and nonnegative") {
  auto L = taxicab_linsys();
  auto a = schmidt_IL(taxicab(), L, 8, 20000, 11);
  auto b = schmidt_IL(taxicab(), L, 8, 20000, 11);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.value >= 0);
  CHECK(a.seed == 11);
  CHECK(a.samples == 20000 / 64 * 64);  // whole batches of the 64 used for the error bar
  CHECK_THROWS_AS(schmidt_IL(taxicab(), L, 8, 999, 11), std::invalid_argument);
}

TEST_CASE("schmidt_IL for x1^3 approaches the slice integral") {
  // r = 0, C = x1^3 in two variables: I_L = int w(x) psi_L(x1^3) dx, which
  // grows like L^(2/3); compare each L against a one-dimensional quadrature
  // of the same integrand.
  CubicForm C = CubicForm(2, {mono(0, 0, 0, 1)});
  const double w1 = 0.4439938161680794;
  for (double L : {4.0, 8.0, 16.0}) {
    auto f = [L](double x) {
      std::vector<double> v{x};
      return Complex(weight_w(v) * psi_L(x * x * x, L), 0);
    };
    AdaptiveOptions ao;
    ao.abs_tol = 1e-10;
    const double edge = std::min(0.999999, std::cbrt(1.0 / L));
    double oracle = (integrate_adaptive(f, -edge, 0, ao).value.real() + integrate_adaptive(f, 0, edge, ao).value.real()) * w1;
    auto est = schmidt_IL(C, std::nullopt, L, 1 << 18, 5);
    CHECK(std::abs(est.value - oracle) <= 4 * est.std_error + 1e-3 * oracle);
  }
}

TEST_CASE("schmidt_IL is symmetric under reflection") {
  // w is even and C, L are odd, so replacing (C, L) by (-C, -L) leaves I_L
  // unchanged in distribution.
  auto C = taxicab();
  auto negC = CubicForm::diagonal({-1, -1, 1, 1});
  auto L = taxicab_linsys();
  std::vector<double> neg(L.row(0).real_coeffs());
  for (auto& v : neg) v = -v;
  LinearSystem negL({LinearForm(neg)}, true);
  auto a = schmidt_IL(C, L, 6, 1 << 16, 2);
  auto b = schmidt_IL(negC, negL, 6, 1 << 16, 9);
  CHECK(std::abs(a.value - b.value) <= 2 * std::hypot(a.std_error, b.std_error) + 1e-12);
}

TEST_CASE("I_L is continuous in L") {
  auto L = taxicab_linsys();
  double base = schmidt_IL(taxicab(), L, 8, 1 << 15, 4).value;
  double prev = 1e300;
  for (double delta : {0.1, 0.01, 0.001}) {
    double diff = std::abs(schmidt_IL(taxicab(), L, 8 * (1 + delta), 1 << 15, 4).value - base);
    CHECK(diff <= prev + 1e-12);
    prev = diff;
  }
  CHECK(prev < 1e-3 * base);
}

TEST_CASE("chi_w_estimate validates its schedule") {
  auto L = taxicab_linsys();
  CHECK_THROWS_AS(chi_w_estimate(taxicab(), L, {4, 8}, 10000, 1), std::invalid_argument);
  CHECK_THROWS_AS(chi_w_estimate(taxicab(), L, {4, 8, 8}, 10000, 1), std::invalid_argument);
}

TEST_CASE("chi_w_estimate converges above the critical dimension") {
  // Near the singular point x = 0 the real density behaves like the
  // integral of rho^(n-r-4) d rho, so the limit exists once n > r + 3 and
  // I_L approaches it like L^(-(n-r-3)/3). Five variables with r = 0 give
  // differences shrinking like L^(-2/3).
  auto C = CubicForm::diagonal({1, 1, 1, -1, -1});
  auto est = chi_w_estimate(C, std::nullopt, {4, 8, 16, 32}, 1 << 20, 7);
  CHECK(est.value > 0);
  CHECK(est.error_bar > 0);
  REQUIRE(est.table.size() == 4);
  for (std::size_t i = 2; i < est.table.size(); ++i)
    CHECK(std::abs(est.table[i].IL - est.table[i - 1].IL) < std::abs(est.table[i - 1].IL - est.table[i - 2].IL));
}

TEST_CASE("chi_w_estimate reports divergence instead of extrapolating") {
  // For n <= r + 3 the tent integrals grow with L; x1^3 in two variables
  // grows like L^(2/3).
  auto C = CubicForm(2, {mono(0, 0, 0, 1)});
  try {
    chi_w_estimate(C, std::nullopt, {4, 8, 16, 32}, 1 << 16, 1);
    FAIL("expected ScheduleNotConverged");
  } catch (const ScheduleNotConverged& e) {
    CHECK(e.table().size() == 4);
  }
}

TEST_CASE("samples doubling stays within statistical error") {
  auto C = CubicForm::diagonal({1, 1, -2});
  LinearSystem L({LinearForm(std::vector<double>{-std::sqrt(2.0) / 4, 0.0, 1.0})}, true);
  auto a = schmidt_IL(C, L, 8, 1 << 17, 21);
  auto b = schmidt_IL(C, L, 8, 1 << 18, 21);
  CHECK(std::abs(a.value - b.value) <= 3 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("chi_w_oscillatory") {
  auto C = CubicForm(2, {mono(0, 0, 0, 1)});
  LinearSystem L({LinearForm(std::vector<double>{0.0, std::sqrt(2.0)})}, true);
  OscillatoryBox box{10, 10};
  auto osc = chi_w_oscillatory(C, L, box, 1e-6);
  CHECK(std::abs(osc.value.value.imag()) <= 1e-6 + osc.value.abs_error);
  CHECK(osc.tail_bound >= 0);
  CHECK(osc.value.abs_error >= osc.tail_bound);
  CHECK(std::abs(osc.value.value - osc.half_box_value) <= osc.tail_bound + 1e-12);
  CHECK_THROWS_AS(chi_w_oscillatory(taxicab(), taxicab_linsys(), box, 1e-6), std::invalid_argument);
}

TEST_CASE("intbox_check") {
  auto L = taxicab_linsys();
  auto small = intbox_check(taxicab(), L, 1, 1 << 15, 3);
  CHECK(small.value > 0);
  double floor_value = 1e300;
  for (double Lv : {2.0, 4.0, 8.0, 16.0}) {
    auto v = intbox_check(taxicab(), L, Lv, 1 << 17, 3);
    CHECK(v.value >= 0);
    floor_value = std::min(floor_value, v.value);
  }
  CHECK(floor_value > 0.01);
}
