#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cubiclab/errors.hpp"
#include "cubiclab/exp_sums.hpp"
#include "cubiclab/lattice_enum.hpp"
#include "support.hpp"

using namespace cubiclab;
using namespace testing;

namespace {

const double kPi = std::numbers::pi;
CubicForm cube() { return CubicForm::diagonal({1}); }

Complex direct_sum(const CubicForm& C, std::int64_t q, std::int64_t a, const IntVec& avec) {
  const int n = C.n();
  IntVec y(n, 0);
  Complex acc = 0;
  while (true) {
    Integer v = a * eval_cubic(C, std::span<const std::int64_t>(y));
    for (int i = 0; i < n; ++i) v += Integer(avec[i]) * y[i];
    acc += std::polar(1.0, 2 * kPi * static_cast<double>(mod_floor(v, q)) / static_cast<double>(q));
    int i = 0;
    while (i < n && ++y[i] == q) y[i++] = 0;
    if (i == n) break;
  }
  return acc;
}

}  // namespace

TEST_CASE("complete_sum on the examples") {
  auto one = complete_sum(taxicab(), 1, 3, {5, 1, 2, 0});
  CHECK(one.value.real() == doctest::Approx(1.0));
  CHECK(std::abs(one.value.imag()) < 1e-15);

  auto s9 = complete_sum(cube(), 9, 1, {0});
  CHECK(s9.value.real() == doctest::Approx(3 * (1 + 2 * std::cos(2 * kPi / 9))).epsilon(1e-12));
  CHECK(std::abs(s9.value.imag()) < 1e-12);

  auto s2 = complete_sum(cube(), 2, 1, {0});
  CHECK(std::abs(s2.value) < 1e-12);
  CHECK(s2.abs_error >= 0);
}

TEST_CASE("complete_sum budget") {
  CHECK_THROWS_AS(complete_sum(taxicab(), 200, 1, {0, 0, 0, 0}), ResourceLimit);
  CHECK_THROWS_AS(complete_sum(cube(), 1000, 1, {0}, 100.0), ResourceLimit);
}

TEST_CASE("complete_sum_crt on the examples") {
  auto a = complete_sum_crt(cube(), 6, 1, {0});
  auto b = complete_sum(cube(), 6, 1, {0});
  CHECK(std::abs(a.value - b.value) < 1e-9);
  auto p = complete_sum_crt(cube(), 7, 3, {2});
  CHECK(std::abs(p.value - complete_sum(cube(), 7, 3, {2}).value) < 1e-12);

  auto two = CubicForm::diagonal({1, 1});
  auto c = complete_sum_crt(two, 36, 5, {1, 2});
  CHECK(std::abs(c.value - direct_sum(two, 36, 5, {1, 2})) < 1e-9);
  CHECK(std::abs(complete_sum(two, 36, 5, {1, 2}).value - direct_sum(two, 36, 5, {1, 2})) < 1e-9);
}

TEST_CASE("complete sums: CRT consistency, trivial bound, conjugation") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-3, 3), pick(2, 20);
  int done = 0;
  while (done < 60) {
    std::int64_t q1 = pick(rng), q2 = pick(rng);
    if (gcd64(q1, q2) != 1 || q1 * q2 > 400) continue;
    const std::int64_t q = q1 * q2;
    std::int64_t a = std::uniform_int_distribution<std::int64_t>(1, q - 1)(rng);
    if (gcd64(a, q) != 1) continue;
    const int n = 1 + done % 2;
    std::vector<Monomial> terms{mono(0, 0, 0, 1 + std::abs(coef(rng)))};
    if (n == 2) terms.push_back(mono(0, 1, 1, coef(rng))), terms.push_back(mono(1, 1, 1, coef(rng)));
    CubicForm C(n, terms);
    IntVec avec(n);
    for (auto& v : avec) v = coef(rng);
    auto direct = complete_sum(C, q, a, avec);
    auto crt = complete_sum_crt(C, q, a, avec);
    const double qn = std::pow(static_cast<double>(q), n);
    CHECK(std::abs(direct.value - crt.value) <= 1e-9 * qn);
    CHECK(std::abs(direct.value) <= qn + 1e-9);
    IntVec neg(n);
    for (int i = 0; i < n; ++i) neg[i] = -avec[i];
    auto conj = complete_sum(C, q, q - a, neg);
    CHECK(std::abs(conj.value - std::conj(direct.value)) < 1e-9 * qn);
    ++done;
  }
}

TEST_CASE("sbound_check") {
  SboundOptions none;
  none.random_avec = 0;
  auto rep = sbound_check(cube(), 1, 2, 0.25, none);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].q == 1);
  CHECK(rep.rows[0].ratio == doctest::Approx(1.0));
  CHECK(rep.rows[1].ratio == doctest::Approx(0.0));

  auto two = sbound_check(CubicForm::diagonal({1, 1}), 1, 20, 0.25);
  CHECK(two.rows.size() == 20);
  for (const auto& row : two.rows) {
    CHECK(std::isfinite(row.ratio));
    CHECK(row.ratio >= 0);
  }
  CHECK(two.max_ratio >= 1.0);
}

TEST_CASE("sum_g on the examples") {
  std::vector<double> zero1{0.0};
  auto all = sum_g(fermat3(), 3.5, 0.0, std::vector<double>{0, 0, 0}, false);
  CHECK(all.value.real() == doctest::Approx(std::pow(2 * std::ceil(3.5) - 1, 3)));

  auto w = sum_g(CubicForm::diagonal({1, 1}), 4, 0.0, std::vector<double>{0, 0}, true);
  double expected = 0;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) {
      std::vector<double> v{x / 4.0, y / 4.0};
      expected += weight_w(v);
    }
  CHECK(w.value.real() == doctest::Approx(expected).epsilon(1e-13));
  CHECK(w.value.real() > 0);

  auto g = sum_g(cube(), 3, 0.25, zero1, false);
  CHECK(g.value.real() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(g.value.imag()) < 1e-12);
}

TEST_CASE("sum_g agrees with a direct evaluation for a non-diagonal form") {
  CubicForm C(2, {mono(0, 0, 1, 2), mono(1, 1, 1, -1)});
  std::vector<double> lambda{0.17, -0.41};
  const double P = 6, alpha0 = 0.013;
  for (bool weighted : {false, true}) {
    Complex acc = 0;
    for (int x = -5; x <= 5; ++x)
      for (int y = -5; y <= 5; ++y) {
        IntVec v{x, y};
        double phase = alpha0 * eval_cubic(C, std::span<const std::int64_t>(v)).convert_to<double>() +
                       lambda[0] * x + lambda[1] * y;
        std::vector<double> s{x / P, y / P};
        acc += (weighted ? weight_w(s) : 1.0) * std::polar(1.0, 2 * kPi * phase);
      }
    auto g = sum_g(C, P, alpha0, lambda, weighted);
    CHECK(std::abs(g.value - acc) < 1e-10);
  }
}

TEST_CASE("osc_integral_I on the examples") {
  std::vector<double> zero{0.0};
  auto I0 = osc_integral_I(cube(), 0, zero, 1e-10);
  CHECK(I0.value.real() == doctest::Approx(0.443993816).epsilon(1e-8));
  CHECK(I0.abs_error <= 1e-10);

  std::vector<double> g5{5.0};
  auto I5 = osc_integral_I(cube(), 0, g5, 1e-10);
  CHECK(std::abs(I5.value) <= 0.05);

  auto C = CubicForm(2, {mono(0, 0, 1, 1), mono(1, 1, 1, 2)});
  std::vector<double> gp{0.7, -1.3}, gm{-0.7, 1.3};
  auto a = osc_integral_I(C, 0.9, gp, 1e-8);
  auto b = osc_integral_I(C, -0.9, gm, 1e-8);
  CHECK(std::abs(a.value - std::conj(b.value)) < 1e-7);
}

TEST_CASE("osc_integral_I reports unreachable tolerances") {
  std::vector<double> zero{0.0};
  OscOptions tight;
  tight.max_intervals = 4;
  CHECK_THROWS_AS(osc_integral_I(cube(), 500, zero, 1e-12, tight), ToleranceNotMet);
}

TEST_CASE("osc_integral_Iu on the examples") {
  std::vector<double> zero2{0.0, 0.0};
  auto vol = osc_integral_Iu(CubicForm::diagonal({1, 1}), 0, zero2, 1e-10);
  CHECK(vol.value.real() == doctest::Approx(4.0).epsilon(1e-10));

  std::vector<double> one{1.0};
  auto I1 = osc_integral_Iu(cube(), 0, one, 1e-10);
  CHECK(std::abs(I1.value) < 1e-9);

  std::vector<double> zero{0.0};
  auto I40 = osc_integral_Iu(cube(), 40, zero, 1e-9);
  // Stationary phase at the origin: |I_u| ~ 2 Gamma(4/3) (2 pi 40)^(-1/3).
  CHECK(std::abs(I40.value) <= 2.0 * std::pow(40.0, -1.0 / 3.0));
}

TEST_CASE("poisson_residual on the examples") {
  std::vector<double> zero{0.0};
  auto r0 = poisson_residual(cube(), 10, 0, zero, 3);
  CHECK(r0.residual <= 1e-3 * 10);

  std::vector<double> l3{0.3};
  auto r1 = poisson_residual(cube(), 8, 1e-4, l3, 5);
  CHECK(r1.relative <= 1e-2);

  // cutoff 0 is the single c = 0 approximant P^n I(P^3 alpha0, P lambda).
  auto r00 = poisson_residual(cube(), 8, 1e-4, l3, 0);
  std::vector<double> g{8 * 0.3};
  auto I = osc_integral_I(cube(), 512 * 1e-4, g, 1e-11);
  CHECK(std::abs(r00.approximation - 8.0 * I.value) < 1e-8);
}

TEST_CASE("poisson residual shrinks as the cutoff grows") {
  std::vector<double> l{0.45};
  double prev = 1e300;
  for (int cutoff : {0, 1, 3}) {
    auto r = poisson_residual(cube(), 8, 2e-4, l, cutoff);
    CHECK(r.residual <= prev + 1e-9);
    prev = r.residual;
  }
  CHECK_THROWS_AS(poisson_residual(fermat3(), 4, 0, std::vector<double>{0, 0, 0}, 1), std::invalid_argument);
}

TEST_CASE("irrationality_F on the examples") {
  LinearSystem L({LinearForm(std::vector<Rational>{Rational(1, 2), Rational(1, 3)})}, false);
  std::vector<double> zero{0.0};
  auto f0 = irrationality_F(L, zero, 100);
  CHECK(f0.value == doctest::Approx(1.0));
  CHECK(f0.q == 1);
  CHECK(f0.avec == IntVec{0, 0});

  std::vector<double> one{1.0};
  // 6 * double(1/3) misses 2 by one ulp, which P = 1e6 magnifies to a
  // relative change of about 4e-11.
  for (double P : {1.0, 1e3, 1e6}) CHECK(irrationality_F(L, one, P).value >= (1.0 / 36) * (1 - 1e-9));

  std::vector<double> sqrt2{std::sqrt(2.0)};
  CHECK(irrationality_F(sqrt2, 1e4).value < 0.02);
}

TEST_CASE("irrationality_F is nonincreasing in P") {
  std::vector<double> lambda{std::sqrt(2.0), std::sqrt(3.0) - 1};
  double prev = 2;
  for (double P : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
    double v = irrationality_F(lambda, P).value;
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}
