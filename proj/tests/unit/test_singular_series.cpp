#include <doctest.h>

#include <cmath>

#include "cubiclab/errors.hpp"
#include "cubiclab/exp_sums.hpp"
#include "cubiclab/singular_series.hpp"
#include "support.hpp"

using namespace cubiclab;
using namespace testing;

namespace {
CubicForm selmer() { return CubicForm::diagonal({1, 1, -2}); }
}  // namespace

TEST_CASE("local_density on the examples") {
  auto two = CubicForm::diagonal({1, 1});
  CHECK(local_density(two, 2, 1).sigma == 1);
  CHECK(local_density(two, 2, 1).solutions == 2);
  CHECK(local_density(two, 3, 1).sigma == 1);
  CHECK(local_density(CubicForm::diagonal({1}), 5, 1).sigma == 1);
  CHECK_THROWS_AS(local_density(taxicab(), 7, 4, 1e6), ResourceLimit);
}

TEST_CASE("local_factor_via_sums on the examples") {
  auto two = CubicForm::diagonal({1, 1});
  CHECK(local_factor_via_sums(two, 2, 0) == 1);
  CHECK(local_factor_via_sums(two, 2, 1) == 1);
  CHECK(local_factor_via_sums(two, 3, 2) == local_density(two, 3, 2).sigma);
}

TEST_CASE("local factor identity holds exactly") {
  const std::vector<CubicForm> forms{CubicForm::diagonal({1, 1}), CubicForm::diagonal({1, 2, 3}),
                                     CubicForm(2, {mono(0, 0, 1, 1), mono(1, 1, 1, 3)}), selmer()};
  for (const auto& C : forms)
    for (std::int64_t p : {2, 3, 5, 7})
      for (int k = 1; k <= 3; ++k) {
        if (pow_budget(static_cast<double>(p), k * C.n()) > kLocalBudget) continue;
        CAPTURE(p);
        CAPTURE(k);
        CHECK(local_factor_via_sums(C, p, k) == local_density(C, p, k).sigma);
      }
}

TEST_CASE("singular_series_truncated on the examples") {
  auto one = singular_series_truncated(taxicab(), 1);
  CHECK(one.value == 1.0);
  CHECK(one.exact == 1);

  auto two = CubicForm::diagonal({1, 1});
  auto s = singular_series_truncated(two, 9);
  for (const auto& t : s.terms) {
    CHECK(std::abs(t.imag) <= 1e-9);
    CHECK(t.value == doctest::Approx(to_double(t.exact)).epsilon(1e-9));
  }
  auto s2 = complete_sum(fermat3(), 2, 1, {0, 0, 0});
  auto ser = singular_series_truncated(fermat3(), 2);
  CHECK(ser.terms[1].value == doctest::Approx(s2.value.real() / 8).epsilon(1e-12));
}

TEST_CASE("partial sum against the Euler product") {
  auto chk = euler_product_check(CubicForm::diagonal({1, 1}), 9);
  CHECK(chk.consistent);
  CHECK(chk.mismatch == chk.extra_terms);
  auto chk3 = euler_product_check(selmer(), 6);
  CHECK(chk3.consistent);
}

TEST_CASE("series terms are multiplicative") {
  for (const auto& C : {CubicForm::diagonal({1, 1}), fermat3()})
    for (auto [q1, q2] : {std::pair<std::int64_t, std::int64_t>{2, 3}, {4, 5}, {3, 7}, {8, 9}}) {
      Rational t12 = series_term_exact(C, q1 * q2);
      CHECK(t12 == series_term_exact(C, q1) * series_term_exact(C, q2));
      // The same via root-of-unity sums with CRT.
      double direct = 0;
      for (std::int64_t a = 1; a < q1 * q2; ++a)
        if (gcd64(a, q1 * q2) == 1)
          direct += complete_sum_crt(C, q1 * q2, a, IntVec(C.n(), 0)).value.real();
      direct /= std::pow(static_cast<double>(q1 * q2), C.n());
      CHECK(direct == doctest::Approx(to_double(t12)).epsilon(1e-9));
    }
}

TEST_CASE("find_nonsingular_padic_zero on the examples") {
  auto c5 = find_nonsingular_padic_zero(selmer(), 5, 3);
  REQUIRE(c5);
  CHECK(check_certificate(selmer(), *c5));
  PadicCertificate ones{5, {1, 1, 1}, 1, 0, 1};
  CHECK(check_certificate(selmer(), ones));

  auto c3 = find_nonsingular_padic_zero(selmer(), 3, 4);
  REQUIRE(c3);
  CHECK(check_certificate(selmer(), *c3));
  CHECK(c3->m >= 2 * c3->t + 1);
  PadicCertificate ones3{3, {1, 1, 1}, 3, 1, 1};
  CHECK(check_certificate(selmer(), ones3));
  PadicCertificate short3{3, {1, 1, 1}, 2, 1, 0};
  CHECK_FALSE(check_certificate(selmer(), short3));

  auto cube = CubicForm::diagonal({1});
  CHECK_FALSE(find_nonsingular_padic_zero(cube, 2, 6));
  auto search = padic_search(cube, 2, 6);
  CHECK(search.status != PadicStatus::certified);
}

TEST_CASE("p-adic search distinguishes impossible from not found") {
  // x^3 has no nonzero p-adic zero at all: no primitive zero mod p.
  CHECK(padic_search(CubicForm::diagonal({1}), 5, 3).status == PadicStatus::impossible);
  // x^3 + 2 y^3 + 4 z^3 has no nontrivial 2-adic zero (it is anisotropic at 2).
  CHECK(padic_search(CubicForm::diagonal({1, 2, 4}), 2, 4).status == PadicStatus::impossible);
}

TEST_CASE("certificates verify independently and lift by Newton") {
  for (const auto& C : {selmer(), taxicab(), CubicForm::diagonal({1, 2, 3})})
    for (std::int64_t p : {2, 3, 5, 7}) {
      auto cert = find_nonsingular_padic_zero(C, p, 4);
      if (!cert) continue;
      CHECK(check_certificate(C, *cert));
      auto next = hensel_lift(C, *cert);
      CHECK(next.m == cert->m + 1);
      CHECK(check_certificate(C, next));
      // The Newton step moves one coordinate by a multiple of p^(m - t).
      Integer modulus = 1;
      for (int i = 0; i < cert->m - cert->t; ++i) modulus *= p;
      for (std::size_t i = 0; i < next.a.size(); ++i) CHECK(mod_floor(Integer(next.a[i] - cert->a[i]), static_cast<std::int64_t>(modulus)) == 0);
    }
}

TEST_CASE("positivity_report on the examples") {
  PositivityOptions opts;
  opts.pmax = 7;
  opts.m_max = 4;
  opts.Q = 10;
  auto rep = positivity_report(selmer(), opts);
  REQUIRE(rep.primes.size() == 4);
  for (const auto& e : rep.primes) {
    CHECK(e.search.status == PadicStatus::certified);
    CHECK(check_certificate(selmer(), *e.search.certificate));
  }

  opts.Q = 1;
  auto trivial = positivity_report(selmer(), opts);
  CHECK(trivial.series.value == 1.0);
  CHECK_FALSE(trivial.tail_heuristic);
  CHECK(trivial.h_lower <= 8);

  auto again = positivity_report(selmer(), opts);
  CHECK(again.series.exact == trivial.series.exact);
  CHECK(again.observed_constant == trivial.observed_constant);
}
