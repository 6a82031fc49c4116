#include <doctest.h>

#include <random>

#include "cubiclab/errors.hpp"
#include "cubiclab/forms.hpp"
#include "cubiclab/polynomial.hpp"
#include "support.hpp"

using namespace cubiclab;
using namespace testing;

namespace {

Integer eval(const CubicForm& C, IntVec x) { return eval_cubic(C, std::span<const std::int64_t>(x)); }

CubicForm random_form(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coef(-5, 5), idx(0, n - 1);
  std::vector<Monomial> terms;
  for (int t = 0; t < 6; ++t) terms.push_back(mono(idx(rng), idx(rng), idx(rng), coef(rng)));
  terms.push_back(mono(0, 0, 0, 100));  // random terms cannot cancel it
  return CubicForm(n, terms);
}

}  // namespace

TEST_CASE("eval_cubic on the examples") {
  CHECK(eval(taxicab(), {1, 12, 9, 10}) == 0);
  CHECK(eval(taxicab(), {0, 0, 0, 0}) == 0);
  CHECK(eval(fermat3(), {1, 2, 3}) == 36);
  CHECK_THROWS_AS(eval(fermat3(), {1, 2}), DimensionMismatch);
}

TEST_CASE("eval_cubic has no overflow") {
  auto C = CubicForm::diagonal({1});
  CHECK(eval(C, {std::int64_t{1} << 40}) == Integer(1) << 120);
}

TEST_CASE("grad_cubic on the examples") {
  IntVec x{1, 2};
  CHECK(grad_cubic(CubicForm::diagonal({1, 1}), std::span<const std::int64_t>(x)) == BigVec{3, 12});
  IntVec z{0, 0, 0};
  CHECK(grad_cubic(fermat3(), std::span<const std::int64_t>(z)) == BigVec{0, 0, 0});
  CubicForm C(2, {mono(0, 0, 1, 1)});  // x1^2 x2
  IntVec y{1, 1};
  CHECK(grad_cubic(C, std::span<const std::int64_t>(y)) == BigVec{2, 1});
  CHECK_THROWS_AS(grad_cubic(C, std::span<const std::int64_t>(z)), DimensionMismatch);
}

TEST_CASE("homogeneity and Euler identity on random forms") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> small(-10, 10), nd(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    int n = nd(rng);
    auto C = random_form(rng, n);
    IntVec x(n), tx(n);
    std::int64_t t = small(rng);
    for (int i = 0; i < n; ++i) {
      x[i] = small(rng);
      tx[i] = t * x[i];
    }
    Integer cx = eval(C, x);
    CHECK(eval(C, tx) == Integer(t) * t * t * cx);
    auto g = grad_cubic(C, std::span<const std::int64_t>(x));
    Integer dot = 0;
    for (int i = 0; i < n; ++i) dot += g[i] * x[i];
    CHECK(dot == 3 * cx);
  }
}

TEST_CASE("fast evaluation paths agree with exact evaluation") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(-50, 50);
  for (int trial = 0; trial < 100; ++trial) {
    auto C = random_form(rng, 4);
    IntVec x(4);
    for (auto& v : x) v = small(rng);
    Integer exact = eval(C, x);
    CHECK(Integer(static_cast<long long>(C.eval_i128(x))) == exact);
    CHECK(C.eval_mod(x, 97) == mod_floor(exact, 97));
    std::vector<double> xd(x.begin(), x.end());
    CHECK(C.eval_real(xd) == doctest::Approx(exact.convert_to<double>()));
  }
}

TEST_CASE("cubic form invariants") {
  CHECK_THROWS_AS(CubicForm(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(CubicForm(2, {mono(0, 0, 0, 0)}), std::invalid_argument);
  CHECK_THROWS_AS(CubicForm(2, {mono(0, 0, 2, 1)}), std::invalid_argument);
  CubicForm merged(2, {mono(1, 0, 0, 2), mono(0, 1, 0, 3)});
  CHECK(merged.terms().size() == 1);
  CHECK(merged.coeff(0, 0, 1) == 5);
}

TEST_CASE("clear_denominators records the scale") {
  auto sc = clear_denominators(2, {{0, 0, 0, Rational(1, 2)}, {1, 1, 1, Rational(-2, 3)}});
  CHECK(sc.scale == 6);
  CHECK(sc.form.coeff(0, 0, 0) == 3);
  CHECK(sc.form.coeff(1, 1, 1) == -4);
}

TEST_CASE("eval_linear") {
  LinearSystem id({LinearForm(rats({1, 0, 0}))}, false);
  IntVec x{7, -3, 2};
  CHECK(eval_linear(id, std::span<const std::int64_t>(x)) == std::vector<double>{7.0});
  LinearSystem L({LinearForm(std::vector<double>{std::sqrt(2.0), std::sqrt(3.0)})}, true);
  IntVec ones{1, 1};
  CHECK(eval_linear(L, std::span<const std::int64_t>(ones))[0] == doctest::Approx(3.14626437).epsilon(1e-9));
  IntVec zero{0, 0};
  CHECK(eval_linear(L, std::span<const std::int64_t>(zero))[0] == 0.0);
  CHECK_THROWS_AS(eval_linear(L, std::span<const std::int64_t>(x)), DimensionMismatch);
}

TEST_CASE("linear system invariants") {
  CHECK_THROWS(LinearSystem({LinearForm(rats({1, 2})), LinearForm(rats({2, 4}))}, false));
  CHECK_THROWS(LinearSystem({LinearForm(rats({1, 0})), LinearForm(rats({0, 1}))}, false));  // r = n
  CHECK_THROWS(LinearSystem({LinearForm(rats({1, 0})), LinearForm(rats({0, 1, 0}))}, false));
  CHECK_NOTHROW(LinearSystem({LinearForm(rats({1, 0, 0})), LinearForm(rats({0, 1, 0}))}, false));
}

TEST_CASE("verify_h_decomposition on the examples") {
  auto D = taxicab_decomposition();
  CHECK(verify_h_decomposition(taxicab(), D));
  auto bad = D;
  bad.pairs[1].b[1].c = Rational(1);  // x3^2 + x3 x4 + x4^2
  CHECK_FALSE(verify_h_decomposition(taxicab(), bad));
  HDecomposition cube{1, {{rats({1}), {{0, 0, Rational(1)}}}}};
  CHECK(verify_h_decomposition(CubicForm::diagonal({1}), cube));
}

TEST_CASE("verify_h_decomposition is invariant under permutation and rescaling") {
  auto D = taxicab_decomposition();
  std::swap(D.pairs[0], D.pairs[1]);
  CHECK(verify_h_decomposition(taxicab(), D));
  const Rational s(3, 7);
  for (auto& a : D.pairs[0].a) a *= s;
  for (auto& b : D.pairs[0].b) b.c /= s;
  CHECK(verify_h_decomposition(taxicab(), D));
}

TEST_CASE("find_rational_linear_space on the examples") {
  auto space = find_rational_linear_space(taxicab(), 2, 1);
  REQUIRE(space);
  CHECK(*space == std::vector<IntVec>{{1, -1, 0, 0}, {0, 0, 1, -1}});

  auto line = find_rational_linear_space(CubicForm(2, {mono(0, 0, 0, 1)}), 1, 1);
  REQUIRE(line);
  CHECK(*line == std::vector<IntVec>{{0, 1}});

  CHECK_FALSE(find_rational_linear_space(fermat3(), 2, 3));
  auto fline = find_rational_linear_space(fermat3(), 1, 3);
  REQUIRE(fline);
  CHECK(vanishes_on_span(fermat3(), *fline));
}

TEST_CASE("every returned space vanishes symbolically and on a grid") {
  for (const auto& C : {taxicab(), fermat3(), CubicForm::diagonal({1, -1, 2, -2})}) {
    for (int d = 1; d < C.n(); ++d) {
      auto space = find_rational_linear_space(C, d, 2);
      if (!space) continue;
      // Symbolic check through the polynomial substitution.
      std::vector<Polynomial> images;
      for (int i = 0; i < C.n(); ++i) {
        Polynomial p(d);
        for (int j = 0; j < d; ++j) {
          Polynomial::Exponent e(d, 0);
          e[j] = 1;
          p.add_term(e, Rational((*space)[j][i]));
        }
        images.push_back(p);
      }
      CHECK(Polynomial::from_cubic(C).substitute(images).is_zero());
      // Grid smoke test with parameters in {-1, 0, 1}.
      std::vector<int> t(d, -1);
      while (true) {
        IntVec x(C.n(), 0);
        for (int j = 0; j < d; ++j)
          for (int i = 0; i < C.n(); ++i) x[i] += t[j] * (*space)[j][i];
        CHECK(eval(C, x) == 0);
        int j = 0;
        while (j < d && t[j] == 1) t[j++] = -1;
        if (j == d) break;
        ++t[j];
      }
    }
  }
}

TEST_CASE("no product decomposition for the Fermat cubic with small linear factors") {
  // Oracle for the absent 2-dimensional space: if C = A * B with A rational
  // linear, C vanishes on the plane A = 0. Check no primitive A of height <= 3
  // has C vanishing on its kernel, by testing C on a kernel basis.
  auto C = fermat3();
  int divisible = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        std::vector<IntVec> basis;
        if (a != 0) basis = {{-b, a, 0}, {-c, 0, a}};
        else if (b != 0) basis = {{1, 0, 0}, {0, -c, b}};
        else basis = {{1, 0, 0}, {0, 1, 0}};
        if (vanishes_on_span(C, basis)) ++divisible;
      }
  CHECK(divisible == 0);
}

TEST_CASE("excludes_subspaces_mod_p") {
  CHECK(excludes_subspaces_mod_p(taxicab(), 3, 2, 5e6));
  CHECK_FALSE(excludes_subspaces_mod_p(taxicab(), 2, 2, 5e6));  // the rational plane reduces mod 2
  CHECK(excludes_subspaces_mod_p(fermat3(), 2, 2, 5e6));
}

TEST_CASE("h_bounds on the examples") {
  HSearch search;
  auto tb = h_bounds(taxicab(), taxicab_decomposition(), search);
  CHECK(tb.lower == 2);
  CHECK(tb.upper == 2);
  CHECK(tb.exact());
  REQUIRE(tb.space);
  CHECK(vanishes_on_span(taxicab(), *tb.space));

  auto cube = h_bounds(CubicForm::diagonal({1}), std::nullopt, search);
  CHECK(cube.lower == 1);
  CHECK(cube.upper == 1);

  HDecomposition three{3, {{rats({1, 0, 0}), {{0, 0, Rational(1)}}},
                           {rats({0, 1, 0}), {{1, 1, Rational(1)}}},
                           {rats({0, 0, 1}), {{2, 2, Rational(1)}}}}};
  search.height = 3;
  auto fb = h_bounds(fermat3(), three, search);
  CHECK(fb.lower <= 2);
  CHECK(fb.upper >= 2);
  CHECK(fb.upper == 2);  // the line (1,-1,0) certifies h <= 2
  REQUIRE(fb.exclusion);
  CHECK(excludes_subspaces_mod_p(fermat3(), fb.exclusion->d, fb.exclusion->p, 5e6));
}

TEST_CASE("h_bounds rejects a bad witness") {
  auto bad = taxicab_decomposition();
  bad.pairs.pop_back();
  CHECK_THROWS_AS(h_bounds(taxicab(), bad, HSearch{}), std::invalid_argument);
}
