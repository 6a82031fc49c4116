#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cubiclab/equidist.hpp"
#include "cubiclab/errors.hpp"
#include "cubiclab/lattice_enum.hpp"
#include "support.hpp"

using namespace cubiclab;
using namespace testing;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("weyl_sum on the examples") {
  auto C = CubicForm::diagonal({1, 1});
  LinearSystem L({LinearForm(std::vector<double>{std::sqrt(2.0), 0.0})}, true);
  auto st = weyl_sum(C, L, {1}, 5);
  CHECK(st.N == 11);
  const double s = std::sqrt(2.0);
  const double oracle = std::abs(std::sin(11 * kPi * s) / std::sin(kPi * s));
  CHECK(std::abs(st.sum) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(st.normalized) <= 1.0);

  auto neg = weyl_sum(C, L, {-1}, 5);
  CHECK(std::abs(neg.sum - std::conj(st.sum)) < 1e-12);

  CHECK_THROWS_AS(weyl_sum(C, L, {0}, 5), std::invalid_argument);
  CHECK_THROWS_AS(weyl_sum(std::vector<IntVec>{}, L, {1}, 5), EmptyZeroSet);
}

TEST_CASE("weyl_sum normalization equals the unweighted count") {
  auto L = taxicab_linsys();
  auto st = weyl_sum(taxicab(), L, {1}, 12, EnumOptions{Strategy::meet_in_middle});
  CountQuery q(taxicab());
  q.P = 12;
  CHECK(static_cast<double>(st.N) == count(q).value);
}

TEST_CASE("integer shifts of L leave mod-1 statistics unchanged") {
  auto L = taxicab_linsys();
  auto shifted_coeffs = L.row(0).real_coeffs();
  shifted_coeffs[0] += 3;
  shifted_coeffs[2] -= 1;
  LinearSystem shifted({LinearForm(shifted_coeffs)}, true);
  auto zs = enumerate_zeros(taxicab(), 10, Strategy::meet_in_middle);
  auto a = weyl_sum(zs, L, {2}, 10);
  auto b = weyl_sum(zs, shifted, {2}, 10);
  CHECK(std::abs(a.sum - b.sum) < 1e-9 * static_cast<double>(a.N));
  auto da = discrepancy(fractional_parts(zs, L), 200, 3);
  auto db = discrepancy(fractional_parts(zs, shifted), 200, 3);
  CHECK(std::abs(da.value - db.value) < 1e-9);
}

TEST_CASE("discrepancy on the examples") {
  std::vector<std::vector<double>> one(50, std::vector<double>{0.3});
  auto d1 = discrepancy(one, 100, 5);
  CHECK(d1.value >= 0.49);
  CHECK(d1.value <= 1.0);

  std::vector<std::vector<double>> grid;
  for (int j = 0; j < 100; ++j) grid.push_back({j / 100.0});
  CHECK(discrepancy(grid, 500, 5).value <= 0.02);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> iid;
  for (int i = 0; i < 10000; ++i) iid.push_back({u(rng), u(rng)});
  CHECK(discrepancy(iid, 500, 5).value <= 0.05);

  CHECK(discrepancy(grid, 50, 8).value == discrepancy(grid, 50, 8).value);
  CHECK_THROWS(discrepancy({}, 10, 1));
}

TEST_CASE("Erdos-Turan direction: small Weyl sums give small discrepancy") {
  // r = 1: D <= 6/(K+1) + (4/pi) sum_{k<=K} |S_k|/k (one-sided check with
  // the classical constants; the box discrepancy is at most twice D*).
  std::vector<std::vector<double>> pts;
  const double alpha = (std::sqrt(5.0) - 1) / 2;
  for (int i = 0; i < 5000; ++i) pts.push_back({std::fmod(i * alpha, 1.0)});
  const int K = 20;
  double sum = 0;
  for (int k = 1; k <= K; ++k) {
    Complex acc = 0;
    for (const auto& p : pts) acc += std::polar(1.0, 2 * kPi * k * p[0]);
    sum += std::abs(acc) / static_cast<double>(pts.size()) / k;
  }
  const double bound = 6.0 / (K + 1) + 4 / kPi * sum;
  CHECK(discrepancy(pts, 500, 2).value <= 2 * bound);
}

TEST_CASE("equidist_experiment on the taxicab form") {
  auto L = taxicab_linsys();
  auto table = equidist_experiment(taxicab(), L, {10, 20}, {{1}, {2}}, 200, 11,
                                   EnumOptions{Strategy::meet_in_middle});
  REQUIRE(table.rows.size() == 2);
  for (const auto& row : table.rows) {
    REQUIRE(row.weyl_abs.size() == 2);
    for (double w : row.weyl_abs) CHECK(w <= 1.0);
    CHECK(row.discrepancy >= 0);
    CHECK(row.discrepancy <= 1);
  }
  CountQuery q(taxicab());
  q.P = 20;
  CHECK(static_cast<double>(table.rows[1].N) == count(q).value);
  // k and 2k are reported independently.
  auto w1 = weyl_sum(taxicab(), L, {1}, 20, EnumOptions{Strategy::meet_in_middle});
  auto w2 = weyl_sum(taxicab(), L, {2}, 20, EnumOptions{Strategy::meet_in_middle});
  CHECK(table.rows[1].weyl_abs[0] == doctest::Approx(std::abs(w1.normalized)));
  CHECK(table.rows[1].weyl_abs[1] == doctest::Approx(std::abs(w2.normalized)));
  auto csv = table.to_csv();
  CHECK(csv.rfind("P,N,discrepancy", 0) == 0);
}
