#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cubiclab/forms.hpp"

namespace testing {

using namespace cubiclab;

inline Monomial mono(int i, int j, int k, long c) { return Monomial{i, j, k, Integer(c)}; }

/// x1^3 + x2^3 - x3^3 - x4^3
inline CubicForm taxicab() { return CubicForm::diagonal({1, 1, -1, -1}); }
/// x1^3 + x2^3 + x3^3
inline CubicForm fermat3() { return CubicForm::diagonal({1, 1, 1}); }

inline std::vector<Rational> rats(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

inline HDecomposition taxicab_decomposition() {
  HDecomposition D;
  D.n = 4;
  D.pairs.push_back({rats({1, 1, 0, 0}), {{0, 0, Rational(1)}, {0, 1, Rational(-1)}, {1, 1, Rational(1)}}});
  D.pairs.push_back({rats({0, 0, -1, -1}), {{2, 2, Rational(1)}, {2, 3, Rational(-1)}, {3, 3, Rational(1)}}});
  return D;
}

/// L1 = phi x1 + sqrt2 x2 + sqrt3 x3 + sqrt5 x4
inline LinearSystem taxicab_linsys() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  return LinearSystem({LinearForm(std::vector<double>{phi, std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0)})}, true);
}

}  // namespace testing
