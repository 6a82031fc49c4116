#pragma once

#include <map>
#include <vector>

#include "cubiclab/arith.hpp"
#include "cubiclab/forms.hpp"

namespace cubiclab {

/// Sparse multivariate polynomial over Q, keyed by exponent vector. Used for
/// exact identity checks; never on a hot path.
class Polynomial {
 public:
  using Exponent = std::vector<int>;

  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int index);
  static Polynomial from_cubic(const CubicForm& C);
  static Polynomial from_linear(const std::vector<Rational>& coeffs);
  static Polynomial from_linear(int nvars, const IntVec& coeffs);
  static Polynomial from_quadratic(int nvars, const std::vector<QuadTerm>& terms);

  int nvars() const noexcept { return nvars_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }
  Rational coefficient(const Exponent& e) const;

  void add_term(const Exponent& e, const Rational& c);
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Replaces x_i by images[i]; all images share one variable count.
  Polynomial substitute(const std::vector<Polynomial>& images) const;

 private:
  int nvars_;
  std::map<Exponent, Rational> terms_;
};

}  // namespace cubiclab
