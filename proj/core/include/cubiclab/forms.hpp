#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cubiclab/arith.hpp"

namespace cubiclab {

/// One term c * x_i x_j x_k of a cubic form, 0-based with i <= j <= k.
struct Monomial {
  int i = 0;
  int j = 0;
  int k = 0;
  Integer c;
};

/// Integer-coefficient cubic form in n variables. Rational input is brought
/// to this shape by clear_denominators(); the scale is carried separately.
class CubicForm {
 public:
  /// Terms may be given in any index order and may repeat; they are sorted
  /// and merged. Throws std::invalid_argument if n < 1, an index is out of
  /// range, or every coefficient vanishes.
  CubicForm(int n, std::vector<Monomial> terms);

  /// sum_i coeffs[i] * x_i^3 (zero entries allowed, not all zero).
  static CubicForm diagonal(const std::vector<std::int64_t>& coeffs);

  int n() const noexcept { return n_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  Integer coeff(int i, int j, int k) const;
  bool is_diagonal() const noexcept;

  /// Exact evaluation with 128-bit intermediates. Callers guarantee that
  /// bound_on_box(max |x_i|) < 2^62; see fits_on_box().
  __int128 eval_i128(std::span<const std::int64_t> x) const;
  bool fits_on_box(std::int64_t bound) const;
  /// sum |c| * bound^3, the trivial bound for |C(x)| on |x| <= bound.
  double bound_on_box(double bound) const;

  /// C(x) mod m in [0, m). Requires m < 2^31.
  std::int64_t eval_mod(std::span<const std::int64_t> x, std::int64_t m) const;
  double eval_real(std::span<const double> x) const;

 private:
  struct SmallTerm {
    int i, j, k;
    std::int64_t c;
    double cd;
  };

  int n_;
  std::vector<Monomial> terms_;
  std::vector<SmallTerm> small_;
  bool small_ok_ = true;
  double abs_coeff_sum_ = 0.0;
};

struct RationalMonomial {
  int i = 0;
  int j = 0;
  int k = 0;
  Rational c;
};

/// form = scale * (rational input). scale is the lcm of the denominators.
struct ScaledCubic {
  CubicForm form;
  Rational scale;
};

ScaledCubic clear_denominators(int n, const std::vector<RationalMonomial>& terms);

/// A linear form with either exact rational or floating-point coefficients.
class LinearForm {
 public:
  explicit LinearForm(std::vector<Rational> coeffs);
  explicit LinearForm(std::vector<double> coeffs);

  std::size_t n() const noexcept;
  bool is_rational() const noexcept { return std::holds_alternative<std::vector<Rational>>(coeffs_); }
  /// Throws std::logic_error for real-tagged forms.
  const std::vector<Rational>& rational_coeffs() const;
  const std::vector<double>& real_coeffs() const noexcept { return real_; }

 private:
  std::variant<std::vector<Rational>, std::vector<double>> coeffs_;
  std::vector<double> real_;
};

/// r real linear forms L_1..L_r in n variables; row i holds the coefficients
/// of L_i. Invariants: 1 <= r < n and the rows are linearly independent.
class LinearSystem {
 public:
  LinearSystem(std::vector<LinearForm> rows, bool assume_irrational);

  int r() const noexcept { return static_cast<int>(rows_.size()); }
  int n() const noexcept { return n_; }
  double lambda(int i, int j) const { return rows_[i].real_coeffs()[j]; }
  const LinearForm& row(int i) const { return rows_[i]; }
  const std::vector<LinearForm>& rows() const noexcept { return rows_; }
  bool assume_irrational() const noexcept { return assume_irrational_; }

  /// The frequency vector sum_i alpha_i * (row i), length n.
  std::vector<double> combine(std::span<const double> alpha) const;

 private:
  std::vector<LinearForm> rows_;
  int n_ = 0;
  bool assume_irrational_ = false;
};

struct QuadTerm {
  int i = 0;  // 0-based, i <= j
  int j = 0;
  Rational c;
};

struct HPair {
  std::vector<Rational> a;  // linear form A, length n
  std::vector<QuadTerm> b;  // quadratic form B
};

/// Witness C = A_1 B_1 + ... + A_h B_h.
struct HDecomposition {
  int n = 0;
  std::vector<HPair> pairs;
  std::size_t h() const noexcept { return pairs.size(); }
};

Integer eval_cubic(const CubicForm& C, std::span<const Integer> x);
Integer eval_cubic(const CubicForm& C, std::span<const std::int64_t> x);
BigVec grad_cubic(const CubicForm& C, std::span<const Integer> x);
BigVec grad_cubic(const CubicForm& C, std::span<const std::int64_t> x);

/// (L_1(x), ..., L_r(x)); rational rows are evaluated exactly, then rounded.
std::vector<double> eval_linear(const LinearSystem& L, std::span<const Integer> x);
std::vector<double> eval_linear(const LinearSystem& L, std::span<const std::int64_t> x);

bool verify_h_decomposition(const CubicForm& C, const HDecomposition& D);

/// True iff C(t_1 v_1 + ... + t_d v_d) is the zero polynomial in t.
bool vanishes_on_span(const CubicForm& C, const std::vector<IntVec>& basis);

/// Bounded search for d independent integer vectors of sup-norm <= H whose
/// real span lies in {C = 0}. Absence is not a proof of nonexistence.
std::optional<std::vector<IntVec>> find_rational_linear_space(const CubicForm& C, int d, int H);

/// Exhaustive check over F_p: returns true when no d-dimensional subspace of
/// F_p^n lies in {C = 0 mod p}, which rules out rational d-dimensional spaces
/// in {C = 0}. Returns false if such a subspace exists or the node budget is
/// exhausted (inconclusive).
bool excludes_subspaces_mod_p(const CubicForm& C, int d, std::int64_t p, double node_budget);

struct HSearch {
  int height = 2;
  std::vector<std::int64_t> primes{2, 3, 5, 7};
  double node_budget = 5e6;
};

struct ExclusionCertificate {
  std::int64_t p = 0;
  int d = 0;  // no rational space of dimension >= d exists
};

struct HBounds {
  int lower = 1;
  int upper = 1;
  std::optional<std::vector<IntVec>> space;        // certifies upper <= n - dim
  std::optional<ExclusionCertificate> exclusion;   // certifies lower
  bool exact() const noexcept { return lower == upper; }
};

/// Certified window lower <= h(C) <= upper.
///   upper = min(n, |witness|, n - d) where d is the largest dimension of a
///           rational space found in {C = 0} by the bounded search;
///   lower = n - d' + 1 where d' is the least dimension excluded mod p.
/// Throws std::invalid_argument if the witness fails verification and
/// InconsistentBounds if lower > upper.
HBounds h_bounds(const CubicForm& C, const std::optional<HDecomposition>& witness, const HSearch& search);

}  // namespace cubiclab
