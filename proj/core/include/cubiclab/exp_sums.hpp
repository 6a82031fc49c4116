#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cubiclab/forms.hpp"
#include "cubiclab/quadrature.hpp"

namespace cubiclab {

/// A complex value with an absolute error bound (0 only for exact values).
struct ExpSumValue {
  Complex value;
  double abs_error = 0;
};

/// Rational approximation centre: alpha0 = a/q + beta0, lambda = avec/q + bvec.
struct RationalApproxPoint {
  std::int64_t q = 1;
  std::int64_t a = 0;
  IntVec avec;
  double beta0 = 0;
  std::vector<double> bvec;
};

/// Nearest centre with denominator q (a and avec rounded to nearest integers).
RationalApproxPoint nearest_rational_point(double alpha0, std::span<const double> lambda, std::int64_t q);

inline constexpr double kCompleteSumBudget = 1e8;
inline constexpr double kGSumBudget = 1e9;

/// S_{q,a,avec} = sum over y mod q of e_q(a C(y) + avec . y).
/// Throws ResourceLimit when q^n exceeds `budget`.
ExpSumValue complete_sum(const CubicForm& C, std::int64_t q, std::int64_t a, const IntVec& avec,
                         double budget = kCompleteSumBudget);

/// Counts of C(y) mod q over y mod q (index m holds #{y : C(y) = m mod q}).
std::vector<std::uint64_t> residue_histogram(const CubicForm& C, std::int64_t q, double budget = kCompleteSumBudget);

/// The same sum as a product over prime powers Q || q of S_{Q, a b, b avec},
/// where b is the inverse of q/Q modulo Q.
ExpSumValue complete_sum_crt(const CubicForm& C, std::int64_t q, std::int64_t a, const IntVec& avec,
                             double budget = kCompleteSumBudget);

struct SboundRow {
  std::int64_t q = 1;
  double max_abs = 0;   // max |S_{q,a,avec}| over the sample
  double ratio = 0;     // max_abs / q^{n - h/8 + psi}
  std::int64_t arg_a = 0;
  IntVec arg_avec;
};

struct SboundReport {
  double exponent_offset = 0;  // n - h_lower/8 + psi
  std::vector<SboundRow> rows;
  double max_ratio = 0;
  std::int64_t arg_q = 1;
};

struct SboundOptions {
  int random_avec = 3;       // extra avec per q besides avec = 0
  std::uint64_t seed = 1;
  double budget = 1e9;       // total terms
};

/// Observed constant in |S_{q,a,avec}| <= K q^{n - h/8 + psi} over q <= qmax,
/// (a, q) = 1 and a seeded sample of avec. A diagnostic, not a proof.
SboundReport sbound_check(const CubicForm& C, int h_lower, std::int64_t qmax, double psi,
                          const SboundOptions& opts = {});

/// g(alpha0, lambda): weighted sum of w(x/P) e(alpha0 C(x) + lambda . x), or the
/// unweighted sum over |x| < P. Both run over |x| <= ceil(P) - 1.
ExpSumValue sum_g(const CubicForm& C, double P, double alpha0, std::span<const double> lambda, bool weighted,
                  double budget = kGSumBudget);

struct OscOptions {
  std::size_t max_intervals = 20000;   // per one-dimensional adaptive integral
  std::size_t qmc_samples = 1 << 20;   // used when n > 4 and C is not diagonal
  std::uint64_t seed = 1;
};

/// I(gamma0, gamma) = integral of w(x) e(gamma0 C(x) + gamma . x) over R^n.
/// Diagonal forms factor into one-dimensional integrals; otherwise nested
/// adaptive quadrature for n <= 4 and randomised QMC beyond (abs_error is then
/// the standard error). Throws ToleranceNotMet.
ExpSumValue osc_integral_I(const CubicForm& C, double gamma0, std::span<const double> gamma, double tol,
                           const OscOptions& opts = {});

/// I_u: the same integral with the indicator of [-1,1]^n in place of w.
ExpSumValue osc_integral_Iu(const CubicForm& C, double gamma0, std::span<const double> gamma, double tol,
                            const OscOptions& opts = {});

struct PoissonCheck {
  Complex g;
  Complex approximation;  // P^n sum over |c| <= cutoff of I(P^3 alpha0, P lambda - P c)
  double residual = 0;
  double relative = 0;    // residual / |g|
  double quad_error = 0;
};

/// Compares g(alpha0, lambda) with the truncated Poisson expansion. n <= 2.
PoissonCheck poisson_residual(const CubicForm& C, double P, double alpha0, std::span<const double> lambda,
                              int cutoff, double tol = 1e-11);

struct IrrationalityValue {
  double value = 0;
  std::int64_t q = 1;
  IntVec avec;
};

/// sup over q >= 1 of prod_v (q + P |q lambda_v - a_v|)^{-1}, with a_v the
/// nearest integer to q lambda_v. Scans q until q^{-n} falls to the best value.
IrrationalityValue irrationality_F(std::span<const double> lambda, double P);
/// The same with lambda = sum_i alpha_i (row i of the system).
IrrationalityValue irrationality_F(const LinearSystem& L, std::span<const double> alpha, double P);

}  // namespace cubiclab
