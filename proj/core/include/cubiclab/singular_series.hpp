#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubiclab/forms.hpp"

namespace cubiclab {

/// sigma = p^{-k(n-1)} #{x mod p^k : C(x) = 0 mod p^k}.
struct LocalDensity {
  std::int64_t p = 2;
  int k = 1;
  std::uint64_t solutions = 0;
  Rational sigma;
};

inline constexpr double kLocalBudget = 1e8;

/// Counts zeros mod p^k by lifting the zeros mod p^j one level at a time.
/// Throws ResourceLimit when the work exceeds `budget` residue checks.
LocalDensity local_density(const CubicForm& C, std::int64_t p, int k, double budget = kLocalBudget);

/// sum_{j=0}^{k} p^{-jn} sum_{(a,p^j)=1} S_{p^j,a,0}, evaluated exactly: the
/// sum over a collapses to Ramanujan sums c_{p^j}(C(x)). Equals
/// local_density(C,p,k).sigma.
Rational local_factor_via_sums(const CubicForm& C, std::int64_t p, int k, double budget = kLocalBudget);

/// Exact q-term q^{-n} sum_{(a,q)=1} S_{q,a,0}.
Rational series_term_exact(const CubicForm& C, std::int64_t q, double budget = kLocalBudget);

struct SeriesTerm {
  std::int64_t q = 1;
  double value = 0;   // real part of the root-of-unity evaluation
  double imag = 0;    // imaginary residue (roundoff only)
  Rational exact;     // the same term through Ramanujan sums
};

struct TruncatedSeries {
  double value = 0;
  Rational exact;
  std::vector<SeriesTerm> terms;
};

/// Partial sum over q <= Q. Each q-term is evaluated from complete sums with
/// roots of unity; NotConverged is raised if an imaginary part exceeds 1e-9,
/// which can only come from an evaluation defect.
TruncatedSeries singular_series_truncated(const CubicForm& C, std::int64_t Q, double budget = kLocalBudget);

struct EulerCheck {
  Rational partial;         // sum over q <= Q
  Rational product;         // prod over p <= Q of the local factor at depth floor(log_p Q)
  Rational mismatch;        // product - partial
  Rational extra_terms;     // sum of the q-terms in the product expansion with q > Q
  bool consistent = false;  // mismatch == extra_terms exactly
};

/// Exact comparison of the truncated series with the product of local factors.
EulerCheck euler_product_check(const CubicForm& C, std::int64_t Q, double budget = kLocalBudget);

struct PadicCertificate {
  std::int64_t p = 2;
  IntVec a;      // entries in [0, p^m)
  int m = 1;
  int t = 0;     // min_i v_p(dC/dx_i (a))
  int slack = 0; // m - 2t, at least 1
};

enum class PadicStatus { certified, not_found, impossible };
std::string to_string(PadicStatus s);

struct PadicSearch {
  PadicStatus status = PadicStatus::not_found;
  std::optional<PadicCertificate> certificate;
  int depth_reached = 0;
};

/// Level-by-level search over the zeros mod p^m, m = 1..m_max. At the first
/// level with a point satisfying m - 2 v_p(grad C(a)) >= 1, the
/// lexicographically smallest such point is returned. `impossible` is
/// reported when C has no zero mod p^m off p Z^n: then C has no nontrivial
/// p-adic zero at all.
PadicSearch padic_search(const CubicForm& C, std::int64_t p, int m_max, double budget = kLocalBudget);
std::optional<PadicCertificate> find_nonsingular_padic_zero(const CubicForm& C, std::int64_t p, int m_max,
                                                            double budget = kLocalBudget);

/// Recomputes C(a) mod p^m, the gradient valuation and the slack with
/// independent exact arithmetic.
bool check_certificate(const CubicForm& C, const PadicCertificate& cert);

/// One Newton step: a zero modulo p^{m+1} congruent to a modulo p^{m-t}.
PadicCertificate hensel_lift(const CubicForm& C, const PadicCertificate& cert);

struct PositivityOptions {
  std::int64_t pmax = 7;
  int m_max = 4;
  std::int64_t Q = 20;
  std::int64_t sbound_qmax = 20;
  double psi = 0.25;
};

struct PrimeEntry {
  std::int64_t p = 2;
  PadicSearch search;
};

struct PositivityReport {
  std::vector<PrimeEntry> primes;
  TruncatedSeries series;
  int h_lower = 1;
  int h_upper = 1;
  double observed_constant = 0;           // max ratio from sbound_check
  std::optional<double> tail_heuristic;   // absent when the exponent gives no convergent bound
  std::string tail_note;
};

/// Certificates for p <= pmax, the truncated series and a heuristic tail
/// K sum_{q>Q} q^{1 - h/8 + psi} built from the observed constant K.
PositivityReport positivity_report(const CubicForm& C, const PositivityOptions& opts);

}  // namespace cubiclab
