#include "cubiclab/singular_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "cubiclab/errors.hpp"
#include "cubiclab/exp_sums.hpp"

namespace cubiclab {

namespace {

void require_prime(std::int64_t p, const char* what) {
  if (!is_prime(p)) throw std::invalid_argument(std::string(what) + ": p must be prime");
}

std::int64_t checked_power(std::int64_t p, int k, const char* what) {
  if (std::pow(static_cast<double>(p), k) > 2147483647.0)
    throw ResourceLimit(std::string(what) + ": modulus exceeds 2^31");
  return ipow(p, k);
}

/// Zeros mod p^{m+1} lying over the given zeros mod p^m.
std::vector<IntVec> lift_zeros(const CubicForm& C, const std::vector<IntVec>& zeros, std::int64_t pm, std::int64_t p,
                               double& work, double budget) {
  const int n = C.n();
  const std::int64_t next = pm * p;
  std::vector<IntVec> out;
  const double per_zero = std::pow(static_cast<double>(p), n);
  for (const auto& z : zeros) {
    work += per_zero;
    if (work > budget) throw ResourceLimit("p-adic lifting exceeds the work budget");
    IntVec digits(n, 0), x(n);
    while (true) {
      for (int i = 0; i < n; ++i) x[i] = z[i] + pm * digits[i];
      if (C.eval_mod(x, next) == 0) out.push_back(x);
      int pos = n - 1;
      while (pos >= 0 && digits[pos] == p - 1) digits[pos--] = 0;
      if (pos < 0) break;
      ++digits[pos];
    }
  }
  return out;
}

std::vector<IntVec> zeros_mod_p(const CubicForm& C, std::int64_t p, double& work, double budget) {
  return lift_zeros(C, {IntVec(C.n(), 0)}, 1, p, work, budget);
}

int gradient_valuation(const CubicForm& C, const IntVec& a, std::int64_t p, int cap) {
  auto g = grad_cubic(C, std::span<const std::int64_t>(a));
  int t = cap;
  for (const auto& gi : g) t = std::min(t, valuation(gi, p, cap));
  return t;
}

}  // namespace

LocalDensity local_density(const CubicForm& C, std::int64_t p, int k, double budget) {
  require_prime(p, "local_density");
  if (k < 1) throw std::invalid_argument("local_density: k must be at least 1");
  checked_power(p, k, "local_density");
  double work = 0;
  auto zeros = zeros_mod_p(C, p, work, budget);
  std::int64_t pm = p;
  for (int j = 1; j < k; ++j) {
    zeros = lift_zeros(C, zeros, pm, p, work, budget);
    pm *= p;
  }
  LocalDensity out;
  out.p = p;
  out.k = k;
  out.solutions = zeros.size();
  const Integer norm = pow(Integer(p), static_cast<unsigned>(k * (C.n() - 1)));
  out.sigma = Rational(Integer(out.solutions)) / Rational(norm);
  return out;
}

Rational series_term_exact(const CubicForm& C, std::int64_t q, double budget) {
  const auto hist = residue_histogram(C, q, budget);
  Integer total = 0;
  for (std::int64_t m = 0; m < q; ++m)
    if (hist[m]) total += Integer(hist[m]) * ramanujan_sum(q, m);
  return Rational(total) / Rational(pow(Integer(q), static_cast<unsigned>(C.n())));
}

Rational local_factor_via_sums(const CubicForm& C, std::int64_t p, int k, double budget) {
  require_prime(p, "local_factor_via_sums");
  if (k < 0) throw std::invalid_argument("local_factor_via_sums: k must be nonnegative");
  checked_power(p, std::max(k, 1), "local_factor_via_sums");
  Rational sum = 1;
  std::int64_t q = 1;
  for (int j = 1; j <= k; ++j) {
    q *= p;
    sum += series_term_exact(C, q, budget);
  }
  return sum;
}

TruncatedSeries singular_series_truncated(const CubicForm& C, std::int64_t Q, double budget) {
  if (Q < 1) throw std::invalid_argument("singular_series_truncated: Q must be positive");
  const int n = C.n();
  double total = 0;
  for (std::int64_t q = 1; q <= Q; ++q) total += pow_budget(static_cast<double>(q), n);
  if (total > budget) throw ResourceLimit("singular series: total terms exceed the budget");

  TruncatedSeries out;
  out.exact = 0;
  for (std::int64_t q = 1; q <= Q; ++q) {
    const auto hist = residue_histogram(C, q, budget);
    // Root-of-unity evaluation of sum_a S_{q,a,0} = sum_a sum_m hist[m] e(am/q).
    Complex s = 0.0;
    for (std::int64_t a = (q == 1 ? 0 : 1); a < std::max<std::int64_t>(q, 1); ++a) {
      if (q > 1 && std::gcd(a, q) != 1) continue;
      for (std::int64_t m = 0; m < q; ++m)
        if (hist[m])
          s += static_cast<double>(hist[m]) *
               std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((a * m) % q) / static_cast<double>(q));
    }
    const double qn = pow_budget(static_cast<double>(q), n);
    SeriesTerm term;
    term.q = q;
    term.value = s.real() / qn;
    term.imag = s.imag() / qn;
    Integer exact = 0;
    for (std::int64_t m = 0; m < q; ++m)
      if (hist[m]) exact += Integer(hist[m]) * ramanujan_sum(q, m);
    term.exact = Rational(exact) / Rational(pow(Integer(q), static_cast<unsigned>(n)));
    if (std::fabs(term.imag) > 1e-9)
      throw NotConverged("singular series term q=" + std::to_string(q) + " has imaginary part " +
                         std::to_string(term.imag));
    out.value += term.value;
    out.exact += term.exact;
    out.terms.push_back(std::move(term));
  }
  return out;
}

EulerCheck euler_product_check(const CubicForm& C, std::int64_t Q, double budget) {
  if (Q < 1) throw std::invalid_argument("euler_product_check: Q must be positive");
  EulerCheck out;
  out.partial = 0;
  for (std::int64_t q = 1; q <= Q; ++q) out.partial += series_term_exact(C, q, budget);

  // Depth per prime and the full set of moduli in the product expansion.
  std::vector<std::int64_t> moduli{1};
  out.product = 1;
  for (std::int64_t p : primes_up_to(Q)) {
    int k = 0;
    for (std::int64_t pk = p; pk <= Q; pk *= p) ++k;
    out.product *= local_factor_via_sums(C, p, k, budget);
    std::vector<std::int64_t> next;
    for (std::int64_t base : moduli) {
      std::int64_t pj = 1;
      for (int j = 0; j <= k; ++j, pj *= p) next.push_back(base * pj);
    }
    moduli = std::move(next);
  }
  out.extra_terms = 0;
  for (std::int64_t q : moduli)
    if (q > Q) out.extra_terms += series_term_exact(C, q, budget);
  out.mismatch = out.product - out.partial;
  out.consistent = out.mismatch == out.extra_terms;
  return out;
}

std::string to_string(PadicStatus s) {
  switch (s) {
    case PadicStatus::certified:
      return "certified";
    case PadicStatus::not_found:
      return "not_found";
    case PadicStatus::impossible:
      return "impossible";
  }
  return "unknown";
}

PadicSearch padic_search(const CubicForm& C, std::int64_t p, int m_max, double budget) {
  require_prime(p, "padic_search");
  if (m_max < 1) throw std::invalid_argument("padic_search: m_max must be at least 1");
  checked_power(p, m_max, "padic_search");
  PadicSearch out;
  double work = 0;
  auto zeros = zeros_mod_p(C, p, work, budget);
  std::int64_t pm = p;
  for (int m = 1; m <= m_max; ++m) {
    if (m > 1) {
      zeros = lift_zeros(C, zeros, pm, p, work, budget);
      pm *= p;
    }
    out.depth_reached = m;
    const bool any_primitive = std::any_of(zeros.begin(), zeros.end(), [p](const IntVec& z) {
      return std::any_of(z.begin(), z.end(), [p](std::int64_t v) { return v % p != 0; });
    });
    if (!any_primitive) {
      out.status = PadicStatus::impossible;
      return out;
    }
    std::sort(zeros.begin(), zeros.end());
    for (const auto& z : zeros) {
      const int t = gradient_valuation(C, z, p, m);
      if (m - 2 * t >= 1) {
        out.status = PadicStatus::certified;
        out.certificate = PadicCertificate{p, z, m, t, m - 2 * t};
        return out;
      }
    }
  }
  return out;
}

std::optional<PadicCertificate> find_nonsingular_padic_zero(const CubicForm& C, std::int64_t p, int m_max,
                                                            double budget) {
  return padic_search(C, p, m_max, budget).certificate;
}

bool check_certificate(const CubicForm& C, const PadicCertificate& cert) {
  if (!is_prime(cert.p) || cert.m < 1 || static_cast<int>(cert.a.size()) != C.n()) return false;
  const Integer pm = pow(Integer(cert.p), static_cast<unsigned>(cert.m));
  BigVec a(cert.a.begin(), cert.a.end());
  if (eval_cubic(C, std::span<const Integer>(a)) % pm != 0) return false;
  const auto g = grad_cubic(C, std::span<const Integer>(a));
  int t = cert.m;
  for (const auto& gi : g) {
    if (gi == 0) continue;
    Integer v = abs(gi);
    int e = 0;
    while (e < cert.m && v % cert.p == 0) {
      v /= cert.p;
      ++e;
    }
    t = std::min(t, e);
  }
  return t == cert.t && cert.slack == cert.m - 2 * t && cert.slack >= 1;
}

PadicCertificate hensel_lift(const CubicForm& C, const PadicCertificate& cert) {
  if (!check_certificate(C, cert)) throw std::invalid_argument("hensel_lift: certificate does not verify");
  const int n = C.n();
  const auto g = grad_cubic(C, std::span<const std::int64_t>(cert.a));
  int i = 0;
  while (i < n && valuation(g[i], cert.p, cert.m) != cert.t) ++i;
  const std::int64_t step = checked_power(cert.p, cert.m - cert.t, "hensel_lift");
  const std::int64_t next = checked_power(cert.p, cert.m + 1, "hensel_lift");
  for (std::int64_t s = 0; s < cert.p; ++s) {
    IntVec b = cert.a;
    b[i] = mod_floor(b[i] + s * step, next);
    if (C.eval_mod(b, next) == 0) {
      PadicCertificate out{cert.p, b, cert.m + 1, cert.t, cert.m + 1 - 2 * cert.t};
      return out;
    }
  }
  throw InconsistentBounds("Newton step failed to lift a certified zero");
}

PositivityReport positivity_report(const CubicForm& C, const PositivityOptions& opts) {
  PositivityReport rep;
  for (std::int64_t p : primes_up_to(opts.pmax)) rep.primes.push_back(PrimeEntry{p, padic_search(C, p, opts.m_max)});
  rep.series = singular_series_truncated(C, opts.Q);

  auto hb = h_bounds(C, std::nullopt, HSearch{});
  rep.h_lower = hb.lower;
  rep.h_upper = hb.upper;
  auto sb = sbound_check(C, hb.lower, opts.sbound_qmax, opts.psi);
  rep.observed_constant = sb.max_ratio;
  // |q-term| <= phi(q) K q^{-h/8+psi} <= K q^{1-h/8+psi}; summable when the
  // exponent s = h/8 - psi - 1 exceeds 1, with sum_{q>Q} q^{-s} <= Q^{1-s}/(s-1).
  const double s = hb.lower / 8.0 - opts.psi - 1.0;
  if (s > 1.0) {
    rep.tail_heuristic = sb.max_ratio * std::pow(static_cast<double>(opts.Q), 1.0 - s) / (s - 1.0);
    rep.tail_note = "heuristic: observed constant times the integral tail bound";
  } else {
    rep.tail_note = "unquantified: exponent 1 - h_lower/8 + psi is not below -1";
  }
  return rep;
}

}  // namespace cubiclab
