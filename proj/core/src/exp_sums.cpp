#include "cubiclab/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cubiclab/concurrency.hpp"
#include "cubiclab/errors.hpp"

namespace cubiclab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e(t) for a phase given in cycles; the integer part is removed in long
/// double before the trigonometric call.
Complex e_cycles(long double t) {
  long double frac = t - std::nearbyint(t);
  return std::polar(1.0, kTwoPi * static_cast<double>(frac));
}

std::vector<Complex> roots_of_unity(std::int64_t q) {
  std::vector<Complex> roots(static_cast<std::size_t>(q));
  for (std::int64_t k = 0; k < q; ++k)
    roots[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(q));
  return roots;
}

void check_terms(double terms, double budget, const char* what) {
  if (terms > budget)
    throw ResourceLimit(std::string(what) + ": " + std::to_string(terms) + " terms exceed the budget of " +
                        std::to_string(budget));
}

/// Calls body(chunk, y) for every y in [0,q)^n; the first coordinate is split
/// into contiguous chunks that may run concurrently.
template <class Body>
void for_each_residue(int n, std::int64_t q, std::size_t chunks, Body&& body) {
  parallel_slabs(chunks, [&](std::size_t chunk) {
    const std::int64_t lo = q * static_cast<std::int64_t>(chunk) / static_cast<std::int64_t>(chunks);
    const std::int64_t hi = q * static_cast<std::int64_t>(chunk + 1) / static_cast<std::int64_t>(chunks);
    if (lo == hi) return;
    IntVec y(n, 0);
    y[0] = lo;
    while (true) {
      body(chunk, y);
      int pos = n - 1;
      while (pos >= 1 && y[pos] == q - 1) y[pos--] = 0;
      if (pos < 1) {
        if (++y[0] >= hi) break;
      } else {
        ++y[pos];
      }
    }
  });
}

/// C(y) mod q for y with entries in [0, q).
struct ModEvaluator {
  const CubicForm& C;
  std::int64_t q;
  bool fast;
  ModEvaluator(const CubicForm& form, std::int64_t modulus)
      : C(form), q(modulus), fast(form.fits_on_box(modulus)) {}
  std::int64_t operator()(const IntVec& y) const {
    if (fast) {
      auto v = static_cast<std::int64_t>(C.eval_i128(y) % q);
      return v < 0 ? v + q : v;
    }
    return C.eval_mod(y, q);
  }
};

std::int64_t linear_mod(const IntVec& avec_mod, const IntVec& y, std::int64_t q) {
  __int128 acc = 0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += static_cast<__int128>(avec_mod[i]) * y[i];
  return static_cast<std::int64_t>(acc % q);
}

/// Histogram of (a C(y) + avec . y) mod q over y mod q.
std::vector<std::uint64_t> phase_histogram(const CubicForm& C, std::int64_t q, std::int64_t a, const IntVec& avec) {
  const int n = C.n();
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::int64_t>(q, 64));
  std::vector<std::vector<std::uint64_t>> local(chunks, std::vector<std::uint64_t>(q, 0));
  IntVec am(n);
  for (int i = 0; i < n; ++i) am[i] = mod_floor(avec[i], q);
  const std::int64_t amod = mod_floor(a, q);
  ModEvaluator eval(C, q);
  for_each_residue(n, q, chunks, [&](std::size_t chunk, const IntVec& y) {
    __int128 phase = static_cast<__int128>(amod) * eval(y) + linear_mod(am, y, q);
    ++local[chunk][static_cast<std::size_t>(phase % q)];
  });
  std::vector<std::uint64_t> hist(q, 0);
  for (const auto& l : local)
    for (std::int64_t k = 0; k < q; ++k) hist[k] += l[k];
  return hist;
}

}  // namespace

RationalApproxPoint nearest_rational_point(double alpha0, std::span<const double> lambda, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("nearest_rational_point: q must be positive");
  RationalApproxPoint pt;
  pt.q = q;
  pt.a = static_cast<std::int64_t>(std::llround(alpha0 * static_cast<double>(q)));
  pt.beta0 = alpha0 - static_cast<double>(pt.a) / static_cast<double>(q);
  for (double l : lambda) {
    auto av = static_cast<std::int64_t>(std::llround(l * static_cast<double>(q)));
    pt.avec.push_back(av);
    pt.bvec.push_back(l - static_cast<double>(av) / static_cast<double>(q));
  }
  return pt;
}

ExpSumValue complete_sum(const CubicForm& C, std::int64_t q, std::int64_t a, const IntVec& avec, double budget) {
  if (q < 1) throw std::invalid_argument("complete_sum: q must be positive");
  if (static_cast<int>(avec.size()) != C.n()) throw DimensionMismatch(C.n(), avec.size());
  const double terms = pow_budget(static_cast<double>(q), C.n());
  check_terms(terms, budget, "complete sum");
  if (q > (std::int64_t{1} << 31)) throw ResourceLimit("complete sum: modulus too large");
  const auto hist = phase_histogram(C, q, a, avec);
  const auto roots = roots_of_unity(q);
  Complex sum = 0.0;
  for (std::int64_t k = 0; k < q; ++k)
    if (hist[k]) sum += static_cast<double>(hist[k]) * roots[k];
  return ExpSumValue{sum, 4.0 * kEps * terms};
}

std::vector<std::uint64_t> residue_histogram(const CubicForm& C, std::int64_t q, double budget) {
  if (q < 1) throw std::invalid_argument("residue_histogram: q must be positive");
  check_terms(pow_budget(static_cast<double>(q), C.n()), budget, "residue histogram");
  if (q > (std::int64_t{1} << 31)) throw ResourceLimit("residue histogram: modulus too large");
  return phase_histogram(C, q, 1, IntVec(C.n(), 0));
}

ExpSumValue complete_sum_crt(const CubicForm& C, std::int64_t q, std::int64_t a, const IntVec& avec, double budget) {
  if (q < 1) throw std::invalid_argument("complete_sum_crt: q must be positive");
  if (static_cast<int>(avec.size()) != C.n()) throw DimensionMismatch(C.n(), avec.size());
  Complex product = 1.0;
  double terms = 0;
  for (const auto& [p, e] : factorize(q)) {
    const std::int64_t Q = ipow(p, e);
    const std::int64_t b = inverse_mod(mod_floor(q / Q, Q), Q);
    IntVec bavec(avec.size());
    for (std::size_t i = 0; i < avec.size(); ++i)
      bavec[i] = static_cast<std::int64_t>(static_cast<__int128>(b) * mod_floor(avec[i], Q) % Q);
    const auto ab = static_cast<std::int64_t>(static_cast<__int128>(mod_floor(a, Q)) * b % Q);
    auto part = complete_sum(C, Q, ab, bavec, budget);
    product *= part.value;
    terms += pow_budget(static_cast<double>(Q), C.n());
  }
  const double qn = pow_budget(static_cast<double>(q), C.n());
  return ExpSumValue{product, 4.0 * kEps * (qn + terms)};
}

SboundReport sbound_check(const CubicForm& C, int h_lower, std::int64_t qmax, double psi, const SboundOptions& opts) {
  if (qmax < 1) throw std::invalid_argument("sbound_check: qmax must be positive");
  if (h_lower < 1) throw std::invalid_argument("sbound_check: h_lower must be positive");
  const int n = C.n();
  double total = 0;
  for (std::int64_t q = 1; q <= qmax; ++q)
    total += (1 + opts.random_avec) * (pow_budget(static_cast<double>(q), n) + static_cast<double>(q) * q * q);
  check_terms(total, opts.budget, "sbound check");

  SboundReport report;
  report.exponent_offset = n - h_lower / 8.0 + psi;
  std::mt19937_64 rng(opts.seed);
  for (std::int64_t q = 1; q <= qmax; ++q) {
    std::vector<IntVec> sample{IntVec(n, 0)};
    std::uniform_int_distribution<std::int64_t> dist(0, q - 1);
    for (int s = 0; s < opts.random_avec; ++s) {
      IntVec v(n);
      for (auto& t : v) t = dist(rng);
      sample.push_back(std::move(v));
    }
    const auto roots = roots_of_unity(q);
    ModEvaluator eval(C, q);
    SboundRow row;
    row.q = q;
    row.max_abs = -1.0;
    for (const auto& avec : sample) {
      // Joint histogram of (C(y) mod q, avec . y mod q); each a is then O(q^2).
      std::vector<std::uint64_t> joint(static_cast<std::size_t>(q * q), 0);
      for_each_residue(n, q, 1, [&](std::size_t, const IntVec& y) {
        ++joint[static_cast<std::size_t>(eval(y) * q + linear_mod(avec, y, q))];
      });
      for (std::int64_t a = q == 1 ? 0 : 1; a < std::max<std::int64_t>(q, 1); ++a) {
        if (q > 1 && std::gcd(a, q) != 1) continue;
        Complex s = 0.0;
        for (std::int64_t c = 0; c < q; ++c)
          for (std::int64_t l = 0; l < q; ++l)
            if (auto h = joint[c * q + l]) s += static_cast<double>(h) * roots[(a * c + l) % q];
        const double mag = std::abs(s);
        if (mag > row.max_abs) {
          row.max_abs = mag;
          row.arg_a = a;
          row.arg_avec = avec;
        }
      }
    }
    // Values below roundoff count as exact zeros.
    if (row.max_abs < 1e-9 * pow_budget(static_cast<double>(q), n)) row.max_abs = 0.0;
    row.ratio = row.max_abs / std::pow(static_cast<double>(q), report.exponent_offset);
    if (row.ratio > report.max_ratio) {
      report.max_ratio = row.ratio;
      report.arg_q = q;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

double weight_1d(double t) {
  if (!(std::fabs(t) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

/// Diagonal coefficients as doubles (zero for absent variables).
std::vector<double> diagonal_coeffs(const CubicForm& C) {
  std::vector<double> c(C.n(), 0.0);
  for (const auto& m : C.terms()) c[m.i] = m.c.convert_to<double>();
  return c;
}

}  // namespace

ExpSumValue sum_g(const CubicForm& C, double P, double alpha0, std::span<const double> lambda, bool weighted,
                  double budget) {
  if (!(P >= 1)) throw std::invalid_argument("sum_g: P must be at least 1");
  const int n = C.n();
  if (static_cast<int>(lambda.size()) != n) throw DimensionMismatch(n, lambda.size());
  const auto B = static_cast<std::int64_t>(std::ceil(P)) - 1;
  const double side = static_cast<double>(2 * B + 1);
  double lam_abs = 0;
  for (double l : lambda) lam_abs += std::fabs(l);
  // Per-term phase error: relative roundoff of the phase argument plus the
  // evaluation of e(.).
  const double phase_err = kTwoPi * kEps * (std::fabs(alpha0) * C.bound_on_box(B) + lam_abs * B) + 4.0 * kEps;
  auto weight = [&](std::int64_t t) { return weighted ? weight_1d(static_cast<double>(t) / P) : 1.0; };

  if (C.is_diagonal()) {
    check_terms(side * n, budget, "g sum");
    const auto c = diagonal_coeffs(C);
    Complex product = 1.0;
    for (int j = 0; j < n; ++j) {
      Complex f = 0.0;
      for (std::int64_t t = -B; t <= B; ++t) {
        const long double t3 = static_cast<long double>(t) * t * t;
        f += weight(t) * e_cycles(static_cast<long double>(alpha0) * c[j] * t3 + static_cast<long double>(lambda[j]) * t);
      }
      product *= f;
    }
    return ExpSumValue{product, pow_budget(side, n) * phase_err * (1 + n)};
  }

  check_terms(pow_budget(side, n), budget, "g sum");
  if (!C.fits_on_box(B)) throw ResourceLimit("g sum: box too large for exact evaluation");
  const std::size_t slabs = static_cast<std::size_t>(2 * B + 1);
  std::vector<Complex> partial(slabs, 0.0);
  parallel_slabs(slabs, [&](std::size_t slab) {
    IntVec x(n, -B);
    x[0] = static_cast<std::int64_t>(slab) - B;
    Complex acc = 0.0;
    while (true) {
      double w = 1.0;
      for (int i = 0; i < n && w > 0; ++i) w *= weight(x[i]);
      if (w > 0) {
        long double lin = 0;
        for (int i = 0; i < n; ++i) lin += static_cast<long double>(lambda[i]) * x[i];
        const long double cx = static_cast<long double>(C.eval_i128(x));
        acc += w * e_cycles(static_cast<long double>(alpha0) * cx + lin);
      }
      int pos = n - 1;
      while (pos >= 1 && x[pos] == B) x[pos--] = -B;
      if (pos < 1) break;
      ++x[pos];
    }
    partial[slab] = acc;
  });
  Complex sum = 0.0;
  for (const auto& p : partial) sum += p;
  return ExpSumValue{sum, pow_budget(side, n) * phase_err * 2};
}

namespace {

ExpSumValue osc_integral(const CubicForm& C, double gamma0, std::span<const double> gamma, double tol,
                         const OscOptions& opts, bool smooth_weight) {
  const int n = C.n();
  if (static_cast<int>(gamma.size()) != n) throw DimensionMismatch(n, gamma.size());
  if (!(tol > 0)) throw std::invalid_argument("oscillatory integral: tol must be positive");
  auto weight = [smooth_weight](double t) { return smooth_weight ? weight_1d(t) : 1.0; };
  // Largest possible one-dimensional factor: 0.444 for w, 2 for the box.
  const double factor_bound = smooth_weight ? 0.444 : 2.0;

  if (C.is_diagonal()) {
    const auto c = diagonal_coeffs(C);
    AdaptiveOptions ao;
    ao.max_intervals = opts.max_intervals;
    ao.abs_tol = tol / (n * std::pow(factor_bound + 1e-3, n - 1));
    std::vector<QuadResult> parts;
    for (int j = 0; j < n; ++j) {
      const double cj = c[j], gj = gamma[j];
      parts.push_back(integrate_adaptive(
          [&](double t) { return weight(t) * e_cycles(static_cast<long double>(gamma0) * cj * t * t * t + gj * t); },
          -1.0, 1.0, ao));
    }
    Complex product = 1.0;
    for (const auto& p : parts) product *= p.value;
    double err = 0;
    for (int j = 0; j < n; ++j) {
      double others = 1.0;
      for (int k = 0; k < n; ++k)
        if (k != j) others *= std::abs(parts[k].value) + parts[k].abs_error;
      err += parts[j].abs_error * others;
    }
    return ExpSumValue{product, err};
  }

  if (n <= 4) {
    std::vector<double> x(n, 0.0);
    // Nested adaptive quadrature: each level integrates the next with a
    // quarter of its own tolerance, so the accumulated inner error is bounded
    // by (interval length 2) x (inner tolerance).
    auto level = [&](auto&& self, int d, double level_tol) -> QuadResult {
      AdaptiveOptions ao;
      ao.abs_tol = level_tol;
      ao.max_intervals = d == 0 ? opts.max_intervals : std::max<std::size_t>(200, opts.max_intervals / 10);
      if (d == n - 1) {
        return integrate_adaptive(
            [&](double t) {
              x[d] = t;
              long double lin = 0;
              for (int i = 0; i < n; ++i) lin += static_cast<long double>(gamma[i]) * x[i];
              return weight(t) * e_cycles(static_cast<long double>(gamma0) * C.eval_real(x) + lin);
            },
            -1.0, 1.0, ao);
      }
      const double inner_tol = level_tol / 4.0;
      ao.abs_tol = level_tol / 2.0;
      auto outer = integrate_adaptive(
          [&](double t) {
            x[d] = t;
            const double w = weight(t);
            if (w == 0.0) return Complex(0.0);
            return w * self(self, d + 1, inner_tol).value;
          },
          -1.0, 1.0, ao);
      outer.abs_error += 2.0 * inner_tol;
      return outer;
    };
    auto r = level(level, 0, tol);
    return ExpSumValue{r.value, r.abs_error};
  }

  auto mc = qmc_integrate(n, opts.qmc_samples, opts.seed, [&](std::span<const double> u) {
    std::vector<double> xx(n);
    double w = 1.0;
    long double lin = 0;
    for (int i = 0; i < n; ++i) {
      xx[i] = 2.0 * u[i] - 1.0;
      w *= weight(xx[i]);
      lin += static_cast<long double>(gamma[i]) * xx[i];
    }
    if (w == 0.0) return Complex(0.0);
    return w * e_cycles(static_cast<long double>(gamma0) * C.eval_real(xx) + lin);
  });
  return ExpSumValue{mc.value * std::pow(2.0, n), mc.std_error * std::pow(2.0, n)};
}

}  // namespace

ExpSumValue osc_integral_I(const CubicForm& C, double gamma0, std::span<const double> gamma, double tol,
                           const OscOptions& opts) {
  return osc_integral(C, gamma0, gamma, tol, opts, true);
}

ExpSumValue osc_integral_Iu(const CubicForm& C, double gamma0, std::span<const double> gamma, double tol,
                            const OscOptions& opts) {
  return osc_integral(C, gamma0, gamma, tol, opts, false);
}

PoissonCheck poisson_residual(const CubicForm& C, double P, double alpha0, std::span<const double> lambda, int cutoff,
                              double tol) {
  const int n = C.n();
  if (n > 2) throw std::invalid_argument("poisson_residual: n <= 2 required");
  if (cutoff < 0) throw std::invalid_argument("poisson_residual: cutoff must be nonnegative");
  if (static_cast<int>(lambda.size()) != n) throw DimensionMismatch(n, lambda.size());
  PoissonCheck out;
  auto g = sum_g(C, P, alpha0, lambda, true);
  out.g = g.value;
  const double Pn = std::pow(P, n);
  const double gamma0 = P * P * P * alpha0;
  std::vector<std::int64_t> c(n, -cutoff);
  std::vector<double> gamma(n);
  while (true) {
    for (int i = 0; i < n; ++i) gamma[i] = P * lambda[i] - P * static_cast<double>(c[i]);
    auto I = osc_integral_I(C, gamma0, gamma, tol);
    out.approximation += Pn * I.value;
    out.quad_error += Pn * I.abs_error;
    int pos = n - 1;
    while (pos >= 0 && c[pos] == cutoff) c[pos--] = -cutoff;
    if (pos < 0) break;
    ++c[pos];
  }
  out.quad_error += g.abs_error;
  out.residual = std::abs(out.g - out.approximation);
  out.relative = std::abs(out.g) > 0 ? out.residual / std::abs(out.g) : out.residual;
  return out;
}

IrrationalityValue irrationality_F(std::span<const double> lambda, double P) {
  if (!(P >= 1)) throw std::invalid_argument("irrationality_F: P must be at least 1");
  const int n = static_cast<int>(lambda.size());
  if (n < 1) throw std::invalid_argument("irrationality_F: empty frequency vector");
  IrrationalityValue best;
  best.value = -1;
  const std::int64_t q_limit = 100'000'000;
  for (std::int64_t q = 1;; ++q) {
    if (q > 1 && std::pow(static_cast<double>(q), -n) <= best.value) break;
    if (q > q_limit) throw ResourceLimit("irrationality_F: denominator scan exceeded 1e8");
    long double prod = 1.0L;
    IntVec avec(n);
    for (int v = 0; v < n; ++v) {
      const long double ql = static_cast<long double>(q) * lambda[v];
      const long double a = std::nearbyint(ql);
      avec[v] = static_cast<std::int64_t>(a);
      prod *= static_cast<long double>(q) + static_cast<long double>(P) * std::fabs(ql - a);
    }
    const double value = static_cast<double>(1.0L / prod);
    if (value > best.value) {
      best.value = value;
      best.q = q;
      best.avec = std::move(avec);
    }
  }
  return best;
}

IrrationalityValue irrationality_F(const LinearSystem& L, std::span<const double> alpha, double P) {
  auto lambda = L.combine(alpha);
  return irrationality_F(lambda, P);
}

}  // namespace cubiclab
