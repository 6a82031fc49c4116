#include "cubiclab/singular_integral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cubiclab/quadrature.hpp"

namespace cubiclab {

double psi_L(double xi, double L) {
  if (!(L > 0)) throw std::invalid_argument("psi_L: L must be positive");
  return L * std::max(0.0, 1.0 - L * std::fabs(xi));
}

double Psi_L(std::span<const double> xi, double L) {
  double prod = 1.0;
  for (double v : xi) {
    prod *= psi_L(v, L);
    if (prod == 0.0) break;
  }
  return prod;
}

ConstraintMap constraint_map(const CubicForm& C, const std::optional<LinearSystem>& L) {
  if (L && L->n() != C.n()) throw DimensionMismatch(C.n(), L->n());
  return [C, L](std::span<const double> x, std::span<double> out) {
    out[0] = C.eval_real(x);
    if (!L) return;
    for (int i = 0; i < L->r(); ++i) {
      double acc = 0.0;
      const auto& row = L->row(i).real_coeffs();
      for (int j = 0; j < L->n(); ++j) acc += row[j] * x[j];
      out[1 + i] = acc;
    }
  };
}

namespace {

DensityEstimate tent_estimate(int n, int m, const ConstraintMap& f, double L, std::size_t samples,
                              std::uint64_t seed, double half_width, bool weighted) {
  if (!(L > 0)) throw std::invalid_argument("tent integral: L must be positive");
  if (samples < 1000) throw std::invalid_argument("tent integral: at least 1000 samples required");
  if (n < 1 || m < 1) throw std::invalid_argument("tent integral: bad dimensions");
  const double volume = std::pow(2.0 * half_width, n);
  auto r = qmc_integrate(n, samples, seed, [&](std::span<const double> u) {
    double x[32];
    double out[32];
    std::vector<double> xh, oh;
    double* xp = x;
    double* op = out;
    if (n > 32 || m > 32) {
      xh.resize(n);
      oh.resize(m);
      xp = xh.data();
      op = oh.data();
    }
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      xp[i] = half_width * (2.0 * u[i] - 1.0);
      if (weighted) {
        const double t = xp[i];
        if (!(std::fabs(t) < 1.0)) return Complex(0.0);
        w *= std::exp(-1.0 / (1.0 - t * t));
      }
    }
    f(std::span<const double>(xp, n), std::span<double>(op, m));
    return Complex(w * Psi_L(std::span<const double>(op, m), L));
  });
  DensityEstimate est;
  est.value = r.value.real() * volume;
  est.std_error = r.std_error * volume;
  est.L = L;
  est.samples = r.samples;
  est.seed = seed;
  return est;
}

int constraint_count(const std::optional<LinearSystem>& Lsys) { return 1 + (Lsys ? Lsys->r() : 0); }

}  // namespace

DensityEstimate schmidt_IL(int n, int m, const ConstraintMap& f, double L, std::size_t samples, std::uint64_t seed) {
  return tent_estimate(n, m, f, L, samples, seed, 1.0, true);
}

DensityEstimate schmidt_IL(const CubicForm& C, const std::optional<LinearSystem>& Lsys, double L, std::size_t samples,
                           std::uint64_t seed) {
  return schmidt_IL(C.n(), constraint_count(Lsys), constraint_map(C, Lsys), L, samples, seed);
}

ChiEstimate chi_w_estimate(const CubicForm& C, const std::optional<LinearSystem>& Lsys,
                           const std::vector<double>& schedule, std::size_t samples, std::uint64_t seed) {
  if (schedule.size() < 3) throw std::invalid_argument("chi_w_estimate: schedule needs at least 3 entries");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1])) throw std::invalid_argument("chi_w_estimate: schedule must increase");
  ChiEstimate out;
  for (double L : schedule) {
    auto est = schmidt_IL(C, Lsys, L, samples, seed);
    out.table.push_back(ScheduleRow{L, est.value, est.std_error});
  }
  const auto& t = out.table;
  for (std::size_t i = 2; i < t.size(); ++i) {
    const double prev = std::fabs(t[i - 1].IL - t[i - 2].IL);
    const double cur = std::fabs(t[i].IL - t[i - 1].IL);
    if (!(cur < prev)) {
      std::ostringstream msg;
      msg << "I_L differences do not decrease along the schedule: |I(" << t[i].L << ") - I(" << t[i - 1].L
          << ")| = " << cur << " >= " << prev;
      throw ScheduleNotConverged(msg.str(), out.table);
    }
  }
  out.value = t.back().IL;
  out.error_bar = std::fabs(t.back().IL - t[t.size() - 2].IL) + t.back().std_error;
  return out;
}

namespace {

struct BoxIntegral {
  Complex value;
  double error = 0;
};

BoxIntegral oscillatory_box(const CubicForm& C, const std::optional<LinearSystem>& Lsys, double B0, double A,
                            double tol) {
  const int n = C.n();
  const int r = Lsys ? Lsys->r() : 0;
  std::vector<double> gamma(n, 0.0);
  const double area = 2.0 * B0 * (r == 1 ? 2.0 * A : 1.0);
  const double inner_tol = tol / (4.0 * area);
  AdaptiveOptions outer;
  outer.abs_tol = tol / 4.0;
  outer.max_intervals = 4000;

  auto integrate_beta = [&](double beta_tol) {
    AdaptiveOptions ao;
    ao.abs_tol = beta_tol;
    ao.max_intervals = 4000;
    return integrate_adaptive([&](double beta0) { return osc_integral_I(C, beta0, gamma, inner_tol).value; }, -B0,
                              B0, ao);
  };

  if (r == 0) {
    auto res = integrate_beta(tol / 2.0);
    return BoxIntegral{res.value, res.abs_error + area * inner_tol};
  }
  const auto& row = Lsys->row(0).real_coeffs();
  double inner_err_max = 0.0;
  auto res = integrate_adaptive(
      [&](double alpha) {
        for (int j = 0; j < n; ++j) gamma[j] = alpha * row[j];
        auto inner = integrate_beta(tol / (8.0 * A));
        inner_err_max = std::max(inner_err_max, inner.abs_error);
        return inner.value;
      },
      -A, A, outer);
  return BoxIntegral{res.value, res.abs_error + 2.0 * A * inner_err_max + area * inner_tol};
}

}  // namespace

ChiOscillatory chi_w_oscillatory(const CubicForm& C, const std::optional<LinearSystem>& Lsys,
                                 const OscillatoryBox& box, double tol) {
  if (C.n() > 3) throw std::invalid_argument("chi_w_oscillatory: n <= 3 required");
  if (Lsys && Lsys->r() > 1) throw std::invalid_argument("chi_w_oscillatory: r <= 1 required");
  if (Lsys && Lsys->n() != C.n()) throw DimensionMismatch(C.n(), Lsys->n());
  if (!(box.beta0_max > 0 && box.alpha_max > 0 && tol > 0))
    throw std::invalid_argument("chi_w_oscillatory: box and tolerance must be positive");
  auto full = oscillatory_box(C, Lsys, box.beta0_max, box.alpha_max, tol);
  auto half = oscillatory_box(C, Lsys, box.beta0_max / 2.0, box.alpha_max / 2.0, tol);
  ChiOscillatory out;
  out.quad_error = full.error;
  out.tail_bound = std::abs(full.value - half.value);
  out.half_box_value = half.value;
  out.value = ExpSumValue{full.value, full.error + out.tail_bound};
  return out;
}

DensityEstimate intbox_check(const CubicForm& C, const std::optional<LinearSystem>& Lsys, double L,
                             std::size_t samples, std::uint64_t seed) {
  return tent_estimate(C.n(), constraint_count(Lsys), constraint_map(C, Lsys), L, samples, seed, 0.5, false);
}

}  // namespace cubiclab
