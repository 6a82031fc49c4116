#include "cubiclab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cubiclab/errors.hpp"
#include "cubiclab/quadrature.hpp"

namespace cubiclab {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

TPolicy parse_tpolicy(const std::string& name) {
  if (name == "log") return TPolicy::log;
  if (name == "pow") return TPolicy::pow;
  throw ConfigError("unknown T policy \"" + name + "\" (expected log or pow)");
}

std::string to_string(TPolicy p) { return p == TPolicy::log ? "log" : "pow"; }

double choose_T(double P, TPolicy policy, double theta) {
  if (!(P >= 1)) throw std::invalid_argument("choose_T: P must be at least 1");
  if (policy == TPolicy::log) return std::max(1.0, std::log(P));
  if (!(theta > 0 && theta <= 1)) throw std::invalid_argument("choose_T: theta must lie in (0, 1]");
  return std::pow(P, theta);
}

KernelParams KernelParams::explicit_rho(double eta, double rho, KernelSign sign) {
  if (!(eta > 0)) throw std::invalid_argument("kernel: eta must be positive");
  if (!(rho > 0 && rho <= eta)) throw std::invalid_argument("kernel: need 0 < rho <= eta");
  KernelParams kp;
  kp.eta = eta;
  kp.rho = rho;
  kp.sign = sign;
  kp.LP = eta / rho;
  kp.T = std::exp(kp.LP);
  return kp;
}

KernelParams KernelParams::from_P(double eta, double P, TPolicy policy, KernelSign sign, double theta) {
  const double T = choose_T(P, policy, theta);
  const double LP = std::max(1.0, std::log(T));
  KernelParams kp = explicit_rho(eta, eta / LP, sign);
  kp.T = T;
  kp.LP = LP;
  return kp;
}

KernelParams KernelParams::with_sign(KernelSign s) const {
  KernelParams kp = *this;
  kp.sign = s;
  return kp;
}

double KernelParams::width() const { return sign == KernelSign::plus ? 2 * eta + rho : 2 * eta - rho; }

double kernel_K(double alpha, const KernelParams& kp) {
  const double b = kp.width();
  return b * sinc(kPi * alpha * kp.rho) * sinc(kPi * alpha * b);
}

double kernel_hat(double t, const KernelParams& kp) {
  const double a = std::fabs(t);
  if (kp.sign == KernelSign::plus) {
    if (a <= kp.eta) return 1.0;
    if (a >= kp.eta + kp.rho) return 0.0;
    return (kp.eta + kp.rho - a) / kp.rho;
  }
  if (a <= kp.eta - kp.rho) return 1.0;
  if (a >= kp.eta) return 0.0;
  return (kp.eta - a) / kp.rho;
}

double kernel_taylor_bound(double alpha, const KernelParams& kp) {
  const double b = kp.width();
  return kPi * kPi / 6.0 * alpha * alpha * (kp.rho * kp.rho + b * b) * b;
}

SandwichReport sandwich_check(double eta, double rho, const std::vector<double>& t_grid, double quad_tol,
                              bool report_only) {
  const auto plus = KernelParams::explicit_rho(eta, rho, KernelSign::plus);
  const auto minus = plus.with_sign(KernelSign::minus);
  if (!(quad_tol > 0)) throw std::invalid_argument("sandwich_check: quad_tol must be positive");

  SandwichReport rep;
  rep.eta = eta;
  rep.rho = rho;
  rep.quad_tol = quad_tol;
  // |K(a)| <= 1/(pi^2 rho a^2), so the two tails beyond A contribute at most
  // 2/(pi^2 rho A). Half of the tolerance is spent on the tail.
  rep.alpha_cutoff = 2.0 / (kPi * kPi * rho * (quad_tol / 2.0));
  rep.tail_bound = 2.0 / (kPi * kPi * rho * rep.alpha_cutoff);

  double t_max = 0.0;
  for (double t : t_grid) t_max = std::max(t_max, std::fabs(t));
  // Highest frequency of K(a) cos(2 pi a t) in cycles per unit a.
  const double freq = 0.5 * (rho + plus.width()) + t_max;
  // Two oscillations per 20-point panel keeps the rule accurate to roundoff.
  const std::size_t panels = static_cast<std::size_t>(std::ceil(rep.alpha_cutoff * freq / 2.0)) + 1;
  const double width = rep.alpha_cutoff / static_cast<double>(panels);

  std::array<double, 20> gx{}, gw{};
  gauss_legendre_20(gx, gw);

  // Nodes on [0, A]; the integrand is even in a, so the transform is
  // 2 * sum w K(a) cos(2 pi a t).
  const std::size_t count = panels * 20;
  std::vector<double> nodes(count), wk_plus(count), wk_minus(count);
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = width * (static_cast<double>(p) + 0.5);
    for (int i = 0; i < 20; ++i) {
      const double a = c + 0.5 * width * gx[i];
      const double w = 0.5 * width * gw[i];
      nodes[p * 20 + i] = a;
      wk_plus[p * 20 + i] = 2.0 * w * kernel_K(a, plus);
      wk_minus[p * 20 + i] = 2.0 * w * kernel_K(a, minus);
    }
  }

  auto transform = [&](double t, double& out_plus, double& out_minus) {
    double sp = 0.0, sm = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double c = std::cos(2.0 * kPi * nodes[i] * t);
      sp += wk_plus[i] * c;
      sm += wk_minus[i] * c;
    }
    out_plus = sp;
    out_minus = sm;
  };

  auto chain = [&](double t, SandwichRow& row) {
    row.t = t;
    row.hat_minus = kernel_hat(t, minus);
    row.hat_plus = kernel_hat(t, plus);
    row.indicator = std::fabs(t) < eta ? 1 : 0;
    row.chain_ok = row.hat_minus <= row.indicator && row.indicator <= row.hat_plus;
  };

  rep.ok = true;
  std::ostringstream first_failure;
  for (double t : t_grid) {
    SandwichRow row;
    chain(t, row);
    transform(t, row.numeric_plus, row.numeric_minus);
    const double dev = std::max(std::fabs(row.numeric_plus - row.hat_plus), std::fabs(row.numeric_minus - row.hat_minus));
    rep.max_deviation = std::max(rep.max_deviation, dev);
    row.transform_ok = dev <= quad_tol + rep.tail_bound;
    if (rep.ok && !(row.transform_ok && row.chain_ok))
      first_failure << "t=" << t << " deviation " << dev << " chain " << (row.chain_ok ? "ok" : "broken");
    rep.ok = rep.ok && row.transform_ok && row.chain_ok;
    rep.rows.push_back(row);
  }
  for (double t : {0.0, eta - rho, -(eta - rho), eta, -eta, eta + rho, -(eta + rho)}) {
    SandwichRow row;
    chain(t, row);
    row.transform_ok = true;
    if (rep.ok && !row.chain_ok) first_failure << "knot t=" << t << " breaks the chain";
    rep.ok = rep.ok && row.chain_ok;
    rep.knots.push_back(row);
  }
  if (!rep.ok && !report_only) throw SandwichViolation("kernel sandwich violated at " + first_failure.str());
  return rep;
}

}  // namespace cubiclab
