#pragma once

#include <string>
#include <vector>

namespace cubiclab {

enum class KernelSign { plus, minus };

enum class TPolicy { log, pow };
TPolicy parse_tpolicy(const std::string& name);
std::string to_string(TPolicy p);

/// T(P): log policy max(1, log P); pow policy P^theta. Requires P >= 1.
double choose_T(double P, TPolicy policy, double theta = 0.01);

struct KernelParams {
  double eta = 0;
  double rho = 0;
  KernelSign sign = KernelSign::plus;
  double T = 1;   // recorded for reports; rho = eta / LP
  double LP = 1;  // max(1, log T)

  /// Explicit (eta, rho); requires 0 < rho <= eta.
  static KernelParams explicit_rho(double eta, double rho, KernelSign sign);
  /// rho = eta / max(1, log T(P)).
  static KernelParams from_P(double eta, double P, TPolicy policy, KernelSign sign, double theta = 0.01);
  KernelParams with_sign(KernelSign s) const;
  /// 2 eta + rho (plus) or 2 eta - rho (minus).
  double width() const;
};

/// sin(pi a rho) sin(pi a (2 eta +- rho)) / (pi^2 a^2 rho), continuous at a = 0.
double kernel_K(double alpha, const KernelParams& kp);

/// Fourier transform of K: trapezoid equal to 1 on |t| <= eta (plus) or
/// |t| <= eta - rho (minus), falling linearly to 0 over a ramp of width rho.
double kernel_hat(double t, const KernelParams& kp);

/// (pi^2/6) a^2 (rho^2 + b^2) b with b = 2 eta +- rho: bound on |K(a) - b|.
double kernel_taylor_bound(double alpha, const KernelParams& kp);

struct SandwichRow {
  double t = 0;
  double numeric_minus = 0, numeric_plus = 0;
  double hat_minus = 0, hat_plus = 0;
  int indicator = 0;
  bool transform_ok = false;
  bool chain_ok = false;
};

struct SandwichReport {
  double eta = 0, rho = 0;
  double alpha_cutoff = 0;   // numerical integration over |alpha| <= cutoff
  double tail_bound = 0;     // 2 / (pi^2 rho cutoff)
  double quad_tol = 0;
  double max_deviation = 0;  // max |numeric - hat| over grid and signs
  std::vector<SandwichRow> rows;   // grid points
  std::vector<SandwichRow> knots;  // 0, +-(eta - rho), +-eta, +-(eta + rho): chain only
  bool ok = false;
};

/// Numerical transform of K+- on each t in the grid against the closed form
/// (within quad_tol + tail_bound) and the exact chain hat_- <= U_eta <= hat_+
/// on grid and knots. Throws SandwichViolation unless `report_only`.
SandwichReport sandwich_check(double eta, double rho, const std::vector<double>& t_grid, double quad_tol,
                              bool report_only = false);

}  // namespace cubiclab
