#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cubiclab/errors.hpp"
#include "cubiclab/exp_sums.hpp"
#include "cubiclab/forms.hpp"

namespace cubiclab {

/// L * max(0, 1 - L|xi|).
double psi_L(double xi, double L);
/// prod_v psi_L(xi_v).
double Psi_L(std::span<const double> xi, double L);

struct DensityEstimate {
  double value = 0;
  double std_error = 0;
  double L = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// f: R^n -> R^m written into `out` (length m).
using ConstraintMap = std::function<void(std::span<const double> x, std::span<double> out)>;

/// (C(x), L_1(x), ..., L_r(x)) for real x.
ConstraintMap constraint_map(const CubicForm& C, const std::optional<LinearSystem>& L);

/// Randomised QMC estimate of the integral of w(x) Psi_L(f(x)) over
/// [-1,1]^n, standard error from 64 batch means. samples >= 1000.
DensityEstimate schmidt_IL(int n, int m, const ConstraintMap& f, double L, std::size_t samples, std::uint64_t seed);
DensityEstimate schmidt_IL(const CubicForm& C, const std::optional<LinearSystem>& Lsys, double L, std::size_t samples,
                           std::uint64_t seed);

struct ScheduleRow {
  double L = 0;
  double IL = 0;
  double std_error = 0;
};

struct ChiEstimate {
  double value = 0;
  double error_bar = 0;
  std::vector<ScheduleRow> table;
};

/// Raised when successive differences along the L schedule fail to shrink;
/// carries the computed table.
class ScheduleNotConverged : public NotConverged {
 public:
  ScheduleNotConverged(const std::string& what, std::vector<ScheduleRow> table)
      : NotConverged(what), table_(std::move(table)) {}
  const std::vector<ScheduleRow>& table() const noexcept { return table_; }

 private:
  std::vector<ScheduleRow> table_;
};

/// I_L along an increasing schedule (at least 3 entries). The differences
/// |I_{L_{i+1}} - I_{L_i}| must decrease strictly; then value = last I_L and
/// error_bar = |last - previous| + its standard error. Otherwise throws
/// ScheduleNotConverged.
ChiEstimate chi_w_estimate(const CubicForm& C, const std::optional<LinearSystem>& Lsys,
                           const std::vector<double>& schedule, std::size_t samples, std::uint64_t seed);

struct OscillatoryBox {
  double beta0_max = 40.0;
  double alpha_max = 40.0;
};

struct ChiOscillatory {
  ExpSumValue value;        // abs_error = quadrature error + tail
  double quad_error = 0;
  double tail_bound = 0;    // |V(box) - V(box/2)|
  Complex half_box_value;
};

/// Iterated quadrature of I(beta0, alpha . rows) over the truncated box.
/// Requires n <= 3 and r <= 1. Throws ToleranceNotMet.
ChiOscillatory chi_w_oscillatory(const CubicForm& C, const std::optional<LinearSystem>& Lsys,
                                 const OscillatoryBox& box, double tol);

/// QMC estimate of the integral of Psi_L(f(x)) over the box |x| <= 1/2.
DensityEstimate intbox_check(const CubicForm& C, const std::optional<LinearSystem>& Lsys, double L,
                             std::size_t samples, std::uint64_t seed);

}  // namespace cubiclab
