#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubiclab/forms.hpp"

namespace cubiclab {

/// exp(-sum 1/(1 - x_j^2)) when every |x_j| < 1, else 0.
double weight_w(std::span<const double> x);

/// 1 iff |t| < eta.
int indicator_U(double t, double eta);

enum class Strategy { direct, meet_in_middle };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

/// Variable partition with C(x) = C_A(x_A) + C_B(x_B).
struct AdditiveSplit {
  std::vector<int> part_a;
  std::vector<int> part_b;
};

/// Groups variables into connected components of the "shares a monomial"
/// graph and balances the components into two parts; absent when C does not
/// separate.
std::optional<AdditiveSplit> find_additive_split(const CubicForm& C);

struct EnumOptions {
  Strategy strategy = Strategy::direct;
  /// Meet-in-the-middle table size limit in bytes; above it the scan falls
  /// back to the direct strategy.
  double mim_memory_cap = 1.0e9;
  /// Upper limit on lattice points examined by one scan.
  double point_budget = 5.0e10;
};

struct ScanStats {
  std::size_t slabs = 0;
  double points_examined = 0;
  Strategy used = Strategy::direct;
};

/// Calls visit(slab, x) for every x with max |x_i| <= bound and C(x) = 0.
/// There are exactly 2*bound+1 slabs; slabs may be processed concurrently but
/// the zeros of one slab are visited sequentially in a fixed order.
/// Throws SplitUnavailable, ResourceLimit.
ScanStats scan_zeros(const CubicForm& C, std::int64_t bound, const EnumOptions& opts,
                     const std::function<void(std::size_t, std::span<const std::int64_t>)>& visit);

/// The zeros with |x| <= floor(P), sorted lexicographically.
std::vector<IntVec> enumerate_zeros(const CubicForm& C, double P, Strategy strategy);
std::vector<IntVec> enumerate_zeros(const CubicForm& C, double P, const EnumOptions& opts);

struct CountQuery {
  CountQuery(CubicForm form) : C(std::move(form)) {}

  CubicForm C;
  std::optional<LinearSystem> lsys;  // absent: r = 0
  std::vector<double> tau;
  double eta = 1.0;
  double P = 1.0;
  bool weighted = false;
  EnumOptions options;
  std::size_t sample_limit = 0;  // number of solutions to keep (lexicographically first)
};

struct CountResult {
  double value = 0;            // weighted sum, or the count itself when unweighted
  std::uint64_t solutions_found = 0;
  double points_examined = 0;
  Strategy used = Strategy::direct;
  std::vector<IntVec> solutions;
};

/// N_w(P) (weighted: sum of w(x/P) over |x| <= ceil(P)-1) or the unweighted
/// count over |x| <= floor(P), restricted to C(x) = 0 and |L_i(x) - tau_i| < eta.
CountResult count(const CountQuery& q);

}  // namespace cubiclab
