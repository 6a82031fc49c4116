#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cubiclab/forms.hpp"
#include "cubiclab/lattice_enum.hpp"
#include "cubiclab/quadrature.hpp"

namespace cubiclab {

struct WeylStat {
  IntVec k;
  double P = 0;
  Complex sum;
  Complex normalized;
  std::uint64_t N = 0;
};

/// sum of e(k . L(x)) over the zeros with |x| <= floor(P), with N = N_u(P).
/// Throws std::invalid_argument for k = 0 and EmptyZeroSet when N = 0.
WeylStat weyl_sum(const CubicForm& C, const LinearSystem& L, const IntVec& k, double P,
                  const EnumOptions& opts = {});

/// The same over an explicit zero list (already restricted to the box).
WeylStat weyl_sum(const std::vector<IntVec>& zeros, const LinearSystem& L, const IntVec& k, double P);

struct DiscrepancyStat {
  double value = 0;
  std::size_t boxes = 0;
  std::uint64_t seed = 0;
};

/// max over `boxes` seeded random boxes [a,b) in [0,1)^r of
/// |fraction of points inside - volume|. Points must lie in [0,1)^r.
DiscrepancyStat discrepancy(const std::vector<std::vector<double>>& points, std::size_t boxes, std::uint64_t seed);

/// L(x) mod 1 for each zero.
std::vector<std::vector<double>> fractional_parts(const std::vector<IntVec>& zeros, const LinearSystem& L);

struct EquidistRow {
  double P = 0;
  std::uint64_t N = 0;
  double discrepancy = 0;
  std::vector<double> weyl_abs;  // |normalized Weyl sum| per k in the k set
};

struct EquidistTable {
  std::vector<IntVec> k_set;
  std::vector<EquidistRow> rows;
  std::string to_csv() const;
};

EquidistTable equidist_experiment(const CubicForm& C, const LinearSystem& L, const std::vector<double>& P_grid,
                                  const std::vector<IntVec>& k_set, std::size_t boxes, std::uint64_t seed,
                                  const EnumOptions& opts = {});

}  // namespace cubiclab
