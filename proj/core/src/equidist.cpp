#include "cubiclab/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cubiclab/concurrency.hpp"
#include "cubiclab/errors.hpp"

namespace cubiclab {

namespace {

std::int64_t sup_norm(const IntVec& x) {
  std::int64_t m = 0;
  for (auto v : x) m = std::max<std::int64_t>(m, std::llabs(v));
  return m;
}

}  // namespace

WeylStat weyl_sum(const std::vector<IntVec>& zeros, const LinearSystem& L, const IntVec& k, double P) {
  if (static_cast<int>(k.size()) != L.r()) throw DimensionMismatch(L.r(), k.size());
  if (std::all_of(k.begin(), k.end(), [](std::int64_t v) { return v == 0; }))
    throw std::invalid_argument("weyl_sum: k must be nonzero");
  WeylStat st;
  st.k = k;
  st.P = P;
  st.N = zeros.size();
  for (const auto& x : zeros) {
    const auto lx = eval_linear(L, std::span<const std::int64_t>(x));
    long double phase = 0;
    for (int i = 0; i < L.r(); ++i) {
      const long double v = lx[i];
      phase += static_cast<long double>(k[i]) * (v - std::floor(v));
    }
    phase -= std::floor(phase);
    st.sum += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase));
  }
  if (st.N == 0) throw EmptyZeroSet();
  st.normalized = st.sum / static_cast<double>(st.N);
  return st;
}

WeylStat weyl_sum(const CubicForm& C, const LinearSystem& L, const IntVec& k, double P, const EnumOptions& opts) {
  if (L.n() != C.n()) throw DimensionMismatch(C.n(), L.n());
  if (std::all_of(k.begin(), k.end(), [](std::int64_t v) { return v == 0; }))
    throw std::invalid_argument("weyl_sum: k must be nonzero");
  return weyl_sum(enumerate_zeros(C, P, opts), L, k, P);
}

DiscrepancyStat discrepancy(const std::vector<std::vector<double>>& points, std::size_t boxes, std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("discrepancy: no points");
  if (boxes == 0) throw std::invalid_argument("discrepancy: need at least one box");
  const std::size_t r = points.front().size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> lo(boxes * r), hi(boxes * r);
  for (std::size_t b = 0; b < boxes; ++b)
    for (std::size_t d = 0; d < r; ++d) {
      double u = unif(rng), v = unif(rng);
      lo[b * r + d] = std::min(u, v);
      hi[b * r + d] = std::max(u, v);
    }
  std::vector<double> dev(boxes, 0.0);
  parallel_slabs(boxes, [&](std::size_t b) {
    std::size_t inside = 0;
    double volume = 1.0;
    for (std::size_t d = 0; d < r; ++d) volume *= hi[b * r + d] - lo[b * r + d];
    for (const auto& p : points) {
      bool in = true;
      for (std::size_t d = 0; d < r && in; ++d) in = p[d] >= lo[b * r + d] && p[d] < hi[b * r + d];
      inside += in;
    }
    dev[b] = std::fabs(static_cast<double>(inside) / static_cast<double>(points.size()) - volume);
  });
  DiscrepancyStat st;
  st.value = *std::max_element(dev.begin(), dev.end());
  st.boxes = boxes;
  st.seed = seed;
  return st;
}

std::vector<std::vector<double>> fractional_parts(const std::vector<IntVec>& zeros, const LinearSystem& L) {
  std::vector<std::vector<double>> out;
  out.reserve(zeros.size());
  for (const auto& x : zeros) {
    auto lx = eval_linear(L, std::span<const std::int64_t>(x));
    for (auto& v : lx) {
      v -= std::floor(v);
      if (v >= 1.0) v = 0.0;
    }
    out.push_back(std::move(lx));
  }
  return out;
}

std::string EquidistTable::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "P,N,discrepancy";
  for (const auto& k : k_set) {
    out << ",weyl_abs_k=";
    for (std::size_t i = 0; i < k.size(); ++i) out << (i ? ";" : "") << k[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    out << row.P << "," << row.N << "," << row.discrepancy;
    for (double w : row.weyl_abs) out << "," << w;
    out << "\n";
  }
  return out.str();
}

EquidistTable equidist_experiment(const CubicForm& C, const LinearSystem& L, const std::vector<double>& P_grid,
                                  const std::vector<IntVec>& k_set, std::size_t boxes, std::uint64_t seed,
                                  const EnumOptions& opts) {
  if (P_grid.empty()) throw std::invalid_argument("equidist_experiment: empty P grid");
  if (L.n() != C.n()) throw DimensionMismatch(C.n(), L.n());
  const double P_max = *std::max_element(P_grid.begin(), P_grid.end());
  const auto all = enumerate_zeros(C, P_max, opts);
  EquidistTable table;
  table.k_set = k_set;
  for (double P : P_grid) {
    const auto bound = static_cast<std::int64_t>(std::floor(P));
    std::vector<IntVec> zeros;
    for (const auto& x : all)
      if (sup_norm(x) <= bound) zeros.push_back(x);
    EquidistRow row;
    row.P = P;
    row.N = zeros.size();
    row.discrepancy = discrepancy(fractional_parts(zeros, L), boxes, seed).value;
    for (const auto& k : k_set) row.weyl_abs.push_back(std::abs(weyl_sum(zeros, L, k, P).normalized));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace cubiclab
