#include "cubiclab/lattice_enum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cubiclab/concurrency.hpp"
#include "cubiclab/errors.hpp"

namespace cubiclab {

double weight_w(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    if (!(std::fabs(v) < 1.0)) return 0.0;
    s += 1.0 / (1.0 - v * v);
  }
  return std::exp(-s);
}

int indicator_U(double t, double eta) { return std::fabs(t) < eta ? 1 : 0; }

Strategy parse_strategy(const std::string& name) {
  if (name == "direct") return Strategy::direct;
  if (name == "mim" || name == "meet_in_middle") return Strategy::meet_in_middle;
  throw ConfigError("unknown strategy \"" + name + "\" (expected direct or mim)");
}

std::string to_string(Strategy s) { return s == Strategy::direct ? "direct" : "meet_in_middle"; }

std::optional<AdditiveSplit> find_additive_split(const CubicForm& C) {
  const int n = C.n();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& m : C.terms()) {
    parent[find(m.j)] = find(m.i);
    parent[find(m.k)] = find(m.i);
  }
  std::vector<std::vector<int>> comps;
  std::vector<int> comp_of(n, -1);
  for (int v = 0; v < n; ++v) {
    int root = find(v);
    if (comp_of[root] < 0) {
      comp_of[root] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[comp_of[root]].push_back(v);
  }
  if (comps.size() < 2) return std::nullopt;
  // Largest components first, each into the currently smaller part.
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  AdditiveSplit split;
  for (const auto& comp : comps) {
    auto& target = split.part_a.size() <= split.part_b.size() ? split.part_a : split.part_b;
    target.insert(target.end(), comp.begin(), comp.end());
  }
  std::sort(split.part_a.begin(), split.part_a.end());
  std::sort(split.part_b.begin(), split.part_b.end());
  return split;
}

namespace {

using Visit = std::function<void(std::size_t, std::span<const std::int64_t>)>;

/// Direct scan. The outermost coordinate selects the slab; along the last
/// coordinate C is a cubic polynomial whose coefficients are formed once per
/// line.
void direct_scan(const CubicForm& C, std::int64_t B, const Visit& visit) {
  const int n = C.n();
  const std::size_t slabs = static_cast<std::size_t>(2 * B + 1);
  struct LineTerm {
    int power;                  // multiplicity of the last variable
    std::int64_t c;
    std::array<int, 3> others;  // indices of remaining factors, -1 when unused
  };
  std::vector<LineTerm> line_terms;
  for (const auto& m : C.terms()) {
    LineTerm t{0, static_cast<std::int64_t>(m.c), {-1, -1, -1}};
    int slot = 0;
    for (int idx : {m.i, m.j, m.k}) {
      if (idx == n - 1) ++t.power;
      else t.others[slot++] = idx;
    }
    line_terms.push_back(t);
  }

  parallel_slabs(slabs, [&](std::size_t slab) {
    IntVec x(n, -B);
    x[0] = static_cast<std::int64_t>(slab) - B;
    if (n == 1) {
      if (C.eval_i128(x) == 0) visit(slab, x);
      return;
    }
    while (true) {
      __int128 coef[4] = {0, 0, 0, 0};
      for (const auto& t : line_terms) {
        __int128 v = t.c;
        for (int o : t.others)
          if (o >= 0) v *= x[o];
        coef[t.power] += v;
      }
      for (std::int64_t s = -B; s <= B; ++s) {
        __int128 val = ((coef[3] * s + coef[2]) * s + coef[1]) * s + coef[0];
        if (val == 0) {
          x[n - 1] = s;
          visit(slab, x);
        }
      }
      // Advance coordinates 1..n-2 (the last one is handled by the line loop).
      int pos = n - 2;
      while (pos >= 1 && x[pos] == B) x[pos--] = -B;
      if (pos < 1) break;
      ++x[pos];
    }
  });
}

/// Meet in the middle over C = C_A(x_A) + C_B(x_B): values of C_A over the
/// A-box are sorted once; each x_B probes for -C_B(x_B). Slabs run over the
/// first B coordinate.
void mim_scan(const CubicForm& C, std::int64_t B, const AdditiveSplit& split, const Visit& visit) {
  const int n = C.n();
  const std::int64_t side = 2 * B + 1;
  const int na = static_cast<int>(split.part_a.size());
  const int nb = static_cast<int>(split.part_b.size());
  std::size_t table_size = 1;
  for (int i = 0; i < na; ++i) table_size *= static_cast<std::size_t>(side);

  std::vector<std::pair<std::int64_t, std::uint64_t>> table(table_size);
  {
    IntVec x(n, 0);
    for (std::size_t idx = 0; idx < table_size; ++idx) {
      std::size_t rem = idx;
      for (int a = na - 1; a >= 0; --a) {
        x[split.part_a[a]] = static_cast<std::int64_t>(rem % side) - B;
        rem /= side;
      }
      table[idx] = {static_cast<std::int64_t>(C.eval_i128(x)), idx};
    }
    std::sort(table.begin(), table.end());
  }

  const std::size_t slabs = static_cast<std::size_t>(side);
  parallel_slabs(slabs, [&](std::size_t slab) {
    IntVec x(n, 0);
    IntVec xb(nb, -B);
    xb[0] = static_cast<std::int64_t>(slab) - B;
    while (true) {
      std::fill(x.begin(), x.end(), 0);
      for (int b = 0; b < nb; ++b) x[split.part_b[b]] = xb[b];
      const std::int64_t target = -static_cast<std::int64_t>(C.eval_i128(x));
      auto lo = std::lower_bound(table.begin(), table.end(), std::make_pair(target, std::uint64_t{0}));
      for (auto it = lo; it != table.end() && it->first == target; ++it) {
        std::size_t rem = it->second;
        for (int a = na - 1; a >= 0; --a) {
          x[split.part_a[a]] = static_cast<std::int64_t>(rem % side) - B;
          rem /= side;
        }
        visit(slab, x);
      }
      int pos = nb - 1;
      while (pos >= 1 && xb[pos] == B) xb[pos--] = -B;
      if (pos < 1) break;
      ++xb[pos];
    }
  });
}

}  // namespace

ScanStats scan_zeros(const CubicForm& C, std::int64_t bound, const EnumOptions& opts, const Visit& visit) {
  if (bound < 0) throw std::invalid_argument("scan_zeros: negative bound");
  if (!C.fits_on_box(bound)) throw ResourceLimit("box too large for exact 64-bit evaluation of C");
  const double side = static_cast<double>(2 * bound + 1);
  const int n = C.n();
  ScanStats stats;
  stats.slabs = static_cast<std::size_t>(2 * bound + 1);

  if (opts.strategy == Strategy::meet_in_middle) {
    auto split = find_additive_split(C);
    if (!split) throw SplitUnavailable();
    const double entries = std::pow(side, static_cast<double>(split->part_a.size()));
    const double bytes = entries * 16.0;
    if (bytes <= opts.mim_memory_cap) {
      stats.used = Strategy::meet_in_middle;
      stats.points_examined = entries + std::pow(side, static_cast<double>(split->part_b.size()));
      if (stats.points_examined > opts.point_budget)
        throw ResourceLimit("meet-in-the-middle scan exceeds the point budget");
      mim_scan(C, bound, *split, visit);
      return stats;
    }
  }
  stats.used = Strategy::direct;
  stats.points_examined = std::pow(side, static_cast<double>(n));
  if (stats.points_examined > opts.point_budget) throw ResourceLimit("direct scan exceeds the point budget");
  direct_scan(C, bound, visit);
  return stats;
}

std::vector<IntVec> enumerate_zeros(const CubicForm& C, double P, const EnumOptions& opts) {
  if (!(P >= 0)) throw std::invalid_argument("enumerate_zeros: P must be nonnegative");
  const auto bound = static_cast<std::int64_t>(std::floor(P));
  std::vector<std::vector<IntVec>> per_slab(static_cast<std::size_t>(2 * bound + 1));
  scan_zeros(C, bound, opts, [&](std::size_t slab, std::span<const std::int64_t> x) {
    per_slab[slab].emplace_back(x.begin(), x.end());
  });
  std::vector<IntVec> out;
  for (auto& s : per_slab) out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntVec> enumerate_zeros(const CubicForm& C, double P, Strategy strategy) {
  EnumOptions opts;
  opts.strategy = strategy;
  return enumerate_zeros(C, P, opts);
}

CountResult count(const CountQuery& q) {
  if (!(q.eta > 0)) throw std::invalid_argument("eta must be positive");
  if (!(q.P >= 1)) throw std::invalid_argument("P must be at least 1");
  const int r = q.lsys ? q.lsys->r() : 0;
  if (static_cast<int>(q.tau.size()) != r) throw DimensionMismatch(r, q.tau.size());
  if (q.lsys && q.lsys->n() != q.C.n()) throw DimensionMismatch(q.C.n(), q.lsys->n());

  const auto bound = q.weighted ? static_cast<std::int64_t>(std::ceil(q.P)) - 1
                                : static_cast<std::int64_t>(std::floor(q.P));
  struct Slab {
    double sum = 0;
    std::uint64_t hits = 0;
    std::vector<IntVec> sample;
  };
  std::vector<Slab> slabs(static_cast<std::size_t>(2 * bound + 1));
  const int n = q.C.n();

  auto stats = scan_zeros(q.C, bound, q.options, [&](std::size_t s, std::span<const std::int64_t> x) {
    if (q.lsys) {
      auto lx = eval_linear(*q.lsys, x);
      for (int i = 0; i < r; ++i)
        if (!indicator_U(lx[i] - q.tau[i], q.eta)) return;
    }
    Slab& slab = slabs[s];
    ++slab.hits;
    if (q.weighted) {
      double y[16];
      std::vector<double> heap;
      double* scaled = y;
      if (n > 16) {
        heap.resize(n);
        scaled = heap.data();
      }
      for (int i = 0; i < n; ++i) scaled[i] = static_cast<double>(x[i]) / q.P;
      slab.sum += weight_w(std::span<const double>(scaled, n));
    }
    if (q.sample_limit > 0) {
      slab.sample.emplace_back(x.begin(), x.end());
      // Keep only the lexicographically smallest sample_limit points.
      if (slab.sample.size() > 2 * q.sample_limit) {
        std::sort(slab.sample.begin(), slab.sample.end());
        slab.sample.resize(q.sample_limit);
      }
    }
  });

  CountResult out;
  out.points_examined = stats.points_examined;
  out.used = stats.used;
  for (auto& s : slabs) {
    out.solutions_found += s.hits;
    out.value += s.sum;
    if (q.sample_limit > 0)
      out.solutions.insert(out.solutions.end(), std::make_move_iterator(s.sample.begin()),
                           std::make_move_iterator(s.sample.end()));
  }
  if (!q.weighted) out.value = static_cast<double>(out.solutions_found);
  std::sort(out.solutions.begin(), out.solutions.end());
  if (out.solutions.size() > q.sample_limit) out.solutions.resize(q.sample_limit);
  return out;
}

}  // namespace cubiclab
