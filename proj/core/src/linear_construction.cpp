#include "cubiclab/linear_construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cubiclab/concurrency.hpp"
#include "cubiclab/errors.hpp"

namespace cubiclab {

namespace {

using IntMatrix = std::vector<BigVec>;

IntMatrix clear_rows(const std::vector<std::vector<Rational>>& A, int n) {
  IntMatrix M;
  for (const auto& row : A) {
    if (static_cast<int>(row.size()) != n) throw DimensionMismatch(n, row.size());
    Integer den = 1;
    for (const auto& c : row) den = boost::multiprecision::lcm(den, denominator_of(c));
    BigVec r;
    for (const auto& c : row) r.push_back(numerator_of(c * den));
    M.push_back(std::move(r));
  }
  return M;
}

/// Row Hermite normal form of independent rows: positive pivots, entries
/// above each pivot reduced into [0, pivot).
IntMatrix row_hnf(IntMatrix B, int n) {
  std::size_t row = 0;
  for (int col = 0; col < n && row < B.size(); ++col) {
    // Euclid on column `col` among rows >= row.
    while (true) {
      std::size_t best = B.size();
      for (std::size_t i = row; i < B.size(); ++i)
        if (B[i][col] != 0 && (best == B.size() || abs(B[i][col]) < abs(B[best][col]))) best = i;
      if (best == B.size()) break;
      std::swap(B[row], B[best]);
      bool done = true;
      for (std::size_t i = row + 1; i < B.size(); ++i) {
        if (B[i][col] == 0) continue;
        Integer f = B[i][col] / B[row][col];
        for (int k = 0; k < n; ++k) B[i][k] -= f * B[row][k];
        if (B[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (B[row][col] == 0) continue;
    if (B[row][col] < 0)
      for (auto& v : B[row]) v = -v;
    for (std::size_t i = 0; i < row; ++i) {
      Integer f = B[i][col] / B[row][col];
      if (B[i][col] - f * B[row][col] < 0) f -= 1;
      if (f != 0)
        for (int k = 0; k < n; ++k) B[i][k] -= f * B[row][k];
    }
    ++row;
  }
  return B;
}

Integer bareiss_det(IntMatrix M) {
  const std::size_t d = M.size();
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (M[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < d && M[swap][k] == 0) ++swap;
      if (swap == d) return 0;
      std::swap(M[k], M[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d; ++i)
      for (std::size_t j = k + 1; j < d; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return sign * M[d - 1][d - 1];
}

}  // namespace

Integer maximal_minor_gcd(const std::vector<BigVec>& rows, int n) {
  const int d = static_cast<int>(rows.size());
  if (d == 0) return 1;
  if (d > n) return 0;
  std::vector<int> cols(d);
  for (int i = 0; i < d; ++i) cols[i] = i;
  Integer g = 0;
  while (true) {
    IntMatrix sub(d, BigVec(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sub[i][j] = rows[i][cols[j]];
    g = boost::multiprecision::gcd(g, bareiss_det(std::move(sub)));
    if (g == 1) return g;
    int i = d - 1;
    while (i >= 0 && cols[i] == n - d + i) --i;
    if (i < 0) break;
    ++cols[i];
    for (int k = i + 1; k < d; ++k) cols[k] = cols[k - 1] + 1;
  }
  return abs(g);
}

IntegerKernelBasis integer_kernel(const std::vector<std::vector<Rational>>& A, int n) {
  if (n < 1) throw std::invalid_argument("integer_kernel: n must be positive");
  IntMatrix M = clear_rows(A, n);
  // U tracks the unimodular column operations: M_original * U = M.
  IntMatrix U(n, BigVec(n, 0));
  for (int i = 0; i < n; ++i) U[i][i] = 1;
  auto col_op = [&](int dst, int src, const Integer& f) {  // col[dst] -= f * col[src]
    for (auto& row : M) row[dst] -= f * row[src];
    for (auto& row : U) row[dst] -= f * row[src];
  };
  auto col_swap = [&](int a, int b) {
    for (auto& row : M) std::swap(row[a], row[b]);
    for (auto& row : U) std::swap(row[a], row[b]);
  };

  int pivot = 0;
  for (std::size_t i = 0; i < M.size() && pivot < n; ++i) {
    while (true) {
      int best = -1;
      for (int c = pivot; c < n; ++c)
        if (M[i][c] != 0 && (best < 0 || abs(M[i][c]) < abs(M[i][best]))) best = c;
      if (best < 0) break;
      col_swap(pivot, best);
      bool done = true;
      for (int c = pivot + 1; c < n; ++c) {
        if (M[i][c] == 0) continue;
        col_op(c, pivot, M[i][c] / M[i][pivot]);
        if (M[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (M[i][pivot] != 0) ++pivot;
  }

  IntegerKernelBasis out;
  out.n = n;
  out.rank = pivot;
  IntMatrix basis;
  for (int c = pivot; c < n; ++c) {
    BigVec v(n);
    for (int r = 0; r < n; ++r) v[r] = U[r][c];
    basis.push_back(std::move(v));
  }
  out.vectors = row_hnf(std::move(basis), n);
  out.index = maximal_minor_gcd(out.vectors, n);
  return out;
}

EchelonForm echelon_form(const std::vector<std::vector<Rational>>& A, int n) {
  std::vector<std::vector<Rational>> m = A;
  EchelonForm out;
  std::size_t row = 0;
  for (int col = 0; col < n && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    const Rational inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (int k = 0; k < n; ++k) m[i][k] -= f * m[row][k];
    }
    out.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  // Pivot columns first, giving (I | Lambda'').
  std::vector<int> order = out.pivots;
  for (int c = 0; c < n; ++c)
    if (std::find(out.pivots.begin(), out.pivots.end(), c) == out.pivots.end()) order.push_back(c);
  for (auto& r : m) {
    std::vector<Rational> permuted;
    for (int c : order) permuted.push_back(r[c]);
    out.rows.push_back(std::move(permuted));
  }
  return out;
}

ReducedSystem reduce_linear_system(const LinearSystem& L, const IntegerKernelBasis& basis) {
  if (basis.n != L.n()) throw DimensionMismatch(L.n(), basis.n);
  ReducedSystem out;
  out.r = L.r();
  out.m = static_cast<int>(basis.vectors.size());
  for (int i = 0; i < L.r(); ++i) {
    const auto& row = L.row(i);
    if (row.is_rational()) {
      std::vector<Rational> c;
      for (const auto& z : basis.vectors) {
        Rational acc = 0;
        for (int k = 0; k < L.n(); ++k) acc += row.rational_coeffs()[k] * z[k];
        c.push_back(acc);
      }
      out.rows.emplace_back(std::move(c));
    } else {
      std::vector<double> c;
      for (const auto& z : basis.vectors) {
        long double acc = 0;
        for (int k = 0; k < L.n(); ++k) acc += static_cast<long double>(row.real_coeffs()[k]) * z[k].convert_to<long double>();
        c.push_back(static_cast<double>(acc));
      }
      out.rows.emplace_back(std::move(c));
    }
  }
  return out;
}

SolveResult solve_system(const CubicForm& C, const HDecomposition& D, const LinearSystem& L,
                         const std::vector<double>& tau, double eta, std::int64_t Y, double budget) {
  const int n = C.n();
  if (L.n() != n) throw DimensionMismatch(n, L.n());
  if (static_cast<int>(tau.size()) != L.r()) throw DimensionMismatch(L.r(), tau.size());
  if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
  if (Y < 0) throw std::invalid_argument("solve_system: Y must be nonnegative");
  if (!verify_h_decomposition(C, D)) throw std::invalid_argument("solve_system: decomposition does not verify");

  std::vector<std::vector<Rational>> A;
  for (const auto& pair : D.pairs) A.push_back(pair.a);
  SolveResult out;
  out.basis = integer_kernel(A, n);
  const int m = static_cast<int>(out.basis.vectors.size());
  if (m == 0) throw std::invalid_argument("solve_system: the linear forms A_i have trivial common kernel");
  if (std::pow(2.0 * static_cast<double>(Y) + 1.0, m) > budget)
    throw ResourceLimit("solve_system: search box exceeds the budget");
  out.reduced = reduce_linear_system(L, out.basis);

  std::vector<IntVec> z;
  for (const auto& v : out.basis.vectors) {
    IntVec zi;
    for (const auto& e : v) {
      if (abs(e) > Integer(std::numeric_limits<std::int32_t>::max()))
        throw ResourceLimit("solve_system: kernel basis entries too large");
      zi.push_back(static_cast<std::int64_t>(e));
    }
    z.push_back(std::move(zi));
  }
  const int r = L.r();
  // Prefilter on L'(y) with a small margin; the decision is made on L(x).
  const double margin = 1e-9;

  auto candidate = [&](const IntVec& y, IntVec& x) -> bool {
    for (int i = 0; i < r; ++i) {
      long double acc = 0;
      const auto& c = out.reduced.rows[i].real_coeffs();
      for (int j = 0; j < m; ++j) acc += static_cast<long double>(c[j]) * y[j];
      if (!(std::fabs(static_cast<double>(acc) - tau[i]) < eta + margin)) return false;
    }
    std::fill(x.begin(), x.end(), 0);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k) x[k] += y[j] * z[j][k];
    const auto lx = eval_linear(L, std::span<const std::int64_t>(x));
    for (int i = 0; i < r; ++i)
      if (!(std::fabs(lx[i] - tau[i]) < eta)) return false;
    return true;
  };

  for (std::int64_t s = 0; s <= Y; ++s) {
    out.shells_searched = s + 1;
    // Slab = value of y_0; the smallest slab with a hit holds the
    // lexicographically first hit of the shell.
    const std::size_t slabs = static_cast<std::size_t>(2 * s + 1);
    std::vector<std::optional<IntVec>> found(slabs);
    parallel_slabs(slabs, [&](std::size_t slab) {
      IntVec y(m, -s), x(n);
      y[0] = static_cast<std::int64_t>(slab) - s;
      while (true) {
        std::int64_t norm = 0;
        for (auto v : y) norm = std::max<std::int64_t>(norm, std::llabs(v));
        if (norm == s && candidate(y, x)) {
          found[slab] = y;
          return;
        }
        int pos = m - 1;
        while (pos >= 1 && y[pos] == s) y[pos--] = -s;
        if (pos < 1) return;
        ++y[pos];
      }
    });
    for (auto& f : found) {
      if (!f) continue;
      IntVec x(n, 0);
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < n; ++k) x[k] += (*f)[j] * z[j][k];
      const Integer cx = eval_cubic(C, std::span<const std::int64_t>(x));
      if (cx != 0) throw InconsistentBounds("kernel vector is not a zero of C: C(x) = " + to_string(cx));
      out.cubic_value = to_string(cx);
      out.linear_values = eval_linear(L, std::span<const std::int64_t>(x));
      out.x = std::move(x);
      out.y = std::move(*f);
      return out;
    }
  }
  return out;
}

}  // namespace cubiclab
