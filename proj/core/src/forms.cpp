#include "cubiclab/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "cubiclab/errors.hpp"
#include "cubiclab/polynomial.hpp"

namespace cubiclab {

// ---------------------------------------------------------------------------
// CubicForm

CubicForm::CubicForm(int n, std::vector<Monomial> terms) : n_(n) {
  if (n < 1) throw std::invalid_argument("cubic form needs n >= 1");
  std::map<std::array<int, 3>, Integer> merged;
  for (auto& m : terms) {
    std::array<int, 3> idx{m.i, m.j, m.k};
    std::sort(idx.begin(), idx.end());
    if (idx[0] < 0 || idx[2] >= n) throw std::invalid_argument("monomial index out of range");
    merged[idx] += m.c;
  }
  for (auto& [idx, c] : merged)
    if (c != 0) terms_.push_back(Monomial{idx[0], idx[1], idx[2], c});
  if (terms_.empty()) throw std::invalid_argument("cubic form must have a nonzero coefficient");

  const Integer limit = Integer(1) << 62;
  for (const auto& m : terms_) {
    abs_coeff_sum_ += std::fabs(m.c.convert_to<double>());
    if (abs(m.c) >= limit) {
      small_ok_ = false;
      continue;
    }
    auto c = static_cast<std::int64_t>(m.c);
    small_.push_back(SmallTerm{m.i, m.j, m.k, c, static_cast<double>(c)});
  }
}

CubicForm CubicForm::diagonal(const std::vector<std::int64_t>& coeffs) {
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) {
      int ii = static_cast<int>(i);
      terms.push_back(Monomial{ii, ii, ii, Integer(coeffs[i])});
    }
  return CubicForm(static_cast<int>(coeffs.size()), std::move(terms));
}

Integer CubicForm::coeff(int i, int j, int k) const {
  std::array<int, 3> idx{i, j, k};
  std::sort(idx.begin(), idx.end());
  for (const auto& m : terms_)
    if (m.i == idx[0] && m.j == idx[1] && m.k == idx[2]) return m.c;
  return 0;
}

bool CubicForm::is_diagonal() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Monomial& m) { return m.i == m.j && m.j == m.k; });
}

bool CubicForm::fits_on_box(std::int64_t bound) const {
  return small_ok_ && bound_on_box(static_cast<double>(bound)) < 4.0e18;
}

double CubicForm::bound_on_box(double bound) const { return abs_coeff_sum_ * bound * bound * bound; }

__int128 CubicForm::eval_i128(std::span<const std::int64_t> x) const {
  if (!small_ok_) throw ResourceLimit("coefficients exceed the 64-bit fast path");
  __int128 acc = 0;
  for (const auto& t : small_) {
    __int128 p = static_cast<__int128>(x[t.i]) * x[t.j];
    acc += p * x[t.k] * t.c;
  }
  return acc;
}

std::int64_t CubicForm::eval_mod(std::span<const std::int64_t> x, std::int64_t m) const {
  __int128 acc = 0;
  for (const auto& t : terms_) {
    std::int64_t c = mod_floor(t.c, m);
    __int128 p = static_cast<__int128>(mod_floor(x[t.i], m)) * mod_floor(x[t.j], m) % m;
    p = p * mod_floor(x[t.k], m) % m;
    acc = (acc + p * c) % m;
  }
  return static_cast<std::int64_t>(acc);
}

double CubicForm::eval_real(std::span<const double> x) const {
  double acc = 0.0;
  if (small_ok_) {
    for (const auto& t : small_) acc += t.cd * x[t.i] * x[t.j] * x[t.k];
  } else {
    for (const auto& t : terms_) acc += t.c.convert_to<double>() * x[t.i] * x[t.j] * x[t.k];
  }
  return acc;
}

ScaledCubic clear_denominators(int n, const std::vector<RationalMonomial>& terms) {
  Integer scale = 1;
  for (const auto& t : terms) scale = boost::multiprecision::lcm(scale, denominator_of(t.c));
  std::vector<Monomial> ints;
  ints.reserve(terms.size());
  for (const auto& t : terms) {
    Rational scaled = t.c * scale;
    ints.push_back(Monomial{t.i, t.j, t.k, numerator_of(scaled)});
  }
  return ScaledCubic{CubicForm(n, std::move(ints)), Rational(scale)};
}

// ---------------------------------------------------------------------------
// Linear forms

LinearForm::LinearForm(std::vector<Rational> coeffs) {
  real_.reserve(coeffs.size());
  for (const auto& c : coeffs) real_.push_back(to_double(c));
  coeffs_ = std::move(coeffs);
}

LinearForm::LinearForm(std::vector<double> coeffs) : coeffs_(coeffs), real_(std::move(coeffs)) {
  for (double c : real_)
    if (!std::isfinite(c)) throw std::invalid_argument("linear form coefficient not finite");
}

std::size_t LinearForm::n() const noexcept { return real_.size(); }

const std::vector<Rational>& LinearForm::rational_coeffs() const {
  if (!is_rational()) throw std::logic_error("linear form has real coefficients");
  return std::get<std::vector<Rational>>(coeffs_);
}

namespace {

int numerical_rank(std::vector<std::vector<double>> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-12 * std::max(scale, 1.0);
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t best = rank;
    for (std::size_t r = rank; r < m.size(); ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[best][c])) best = r;
    if (std::fabs(m[best][c]) <= tol) continue;
    std::swap(m[best], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      double f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

LinearSystem::LinearSystem(std::vector<LinearForm> rows, bool assume_irrational)
    : rows_(std::move(rows)), assume_irrational_(assume_irrational) {
  if (rows_.empty()) throw std::invalid_argument("linear system needs r >= 1");
  n_ = static_cast<int>(rows_[0].n());
  for (const auto& row : rows_)
    if (static_cast<int>(row.n()) != n_) throw std::invalid_argument("linear system rows differ in length");
  if (r() >= n_) throw std::invalid_argument("linear system needs r < n");
  std::vector<std::vector<double>> m;
  for (const auto& row : rows_) m.push_back(row.real_coeffs());
  if (numerical_rank(m) != r()) throw std::invalid_argument("linear system rows are not independent");
}

std::vector<double> LinearSystem::combine(std::span<const double> alpha) const {
  if (static_cast<int>(alpha.size()) != r()) throw DimensionMismatch(r(), alpha.size());
  std::vector<double> out(n_, 0.0);
  for (int i = 0; i < r(); ++i)
    for (int j = 0; j < n_; ++j) out[j] += alpha[i] * lambda(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <class T>
Integer eval_cubic_impl(const CubicForm& C, std::span<const T> x) {
  if (static_cast<int>(x.size()) != C.n()) throw DimensionMismatch(C.n(), x.size());
  Integer acc = 0;
  for (const auto& m : C.terms()) acc += m.c * Integer(x[m.i]) * Integer(x[m.j]) * Integer(x[m.k]);
  return acc;
}

template <class T>
BigVec grad_cubic_impl(const CubicForm& C, std::span<const T> x) {
  if (static_cast<int>(x.size()) != C.n()) throw DimensionMismatch(C.n(), x.size());
  BigVec g(C.n(), Integer(0));
  for (const auto& m : C.terms()) {
    Integer xi(x[m.i]), xj(x[m.j]), xk(x[m.k]);
    g[m.i] += m.c * xj * xk;
    g[m.j] += m.c * xi * xk;
    g[m.k] += m.c * xi * xj;
  }
  return g;
}

template <class T>
std::vector<double> eval_linear_impl(const LinearSystem& L, std::span<const T> x) {
  if (static_cast<int>(x.size()) != L.n()) throw DimensionMismatch(L.n(), x.size());
  std::vector<double> out(L.r());
  for (int i = 0; i < L.r(); ++i) {
    const auto& row = L.row(i);
    if (row.is_rational()) {
      Rational acc = 0;
      const auto& c = row.rational_coeffs();
      for (int j = 0; j < L.n(); ++j) acc += c[j] * Integer(x[j]);
      out[i] = to_double(acc);
    } else {
      long double acc = 0.0L;
      const auto& c = row.real_coeffs();
      for (int j = 0; j < L.n(); ++j) acc += static_cast<long double>(c[j]) * static_cast<long double>(x[j]);
      out[i] = static_cast<double>(acc);
    }
  }
  return out;
}

}  // namespace

Integer eval_cubic(const CubicForm& C, std::span<const Integer> x) { return eval_cubic_impl(C, x); }
Integer eval_cubic(const CubicForm& C, std::span<const std::int64_t> x) { return eval_cubic_impl(C, x); }
BigVec grad_cubic(const CubicForm& C, std::span<const Integer> x) { return grad_cubic_impl(C, x); }
BigVec grad_cubic(const CubicForm& C, std::span<const std::int64_t> x) { return grad_cubic_impl(C, x); }

std::vector<double> eval_linear(const LinearSystem& L, std::span<const Integer> x) {
  if (static_cast<int>(x.size()) != L.n()) throw DimensionMismatch(L.n(), x.size());
  std::vector<double> out(L.r());
  for (int i = 0; i < L.r(); ++i) {
    const auto& row = L.row(i);
    if (row.is_rational()) {
      Rational acc = 0;
      for (int j = 0; j < L.n(); ++j) acc += row.rational_coeffs()[j] * x[j];
      out[i] = to_double(acc);
    } else {
      long double acc = 0.0L;
      for (int j = 0; j < L.n(); ++j)
        acc += static_cast<long double>(row.real_coeffs()[j]) * x[j].convert_to<long double>();
      out[i] = static_cast<double>(acc);
    }
  }
  return out;
}

std::vector<double> eval_linear(const LinearSystem& L, std::span<const std::int64_t> x) {
  return eval_linear_impl(L, x);
}

bool verify_h_decomposition(const CubicForm& C, const HDecomposition& D) {
  if (D.n != C.n()) throw std::invalid_argument("decomposition has a different variable count");
  Polynomial diff = Polynomial::from_cubic(C);
  for (const auto& pair : D.pairs) {
    if (static_cast<int>(pair.a.size()) != C.n()) throw std::invalid_argument("linear form length differs from n");
    diff -= Polynomial::from_linear(pair.a) * Polynomial::from_quadratic(C.n(), pair.b);
  }
  return diff.is_zero();
}

// ---------------------------------------------------------------------------
// Linear spaces inside {C = 0}

namespace {

/// Coefficient of t_a t_b t_c (a <= b <= c) in C(sum_s t_s v_s), summing the
/// distinct arrangements of the multiset over the three monomial slots.
template <class T, class Ops>
T span_coefficient(const std::vector<std::pair<std::array<int, 3>, T>>& terms,
                   const std::vector<std::vector<T>>& vecs, std::array<int, 3> mset, const Ops& ops) {
  T total = ops.zero();
  std::array<int, 3> arr = mset;
  do {
    const auto& u = vecs[arr[0]];
    const auto& v = vecs[arr[1]];
    const auto& w = vecs[arr[2]];
    for (const auto& [idx, c] : terms)
      total = ops.add(total, ops.mul(c, ops.mul(u[idx[0]], ops.mul(v[idx[1]], w[idx[2]]))));
  } while (std::next_permutation(arr.begin(), arr.end()));
  return total;
}

struct IntegerOps {
  Integer zero() const { return 0; }
  Integer add(const Integer& a, const Integer& b) const { return a + b; }
  Integer mul(const Integer& a, const Integer& b) const { return a * b; }
};

struct ModOps {
  std::int64_t p;
  std::int64_t zero() const { return 0; }
  std::int64_t add(std::int64_t a, std::int64_t b) const { return (a + b) % p; }
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return a * b % p; }
};

std::vector<std::pair<std::array<int, 3>, Integer>> integer_terms(const CubicForm& C) {
  std::vector<std::pair<std::array<int, 3>, Integer>> out;
  for (const auto& m : C.terms()) out.push_back({{m.i, m.j, m.k}, m.c});
  return out;
}

/// All coefficients whose multiset contains `newest` and otherwise indices < newest.
template <class T, class Ops>
bool new_coefficients_vanish(const std::vector<std::pair<std::array<int, 3>, T>>& terms,
                             const std::vector<std::vector<T>>& vecs, int newest, const Ops& ops) {
  for (int a = 0; a <= newest; ++a)
    for (int b = a; b <= newest; ++b) {
      T c = span_coefficient(terms, vecs, {a, b, newest}, ops);
      if (!(c == ops.zero())) return false;
    }
  return true;
}

std::vector<Integer> to_big(const IntVec& v) { return std::vector<Integer>(v.begin(), v.end()); }

/// Incremental echelon basis over Q used for independence tests.
class EchelonQ {
 public:
  explicit EchelonQ(int n) : n_(n) {}
  bool try_add(const IntVec& v) {
    std::vector<Rational> r(v.begin(), v.end());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational f = r[pivots_[k]];
      if (f == 0) continue;
      for (int j = 0; j < n_; ++j) r[j] -= f * rows_[k][j];
    }
    auto it = std::find_if(r.begin(), r.end(), [](const Rational& x) { return x != 0; });
    if (it == r.end()) return false;
    int piv = static_cast<int>(it - r.begin());
    Rational inv = 1 / r[piv];
    for (auto& x : r) x *= inv;
    rows_.push_back(std::move(r));
    pivots_.push_back(piv);
    return true;
  }
  void pop() {
    rows_.pop_back();
    pivots_.pop_back();
  }

 private:
  int n_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<int> pivots_;
};

/// Reduced row echelon form of the span, each row scaled to a primitive
/// integer vector with positive pivot.
std::vector<IntVec> canonical_basis(const std::vector<IntVec>& basis, int n) {
  std::vector<std::vector<Rational>> m;
  for (const auto& v : basis) m.emplace_back(v.begin(), v.end());
  std::size_t rank = 0;
  for (int c = 0; c < n && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    Rational inv = 1 / m[rank][c];
    for (auto& x : m[rank]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (int k = 0; k < n; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  std::vector<IntVec> out;
  for (std::size_t r = 0; r < rank; ++r) {
    Integer den = 1;
    for (const auto& x : m[r]) den = boost::multiprecision::lcm(den, denominator_of(x));
    std::vector<Integer> ints;
    Integer g = 0;
    for (const auto& x : m[r]) {
      ints.push_back(numerator_of(x * den));
      g = boost::multiprecision::gcd(g, ints.back());
    }
    IntVec row;
    for (auto& z : ints) row.push_back(static_cast<std::int64_t>(z / g));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

bool vanishes_on_span(const CubicForm& C, const std::vector<IntVec>& basis) {
  for (const auto& v : basis)
    if (static_cast<int>(v.size()) != C.n()) throw DimensionMismatch(C.n(), v.size());
  auto terms = integer_terms(C);
  std::vector<std::vector<Integer>> vecs;
  for (const auto& v : basis) vecs.push_back(to_big(v));
  IntegerOps ops;
  int d = static_cast<int>(basis.size());
  for (int s = 0; s < d; ++s)
    if (!new_coefficients_vanish(terms, vecs, s, ops)) return false;
  return true;
}

std::optional<std::vector<IntVec>> find_rational_linear_space(const CubicForm& C, int d, int H) {
  const int n = C.n();
  if (d < 1 || d >= n) throw std::invalid_argument("find_rational_linear_space needs 1 <= d < n");
  if (H < 1) throw std::invalid_argument("find_rational_linear_space needs H >= 1");
  if (!C.fits_on_box(H)) throw ResourceLimit("height bound too large for exact fast evaluation");

  // Primitive zeros with first nonzero entry positive, in lexicographic order.
  std::vector<IntVec> zeros;
  IntVec v(n, -H);
  while (true) {
    auto first = std::find_if(v.begin(), v.end(), [](std::int64_t t) { return t != 0; });
    if (first != v.end() && *first > 0) {
      std::int64_t g = 0;
      for (auto t : v) g = std::gcd(g, t);
      if (g == 1 && C.eval_i128(v) == 0) zeros.push_back(v);
    }
    int pos = n - 1;
    while (pos >= 0 && v[pos] == H) v[pos--] = -H;
    if (pos < 0) break;
    ++v[pos];
  }

  auto terms = integer_terms(C);
  IntegerOps ops;
  std::vector<std::vector<Integer>> chosen_big;
  std::vector<IntVec> chosen;
  EchelonQ echelon(n);
  std::size_t nodes = 0;
  const std::size_t node_limit = 2'000'000;

  // Depth-first over increasing indices into `zeros`; the first complete
  // chain in this order is the returned certificate.
  auto dfs = [&](auto&& self, std::size_t start) -> bool {
    if (static_cast<int>(chosen.size()) == d) return true;
    for (std::size_t idx = start; idx < zeros.size(); ++idx) {
      if (++nodes > node_limit) return false;
      if (!echelon.try_add(zeros[idx])) continue;
      chosen.push_back(zeros[idx]);
      chosen_big.push_back(to_big(zeros[idx]));
      int s = static_cast<int>(chosen.size()) - 1;
      if (new_coefficients_vanish(terms, chosen_big, s, ops) && self(self, idx + 1)) return true;
      chosen.pop_back();
      chosen_big.pop_back();
      echelon.pop();
    }
    return false;
  };
  if (!dfs(dfs, 0)) return std::nullopt;

  auto canon = canonical_basis(chosen, n);
  bool within = std::all_of(canon.begin(), canon.end(), [H](const IntVec& row) {
    return std::all_of(row.begin(), row.end(), [H](std::int64_t t) { return std::llabs(t) <= H; });
  });
  return within ? canon : chosen;
}

bool excludes_subspaces_mod_p(const CubicForm& C, int d, std::int64_t p, double node_budget) {
  const int n = C.n();
  if (d < 1 || d > n) throw std::invalid_argument("excludes_subspaces_mod_p needs 1 <= d <= n");
  if (!is_prime(p)) throw std::invalid_argument("excludes_subspaces_mod_p needs a prime");
  std::vector<std::pair<std::array<int, 3>, std::int64_t>> terms;
  for (const auto& m : C.terms()) {
    std::int64_t c = mod_floor(m.c, p);
    if (c != 0) terms.push_back({{m.i, m.j, m.k}, c});
  }
  if (terms.empty()) return false;  // C vanishes identically mod p
  ModOps ops{p};
  double nodes = 0;
  bool exhausted = false;

  std::vector<int> pivots(d);
  std::iota(pivots.begin(), pivots.end(), 0);
  std::vector<std::vector<std::int64_t>> rows(d, std::vector<std::int64_t>(n, 0));

  // Fill row r of a reduced echelon basis: 1 at its pivot, 0 at all other
  // pivots and to the left, free entries elsewhere.
  auto fill = [&](auto&& self, int r) -> bool {
    std::vector<int> free_cols;
    for (int c = pivots[r] + 1; c < n; ++c)
      if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free_cols.push_back(c);
    auto& row = rows[r];
    std::fill(row.begin(), row.end(), 0);
    row[pivots[r]] = 1;
    std::vector<std::int64_t> digits(free_cols.size(), 0);
    while (true) {
      if (++nodes > node_budget) {
        exhausted = true;
        return true;
      }
      for (std::size_t f = 0; f < free_cols.size(); ++f) row[free_cols[f]] = digits[f];
      if (new_coefficients_vanish(terms, rows, r, ops)) {
        if (r == d - 1) return true;
        if (self(self, r + 1)) return true;
      }
      std::size_t pos = 0;
      while (pos < digits.size() && digits[pos] == p - 1) digits[pos++] = 0;
      if (pos == digits.size()) break;
      ++digits[pos];
    }
    return false;
  };

  while (true) {
    if (fill(fill, 0)) return false;  // subspace found, or budget exhausted
    int i = d - 1;
    while (i >= 0 && pivots[i] == n - d + i) --i;
    if (i < 0) break;
    ++pivots[i];
    for (int k = i + 1; k < d; ++k) pivots[k] = pivots[k - 1] + 1;
  }
  (void)exhausted;
  return true;
}

HBounds h_bounds(const CubicForm& C, const std::optional<HDecomposition>& witness, const HSearch& search) {
  const int n = C.n();
  HBounds out;
  out.upper = n;
  if (witness) {
    if (!verify_h_decomposition(C, *witness)) throw std::invalid_argument("h_bounds: witness does not verify");
    out.upper = std::min<int>(out.upper, static_cast<int>(witness->h()));
  }

  int d_found = 0;
  for (int d = 1; d < n; ++d) {
    auto space = find_rational_linear_space(C, d, search.height);
    if (!space) break;
    d_found = d;
    out.space = std::move(space);
  }
  out.upper = std::min(out.upper, n - d_found);

  int d_excluded = n;
  for (int d = d_found + 1; d < n && d_excluded == n; ++d)
    for (std::int64_t p : search.primes)
      if (excludes_subspaces_mod_p(C, d, p, search.node_budget)) {
        d_excluded = d;
        out.exclusion = ExclusionCertificate{p, d};
        break;
      }
  out.lower = std::max(1, n - d_excluded + 1);

  if (out.lower > out.upper)
    throw InconsistentBounds("h bounds crossed: lower " + std::to_string(out.lower) + " > upper " +
                             std::to_string(out.upper));
  return out;
}

}  // namespace cubiclab
