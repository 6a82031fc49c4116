#include "cubiclab/arith.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

#include "cubiclab/errors.hpp"

namespace cubiclab {

namespace {

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ConfigError("malformed rational '" + std::string(whole) + "'");
  std::size_t pos = 0;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw ConfigError("malformed rational '" + std::string(whole) + "'");
  Integer z = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos])))
      throw ConfigError("malformed rational '" + std::string(whole) + "'");
    z = z * 10 + (s[pos] - '0');
  }
  return negative ? Integer(-z) : z;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s, text));
  Integer p = parse_integer(trim(s.substr(0, slash)), text);
  Integer q = parse_integer(trim(s.substr(slash + 1)), text);
  if (q == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  return Rational(p, q);
}

std::string to_string(const Rational& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

std::string to_string(const Integer& z) { return z.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t mod_floor(const Integer& a, std::int64_t m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r0 = m, r1 = mod_floor(a, m);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t t = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
  }
  if (r0 != 1) throw std::invalid_argument("inverse_mod: arguments not coprime");
  return mod_floor(s0, m);
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= limit; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t q) {
  if (q < 1) throw std::invalid_argument("factorize: q must be positive");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= q; ++p) {
    int e = 0;
    while (q % p == 0) {
      q /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (q > 1) out.emplace_back(q, 1);
  return out;
}

int moebius(std::int64_t m) {
  int mu = 1;
  for (auto [p, e] : factorize(m)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::int64_t euler_phi(std::int64_t q) {
  std::int64_t phi = q;
  for (auto [p, e] : factorize(q)) phi = phi / p * (p - 1);
  return phi;
}

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t m) {
  std::int64_t g = std::gcd(q, mod_floor(m, q));
  std::int64_t sum = 0;
  for (std::int64_t d = 1; d <= g; ++d)
    if (g % d == 0) sum += moebius(q / d) * d;
  return sum;
}

int valuation(const Integer& z, std::int64_t p, int cap) {
  if (z == 0) return cap;
  Integer v = abs(z);
  int e = 0;
  while (e < cap && v % p == 0) {
    v /= p;
    ++e;
  }
  return e;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

double pow_budget(double base, int exp) { return std::pow(base, exp); }

}  // namespace cubiclab
