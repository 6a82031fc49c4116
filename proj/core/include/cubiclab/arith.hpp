#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cubiclab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVec = std::vector<std::int64_t>;
using BigVec = std::vector<Integer>;

/// Parses "p/q", "p" or "-p/q". Throws ConfigError on malformed input or q = 0.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);
double to_double(const Rational& q);

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Nonnegative residue of a modulo m (m > 0).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
std::int64_t mod_floor(const Integer& a, std::int64_t m);

/// Inverse of a modulo m; requires gcd(a, m) = 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

bool is_prime(std::int64_t p);
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

/// Prime factorisation by trial division as (p, e) pairs in increasing p.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t q);

int moebius(std::int64_t m);
std::int64_t euler_phi(std::int64_t q);

/// Ramanujan sum c_q(m) = sum over (a,q)=1 of e(am/q), via the divisor formula.
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t m);

/// p-adic valuation; returns `cap` for zero.
int valuation(const Integer& z, std::int64_t p, int cap);

std::int64_t ipow(std::int64_t base, int exp);

/// base^exp as a double, used for budget checks that must not overflow.
double pow_budget(double base, int exp);

}  // namespace cubiclab
