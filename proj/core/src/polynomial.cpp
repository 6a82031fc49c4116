#include "cubiclab/polynomial.hpp"

#include <stdexcept>

namespace cubiclab {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  Polynomial p(nvars);
  Exponent e(nvars, 0);
  e.at(index) = 1;
  p.add_term(e, Rational(1));
  return p;
}

Polynomial Polynomial::from_cubic(const CubicForm& C) {
  Polynomial p(C.n());
  for (const auto& m : C.terms()) {
    Exponent e(C.n(), 0);
    ++e[m.i];
    ++e[m.j];
    ++e[m.k];
    p.add_term(e, Rational(m.c));
  }
  return p;
}

Polynomial Polynomial::from_linear(const std::vector<Rational>& coeffs) {
  int n = static_cast<int>(coeffs.size());
  Polynomial p(n);
  for (int i = 0; i < n; ++i) {
    Exponent e(n, 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

Polynomial Polynomial::from_linear(int nvars, const IntVec& coeffs) {
  if (static_cast<int>(coeffs.size()) != nvars) throw std::invalid_argument("from_linear: size");
  Polynomial p(nvars);
  for (int i = 0; i < nvars; ++i) {
    Exponent e(nvars, 0);
    e[i] = 1;
    p.add_term(e, Rational(coeffs[i]));
  }
  return p;
}

Polynomial Polynomial::from_quadratic(int nvars, const std::vector<QuadTerm>& terms) {
  Polynomial p(nvars);
  for (const auto& t : terms) {
    Exponent e(nvars, 0);
    ++e.at(t.i);
    ++e.at(t.j);
    p.add_term(e, t.c);
  }
  return p;
}

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("add_term: exponent size");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial product: variable count");
  Polynomial out(a.nvars_);
  Polynomial::Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images) const {
  if (static_cast<int>(images.size()) != nvars_) throw std::invalid_argument("substitute: image count");
  int m = images.empty() ? 0 : images.front().nvars();
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(m, c);
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) term = term * images[i];
    out += term;
  }
  return out;
}

}  // namespace cubiclab
