#ifndef BTQ_RATIONAL_HPP
#define BTQ_RATIONAL_HPP

#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <string>

namespace btq {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Complex number with exact rational real and imaginary parts.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  double re_double() const { return re.get_d(); }
  double im_double() const { return im.get_d(); }

  std::string str() const {
    if (im == 0) return re.get_str();
    return "(" + re.get_str() + ")+(" + im.get_str() + ")i";
  }
};

// Laurent polynomial in one formal variable (hbar) with rational coefficients.
// Keys are the hbar exponents; zero coefficients are never stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(Rational constant) {
    if (constant != 0) coeffs_[0] = std::move(constant);
  }

  static LaurentPoly term(int power, Rational c) {
    LaurentPoly p;
    if (c != 0) p.coeffs_[power] = std::move(c);
    return p;
  }

  const std::map<int, Rational>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Rational coefficient(int power) const {
    auto it = coeffs_.find(power);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [p, c] : o.coeffs_) add_term(p, c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (const auto& [p, c] : b.coeffs_) r.add_term(p, -c);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [pa, ca] : a.coeffs_)
      for (const auto& [pb, cb] : b.coeffs_) r.add_term(pa + pb, ca * cb);
    return r;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

  void add_term(int power, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(power, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (const auto& [p, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += c.get_str();
      if (p != 0) s += "*hbar^" + std::to_string(p);
    }
    return s;
  }

 private:
  std::map<int, Rational> coeffs_;
};

}  // namespace btq

#endif
