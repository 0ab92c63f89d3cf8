#ifndef BTQ_MOYAL_HPP
#define BTQ_MOYAL_HPP

// Truncated formal Weyl algebra over R^{2n} with exact rational-complex
// coefficients. Variables are ordered (x1, p1, ..., xn, pn) with
// {x_i, p_j} = delta_ij; the Moyal-Weyl product is
//   f * g = m o exp[-(i hbar/2) pi](f (x) g),
// truncated at a chosen hbar order K. For polynomial entries the pi-series
// terminates, so truncation only discards hbar weight.

#include <map>
#include <string>
#include <vector>

#include "btq/errors.hpp"
#include "btq/rational.hpp"

namespace btq {

// Monomial exponents over the 2n variables plus an hbar power.
struct WeylKey {
  std::vector<int> exps;
  int hbar = 0;
  auto operator<=>(const WeylKey&) const = default;
};

class FormalSeries {
 public:
  FormalSeries(int n, int K, int hbar_min = 0);

  static FormalSeries zero(int n, int K) { return FormalSeries(n, K); }
  static FormalSeries one(int n, int K);
  static FormalSeries x(int n, int K, int i);  // position variable x_i, 0-based
  static FormalSeries p(int n, int K, int i);  // momentum variable p_i
  static FormalSeries hbar(int n, int K);
  static FormalSeries term(int n, int K, std::vector<int> exps, int hbar_power,
                           GaussianRational coeff, int hbar_min = 0);

  int pairs() const { return n_; }
  int num_vars() const { return 2 * n_; }
  int truncation() const { return K_; }
  int hbar_min_power() const { return hbar_min_; }
  const std::map<WeylKey, GaussianRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Max polynomial degree in the 2n variables (0 for the zero series).
  int var_degree() const;
  // Smallest hbar power actually present (hbar_min_power() if empty).
  int min_hbar_present() const;

  GaussianRational coefficient(const std::vector<int>& exps, int hbar_power) const;

  FormalSeries& operator+=(const FormalSeries& o);
  FormalSeries& operator-=(const FormalSeries& o);
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  friend FormalSeries operator*(const GaussianRational& s, const FormalSeries& f);
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  // Pointwise (commutative) product, hbar powers adding; truncates at K.
  friend FormalSeries mul_pointwise(const FormalSeries& a, const FormalSeries& b);

  // Multiply by hbar^j (j may be negative); truncates at K.
  FormalSeries shift_hbar(int j) const;
  // Drop terms with hbar power > new_K.
  FormalSeries truncate(int new_K) const;

  // Formal partial derivative in variable index v (0..2n-1).
  FormalSeries partial(int v) const;
  // Iterated partials by a 2n multi-index.
  FormalSeries partial_multi(const std::vector<int>& alpha) const;

  // Complex-conjugates every coefficient (hbar is real).
  FormalSeries conjugated() const;

  void add_term(std::vector<int> exps, int hbar_power, const GaussianRational& c);

  std::string to_json() const;
  static FormalSeries from_json(const std::string& text);

 private:
  int n_, K_, hbar_min_;
  std::map<WeylKey, GaussianRational> terms_;
};

// The Poisson bivector power pi^j as a sum of paired derivative multi-indices.
struct Bidifferential {
  struct Term {
    std::vector<int> left;   // derivative multi-index applied to f
    std::vector<int> right;  // derivative multi-index applied to g
    Rational weight;
  };
  int n = 0;
  int order = 0;  // power j of pi; every term has |left| = |right| = j
  std::vector<Term> terms;
};

Bidifferential poisson_power(int n, int j);

// m o B(f (x) g).
FormalSeries apply_bidifferential(const Bidifferential& B, const FormalSeries& f,
                                  const FormalSeries& g);

// Moyal-Weyl product truncated at hbar^K.
FormalSeries moyal_product(const FormalSeries& f, const FormalSeries& g, int K);

// f * g - g * f.
FormalSeries star_commutator(const FormalSeries& f, const FormalSeries& g, int K);

// (f * g) * h - f * (g * h); identically zero for the Weyl product.
FormalSeries associator(const FormalSeries& f, const FormalSeries& g, const FormalSeries& h,
                        int K);

// Coefficient-wise complex conjugation; satisfies (f*g)^* = g^* * f^*.
FormalSeries star_conjugate(const FormalSeries& f);

// Star-commutator action [D, f] of D in g = hbar^{-1} W on f in W; lands in W.
FormalSeries lie_action(const FormalSeries& D, const FormalSeries& f, int K);

}  // namespace btq

#endif
