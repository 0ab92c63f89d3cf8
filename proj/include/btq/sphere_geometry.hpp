#ifndef BTQ_SPHERE_GEOMETRY_HPP
#define BTQ_SPHERE_GEOMETRY_HPP

// Classical side of the lab: the unit sphere with embedding coordinates
// (u,v,w), symplectic form normalized so the total area of omega/2pi is 1.
// Conventions (see README):
//   {u,v} = 2w,  {v,w} = 2u,  {w,u} = 2v
//   laplacian(u) = 4u   (nonnegative spectrum)
//   chart: z -> (u,v,w) = ((1-|z|^2), 2 Re z, 2 Im z)/(1+|z|^2)

#include <complex>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "btq/errors.hpp"

namespace btq {

using Complex = std::complex<double>;

struct SpherePoint {
  double u, v, w;
  SpherePoint(double u_, double v_, double w_);
};

// Point on the sphere reached from the affine chart coordinate z.
SpherePoint chart_point(Complex z);
// Inverse of chart_point; valid away from u = -1.
Complex chart_coordinate(const SpherePoint& p);

// Exponents of u^a v^b w^c.
struct Monomial {
  int a = 0, b = 0, c = 0;
  auto operator<=>(const Monomial&) const = default;
  int degree() const { return a + b + c; }
};

// Polynomial in (u,v,w); canonical form has every u-exponent <= 1
// (reduction by u^2 = 1 - v^2 - w^2).
class SpherePolynomial {
 public:
  SpherePolynomial() : canonical_(true) {}

  static SpherePolynomial constant(Complex c);
  static SpherePolynomial u();
  static SpherePolynomial v();
  static SpherePolynomial w();
  // Raw term sum; not canonicalized unless already reduced.
  static SpherePolynomial from_terms(const std::map<Monomial, Complex>& terms);

  const std::map<Monomial, Complex>& terms() const { return terms_; }
  bool canonical() const { return canonical_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // 0 for the zero polynomial

  Complex evaluate(const SpherePoint& p) const;
  SpherePolynomial conjugate() const;
  bool is_real(double tol = 0.0) const;

  SpherePolynomial& operator+=(const SpherePolynomial& o);
  SpherePolynomial& operator-=(const SpherePolynomial& o);
  friend SpherePolynomial operator+(SpherePolynomial a, const SpherePolynomial& b) { return a += b; }
  friend SpherePolynomial operator-(SpherePolynomial a, const SpherePolynomial& b) { return a -= b; }
  friend SpherePolynomial operator*(const SpherePolynomial& a, const SpherePolynomial& b);
  friend SpherePolynomial operator*(Complex s, const SpherePolynomial& p);
  friend SpherePolynomial operator-(const SpherePolynomial& p) { return Complex(-1.0) * p; }

  // Exact coefficient-wise equality of canonical forms.
  friend bool operator==(const SpherePolynomial& a, const SpherePolynomial& b) {
    return a.terms_ == b.terms_;
  }

  // Largest |coefficient| difference against another polynomial.
  double max_coeff_distance(const SpherePolynomial& o) const;

  // Formal partial derivative in the polynomial ring (0 = u, 1 = v, 2 = w).
  SpherePolynomial partial(int var) const;

  std::string to_json() const;
  static SpherePolynomial from_json(const std::string& text);

 private:
  void add_term(const Monomial& m, Complex c);
  friend SpherePolynomial canonicalize(const SpherePolynomial&);

  std::map<Monomial, Complex> terms_;
  bool canonical_;
};

// Canonical representative modulo (u^2 + v^2 + w^2 - 1); idempotent.
SpherePolynomial canonicalize(const SpherePolynomial& p);

// Poisson bracket generated by {u,v} = 2w and cyclic; result canonical.
SpherePolynomial poisson_bracket(const SpherePolynomial& f, const SpherePolynomial& g);

// Laplace-Beltrami operator for the metric with area 2pi, nonnegative
// spectrum convention; laplacian(u) = 4u. Result canonical.
SpherePolynomial laplacian(const SpherePolynomial& f);

// f expressed in the affine chart as numerator(z, zbar) / (1+|z|^2)^denom_power.
struct ChartForm {
  std::map<std::pair<int, int>, Complex> numerator;  // key: (power of z, power of zbar)
  int denom_power = 0;

  Complex evaluate(Complex z) const;
  ChartForm d_z() const;     // holomorphic derivative
  ChartForm d_zbar() const;  // antiholomorphic derivative
};

ChartForm to_chart(const SpherePolynomial& f);

// Product grid: Gauss-Legendre in cos(theta) x uniform azimuth. Weights sum
// to 1, so integrate() returns the average against omega/2pi.
struct QuadratureGrid {
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;
  int exactness = 0;
};

// Grid integrating every polynomial of total degree <= order exactly.
QuadratureGrid build_grid(int order);

// Sum of weights * f(nodes). Requires degree(f) <= grid exactness.
Complex integrate(const QuadratureGrid& grid, const SpherePolynomial& f);

// Max |f| over a deterministic Fibonacci lattice of `samples` points;
// lower bound on the sup-norm, converging as samples grow.
double sup_norm(const SpherePolynomial& f, int samples);

// Gauss-Legendre nodes/weights on [-1,1] (exposed for reuse and tests).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace btq

#endif
