#ifndef BTQ_TESTS_ORACLES_HPP
#define BTQ_TESTS_ORACLES_HPP

// Independent oracles used by the test suites. Everything here is computed
// by a different route than the implementation under test: closed-form
// moments, symbolic chart differentiation, Beta integrals, and a direct
// multinomial expansion of the Moyal product.

#include <complex>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "btq/sphere_geometry.hpp"

namespace btq::oracle {

// Average of u^a v^b w^c over the sphere: zero for any odd exponent, else
// (a-1)!!(b-1)!!(c-1)!!/(a+b+c+1)!!.
inline double exact_moment(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  auto dfact = [](int n) {
    double r = 1.0;
    for (int k = n; k >= 2; k -= 2) r *= k;
    return r;
  };
  return dfact(a - 1) * dfact(b - 1) * dfact(c - 1) / dfact(a + b + c + 1);
}

inline double exact_integral(const SpherePolynomial& f) {
  double acc = 0.0;
  for (const auto& [m, c] : f.terms()) acc += c.real() * exact_moment(m.a, m.b, m.c);
  return acc;
}

// Raw Beta-integral norm of z^j in O(M): j!(M-j)!/(M+1)! as an exact rational.
inline mpq_class beta_gram(int M, int j) {
  mpz_class num = 1, den = 1;
  for (int i = 2; i <= j; ++i) num *= i;
  for (int i = 2; i <= M - j; ++i) num *= i;
  for (int i = 2; i <= M + 1; ++i) den *= i;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

// {f,g} at the point corresponding to chart coordinate z, by symbolic
// differentiation in the chart: (1+|z|^2)^2 * i * (f_zbar g_z - f_z g_zbar).
inline Complex poisson_chart(const SpherePolynomial& f, const SpherePolynomial& g, Complex z) {
  const ChartForm cf = to_chart(f), cg = to_chart(g);
  const Complex fz = cf.d_z().evaluate(z), fzb = cf.d_zbar().evaluate(z);
  const Complex gz = cg.d_z().evaluate(z), gzb = cg.d_zbar().evaluate(z);
  const double s = 1.0 + std::norm(z);
  return s * s * Complex(0.0, 1.0) * (fzb * gz - fz * gzb);
}

// Riemannian pairing <df, dg> at chart coordinate z for the area-2pi metric:
// (1+|z|^2)^2 (f_z g_zbar + f_zbar g_z).
inline Complex dirichlet_chart(const SpherePolynomial& f, const SpherePolynomial& g, Complex z) {
  const ChartForm cf = to_chart(f), cg = to_chart(g);
  const Complex fz = cf.d_z().evaluate(z), fzb = cf.d_zbar().evaluate(z);
  const Complex gz = cg.d_z().evaluate(z), gzb = cg.d_zbar().evaluate(z);
  const double s = 1.0 + std::norm(z);
  return s * s * (fz * gzb + fzb * gz);
}

// Quadrature of a chart-evaluated integrand over the whole sphere.
template <typename F>
Complex integrate_chart(const QuadratureGrid& grid, F&& integrand) {
  Complex acc = 0.0;
  for (size_t i = 0; i < grid.nodes.size(); ++i)
    acc += grid.weights[i] * integrand(chart_coordinate(grid.nodes[i]));
  return acc;
}

// Deterministic random sphere points.
inline std::vector<SpherePoint> random_points(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<SpherePoint> pts;
  while (static_cast<int>(pts.size()) < count) {
    const double x = unif(rng), y = unif(rng), z = unif(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r < 0.1 || r > 1.0) continue;
    pts.emplace_back(x / r, y / r, z / r);
  }
  return pts;
}

// Deterministic random real polynomial with small integer coefficients.
inline SpherePolynomial random_poly(std::mt19937& rng, int max_degree, int max_terms) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> expo(0, max_degree);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::map<Monomial, Complex> terms;
  for (int t = nterms(rng); t > 0; --t) {
    Monomial m;
    m.a = expo(rng);
    m.b = expo(rng) % std::max(1, max_degree - m.a + 1);
    m.c = expo(rng) % std::max(1, max_degree - m.a - m.b + 1);
    const int c = coeff(rng);
    if (c != 0) terms[m] += double(c);
  }
  SpherePolynomial p = canonicalize(SpherePolynomial::from_terms(terms));
  if (p.is_zero()) p = SpherePolynomial::u();
  return p;
}

}  // namespace btq::oracle

#endif
