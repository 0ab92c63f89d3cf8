#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "btq/sphere_geometry.hpp"
#include "oracles.hpp"

using namespace btq;

namespace {
const SpherePolynomial U = SpherePolynomial::u();
const SpherePolynomial V = SpherePolynomial::v();
const SpherePolynomial W = SpherePolynomial::w();
SpherePolynomial c(double x) { return SpherePolynomial::constant(x); }
}  // namespace

TEST_CASE("sphere points validate the unit-length invariant") {
  CHECK_NOTHROW(SpherePoint(1.0, 0.0, 0.0));
  CHECK_NOTHROW(SpherePoint(0.6, 0.64, 0.48));
  CHECK_THROWS_AS(SpherePoint(1.0, 0.1, 0.0), config_error);
}

TEST_CASE("chart point round trip") {
  const Complex z(0.37, -1.21);
  const SpherePoint p = chart_point(z);
  CHECK(std::abs(chart_coordinate(p) - z) < 1e-14);
  const SpherePoint pole = chart_point(Complex(0.0, 0.0));
  CHECK(pole.u == doctest::Approx(1.0));
}

TEST_CASE("canonicalize: defining relation collapses to 1") {
  const SpherePolynomial r = U * U + V * V + W * W;
  CHECK(r == c(1.0));
  CHECK(canonicalize(SpherePolynomial()).is_zero());
}

TEST_CASE("canonicalize is idempotent and matches pointwise values") {
  // u^2 w -> (1 - v^2 - w^2) w, checked at 20 random points
  std::map<Monomial, Complex> raw{{{2, 0, 1}, 1.0}};
  const SpherePolynomial lhs = canonicalize(SpherePolynomial::from_terms(raw));
  const SpherePolynomial rhs = (c(1.0) - V * V - W * W) * W;
  CHECK(lhs == rhs);
  CHECK(canonicalize(lhs) == lhs);
  for (const SpherePoint& p : oracle::random_points(20, 11)) {
    const Complex raw_val = std::pow(p.u, 2) * p.w;
    CHECK(std::abs(lhs.evaluate(p) - raw_val) < 1e-14);
  }
}

TEST_CASE("canonical forms never carry u powers above 1") {
  std::mt19937 rng(77);
  for (int t = 0; t < 30; ++t) {
    const SpherePolynomial p = oracle::random_poly(rng, 4, 6);
    for (const auto& [m, coeff] : p.terms()) CHECK(m.a <= 1);
  }
}

TEST_CASE("poisson bracket generators") {
  CHECK(poisson_bracket(U, V) == Complex(2.0) * W);
  CHECK(poisson_bracket(V, W) == Complex(2.0) * U);
  CHECK(poisson_bracket(W, U) == Complex(2.0) * V);
  CHECK(poisson_bracket(U, U).is_zero());
  // {u^2, v} = 4uw by the Leibniz rule
  CHECK(poisson_bracket(U * U, V) == Complex(4.0) * (U * W));
}

TEST_CASE("poisson bracket: antisymmetry, Leibniz, Jacobi (exact)") {
  std::mt19937 rng(123);
  for (int t = 0; t < 12; ++t) {
    const SpherePolynomial f = oracle::random_poly(rng, 3, 4);
    const SpherePolynomial g = oracle::random_poly(rng, 3, 4);
    const SpherePolynomial h = oracle::random_poly(rng, 3, 4);
    CHECK((poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero());
    const SpherePolynomial leibniz =
        poisson_bracket(f, g * h) - poisson_bracket(f, g) * h - g * poisson_bracket(f, h);
    CHECK(leibniz.max_coeff_distance({}) < 1e-11);
    const SpherePolynomial jacobi = poisson_bracket(f, poisson_bracket(g, h)) +
                                    poisson_bracket(g, poisson_bracket(h, f)) +
                                    poisson_bracket(h, poisson_bracket(f, g));
    CHECK(jacobi.max_coeff_distance({}) < 1e-10);
  }
}

TEST_CASE("poisson bracket agrees with the chart differential oracle") {
  std::mt19937 rng(321);
  const auto points = oracle::random_points(20, 5);
  for (int t = 0; t < 6; ++t) {
    const SpherePolynomial f = oracle::random_poly(rng, 3, 4);
    const SpherePolynomial g = oracle::random_poly(rng, 3, 4);
    const SpherePolynomial br = poisson_bracket(f, g);
    for (const SpherePoint& p : points) {
      const Complex z = chart_coordinate(p);
      CHECK(std::abs(br.evaluate(p) - oracle::poisson_chart(f, g, z)) < 1e-9);
    }
  }
}

TEST_CASE("laplacian basics") {
  CHECK(laplacian(c(5.0)).is_zero());
  CHECK(laplacian(U) == Complex(4.0) * U);
  CHECK(laplacian(V) == Complex(4.0) * V);
  CHECK(laplacian(W) == Complex(4.0) * W);
  // integral of a Laplacian vanishes
  const QuadratureGrid grid = build_grid(8);
  CHECK(std::abs(integrate(grid, laplacian(U * U))) < 1e-13);
}

TEST_CASE("laplacian matches the Dirichlet form in the chart") {
  // integral (lap f) g = integral <df, dg> for the area-2pi metric
  std::mt19937 rng(99);
  const QuadratureGrid grid = build_grid(16);
  SUBCASE("f = g = u gives 4/3") {
    const Complex lhs = integrate(grid, laplacian(U) * U);
    CHECK(lhs.real() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    const Complex rhs =
        oracle::integrate_chart(grid, [&](Complex z) { return oracle::dirichlet_chart(U, U, z); });
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
  SUBCASE("random polynomials") {
    for (int t = 0; t < 6; ++t) {
      const SpherePolynomial f = oracle::random_poly(rng, 3, 4);
      const SpherePolynomial g = oracle::random_poly(rng, 3, 4);
      const Complex lhs = integrate(grid, laplacian(f) * g);
      const Complex rhs = oracle::integrate_chart(
          grid, [&](Complex z) { return oracle::dirichlet_chart(f, g, z); });
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }
  }
}

TEST_CASE("chart form evaluation matches sphere evaluation") {
  std::mt19937 rng(17);
  for (int t = 0; t < 8; ++t) {
    const SpherePolynomial f = oracle::random_poly(rng, 4, 5);
    const ChartForm cf = to_chart(f);
    for (const SpherePoint& p : oracle::random_points(10, 1000 + t)) {
      const Complex z = chart_coordinate(p);
      CHECK(std::abs(cf.evaluate(z) - f.evaluate(p)) < 1e-12);
    }
  }
}

TEST_CASE("grid construction and normalization") {
  CHECK_THROWS_AS(build_grid(0), config_error);
  const QuadratureGrid grid = build_grid(9);
  CHECK(grid.exactness >= 9);
  double total = 0.0;
  for (double w : grid.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(integrate(grid, c(1.0)) - 1.0) < 1e-14);
  CHECK(std::abs(integrate(grid, U)) < 1e-14);
  CHECK(std::abs(integrate(grid, U * U) - 1.0 / 3.0) < 1e-13);
}

TEST_CASE("quadrature is exact against closed-form moments") {
  const QuadratureGrid grid = build_grid(12);
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; a + b <= 12; ++b)
      for (int cexp = 0; a + b + cexp <= 12; ++cexp) {
        std::map<Monomial, Complex> t{{{a, b, cexp}, 1.0}};
        const SpherePolynomial mono = SpherePolynomial::from_terms(t);
        const double expected = oracle::exact_moment(a, b, cexp);
        CHECK(std::abs(integrate(grid, mono).real() - expected) < 1e-12);
      }
}

TEST_CASE("high-order grids stay exact") {
  const QuadratureGrid grid = build_grid(130);
  // spot-check deep moments against the closed form
  for (int b : {10, 64, 100}) {
    std::map<Monomial, Complex> t{{{0, b, 0}, 1.0}};
    CHECK(std::abs(integrate(grid, SpherePolynomial::from_terms(t)).real() -
                   oracle::exact_moment(0, b, 0)) < 1e-12);
  }
  std::map<Monomial, Complex> mixed{{{1, 63, 2}, 1.0}};
  CHECK(std::abs(integrate(grid, SpherePolynomial::from_terms(mixed)).real()) < 1e-12);
}

TEST_CASE("integrate refuses degree overflow") {
  const QuadratureGrid grid = build_grid(4);
  SpherePolynomial high = U;
  for (int i = 0; i < 5; ++i) high = high * V;
  CHECK_THROWS_AS(integrate(grid, high), exactness_error);
}

TEST_CASE("sup norm") {
  CHECK(sup_norm(c(1.0), 100) == doctest::Approx(1.0));
  CHECK(sup_norm(U, 10000) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(sup_norm(U * U + V * V + W * W, 500) == doctest::Approx(1.0));
  CHECK(sup_norm(Complex(2.0) * U, 10000) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(sup_norm(U, 50), config_error);
}

TEST_CASE("gauss-legendre nodes match known values") {
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  CHECK(x[1] == doctest::Approx(0.5773502691896258).epsilon(1e-14));
  gauss_legendre(3, x, w);
  CHECK(x[2] == doctest::Approx(0.7745966692414834).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("polynomial JSON round trip") {
  std::mt19937 rng(2024);
  const SpherePolynomial f = oracle::random_poly(rng, 3, 5);
  const SpherePolynomial back = SpherePolynomial::from_json(f.to_json());
  CHECK(back == f);
  CHECK_THROWS_AS(SpherePolynomial::from_json("{\"x,y\":[1,0]}"), config_error);
}
