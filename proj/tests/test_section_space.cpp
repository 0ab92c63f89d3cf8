#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "btq/asymptotics.hpp"
#include "btq/section_space.hpp"
#include "oracles.hpp"

using namespace btq;

TEST_CASE("dimension counting") {
  CHECK(make_space(3, 0).dimension() == 4);   // monomials z^0..z^3
  CHECK(make_space(0, 0).dimension() == 1);   // constants only
  CHECK(make_space(1, -3).dimension() == 0);  // M = -2 < 0: empty
  CHECK(make_space(1, -3).empty());
  CHECK(make_space(5, 2).total_degree() == 7);
}

TEST_CASE("dimension is the degree-1 polynomial N + k0 + 1") {
  for (int k0 : {0, 1, 2})
    for (int N = 0; N <= 20; ++N) CHECK(make_space(N, k0).dimension() == N + k0 + 1);
}

TEST_CASE("gram entries: closed form, symmetry, normalization") {
  const SectionSpace space = make_space(2, 0);  // M = 2
  CHECK(gram_entry(space, 0) == doctest::Approx(1.0));
  CHECK(gram_entry(space, 1) / gram_entry(space, 0) == doctest::Approx(0.5));  // 1!1!/(0!2!)
  CHECK_THROWS_AS(gram_entry(space, 3), config_error);
  CHECK_THROWS_AS(gram_entry(space, -1), config_error);
  CHECK_THROWS_AS(gram_entry(make_space(0, -1), 0), config_error);

  const SectionSpace m0 = make_space(0, 0);
  CHECK(gram_entry(m0, 0) == doctest::Approx(1.0));  // the global constant c itself

  for (int M : {1, 5, 12, 33, 64}) {
    const SectionSpace s = make_space(M, 0);
    for (int j = 0; j <= M; ++j) {
      CHECK(s.gram_diag()[j] == s.gram_diag()[M - j]);  // z <-> 1/z symmetry, exact
      // closed form against the exact Beta-integral oracle, scaled by c = M+1
      const mpq_class expected = mpq_class(M + 1) * oracle::beta_gram(M, j);
      CHECK(s.gram_diag()[j] == doctest::Approx(expected.get_d()).epsilon(1e-13));
      CHECK(s.ortho_scale()[j] ==
            doctest::Approx(1.0 / std::sqrt(s.gram_diag()[j])).epsilon(1e-14));
    }
  }
}

TEST_CASE("gram diagonal matches chart quadrature for all M <= 64") {
  // |z|^(2j) (1+|z|^2)^(-M) pulled back to the sphere is
  // ((1-u)/2)^j ((1+u)/2)^(M-j); quadrature must reproduce the closed form
  // within 1e-10 relative (same inner-product normalization, factor M+1).
  const SpherePolynomial um =
      SpherePolynomial::constant(0.5) + Complex(-0.5) * SpherePolynomial::u();
  const SpherePolynomial up =
      SpherePolynomial::constant(0.5) + Complex(0.5) * SpherePolynomial::u();
  for (int M : {0, 1, 2, 3, 8, 16, 31, 48, 64}) {
    const SectionSpace space = make_space(M, 0);
    const QuadratureGrid grid = grid_for(space, 0);
    SpherePolynomial lower = SpherePolynomial::constant(1.0);  // um^j, built incrementally
    for (int j = 0; j <= M; ++j) {
      SpherePolynomial term = lower;
      for (int t = 0; t < M - j; ++t) term = term * up;
      const double quad = (M + 1) * integrate(grid, term).real();
      CHECK(quad == doctest::Approx(space.gram_diag()[j]).epsilon(1e-10));
      lower = lower * um;
    }
  }
}

TEST_CASE("section space JSON round trip") {
  const SectionSpace space = make_space(6, 1);
  const SectionSpace back = SectionSpace::from_json(space.to_json());
  CHECK(back.level() == 6);
  CHECK(back.twist() == 1);
  CHECK(back.total_degree() == 7);
  CHECK(back.gram_diag() == space.gram_diag());
}
