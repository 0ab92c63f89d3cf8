#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "btq/asymptotics.hpp"
#include "btq/quantize.hpp"
#include "oracles.hpp"

using namespace btq;

namespace {
const SpherePolynomial U = SpherePolynomial::u();
const SpherePolynomial V = SpherePolynomial::v();
const SpherePolynomial W = SpherePolynomial::w();
SpherePolynomial c(double x) { return SpherePolynomial::constant(x); }

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("toeplitz of 1 is the identity") {
  for (int N : {0, 1, 7, 16}) {
    const SectionSpace space = make_space(N, 0);
    const QuadratureGrid grid = grid_for(space, 0);
    const QuantOperator op = toeplitz(space, c(1.0), grid);
    CHECK(max_abs(op.matrix - Eigen::MatrixXcd::Identity(N + 1, N + 1)) < 1e-13);
  }
}

TEST_CASE("toeplitz(u) is the fuzzy-sphere diagonal (M-2j)/(M+2)") {
  for (int M : {1, 2, 8, 33, 64}) {
    const SectionSpace space = make_space(M, 0);
    const QuadratureGrid grid = grid_for(space, 1);
    const QuantOperator op = toeplitz(space, U, grid);
    for (int j = 0; j <= M; ++j)
      for (int k = 0; k <= M; ++k) {
        const double expected = j == k ? double(M - 2 * j) / double(M + 2) : 0.0;
        CHECK(std::abs(op.matrix(j, k) - expected) < 1e-10);
      }
  }
}

TEST_CASE("toeplitz(v) is tridiagonal with zero diagonal") {
  const int M = 9;
  const SectionSpace space = make_space(M, 0);
  const QuadratureGrid grid = grid_for(space, 1);
  const QuantOperator op = toeplitz(space, V, grid);
  for (int j = 0; j <= M; ++j)
    for (int k = 0; k <= M; ++k) {
      if (std::abs(j - k) != 1) {
        CHECK(std::abs(op.matrix(j, k)) < 1e-13);
      } else {
        // angular-integral oracle: sqrt((k+1)(M-k))/(M+2) on the k -> k+1 step
        const int lo = std::min(j, k);
        const double expected = std::sqrt(double((lo + 1) * (M - lo))) / double(M + 2);
        CHECK(std::abs(op.matrix(j, k) - expected) < 1e-12);
      }
    }
}

TEST_CASE("toeplitz is hermitian for real f and linear") {
  std::mt19937 rng(42);
  const SectionSpace space = make_space(10, 1);
  const QuadratureGrid grid = grid_for(space, 4);
  for (int t = 0; t < 5; ++t) {
    const SpherePolynomial f = oracle::random_poly(rng, 3, 4);
    const SpherePolynomial g = oracle::random_poly(rng, 3, 4);
    const QuantOperator tf = toeplitz(space, f, grid);
    CHECK(max_abs(tf.matrix - tf.matrix.adjoint().eval()) < 1e-13);
    const QuantOperator sum = toeplitz(space, f + g, grid);
    CHECK(max_abs(sum.matrix - tf.matrix - toeplitz(space, g, grid).matrix) < 1e-12);
  }
}

TEST_CASE("pointwise nonnegative functions quantize to nonnegative operators") {
  std::mt19937 rng(7);
  const SectionSpace space = make_space(12, 0);
  const QuadratureGrid grid = grid_for(space, 6);
  for (int t = 0; t < 10; ++t) {
    const SpherePolynomial p = oracle::random_poly(rng, 3, 3);
    const SpherePolynomial f = p * p;  // real p, so f >= 0 pointwise
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(toeplitz(space, f, grid).matrix,
                                                       Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) >= -1e-10);
  }
}

TEST_CASE("norm contraction against the sampled sup norm") {
  std::mt19937 rng(1234);
  for (int t = 0; t < 50; ++t) {
    const int N = 1 + (t * 13) % 64;
    const SectionSpace space = make_space(N, 0);
    const SpherePolynomial f = oracle::random_poly(rng, 3, 4);
    const QuadratureGrid grid = grid_for(space, f.degree());
    CHECK(operator_norm(toeplitz(space, f, grid)) <=
          sup_norm(f, 20000) * (1.0 + 1e-10));
  }
}

TEST_CASE("toeplitz rejects insufficient grids and empty spaces") {
  const SectionSpace space = make_space(8, 0);
  const QuadratureGrid small = build_grid(8);  // needs 2M + 1 = 17
  CHECK_THROWS_AS(toeplitz(space, U, small), exactness_error);
  const SectionSpace empty = make_space(0, -2);
  const QuadratureGrid grid = build_grid(4);
  CHECK_THROWS_AS(toeplitz(empty, U, grid), config_error);
}

TEST_CASE("geometric map") {
  const int N = 9;
  const SectionSpace space = make_space(N, 0);
  const QuadratureGrid grid = grid_for(space, 2);
  SUBCASE("identity passes through (lap 1 = 0)") {
    CHECK(max_abs(geometric(space, c(1.0), grid).matrix -
                  Eigen::MatrixXcd::Identity(N + 1, N + 1)) < 1e-13);
  }
  SUBCASE("f = u scales the diagonal by 1 + 2/N") {
    const QuantOperator op = geometric(space, U, grid);
    const int M = N;
    for (int j = 0; j <= M; ++j) {
      const double expected = (1.0 + 2.0 / N) * double(M - 2 * j) / double(M + 2);
      CHECK(std::abs(op.matrix(j, j) - expected) < 1e-11);
    }
  }
  SUBCASE("level 0 is rejected") {
    const SectionSpace n0 = make_space(0, 0);
    CHECK_THROWS_AS(geometric(n0, U, grid), config_error);
  }
  SUBCASE("distance to toeplitz bounded by the correction sup norm") {
    std::mt19937 rng(5);
    for (int t = 0; t < 5; ++t) {
      const SpherePolynomial f = oracle::random_poly(rng, 2, 3);
      const QuantOperator diff{space,
                               geometric(space, f, grid).matrix - toeplitz(space, f, grid).matrix};
      CHECK(operator_norm(diff) <=
            sup_norm(laplacian(f), 20000) / (2.0 * N) * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("coherent states") {
  const SectionSpace space = make_space(11, 0);
  SUBCASE("north pole gives the first basis vector") {
    const CoherentState cs = coherent_state(space, SpherePoint(1.0, 0.0, 0.0));
    CHECK(std::abs(cs.vector[0] - 1.0) < 1e-14);
    CHECK(cs.vector.tail(11).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("unit norm everywhere") {
    for (const SpherePoint& p : oracle::random_points(15, 3)) {
      const CoherentState cs = coherent_state(space, p);
      CHECK(cs.vector.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("symbol of the identity is 1") {
    const QuantOperator id = QuantOperator::identity(space);
    for (const SpherePoint& p : oracle::random_points(10, 4))
      CHECK(std::abs(symbol(id, p) - 1.0) < 1e-13);
  }
}

TEST_CASE("symbol properties") {
  const int M = 12;
  const SectionSpace space = make_space(M, 0);
  const QuadratureGrid grid = grid_for(space, 3);
  SUBCASE("toeplitz(u) at the north pole gives the corner entry M/(M+2)") {
    const Complex s = symbol(toeplitz(space, U, grid), SpherePoint(1.0, 0.0, 0.0));
    CHECK(std::abs(s - double(M) / (M + 2)) < 1e-12);
  }
  SUBCASE("hermitian operators have real symbols") {
    std::mt19937 rng(8);
    const SpherePolynomial f = oracle::random_poly(rng, 3, 4);
    const QuantOperator op = toeplitz(space, f, grid);
    for (const SpherePoint& p : oracle::random_points(10, 5))
      CHECK(std::abs(symbol(op, p).imag()) < 1e-12);
  }
  SUBCASE("symbol of toeplitz(f) converges to f pointwise") {
    const SpherePoint p(0.6, 0.64, 0.48);
    const SpherePolynomial f = U * V + W;
    double prev = 1e9;
    for (int N : {8, 32, 128}) {
      const SectionSpace s = make_space(N, 0);
      const double err = std::abs(symbol(toeplitz(s, f, grid_for(s, 2)), p) - f.evaluate(p));
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 0.05);
  }
}

TEST_CASE("operator norm basics") {
  const SectionSpace space = make_space(6, 0);
  CHECK(operator_norm(QuantOperator::identity(space)) == doctest::Approx(1.0));
  CHECK(operator_norm(QuantOperator::zero(space)) == 0.0);
  const QuadratureGrid grid = grid_for(space, 1);
  CHECK(operator_norm(toeplitz(space, U, grid)) ==
        doctest::Approx(6.0 / 8.0).epsilon(1e-12));  // M/(M+2)
}

TEST_CASE("partial traces") {
  SUBCASE("identity counts the dimension") {
    for (int k0 : {0, 1, 2}) {
      const SectionSpace space = make_space(10, k0);
      CHECK(std::abs(partial_trace(QuantOperator::identity(space)) -
                     double(10 + k0 + 1)) < 1e-12);
    }
  }
  SUBCASE("toeplitz(u) is traceless") {
    const SectionSpace space = make_space(14, 0);
    CHECK(std::abs(partial_trace(toeplitz(space, U, grid_for(space, 1)))) < 1e-12);
  }
  SUBCASE("trace of toeplitz(f) equals (M+1) integral f") {
    std::mt19937 rng(21);
    const SectionSpace space = make_space(13, 1);
    const QuadratureGrid grid = grid_for(space, 4);
    for (int t = 0; t < 6; ++t) {
      const SpherePolynomial f = oracle::random_poly(rng, 4, 4);
      const Complex tr = partial_trace(toeplitz(space, f, grid));
      CHECK(std::abs(tr - double(space.dimension()) * oracle::exact_integral(f)) < 1e-10);
    }
  }
  SUBCASE("tr(AB) = tr(BA)") {
    std::mt19937 rng(22);
    const SectionSpace space = make_space(9, 0);
    const QuadratureGrid grid = grid_for(space, 3);
    for (int t = 0; t < 5; ++t) {
      const Eigen::MatrixXcd A = toeplitz(space, oracle::random_poly(rng, 3, 4), grid).matrix;
      const Eigen::MatrixXcd B = toeplitz(space, oracle::random_poly(rng, 3, 4), grid).matrix;
      CHECK(std::abs((A * B).trace() - (B * A).trace()) < 1e-12);
    }
  }
}

TEST_CASE("rotation equivariance about the u-axis") {
  // Rotating f about the u-axis matches conjugation by the diagonal unitary
  // U_alpha = diag(e^{-ij alpha}).
  const int M = 8;
  const SectionSpace space = make_space(M, 0);
  const QuadratureGrid grid = grid_for(space, 2);
  const double alpha = 0.7391;
  auto rotate = [&](const SpherePolynomial& f) {
    // substitute v -> v cos a + w sin a, w -> -v sin a + w cos a
    const SpherePolynomial vn = Complex(std::cos(alpha)) * V + Complex(std::sin(alpha)) * W;
    const SpherePolynomial wn = Complex(-std::sin(alpha)) * V + Complex(std::cos(alpha)) * W;
    SpherePolynomial out;
    for (const auto& [m, coeff] : f.terms()) {
      SpherePolynomial term = SpherePolynomial::constant(coeff);
      for (int i = 0; i < m.a; ++i) term = term * U;
      for (int i = 0; i < m.b; ++i) term = term * vn;
      for (int i = 0; i < m.c; ++i) term = term * wn;
      out += term;
    }
    return canonicalize(out);
  };
  Eigen::VectorXcd diag(M + 1);
  for (int j = 0; j <= M; ++j) diag[j] = std::polar(1.0, -j * alpha);
  const Eigen::MatrixXcd Ua = diag.asDiagonal();
  for (const SpherePolynomial& f : {V, W, U * V, V * W + U}) {
    const Eigen::MatrixXcd lhs = toeplitz(space, rotate(f), grid).matrix;
    const Eigen::MatrixXcd rhs = Ua * toeplitz(space, f, grid).matrix * Ua.adjoint();
    CHECK(max_abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("norm convergence of toeplitz(u) realizes the sup-norm limit") {
  for (int M : {4, 16, 64}) {
    const SectionSpace space = make_space(M, 0);
    CHECK(operator_norm(toeplitz(space, U, grid_for(space, 1))) ==
          doctest::Approx(double(M) / (M + 2)).epsilon(1e-10));
  }
}

TEST_CASE("operator serialization is deterministic and carries the header") {
  const SectionSpace space = make_space(3, 1);
  const QuadratureGrid grid = grid_for(space, 1);
  const QuantOperator op = toeplitz(space, V, grid);
  const std::string a = op.to_json(), b = op.to_json();
  CHECK(a == b);
  CHECK(a.find("\"basis\":\"ortho-monomial-asc\"") != std::string::npos);
  CHECK(a.find("\"N\":3") != std::string::npos);
  CHECK(a.find("\"k0\":1") != std::string::npos);
  const std::string csv = op.to_csv();
  CHECK(csv.substr(0, 11) == "N,k0,M,basi");
  CHECK(csv.find("ortho-monomial-asc") != std::string::npos);
}
