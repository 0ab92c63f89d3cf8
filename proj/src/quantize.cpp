#include "btq/quantize.hpp"

#include <cmath>
#include <cstdio>

namespace btq {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Azimuth and half-angle sines/cosines of a sphere point.
struct PolarData {
  double sh, ch, phi;
};

PolarData polar_data(const SpherePoint& p) {
  PolarData d;
  d.sh = std::sqrt(std::max(0.0, (1.0 - p.u) / 2.0));
  d.ch = std::sqrt(std::max(0.0, (1.0 + p.u) / 2.0));
  d.phi = std::atan2(p.w, p.v);
  return d;
}

void require_nonempty(const SectionSpace& space, const char* who) {
  if (space.empty())
    throw config_error(std::string(who) + ": section space is empty (M = " +
                       std::to_string(space.total_degree()) + " < 0)");
}

// Values of the orthonormal basis sections at a point, in the unitary
// trivialization: row[j] = ortho_scale[j] * sh^j * ch^(M-j) * e^{i j phi}.
// All entries have modulus <= 1.
void basis_row(const SectionSpace& space, const SpherePoint& p, Eigen::VectorXcd& row) {
  const int M = space.total_degree();
  const PolarData d = polar_data(p);
  row.resize(M + 1);
  Complex val = std::pow(d.ch, M);
  const Complex phase = std::polar(1.0, d.phi);
  for (int j = 0; j <= M; ++j) {
    row[j] = val;
    if (j < M) val *= (d.sh / d.ch) * phase * std::sqrt(double(M - j) / double(j + 1));
  }
}

}  // namespace

int required_exactness(const SectionSpace& space, int poly_degree) {
  return 2 * space.total_degree() + poly_degree;
}

QuantOperator QuantOperator::identity(const SectionSpace& space) {
  require_nonempty(space, "QuantOperator::identity");
  return {space, Eigen::MatrixXcd::Identity(space.dimension(), space.dimension())};
}

QuantOperator QuantOperator::zero(const SectionSpace& space) {
  require_nonempty(space, "QuantOperator::zero");
  return {space, Eigen::MatrixXcd::Zero(space.dimension(), space.dimension())};
}

QuantOperator toeplitz(const SectionSpace& space, const SpherePolynomial& f,
                       const QuadratureGrid& grid) {
  require_nonempty(space, "toeplitz");
  const int M = space.total_degree();
  const int need = required_exactness(space, f.degree());
  if (grid.exactness < need)
    throw exactness_error("toeplitz: grid exactness " + std::to_string(grid.exactness) +
                          " < required " + std::to_string(need) + " (M = " + std::to_string(M) +
                          ", deg f = " + std::to_string(f.degree()) + ")");

  const auto G = static_cast<Eigen::Index>(grid.nodes.size());
  Eigen::MatrixXcd basis(G, M + 1);
  Eigen::VectorXcd fw(G);
  Eigen::VectorXcd row;
  for (Eigen::Index i = 0; i < G; ++i) {
    basis_row(space, grid.nodes[i], row);
    basis.row(i) = row.transpose();
    fw[i] = grid.weights[i] * f.evaluate(grid.nodes[i]);
  }
  QuantOperator out{space, {}};
  out.matrix = double(M + 1) * (basis.adjoint() * fw.asDiagonal() * basis);
  return out;
}

QuantOperator geometric(const SectionSpace& space, const SpherePolynomial& f,
                        const QuadratureGrid& grid) {
  require_nonempty(space, "geometric");
  if (space.level() < 1)
    throw config_error("geometric: level N must be >= 1 (got " +
                       std::to_string(space.level()) + ")");
  const SpherePolynomial corrected =
      f + Complex(1.0 / (2.0 * space.level())) * laplacian(f);
  return toeplitz(space, corrected, grid);
}

QuantOperator quantize(MapKind kind, const SectionSpace& space, const SpherePolynomial& f,
                       const QuadratureGrid& grid) {
  return kind == MapKind::toeplitz ? toeplitz(space, f, grid) : geometric(space, f, grid);
}

CoherentState coherent_state(const SectionSpace& space, const SpherePoint& x) {
  require_nonempty(space, "coherent_state");
  const int M = space.total_degree();
  const PolarData d = polar_data(x);
  Eigen::VectorXcd vec(M + 1);
  // ortho_scale[j] * conj(z^j) * (1+|z|^2)^(-M/2) in half-angle form; the
  // binomial theorem makes this a unit vector.
  Complex val = std::pow(d.ch, M);
  const Complex phase = std::polar(1.0, -d.phi);
  for (int j = 0; j <= M; ++j) {
    vec[j] = val;
    if (j < M) val *= (d.sh / d.ch) * phase * std::sqrt(double(M - j) / double(j + 1));
  }
  vec.normalize();
  return {space, x, vec};
}

Complex symbol(const QuantOperator& A, const SpherePoint& x) {
  const CoherentState c = coherent_state(A.space, x);
  return c.vector.dot(A.matrix * c.vector);  // Eigen dot conjugates the left factor
}

double operator_norm(const QuantOperator& A) {
  if (A.matrix.size() == 0) return 0.0;
  if (A.matrix.isZero(0.0)) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A.matrix);
  return svd.singularValues()(0);
}

Complex partial_trace(const QuantOperator& A) { return A.matrix.trace(); }

std::string QuantOperator::to_json() const {
  std::string s = "{\"N\":" + std::to_string(space.level()) +
                  ",\"k0\":" + std::to_string(space.twist()) +
                  ",\"M\":" + std::to_string(space.total_degree()) +
                  ",\"basis\":\"ortho-monomial-asc\",\"entries\":[";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (r || c) s += ",";
      s += "[" + format_double(matrix(r, c).real()) + "," + format_double(matrix(r, c).imag()) +
           "]";
    }
  return s + "]}";
}

std::string QuantOperator::to_csv() const {
  std::string s = "N,k0,M,basis\n" + std::to_string(space.level()) + "," +
                  std::to_string(space.twist()) + "," + std::to_string(space.total_degree()) +
                  ",ortho-monomial-asc\nrow,col,re,im\n";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix.cols(); ++c)
      s += std::to_string(r) + "," + std::to_string(c) + "," + format_double(matrix(r, c).real()) +
           "," + format_double(matrix(r, c).imag()) + "\n";
  return s;
}

}  // namespace btq
