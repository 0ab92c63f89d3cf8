#ifndef BTQ_QUANTIZE_HPP
#define BTQ_QUANTIZE_HPP

// Quantization maps onto the matrix algebras End(H_N): the Toeplitz
// compression T_N (multiply by f, project back), the geometric map
// Q_N(f) = T_N(f + laplacian(f)/2N), Berezin symbols through coherent
// states, operator norms and partial traces.

#include <Eigen/Dense>
#include <string>

#include "btq/section_space.hpp"
#include "btq/sphere_geometry.hpp"

namespace btq {

enum class MapKind { toeplitz, geometric };

struct QuantOperator {
  SectionSpace space;
  Eigen::MatrixXcd matrix;  // dimension x dimension, orthonormal monomial basis, j ascending

  static QuantOperator identity(const SectionSpace& space);
  static QuantOperator zero(const SectionSpace& space);

  std::string to_json() const;
  std::string to_csv() const;
};

// Matrix elements <e_j, f e_k> in the orthonormalized monomial basis; every
// element is a quadrature-exact polynomial integral. Requires grid exactness
// >= 2M + degree(f).
QuantOperator toeplitz(const SectionSpace& space, const SpherePolynomial& f,
                       const QuadratureGrid& grid);

// T_N(f + laplacian(f)/2N); requires N >= 1.
QuantOperator geometric(const SectionSpace& space, const SpherePolynomial& f,
                        const QuadratureGrid& grid);

QuantOperator quantize(MapKind kind, const SectionSpace& space, const SpherePolynomial& f,
                       const QuadratureGrid& grid);

// Smallest grid order accepted by toeplitz() at this space and degree.
int required_exactness(const SectionSpace& space, int poly_degree);

struct CoherentState {
  SectionSpace space;
  SpherePoint base;
  Eigen::VectorXcd vector;  // unit norm
};

// Normalized reproducing-kernel vector at x.
CoherentState coherent_state(const SectionSpace& space, const SpherePoint& x);

// Berezin (covariant) symbol <c_x, A c_x>.
Complex symbol(const QuantOperator& A, const SpherePoint& x);

// Largest singular value.
double operator_norm(const QuantOperator& A);

// Matrix trace at this level.
Complex partial_trace(const QuantOperator& A);

}  // namespace btq

#endif
