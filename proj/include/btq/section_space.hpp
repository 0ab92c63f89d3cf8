#ifndef BTQ_SECTION_SPACE_HPP
#define BTQ_SECTION_SPACE_HPP

// Holomorphic section spaces of O(M) over the sphere, M = N + k0, realized
// as polynomials of degree <= M in the chart variable. The inner product is
// (M+1) * integral of the pointwise Hermitian pairing against omega/2pi,
// which makes the monomial z^j squared norms equal 1/binomial(M, j); in
// particular gram_diag[0] = 1 at every M.

#include <string>
#include <vector>

#include "btq/errors.hpp"

namespace btq {

class SectionSpace {
 public:
  SectionSpace() : SectionSpace(0, -1) {}  // the empty space
  SectionSpace(int N, int k0);

  int level() const { return N_; }
  int twist() const { return k0_; }
  int total_degree() const { return M_; }    // N + k0; meaningful when >= 0
  int dimension() const { return M_ >= 0 ? M_ + 1 : 0; }
  bool empty() const { return M_ < 0; }

  const std::vector<double>& gram_diag() const { return gram_diag_; }
  const std::vector<double>& ortho_scale() const { return ortho_scale_; }

  std::string to_json() const;
  static SectionSpace from_json(const std::string& text);

 private:
  int N_, k0_, M_;
  std::vector<double> gram_diag_;    // squared norm of z^j, j = 0..M
  std::vector<double> ortho_scale_;  // gram_diag[j]^(-1/2)
};

SectionSpace make_space(int N, int k0);

// gram_diag[j] with bounds checking.
double gram_entry(const SectionSpace& space, int j);

}  // namespace btq

#endif
