#ifndef BTQ_ASYMPTOTICS_HPP
#define BTQ_ASYMPTOTICS_HPP

// Level scans of operator quantities, least-squares fits in powers of 1/N
// (hbar = 1/N throughout), the star-product norm-defect functionals, and the
// pointwise probe of the antisymmetric part of the first star coefficient.

#include <string>
#include <vector>

#include "btq/quantize.hpp"

namespace btq {

struct LevelScan {
  std::vector<int> levels;  // strictly increasing
  std::vector<Complex> values;
  std::string descriptor;

  LevelScan(std::vector<int> levels_, std::vector<Complex> values_, std::string descriptor_);

  std::string to_csv() const;  // columns: N, value_re, value_im
};

struct PowerFit {
  std::vector<Complex> coefficients;  // c_0..c_k of sum_j c_j N^(-j)
  double max_residual = 0.0;
  int order = 0;
  std::vector<int> levels;

  Complex evaluate(double N) const;
  std::string to_json() const;
};

// Least squares over the Vandermonde system in 1/N. Needs >= k+2 levels.
PowerFit fit_inverse_powers(const LevelScan& scan, int k);

// || N [T_N(f), T_N(g)] + i T_N({f,g}) ||. The "+i" convention is audited at
// first use: it must be the sign that decays for (u, v).
double commutator_defect(const SpherePolynomial& f, const SpherePolynomial& g, int N,
                         MapKind kind, int k0 = 0);

// Same with the opposite (non-decaying) sign; used by the sign audit.
double commutator_defect_opposite_sign(const SpherePolynomial& f, const SpherePolynomial& g,
                                       int N, MapKind kind, int k0 = 0);

struct SignAudit {
  std::vector<int> levels;
  std::vector<double> plus_defects;   // implemented convention
  std::vector<double> minus_defects;  // opposite sign
  bool plus_decays = false;
  bool minus_decays = false;
  bool consistent() const { return plus_decays && !minus_decays; }
};

// Runs the (u, v) audit over the given levels with the Toeplitz map.
SignAudit audit_commutator_sign(const std::vector<int>& levels, int k0 = 0);

// || N^k Q_N(f) Q_N(g) - sum_{j=0..k} (-i)^j N^(k-j) Q_N(phi_j) ||
// with the geometric map Q_N. phis must hold phi_0..phi_k, phi_0 = f*g.
double star_defect(const SpherePolynomial& f, const SpherePolynomial& g,
                   const std::vector<SpherePolynomial>& phis, int k, int N, int k0 = 0);

// Fits h_N(x) = N * symbol(T_N(f) T_N(g) - T_N(g) T_N(f), x) in powers of
// 1/N; the constant term estimates -i {f,g}(x).
PowerFit phi1_antisym_probe(const SpherePolynomial& f, const SpherePolynomial& g,
                            const SpherePoint& x, const std::vector<int>& levels, int k0 = 0);

// Operator norms per level.
LevelScan norm_scan(const SpherePolynomial& f, const std::vector<int>& levels, MapKind kind,
                    int k0 = 0);

// Convention report for the Laplacian sign inside Q_N(f) = T_N(f + lap f/2N):
// distance of ||Q_N(u)|| from the sup-norm of u under both sign choices.
struct LaplacianSignReport {
  std::vector<int> levels;
  std::vector<double> defect_nonneg;    // implemented convention: f + lap f / 2N
  std::vector<double> defect_opposite;  // f - lap f / 2N
};

LaplacianSignReport laplacian_sign_report(const std::vector<int>& levels);

// Grid just large enough for toeplitz() at this space and polynomial degree.
QuadratureGrid grid_for(const SectionSpace& space, int max_poly_degree);

}  // namespace btq

#endif
