#ifndef BTQ_INDEX_COHOMOLOGY_HPP
#define BTQ_INDEX_COHOMOLOGY_HPP

// Cohomology arithmetic on the sphere (H^0 + H^2 with generator
// sigma = [omega/2pi], sigma^2 = 0), the two index formulas, the classifying
// class theta, idempotent lifting by Newton iteration, and the beta = 1
// trace comparison.

#include <string>
#include <vector>

#include "btq/asymptotics.hpp"
#include "btq/quantize.hpp"
#include "btq/rational.hpp"

namespace btq {

// Class a0 * 1 + a2 * sigma with Laurent-in-hbar coefficients.
struct CohoClass {
  LaurentPoly deg0, deg2;

  static CohoClass unit() { return {LaurentPoly(Rational(1)), LaurentPoly()}; }

  friend CohoClass operator*(const CohoClass& a, const CohoClass& b) {
    return {a.deg0 * b.deg0, a.deg0 * b.deg2 + a.deg2 * b.deg0};
  }
  friend CohoClass operator+(const CohoClass& a, const CohoClass& b) {
    return {a.deg0 + b.deg0, a.deg2 + b.deg2};
  }
  friend bool operator==(const CohoClass& a, const CohoClass& b) {
    return a.deg0 == b.deg0 && a.deg2 == b.deg2;
  }
};

// Exponential of a degree-2 class (nilpotent): e^(0, a) = (1, a).
CohoClass exp_deg2(const LaurentPoly& a);

// Integration over the sphere picks out the sigma coefficient.
LaurentPoly integrate_class(const CohoClass& c);

CohoClass todd_cp1();       // 1 + sigma
CohoClass a_hat_cp1();      // 1
CohoClass c1_tangent_cp1(); // 2 sigma
CohoClass theta_class(int k0);  // (hbar^{-1} + k0 + 1) sigma

// Chern character data of the bundle cut out by an idempotent.
struct CharacterData {
  int rank = 0;
  int degree = 0;
};

// integral of ch e ^ Td(TM) ^ e^{c1(L0) + N sigma}: a polynomial in N,
// returned as a Laurent polynomial in the variable N (powers 0 and 1).
LaurentPoly gq_index_polynomial(const CharacterData& ch, int k0);

// integral of ch e ^ Ahat(TM) ^ e^theta: a Laurent polynomial in hbar.
LaurentPoly formal_index(const CharacterData& ch, const CohoClass& theta);

// hbar^{-1} -> N substitution (power sign flip).
LaurentPoly substitute_inverse(const LaurentPoly& in_hbar);

// Matrix of sphere polynomials with e^2 = e exactly.
class ClassicalIdempotent {
 public:
  // Rank-m identity in M_m (the trivial idempotent).
  static ClassicalIdempotent trivial(int rank);
  // The 1x1 zero idempotent.
  static ClassicalIdempotent zero();
  // (1/2)(I + k (u s3 + v s1 + w s2)) for k in {+1, -1}.
  static ClassicalIdempotent bott(int k);

  int size() const { return m_; }
  const SpherePolynomial& entry(int r, int c) const { return entries_[r * m_ + c]; }
  const std::string& label() const { return label_; }
  const CharacterData& character() const { return character_; }

  // Pointwise trace as a polynomial (constant = rank for our idempotents).
  SpherePolynomial trace_polynomial() const;
  // Largest coefficient of e^2 - e after canonicalization (0 for exact e).
  double idempotency_defect() const;
  bool is_hermitian(double tol = 0.0) const;

 private:
  ClassicalIdempotent(int m, std::string label, CharacterData ch);
  int m_;
  std::vector<SpherePolynomial> entries_;
  std::string label_;
  CharacterData character_;
};

// Degree carried by bott(k); resolved empirically against the geometric
// index polynomial and frozen (regression-tested).
inline constexpr int bott_degree(int k) { return -k; }

struct LiftResult {
  QuantOperator projector;  // block matrix over End(H_N), size m*(M+1)
  double gap = 0.0;         // spectral gap of the entrywise quantization at 1/2
  int iterations = 0;
  std::vector<double> residuals;  // ||x^2 - x|| per iteration, final value last
  double distance_to_input = 0.0; // ||e_lifted - a||
};

// Entrywise quantization followed by the cubic Newton iteration
// x <- 3x^2 - 2x^3; refuses (spectral_gap_error) when the spectrum of the
// quantized idempotent has no gap of width >= 0.1 at 1/2.
LiftResult lift_idempotent(const SectionSpace& space, const ClassicalIdempotent& e,
                           const QuadratureGrid& grid, MapKind kind);

struct IndexReport {
  int N = 0, k0 = 0;
  std::string idempotent;
  double measured = 0.0;
  long predicted = 0;
  double residual = 0.0;
  bool pass = false;

  std::string to_json() const;
};

IndexReport index_check(int N, int k0, const ClassicalIdempotent& e,
                        MapKind kind = MapKind::toeplitz);

struct BetaEntry {
  std::string idempotent;
  CharacterData ch;
  std::vector<double> traces;       // per level
  double fit_slope = 0.0;           // trace ~ slope*N + intercept
  double fit_intercept = 0.0;
  double fit_residual = 0.0;
  LaurentPoly formal;               // formal_index(ch, theta)
  double max_coeff_error = 0.0;     // fitted vs formal, after N = hbar^{-1}
  bool pass = false;
};

struct BetaReport {
  std::vector<int> levels;
  int k0 = 0;
  std::vector<BetaEntry> entries;
  bool pass = false;

  std::string to_json() const;
  std::string traces_csv() const;  // per-level lifted traces, one column per idempotent
};

// Lifts every idempotent at every level, fits tr_N in N, substitutes
// N = hbar^{-1} and compares with the formal index coefficientwise.
BetaReport beta_check(const std::vector<int>& levels, int k0,
                      const std::vector<ClassicalIdempotent>& idempotents,
                      MapKind kind = MapKind::toeplitz);

}  // namespace btq

#endif
