#include "btq/index_cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace btq {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string laurent_json(const LaurentPoly& p) {
  // {"hbar^-1": c, "1": c, "hbar^2": c, ...} in ascending power order
  std::string s = "{";
  bool first = true;
  for (const auto& [power, c] : p.coefficients()) {
    if (!first) s += ",";
    first = false;
    std::string key = power == 0 ? "1" : "hbar^" + std::to_string(power);
    s += "\"" + key + "\":" + format_double(c.get_d());
  }
  return s + "}";
}

}  // namespace

CohoClass exp_deg2(const LaurentPoly& a) { return {LaurentPoly(Rational(1)), a}; }

LaurentPoly integrate_class(const CohoClass& c) { return c.deg2; }

CohoClass todd_cp1() { return {LaurentPoly(Rational(1)), LaurentPoly(Rational(1))}; }

CohoClass a_hat_cp1() { return {LaurentPoly(Rational(1)), LaurentPoly()}; }

CohoClass c1_tangent_cp1() { return {LaurentPoly(), LaurentPoly(Rational(2))}; }

CohoClass theta_class(int k0) {
  LaurentPoly deg2 = LaurentPoly::term(-1, Rational(1));
  deg2.add_term(0, Rational(k0 + 1));
  return {LaurentPoly(), deg2};
}

LaurentPoly gq_index_polynomial(const CharacterData& ch, int k0) {
  // ch e = rank + degree*sigma, Td = 1 + sigma, exponent class (k0 + N) sigma.
  // We carry N as the Laurent variable here.
  const CohoClass ch_class{LaurentPoly(Rational(ch.rank)), LaurentPoly(Rational(ch.degree))};
  LaurentPoly exponent = LaurentPoly::term(1, Rational(1));  // N
  exponent.add_term(0, Rational(k0));
  return integrate_class(ch_class * todd_cp1() * exp_deg2(exponent));
}

LaurentPoly formal_index(const CharacterData& ch, const CohoClass& theta) {
  if (!theta.deg0.is_zero())
    throw config_error("formal_index: theta must have vanishing degree-0 part");
  const CohoClass ch_class{LaurentPoly(Rational(ch.rank)), LaurentPoly(Rational(ch.degree))};
  return integrate_class(ch_class * a_hat_cp1() * exp_deg2(theta.deg2));
}

LaurentPoly substitute_inverse(const LaurentPoly& in_hbar) {
  LaurentPoly out;
  for (const auto& [power, c] : in_hbar.coefficients()) out.add_term(-power, c);
  return out;
}

ClassicalIdempotent::ClassicalIdempotent(int m, std::string label, CharacterData ch)
    : m_(m), entries_(size_t(m) * m), label_(std::move(label)), character_(ch) {}

ClassicalIdempotent ClassicalIdempotent::trivial(int rank) {
  if (rank < 1) throw config_error("ClassicalIdempotent::trivial: rank must be >= 1");
  ClassicalIdempotent e(rank, "trivial-rank-" + std::to_string(rank), {rank, 0});
  for (int i = 0; i < rank; ++i) e.entries_[size_t(i) * rank + i] = SpherePolynomial::constant(1.0);
  return e;
}

ClassicalIdempotent ClassicalIdempotent::zero() {
  return ClassicalIdempotent(1, "zero", {0, 0});
}

ClassicalIdempotent ClassicalIdempotent::bott(int k) {
  if (k != 1 && k != -1)
    throw config_error("ClassicalIdempotent::bott: k must be +1 or -1");
  ClassicalIdempotent e(2, k > 0 ? "bott(+1)" : "bott(-1)", {1, bott_degree(k)});
  const Complex half(0.5), kh(0.5 * k);
  const SpherePolynomial u = SpherePolynomial::u();
  const SpherePolynomial v = SpherePolynomial::v();
  const SpherePolynomial w = SpherePolynomial::w();
  e.entries_[0] = SpherePolynomial::constant(half) + kh * u;            // (1 + k u)/2
  e.entries_[1] = kh * (v - Complex(0.0, 1.0) * w);                     // k (v - i w)/2
  e.entries_[2] = kh * (v + Complex(0.0, 1.0) * w);                     // k (v + i w)/2
  e.entries_[3] = SpherePolynomial::constant(half) - kh * u;            // (1 - k u)/2
  return e;
}

SpherePolynomial ClassicalIdempotent::trace_polynomial() const {
  SpherePolynomial t;
  for (int i = 0; i < m_; ++i) t += entry(i, i);
  return canonicalize(t);
}

double ClassicalIdempotent::idempotency_defect() const {
  double worst = 0.0;
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c) {
      SpherePolynomial acc;
      for (int k = 0; k < m_; ++k) acc += entry(r, k) * entry(k, c);
      worst = std::max(worst, canonicalize(acc - entry(r, c)).max_coeff_distance({}));
    }
  return worst;
}

bool ClassicalIdempotent::is_hermitian(double tol) const {
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c)
      if (canonicalize(entry(r, c) - entry(c, r).conjugate()).max_coeff_distance({}) > tol)
        return false;
  return true;
}

LiftResult lift_idempotent(const SectionSpace& space, const ClassicalIdempotent& e,
                           const QuadratureGrid& grid, MapKind kind) {
  if (space.empty()) throw config_error("lift_idempotent: section space is empty");
  const int m = e.size();
  const int dim = space.dimension();
  Eigen::MatrixXcd a(m * dim, m * dim);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      a.block(r * dim, c * dim, dim, dim) = quantize(kind, space, e.entry(r, c), grid).matrix;
  a = Complex(0.5) * (a + a.adjoint().eval());  // e Hermitian => a Hermitian; drop roundoff

  // Spectral gap at 1/2. Missing clusters count as the basin edges.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  double below = -0.5, above = 1.5;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < 0.5)
      below = std::max(below, ev[i]);
    else
      above = std::min(above, ev[i]);
  }
  LiftResult result;
  result.gap = above - below;
  if (result.gap < 0.1)
    throw spectral_gap_error("lift_idempotent: spectral gap at 1/2 is " +
                                 format_double(result.gap) + " < 0.1; N too small",
                             result.gap);
  if (ev[0] < -0.45 || ev[ev.size() - 1] > 1.45)
    throw spectral_gap_error("lift_idempotent: spectrum [" + format_double(ev[0]) + ", " +
                                 format_double(ev[ev.size() - 1]) +
                                 "] leaves the Newton basin",
                             result.gap);

  Eigen::MatrixXcd x = a;
  for (int iter = 0; iter < 30; ++iter) {
    const Eigen::MatrixXcd x2 = x * x;
    const double residual = operator_norm({space, x2 - x});
    result.residuals.push_back(residual);
    if (residual <= 1e-13) break;
    x = 3.0 * x2 - 2.0 * (x2 * x);
    ++result.iterations;
  }
  if (result.residuals.back() > 1e-12)
    throw std::runtime_error("lift_idempotent: Newton iteration did not reach 1e-12 in 30 steps");
  result.projector = {space, std::move(x)};
  result.distance_to_input = operator_norm({space, result.projector.matrix - a});
  return result;
}

IndexReport index_check(int N, int k0, const ClassicalIdempotent& e, MapKind kind) {
  const SectionSpace space = make_space(N, k0);
  int maxdeg = 0;
  for (int r = 0; r < e.size(); ++r)
    for (int c = 0; c < e.size(); ++c) maxdeg = std::max(maxdeg, e.entry(r, c).degree());
  const QuadratureGrid grid = grid_for(space, maxdeg + 2);
  const LiftResult lift = lift_idempotent(space, e, grid, kind);

  IndexReport report;
  report.N = N;
  report.k0 = k0;
  report.idempotent = e.label();
  report.measured = partial_trace(lift.projector).real();
  const LaurentPoly poly = gq_index_polynomial(e.character(), k0);
  Rational predicted = poly.coefficient(1) * N + poly.coefficient(0);
  predicted.canonicalize();
  if (predicted.get_den() != 1)
    throw std::logic_error("index_check: predicted index is not an integer");
  report.predicted = predicted.get_num().get_si();
  report.residual = std::abs(report.measured - double(report.predicted));
  report.pass = report.residual <= 1e-6;
  return report;
}

std::string IndexReport::to_json() const {
  return "{\"N\":" + std::to_string(N) + ",\"k0\":" + std::to_string(k0) + ",\"idempotent\":\"" +
         idempotent + "\",\"measured\":" + format_double(measured) +
         ",\"predicted\":" + std::to_string(predicted) +
         ",\"residual\":" + format_double(residual) + ",\"pass\":" + (pass ? "true" : "false") +
         "}";
}

BetaReport beta_check(const std::vector<int>& levels, int k0,
                      const std::vector<ClassicalIdempotent>& idempotents, MapKind kind) {
  if (levels.size() < 2) throw config_error("beta_check: need at least 2 levels");
  // The characters must span H^0 + H^2.
  bool spans = false;
  for (size_t i = 0; i < idempotents.size() && !spans; ++i)
    for (size_t j = i + 1; j < idempotents.size() && !spans; ++j) {
      const CharacterData a = idempotents[i].character();
      const CharacterData b = idempotents[j].character();
      if (a.rank * b.degree - b.rank * a.degree != 0) spans = true;
    }
  if (!spans)
    throw config_error("beta_check: idempotent characters do not span H^0 + H^2");

  BetaReport report;
  report.levels = levels;
  report.k0 = k0;
  report.pass = true;
  const CohoClass theta = theta_class(k0);

  for (const auto& e : idempotents) {
    BetaEntry entry;
    entry.idempotent = e.label();
    entry.ch = e.character();
    int maxdeg = 0;
    for (int r = 0; r < e.size(); ++r)
      for (int c = 0; c < e.size(); ++c) maxdeg = std::max(maxdeg, e.entry(r, c).degree());
    for (int N : levels) {
      const SectionSpace space = make_space(N, k0);
      const QuadratureGrid grid = grid_for(space, maxdeg + 2);
      entry.traces.push_back(partial_trace(lift_idempotent(space, e, grid, kind).projector).real());
    }
    // Least-squares line trace = slope*N + intercept (exact polynomial expected).
    const int n = static_cast<int>(levels.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = levels[i];
      y[i] = entry.traces[i];
    }
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(y);
    entry.fit_intercept = sol[0];
    entry.fit_slope = sol[1];
    for (int i = 0; i < n; ++i)
      entry.fit_residual =
          std::max(entry.fit_residual, std::abs(y[i] - sol[0] - sol[1] * levels[i]));

    entry.formal = formal_index(e.character(), theta);
    // Fitted polynomial under N = hbar^{-1}: slope*hbar^{-1} + intercept.
    const double formal_m1 = entry.formal.coefficient(-1).get_d();
    const double formal_0 = entry.formal.coefficient(0).get_d();
    entry.max_coeff_error = std::max(std::abs(entry.fit_slope - formal_m1),
                                     std::abs(entry.fit_intercept - formal_0));
    for (const auto& [power, c] : entry.formal.coefficients())
      if (power != -1 && power != 0)
        entry.max_coeff_error = std::max(entry.max_coeff_error, std::abs(c.get_d()));
    entry.pass = entry.max_coeff_error <= 1e-6 && entry.fit_residual <= 1e-6;
    report.pass = report.pass && entry.pass;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string BetaReport::to_json() const {
  std::string s = "{\"k0\":" + std::to_string(k0) + ",\"levels\":[";
  for (size_t i = 0; i < levels.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(levels[i]);
  }
  s += "],\"entries\":[";
  for (size_t i = 0; i < entries.size(); ++i) {
    const BetaEntry& e = entries[i];
    if (i) s += ",";
    s += "{\"idempotent\":\"" + e.idempotent + "\",\"rank\":" + std::to_string(e.ch.rank) +
         ",\"degree\":" + std::to_string(e.ch.degree) +
         ",\"fit_slope\":" + format_double(e.fit_slope) +
         ",\"fit_intercept\":" + format_double(e.fit_intercept) +
         ",\"fit_residual\":" + format_double(e.fit_residual) + ",\"formal_index\":" +
         laurent_json(e.formal) + ",\"max_coeff_error\":" + format_double(e.max_coeff_error) +
         ",\"pass\":" + (e.pass ? "true" : "false") + "}";
  }
  return s + "],\"pass\":" + (pass ? "true" : "false") + "}";
}

std::string BetaReport::traces_csv() const {
  std::string s = "N";
  for (const auto& e : entries) s += "," + e.idempotent;
  s += "\n";
  for (size_t i = 0; i < levels.size(); ++i) {
    s += std::to_string(levels[i]);
    for (const auto& e : entries) s += "," + format_double(e.traces[i]);
    s += "\n";
  }
  return s;
}

}  // namespace btq
