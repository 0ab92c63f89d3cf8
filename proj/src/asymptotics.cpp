#include "btq/asymptotics.hpp"

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

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

// Defect with a selectable sign in front of i T_N({f,g}).
double commutator_defect_signed(const SpherePolynomial& f, const SpherePolynomial& g, int N,
                                MapKind kind, int k0, double sign) {
  const SectionSpace space = make_space(N, k0);
  const SpherePolynomial bracket = poisson_bracket(f, g);
  const int maxdeg = std::max({f.degree(), g.degree(), bracket.degree()});
  const QuadratureGrid grid = grid_for(space, maxdeg + 2);  // slack for the Q_N correction
  const QuantOperator qf = quantize(kind, space, f, grid);
  const QuantOperator qg = quantize(kind, space, g, grid);
  const QuantOperator qb = quantize(kind, space, bracket, grid);
  QuantOperator defect{space,
                       double(N) * (qf.matrix * qg.matrix - qg.matrix * qf.matrix) +
                           sign * Complex(0.0, 1.0) * qb.matrix};
  return operator_norm(defect);
}

}  // namespace

QuadratureGrid grid_for(const SectionSpace& space, int max_poly_degree) {
  return build_grid(std::max(1, required_exactness(space, max_poly_degree)));
}

LevelScan::LevelScan(std::vector<int> levels_, std::vector<Complex> values_,
                     std::string descriptor_)
    : levels(std::move(levels_)), values(std::move(values_)), descriptor(std::move(descriptor_)) {
  if (levels.size() != values.size())
    throw config_error("LevelScan: levels and values length mismatch");
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw config_error("LevelScan: levels must be strictly increasing");
}

std::string LevelScan::to_csv() const {
  std::string s = "N,value_re,value_im\n";
  for (size_t i = 0; i < levels.size(); ++i)
    s += std::to_string(levels[i]) + "," + format_double(values[i].real()) + "," +
         format_double(values[i].imag()) + "\n";
  return s;
}

Complex PowerFit::evaluate(double N) const {
  Complex acc = 0.0;
  double p = 1.0;
  for (const Complex& c : coefficients) {
    acc += c * p;
    p /= N;
  }
  return acc;
}

std::string PowerFit::to_json() const {
  std::string s = "{\"coefficients\":[";
  for (size_t j = 0; j < coefficients.size(); ++j) {
    if (j) s += ",";
    s += "[" + format_double(coefficients[j].real()) + "," + format_double(coefficients[j].imag()) +
         "]";
  }
  s += "],\"residual\":" + format_double(max_residual) + ",\"levels\":[";
  for (size_t i = 0; i < levels.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(levels[i]);
  }
  return s + "]}";
}

PowerFit fit_inverse_powers(const LevelScan& scan, int k) {
  const int n = static_cast<int>(scan.levels.size());
  if (k < 0) throw config_error("fit_inverse_powers: order must be >= 0");
  if (n < k + 2)
    throw config_error("fit_inverse_powers: need at least " + std::to_string(k + 2) +
                       " levels for order " + std::to_string(k));
  Eigen::MatrixXd A(n, k + 1);
  Eigen::VectorXd re(n), im(n);
  for (int i = 0; i < n; ++i) {
    const double x = 1.0 / scan.levels[i];
    double p = 1.0;
    for (int j = 0; j <= k; ++j) {
      A(i, j) = p;
      p *= x;
    }
    re[i] = scan.values[i].real();
    im[i] = scan.values[i].imag();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < k + 1)
    throw config_error("fit_inverse_powers: rank-deficient Vandermonde system");
  const Eigen::VectorXd cr = qr.solve(re);
  const Eigen::VectorXd ci = qr.solve(im);

  PowerFit fit;
  fit.order = k;
  fit.levels = scan.levels;
  fit.coefficients.resize(k + 1);
  for (int j = 0; j <= k; ++j) fit.coefficients[j] = Complex(cr[j], ci[j]);
  for (int i = 0; i < n; ++i)
    fit.max_residual = std::max(fit.max_residual,
                                std::abs(scan.values[i] - fit.evaluate(scan.levels[i])));
  return fit;
}

double commutator_defect(const SpherePolynomial& f, const SpherePolynomial& g, int N,
                         MapKind kind, int k0) {
  // One-time audit: the implemented sign must be the decaying one.
  static const bool audited = [] {
    const SignAudit audit = audit_commutator_sign({8, 16, 24});
    if (!audit.consistent())
      throw std::logic_error(
          "commutator sign convention audit failed: '+i T_N({f,g})' is not the decaying choice");
    return true;
  }();
  (void)audited;
  return commutator_defect_signed(f, g, N, kind, k0, +1.0);
}

double commutator_defect_opposite_sign(const SpherePolynomial& f, const SpherePolynomial& g,
                                       int N, MapKind kind, int k0) {
  return commutator_defect_signed(f, g, N, kind, k0, -1.0);
}

SignAudit audit_commutator_sign(const std::vector<int>& levels, int k0) {
  SignAudit audit;
  audit.levels = levels;
  const SpherePolynomial u = SpherePolynomial::u();
  const SpherePolynomial v = SpherePolynomial::v();
  for (int N : levels) {
    audit.plus_defects.push_back(commutator_defect_signed(u, v, N, MapKind::toeplitz, k0, +1.0));
    audit.minus_defects.push_back(commutator_defect_signed(u, v, N, MapKind::toeplitz, k0, -1.0));
  }
  audit.plus_decays = strictly_decreasing(audit.plus_defects) &&
                      audit.plus_defects.back() < 0.5 * audit.plus_defects.front();
  audit.minus_decays = strictly_decreasing(audit.minus_defects) &&
                       audit.minus_defects.back() < 0.5 * audit.minus_defects.front();
  return audit;
}

double star_defect(const SpherePolynomial& f, const SpherePolynomial& g,
                   const std::vector<SpherePolynomial>& phis, int k, int N, int k0) {
  if (static_cast<int>(phis.size()) != k + 1)
    throw config_error("star_defect: phis must hold exactly k+1 entries (got " +
                       std::to_string(phis.size()) + " for k = " + std::to_string(k) + ")");
  const SectionSpace space = make_space(N, k0);
  int maxdeg = std::max(f.degree(), g.degree());
  for (const auto& phi : phis) maxdeg = std::max(maxdeg, phi.degree());
  const QuadratureGrid grid = grid_for(space, maxdeg + 2);

  const QuantOperator qf = geometric(space, f, grid);
  const QuantOperator qg = geometric(space, g, grid);
  Eigen::MatrixXcd acc = std::pow(double(N), k) * (qf.matrix * qg.matrix);
  Complex phase(1.0, 0.0);  // (-i)^j
  for (int j = 0; j <= k; ++j) {
    acc -= phase * std::pow(double(N), k - j) * geometric(space, phis[j], grid).matrix;
    phase *= Complex(0.0, -1.0);
  }
  return operator_norm({space, std::move(acc)});
}

PowerFit phi1_antisym_probe(const SpherePolynomial& f, const SpherePolynomial& g,
                            const SpherePoint& x, const std::vector<int>& levels, int k0) {
  if (levels.size() < 3)
    throw config_error("phi1_antisym_probe: need at least 3 levels");
  std::vector<Complex> values;
  values.reserve(levels.size());
  for (int N : levels) {
    const SectionSpace space = make_space(N, k0);
    const QuadratureGrid grid = grid_for(space, std::max(f.degree(), g.degree()));
    const QuantOperator qf = toeplitz(space, f, grid);
    const QuantOperator qg = toeplitz(space, g, grid);
    const QuantOperator comm{space, qf.matrix * qg.matrix - qg.matrix * qf.matrix};
    values.push_back(double(N) * symbol(comm, x));
  }
  const LevelScan scan(levels, std::move(values), "phi1-antisym");
  const int k = std::min<int>(static_cast<int>(levels.size()) - 2, 3);
  return fit_inverse_powers(scan, k);
}

LevelScan norm_scan(const SpherePolynomial& f, const std::vector<int>& levels, MapKind kind,
                    int k0) {
  std::vector<Complex> values;
  values.reserve(levels.size());
  for (int N : levels) {
    const SectionSpace space = make_space(N, k0);
    const QuadratureGrid grid = grid_for(space, f.degree());
    values.emplace_back(operator_norm(quantize(kind, space, f, grid)), 0.0);
  }
  return LevelScan(levels, std::move(values), "norm-scan");
}

LaplacianSignReport laplacian_sign_report(const std::vector<int>& levels) {
  LaplacianSignReport report;
  report.levels = levels;
  const SpherePolynomial u = SpherePolynomial::u();
  const double sup = sup_norm(u, 20000);
  for (int N : levels) {
    const SectionSpace space = make_space(N, 0);
    const QuadratureGrid grid = grid_for(space, 1);
    const Complex half(1.0 / (2.0 * N));
    const double norm_plus = operator_norm(toeplitz(space, u + half * laplacian(u), grid));
    const double norm_minus = operator_norm(toeplitz(space, u - half * laplacian(u), grid));
    report.defect_nonneg.push_back(std::abs(norm_plus - sup));
    report.defect_opposite.push_back(std::abs(norm_minus - sup));
  }
  return report;
}

}  // namespace btq
