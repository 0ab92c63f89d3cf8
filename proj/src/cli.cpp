#include "btq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <thread>

#include <json.hpp>

#include "btq/asymptotics.hpp"
#include "btq/index_cohomology.hpp"
#include "btq/moyal.hpp"

namespace btq {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Expression mini-language

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  SpherePolynomial parse() {
    SpherePolynomial result = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw config_error("expression: unexpected trailing input at '" + rest() + "'");
    return result;
  }

 private:
  SpherePolynomial parse_expr() {
    SpherePolynomial acc = parse_term();
    for (;;) {
      skip_ws();
      if (match('+'))
        acc += parse_term();
      else if (match('-'))
        acc -= parse_term();
      else
        return acc;
    }
  }

  SpherePolynomial parse_term() {
    SpherePolynomial acc = parse_factor();
    for (;;) {
      skip_ws();
      if (match('*'))
        acc = acc * parse_factor();
      else
        return acc;
    }
  }

  SpherePolynomial parse_factor() {
    SpherePolynomial base = parse_base();
    skip_ws();
    if (match('^')) {
      skip_ws();
      const int e = parse_uint();
      SpherePolynomial acc = SpherePolynomial::constant(1.0);
      for (int i = 0; i < e; ++i) acc = acc * base;
      return acc;
    }
    return base;
  }

  SpherePolynomial parse_base() {
    skip_ws();
    if (match('-')) return Complex(-1.0) * parse_factor();
    if (match('(')) {
      SpherePolynomial inner = parse_expr();
      skip_ws();
      if (!match(')')) throw config_error("expression: missing ')' at '" + rest() + "'");
      return inner;
    }
    if (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == 'u' || c == 'v' || c == 'w') {
        ++pos_;
        if (c == 'u') return SpherePolynomial::u();
        if (c == 'v') return SpherePolynomial::v();
        return SpherePolynomial::w();
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        const long num = parse_uint();
        skip_ws();
        if (match('/')) {
          skip_ws();
          const long den = parse_uint();
          if (den == 0) throw config_error("expression: zero denominator");
          return SpherePolynomial::constant(double(num) / double(den));
        }
        return SpherePolynomial::constant(double(num));
      }
    }
    throw config_error("expression: expected u, v, w, a rational constant or '(' at '" + rest() +
                       "'");
  }

  long parse_uint() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw config_error("expression: expected an integer at '" + rest() + "'");
    return std::stol(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool match(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string rest() const { return text_.substr(std::min(pos_, text_.size())); }

  const std::string& text_;
  size_t pos_ = 0;
};

const std::set<std::string> kCommands = {
    "gram",       "toeplitz",   "commutator-scan", "star-defect", "phi1-probe",
    "norm-scan",  "moyal-check", "index-check",    "beta-check",  "theta"};

ClassicalIdempotent idempotent_by_name(const std::string& name) {
  if (name == "trivial-1") return ClassicalIdempotent::trivial(1);
  if (name == "trivial-2") return ClassicalIdempotent::trivial(2);
  if (name == "bott+1") return ClassicalIdempotent::bott(+1);
  if (name == "bott-1") return ClassicalIdempotent::bott(-1);
  if (name == "zero") return ClassicalIdempotent::zero();
  throw config_error("unknown idempotent '" + name +
                     "' (expected trivial-1, trivial-2, bott+1, bott-1 or zero)");
}

void write_artifact(const RunConfig& config, const std::string& name, const std::string& body) {
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  std::ofstream out(fs::path(config.output_dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + name + " under " + config.output_dir);
  out << body;
}

const SpherePolynomial& named_function(const RunConfig& config, const std::string& name) {
  auto it = config.functions.find(name);
  if (it == config.functions.end())
    throw config_error("command '" + config.command + "' needs a function named '" + name + "'");
  return it->second;
}

SpherePolynomial function_or(const RunConfig& config, const std::string& name,
                             const char* fallback_expr) {
  auto it = config.functions.find(name);
  return it != config.functions.end() ? it->second : parse_polynomial_expr(fallback_expr);
}

// Run fn(i) for i in [0, count) on up to thread_cap() threads.
void parallel_for_index(int count, const std::function<void(int)>& fn) {
  const int threads = std::min(thread_cap(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::string laurent_json(const LaurentPoly& p) {
  std::string s = "{";
  bool first = true;
  for (const auto& [power, c] : p.coefficients()) {
    if (!first) s += ",";
    first = false;
    const std::string key = power == 0 ? "1" : "hbar^" + std::to_string(power);
    s += "\"" + key + "\":" + format_double(c.get_d());
  }
  return s + "}";
}

// Deterministic probe points with all three coordinates bounded away from 0.
std::vector<SpherePoint> default_probe_points() {
  std::vector<SpherePoint> pts;
  const double a = 0.6, b = 0.64, c = 0.48;  // a^2 + b^2 + c^2 = 1
  for (int s = 0; s < 8; ++s)
    pts.emplace_back(s & 1 ? -a : a, s & 2 ? -b : b, s & 4 ? -c : c);
  pts.emplace_back(b, c, a);
  pts.emplace_back(c, a, b);
  return pts;
}

// ---------------------------------------------------------------------------
// Command runners (return process exit code)

int run_theta(const RunConfig& config) {
  const CohoClass theta = theta_class(config.k0);
  std::string body = "{\"schema_version\":1,\"command\":\"theta\",\"k0\":" +
                     std::to_string(config.k0) +
                     ",\"theta_deg2\":" + laurent_json(theta.deg2) + "}\n";
  write_artifact(config, "theta.json", body);
  std::printf("theta k0=%d: %s\n", config.k0, theta.deg2.str().c_str());
  return 0;
}

int run_gram(const RunConfig& config) {
  const double rel_tol = config.tolerance("gram_rel", 1e-10);
  bool pass = true;
  std::string body = "{\"schema_version\":1,\"command\":\"gram\",\"spaces\":[";
  for (size_t i = 0; i < config.levels.size(); ++i) {
    const SectionSpace space = make_space(config.levels[i], config.k0);
    if (i) body += ",";
    body += space.to_json();
    if (space.empty()) continue;
    const int M = space.total_degree();
    // Quadrature cross-check of the closed form, in the same normalization.
    const QuadratureGrid grid = grid_for(space, 0);
    const SectionSpace probe = space;
    for (int j = 0; j <= M; ++j) {
      // |z|^(2j) (1+|z|^2)^(-M) is the degree-M sphere polynomial
      // ((1-u)/2)^j ((1+u)/2)^(M-j); integrate and rescale by M+1.
      const SpherePolynomial um = SpherePolynomial::constant(0.5) +
                                  Complex(-0.5) * SpherePolynomial::u();
      const SpherePolynomial up = SpherePolynomial::constant(0.5) +
                                  Complex(0.5) * SpherePolynomial::u();
      SpherePolynomial term = SpherePolynomial::constant(1.0);
      for (int t = 0; t < j; ++t) term = term * um;
      for (int t = 0; t < M - j; ++t) term = term * up;
      const double quad = (M + 1) * integrate(grid, term).real();
      const double closed = probe.gram_diag()[j];
      if (std::abs(quad - closed) > rel_tol * closed) pass = false;
      if (probe.gram_diag()[j] != probe.gram_diag()[M - j]) pass = false;
    }
  }
  body += std::string("],\"pass\":") + (pass ? "true" : "false") + "}\n";
  write_artifact(config, "gram.json", body);
  std::printf("gram: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_toeplitz(const RunConfig& config) {
  auto functions = config.functions;
  if (functions.empty()) functions.emplace("f", parse_polynomial_expr("u"));
  bool pass = true;
  std::string report = "{\"schema_version\":1,\"command\":\"toeplitz\",\"checks\":[";
  bool first = true;
  for (const auto& [name, f] : functions) {
    for (int N : config.levels) {
      const SectionSpace space = make_space(N, config.k0);
      const QuadratureGrid grid = grid_for(space, f.degree());
      const QuantOperator op = quantize(config.map_kind, space, f, grid);
      write_artifact(config, "op_" + name + "_N" + std::to_string(N) + ".json", op.to_json());
      write_artifact(config, "op_" + name + "_N" + std::to_string(N) + ".csv", op.to_csv());
      const QuantOperator unit = quantize(config.map_kind, space,
                                          SpherePolynomial::constant(1.0), grid);
      const double unit_err =
          (unit.matrix - Eigen::MatrixXcd::Identity(space.dimension(), space.dimension()))
              .cwiseAbs()
              .maxCoeff();
      const double herm_err = f.is_real(0.0)
                                  ? (op.matrix - op.matrix.adjoint().eval()).cwiseAbs().maxCoeff()
                                  : 0.0;
      const double contraction =
          operator_norm(op) - sup_norm(f, 20000) * (1.0 + config.tolerance("norm_rel", 1e-10));
      const bool ok = unit_err <= 1e-12 && herm_err <= 1e-12 &&
                      (config.map_kind != MapKind::toeplitz || contraction <= 0.0);
      pass = pass && ok;
      if (!first) report += ",";
      first = false;
      report += "{\"function\":\"" + name + "\",\"N\":" + std::to_string(N) +
                ",\"unit_error\":" + format_double(unit_err) +
                ",\"hermiticity_error\":" + format_double(herm_err) +
                ",\"pass\":" + (ok ? "true" : "false") + "}";
    }
  }
  report += std::string("],\"pass\":") + (pass ? "true" : "false") + "}\n";
  write_artifact(config, "toeplitz_report.json", report);
  std::printf("toeplitz: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_commutator_scan(const RunConfig& config) {
  const SpherePolynomial f = function_or(config, "f", "u");
  const SpherePolynomial g = function_or(config, "g", "v");
  const int n = static_cast<int>(config.levels.size());
  std::vector<Complex> values(n);
  parallel_for_index(n, [&](int i) {
    values[i] = commutator_defect(f, g, config.levels[i], config.map_kind, config.k0);
  });
  const LevelScan scan(config.levels, values, "commutator-defect");
  write_artifact(config, "commutator_scan.csv", scan.to_csv());
  const PowerFit fit = fit_inverse_powers(scan, std::min(n - 2, 2));
  write_artifact(config, "commutator_fit.json", fit.to_json() + "\n");

  const SignAudit audit = audit_commutator_sign(config.levels, config.k0);
  bool decreasing = true;
  for (int i = 1; i < n; ++i)
    if (!(values[i].real() < values[i - 1].real())) decreasing = false;
  const bool pass = audit.consistent() && decreasing;
  std::string report = std::string("{\"schema_version\":1,\"command\":\"commutator-scan\"") +
                       ",\"sign_audit_consistent\":" + (audit.consistent() ? "true" : "false") +
                       ",\"strictly_decreasing\":" + (decreasing ? "true" : "false") +
                       ",\"fit_constant\":" + format_double(std::abs(fit.coefficients[0])) +
                       ",\"pass\":" + (pass ? "true" : "false") + "}\n";
  write_artifact(config, "commutator_report.json", report);
  std::printf("commutator-scan: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_star_defect(const RunConfig& config) {
  const SpherePolynomial f = function_or(config, "f", "u");
  const SpherePolynomial g = function_or(config, "g", "v");
  std::vector<SpherePolynomial> phis;
  if (config.phis)
    phis = *config.phis;
  else
    phis.push_back(f * g);
  const int k = static_cast<int>(phis.size()) - 1;
  const int n = static_cast<int>(config.levels.size());
  std::vector<Complex> values(n);
  parallel_for_index(n, [&](int i) {
    values[i] = star_defect(f, g, phis, k, config.levels[i], config.k0);
  });
  const LevelScan scan(config.levels, values, "star-defect");
  write_artifact(config, "star_defect.csv", scan.to_csv());
  // Fit N * defect to estimate the constant C in defect <= C/N.
  std::vector<Complex> scaled(values);
  for (int i = 0; i < n; ++i) scaled[i] *= double(config.levels[i]);
  const PowerFit fit = fit_inverse_powers(LevelScan(config.levels, scaled, "scaled"),
                                          std::min(n - 2, 2));
  write_artifact(config, "star_defect_fit.json", fit.to_json() + "\n");

  const double jitter = config.tolerance("monotone_jitter", 0.05);
  bool monotone = true;
  for (int i = 1; i < n; ++i)
    if (values[i].real() > values[i - 1].real() * (1.0 + jitter)) monotone = false;
  const bool pass = monotone;
  std::string report = std::string("{\"schema_version\":1,\"command\":\"star-defect\",\"k\":") +
                       std::to_string(k) + ",\"fitted_C\":" +
                       format_double(std::abs(fit.coefficients[0])) +
                       ",\"monotone\":" + (monotone ? "true" : "false") +
                       ",\"pass\":" + (pass ? "true" : "false") + "}\n";
  write_artifact(config, "star_defect_report.json", report);
  std::printf("star-defect: %s (fitted C = %g)\n", pass ? "pass" : "FAIL",
              std::abs(fit.coefficients[0]));
  return pass ? 0 : 2;
}

int run_phi1_probe(const RunConfig& config) {
  const SpherePolynomial f = function_or(config, "f", "u");
  const SpherePolynomial g = function_or(config, "g", "v");
  const SpherePolynomial bracket = poisson_bracket(f, g);
  const double rel_tol = config.tolerance("phi1_rel", 0.05);
  const std::vector<SpherePoint> points = default_probe_points();
  bool pass = true;
  std::string body = "{\"schema_version\":1,\"command\":\"phi1-probe\",\"points\":[";
  for (size_t i = 0; i < points.size(); ++i) {
    const PowerFit fit = phi1_antisym_probe(f, g, points[i], config.levels, config.k0);
    const Complex expected = Complex(0.0, -1.0) * bracket.evaluate(points[i]);
    const double err = std::abs(fit.coefficients[0] - expected);
    const double scale = std::max(std::abs(expected), 1e-12);
    const bool ok = err <= rel_tol * scale;
    pass = pass && ok;
    if (i) body += ",";
    body += "{\"point\":[" + format_double(points[i].u) + "," + format_double(points[i].v) + "," +
            format_double(points[i].w) + "],\"constant\":[" +
            format_double(fit.coefficients[0].real()) + "," +
            format_double(fit.coefficients[0].imag()) + "],\"expected\":[" +
            format_double(expected.real()) + "," + format_double(expected.imag()) +
            "],\"rel_error\":" + format_double(err / scale) + ",\"pass\":" +
            (ok ? "true" : "false") + "}";
  }
  body += std::string("],\"pass\":") + (pass ? "true" : "false") + "}\n";
  write_artifact(config, "phi1_probe.json", body);
  std::printf("phi1-probe: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_norm_scan(const RunConfig& config) {
  const SpherePolynomial f = function_or(config, "f", "u");
  const LevelScan scan = norm_scan(f, config.levels, config.map_kind, config.k0);
  write_artifact(config, "norm_scan.csv", scan.to_csv());
  const double sup = sup_norm(f, 20000);
  const double first = std::abs(scan.values.front().real() - sup);
  const double last = std::abs(scan.values.back().real() - sup);
  const bool pass = last <= first + 1e-12;
  std::string report = std::string("{\"schema_version\":1,\"command\":\"norm-scan\"") +
                       ",\"sup_norm\":" + format_double(sup) +
                       ",\"first_gap\":" + format_double(first) +
                       ",\"last_gap\":" + format_double(last) + ",\"pass\":" +
                       (pass ? "true" : "false") + "}\n";
  write_artifact(config, "norm_report.json", report);
  std::printf("norm-scan: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_moyal_check(const RunConfig& config) {
  const int K = config.truncation;
  std::mt19937 rng(0x5eed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> pick_n(1, 2);
  std::uniform_int_distribution<int> nterms(2, 5);

  auto random_poly = [&](int n) {
    FormalSeries f(n, K);
    std::uniform_int_distribution<int> expo(0, 4);
    for (int t = nterms(rng); t > 0; --t) {
      std::vector<int> e(2 * n, 0);
      int total = 0;
      for (int v = 0; v < 2 * n; ++v) {
        e[v] = expo(rng);
        total += e[v];
        if (total > 4) {
          e[v] -= total - 4;
          total = 4;
        }
      }
      f.add_term(e, 0, GaussianRational(make_rational(coeff(rng))));
    }
    return f;
  };

  bool assoc_ok = true, unit_ok = true, conj_ok = true, linear_ok = true, comm_ok = true;
  const int triples = 100;
  for (int t = 0; t < triples; ++t) {
    const int n = pick_n(rng);
    const FormalSeries f = random_poly(n), g = random_poly(n), h = random_poly(n);
    if (!associator(f, g, h, K).is_zero()) assoc_ok = false;
    const FormalSeries one = FormalSeries::one(n, K);
    if (!(moyal_product(f, one, K) == f.truncate(K)) ||
        !(moyal_product(one, f, K) == f.truncate(K)))
      unit_ok = false;
    if (!(star_conjugate(moyal_product(f, g, K)) ==
          moyal_product(star_conjugate(g), star_conjugate(f), K)))
      conj_ok = false;
    const FormalSeries hb = FormalSeries::hbar(n, K);
    if (!(moyal_product(mul_pointwise(hb, f), g, K) ==
          mul_pointwise(hb, moyal_product(f, g, K)).truncate(K)))
      linear_ok = false;
    // hbar^1 coefficient of the commutator must be -i {f,g} (flat bracket).
    FormalSeries flat = FormalSeries::zero(n, K);
    for (int i = 0; i < n; ++i)
      flat += mul_pointwise(f.partial(2 * i), g.partial(2 * i + 1)) -
              mul_pointwise(f.partial(2 * i + 1), g.partial(2 * i));
    const FormalSeries comm = star_commutator(f, g, K);
    FormalSeries expected = GaussianRational(Rational(0), Rational(-1)) * flat;
    FormalSeries h1 = FormalSeries::zero(n, K);
    for (const auto& [key, c] : comm.terms())
      if (key.hbar == 1) h1.add_term(key.exps, 0, c);
    if (!(h1 == expected)) comm_ok = false;
  }
  const bool pass = assoc_ok && unit_ok && conj_ok && linear_ok && comm_ok;
  std::string report =
      std::string("{\"schema_version\":1,\"command\":\"moyal-check\",\"triples\":") +
      std::to_string(triples) + ",\"K\":" + std::to_string(K) +
      ",\"max_associator_coeff\":\"" + (assoc_ok ? "0" : "nonzero") + "\"" +
      ",\"unit_law\":" + (unit_ok ? "true" : "false") +
      ",\"conjugation_law\":" + (conj_ok ? "true" : "false") +
      ",\"hbar_linearity\":" + (linear_ok ? "true" : "false") +
      ",\"commutator_leading_order\":" + (comm_ok ? "true" : "false") +
      ",\"pass\":" + (pass ? "true" : "false") + "}\n";
  write_artifact(config, "moyal_report.json", report);
  std::printf("moyal-check: %s (max |associator coeff| = %s)\n", pass ? "pass" : "FAIL",
              assoc_ok ? "0" : "nonzero");
  return pass ? 0 : 2;
}

int run_index_check(const RunConfig& config) {
  std::vector<std::string> names = config.idempotents;
  if (names.empty()) names = {"trivial-1", "bott+1"};
  bool pass = true;
  std::string body = "{\"schema_version\":1,\"command\":\"index-check\",\"reports\":[";
  std::string csv = "idempotent,N,k0,measured,predicted,residual,pass\n";
  bool first = true;
  for (const auto& name : names) {
    const ClassicalIdempotent e = idempotent_by_name(name);
    for (int N : config.levels) {
      const IndexReport report = index_check(N, config.k0, e, config.map_kind);
      pass = pass && report.pass;
      if (!first) body += ",";
      first = false;
      body += report.to_json();
      csv += name + "," + std::to_string(N) + "," + std::to_string(config.k0) + "," +
             format_double(report.measured) + "," + std::to_string(report.predicted) + "," +
             format_double(report.residual) + "," + (report.pass ? "true" : "false") + "\n";
    }
  }
  body += std::string("],\"pass\":") + (pass ? "true" : "false") + "}\n";
  write_artifact(config, "index_report.json", body);
  write_artifact(config, "index_traces.csv", csv);
  std::printf("index-check: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : 2;
}

int run_beta_check(const RunConfig& config) {
  std::vector<std::string> names = config.idempotents;
  if (names.empty()) names = {"trivial-1", "bott+1"};
  std::vector<ClassicalIdempotent> idempotents;
  for (const auto& name : names) idempotents.push_back(idempotent_by_name(name));
  const BetaReport report = beta_check(config.levels, config.k0, idempotents, config.map_kind);
  std::string body = report.to_json();
  body.insert(1, "\"schema_version\":1,\"command\":\"beta-check\",");
  write_artifact(config, "beta_report.json", body + "\n");
  write_artifact(config, "beta_traces.csv", report.traces_csv());
  std::printf("beta-check: %s\n", report.pass ? "pass" : "FAIL");
  return report.pass ? 0 : 2;
}

}  // namespace

int thread_cap() {
  const char* env = std::getenv("BTQ_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

SpherePolynomial parse_polynomial_expr(const std::string& text) {
  return ExprParser(text).parse();
}

RunConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    throw config_error(std::string("malformed JSON config: ") + ex.what());
  }
  if (!j.is_object()) throw config_error("config must be a JSON object");

  static const std::set<std::string> known = {"command",    "levels",     "k0",
                                              "K",          "functions",  "phis",
                                              "idempotents", "map",       "output_dir",
                                              "tolerances"};
  for (const auto& [key, val] : j.items())
    if (!known.count(key)) throw config_error("unknown config key '" + key + "'");

  RunConfig config;
  if (j.contains("command")) {
    config.command = j["command"].get<std::string>();
    if (!kCommands.count(config.command))
      throw config_error("unknown command '" + config.command + "'");
  }
  if (j.contains("levels")) {
    config.levels = j["levels"].get<std::vector<int>>();
    if (config.levels.empty()) throw config_error("levels must be nonempty");
    for (int N : config.levels)
      if (N <= 0) throw config_error("levels must be positive");
    for (size_t i = 1; i < config.levels.size(); ++i)
      if (config.levels[i] <= config.levels[i - 1])
        throw config_error("levels not increasing");
  }
  if (j.contains("k0")) config.k0 = j["k0"].get<int>();
  if (j.contains("K")) {
    config.truncation = j["K"].get<int>();
    if (config.truncation < 0) throw config_error("K must be >= 0");
  }
  if (j.contains("functions")) {
    if (!j["functions"].is_object()) throw config_error("functions must be an object");
    for (const auto& [name, expr] : j["functions"].items()) {
      try {
        config.functions.emplace(name, parse_polynomial_expr(expr.get<std::string>()));
      } catch (const config_error& ex) {
        throw config_error("functions." + name + ": " + ex.what());
      }
    }
  }
  if (j.contains("phis")) {
    std::vector<SpherePolynomial> phis;
    for (const auto& expr : j["phis"]) phis.push_back(parse_polynomial_expr(expr.get<std::string>()));
    config.phis = std::move(phis);
  }
  if (j.contains("idempotents")) {
    config.idempotents = j["idempotents"].get<std::vector<std::string>>();
    for (const auto& name : config.idempotents) idempotent_by_name(name);  // validate
  }
  if (j.contains("map")) {
    const std::string kind = j["map"].get<std::string>();
    if (kind == "toeplitz")
      config.map_kind = MapKind::toeplitz;
    else if (kind == "geometric")
      config.map_kind = MapKind::geometric;
    else
      throw config_error("map must be 'toeplitz' or 'geometric'");
  }
  if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw config_error("tolerances must be an object");
    for (const auto& [name, val] : j["tolerances"].items())
      config.tolerances[name] = val.get<double>();
  }
  return config;
}

int run(const RunConfig& config) {
  try {
    if (config.command == "theta") return run_theta(config);
    if (config.command == "gram") return run_gram(config);
    if (config.command == "toeplitz") return run_toeplitz(config);
    if (config.command == "commutator-scan") return run_commutator_scan(config);
    if (config.command == "star-defect") return run_star_defect(config);
    if (config.command == "phi1-probe") return run_phi1_probe(config);
    if (config.command == "norm-scan") return run_norm_scan(config);
    if (config.command == "moyal-check") return run_moyal_check(config);
    if (config.command == "index-check") return run_index_check(config);
    if (config.command == "beta-check") return run_beta_check(config);
    throw config_error(config.command.empty() ? "no command given"
                                              : "unknown command '" + config.command + "'");
  } catch (const config_error&) {
    throw;  // usage error, exit 1 at the entry point
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "check failed: %s\n", ex.what());
    return 2;
  }
}

}  // namespace btq
