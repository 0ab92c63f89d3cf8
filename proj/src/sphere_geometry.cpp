#include "btq/sphere_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

namespace btq {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SpherePoint::SpherePoint(double u_, double v_, double w_) : u(u_), v(v_), w(w_) {
  const double r2 = u * u + v * v + w * w;
  if (std::abs(r2 - 1.0) > 1e-12)
    throw config_error("SpherePoint not on the unit sphere: |u^2+v^2+w^2-1| = " +
                       format_double(std::abs(r2 - 1.0)));
}

SpherePoint chart_point(Complex z) {
  const double r2 = std::norm(z);
  const double s = 1.0 / (1.0 + r2);
  return SpherePoint((1.0 - r2) * s, 2.0 * z.real() * s, 2.0 * z.imag() * s);
}

Complex chart_coordinate(const SpherePoint& p) {
  if (1.0 + p.u < 1e-14)
    throw config_error("chart_coordinate: point is at the chart's singular pole (u = -1)");
  return Complex(p.v, p.w) / (1.0 + p.u);
}

SpherePolynomial SpherePolynomial::constant(Complex c) {
  SpherePolynomial p;
  p.add_term({0, 0, 0}, c);
  return p;
}

SpherePolynomial SpherePolynomial::u() {
  SpherePolynomial p;
  p.add_term({1, 0, 0}, 1.0);
  return p;
}

SpherePolynomial SpherePolynomial::v() {
  SpherePolynomial p;
  p.add_term({0, 1, 0}, 1.0);
  return p;
}

SpherePolynomial SpherePolynomial::w() {
  SpherePolynomial p;
  p.add_term({0, 0, 1}, 1.0);
  return p;
}

SpherePolynomial SpherePolynomial::from_terms(const std::map<Monomial, Complex>& terms) {
  SpherePolynomial p;
  for (const auto& [m, c] : terms) p.add_term(m, c);
  for (const auto& [m, c] : p.terms_)
    if (m.a >= 2) {
      p.canonical_ = false;
      break;
    }
  return p;
}

int SpherePolynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

Complex SpherePolynomial::evaluate(const SpherePoint& p) const {
  Complex acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double x = 1.0;
    for (int i = 0; i < m.a; ++i) x *= p.u;
    for (int i = 0; i < m.b; ++i) x *= p.v;
    for (int i = 0; i < m.c; ++i) x *= p.w;
    acc += c * x;
  }
  return acc;
}

SpherePolynomial SpherePolynomial::conjugate() const {
  SpherePolynomial r;
  r.canonical_ = canonical_;
  for (const auto& [m, c] : terms_) r.terms_[m] = std::conj(c);
  return r;
}

bool SpherePolynomial::is_real(double tol) const {
  for (const auto& [m, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

void SpherePolynomial::add_term(const Monomial& m, Complex c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

SpherePolynomial& SpherePolynomial::operator+=(const SpherePolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  canonical_ = canonical_ && o.canonical_;
  return *this;
}

SpherePolynomial& SpherePolynomial::operator-=(const SpherePolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  canonical_ = canonical_ && o.canonical_;
  return *this;
}

SpherePolynomial operator*(const SpherePolynomial& a, const SpherePolynomial& b) {
  SpherePolynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_)
      r.add_term({ma.a + mb.a, ma.b + mb.b, ma.c + mb.c}, ca * cb);
  return canonicalize(r);
}

SpherePolynomial operator*(Complex s, const SpherePolynomial& p) {
  SpherePolynomial r;
  r.canonical_ = p.canonical_;
  if (s == 0.0) return r;
  for (const auto& [m, c] : p.terms_) r.terms_[m] = s * c;
  return r;
}

double SpherePolynomial::max_coeff_distance(const SpherePolynomial& o) const {
  double d = 0.0;
  for (const auto& [m, c] : terms_) {
    auto it = o.terms_.find(m);
    d = std::max(d, std::abs(c - (it == o.terms_.end() ? Complex(0.0) : it->second)));
  }
  for (const auto& [m, c] : o.terms_)
    if (!terms_.count(m)) d = std::max(d, std::abs(c));
  return d;
}

SpherePolynomial SpherePolynomial::partial(int var) const {
  SpherePolynomial r;
  for (const auto& [m, c] : terms_) {
    Monomial mm = m;
    int e = 0;
    switch (var) {
      case 0: e = m.a; mm.a -= 1; break;
      case 1: e = m.b; mm.b -= 1; break;
      case 2: e = m.c; mm.c -= 1; break;
      default: throw config_error("partial: variable index out of range");
    }
    if (e > 0) r.add_term(mm, double(e) * c);
  }
  r.canonical_ = canonical_;
  return r;
}

SpherePolynomial canonicalize(const SpherePolynomial& p) {
  // Eliminate the highest power of u via u^2 = 1 - v^2 - w^2 until every
  // u-exponent is 0 or 1.
  SpherePolynomial r;
  std::map<Monomial, Complex> pending = p.terms_;
  while (!pending.empty()) {
    auto it = pending.begin();
    Monomial m = it->first;
    Complex c = it->second;
    pending.erase(it);
    if (c == 0.0) continue;
    if (m.a <= 1) {
      r.add_term(m, c);
      continue;
    }
    // u^a -> u^(a-2) * (1 - v^2 - w^2)
    auto push = [&pending](const Monomial& mm, Complex cc) {
      auto [jt, inserted] = pending.try_emplace(mm, cc);
      if (!inserted) {
        jt->second += cc;
        if (jt->second == 0.0) pending.erase(jt);
      }
    };
    push({m.a - 2, m.b, m.c}, c);
    push({m.a - 2, m.b + 2, m.c}, -c);
    push({m.a - 2, m.b, m.c + 2}, -c);
  }
  r.canonical_ = true;
  return r;
}

SpherePolynomial poisson_bracket(const SpherePolynomial& f, const SpherePolynomial& g) {
  const SpherePolynomial fu = f.partial(0), fv = f.partial(1), fw = f.partial(2);
  const SpherePolynomial gu = g.partial(0), gv = g.partial(1), gw = g.partial(2);
  SpherePolynomial br = SpherePolynomial::w() * (fu * gv - fv * gu) +
                        SpherePolynomial::u() * (fv * gw - fw * gv) +
                        SpherePolynomial::v() * (fw * gu - fu * gw);
  return canonicalize(Complex(2.0) * br);
}

SpherePolynomial laplacian(const SpherePolynomial& f) {
  // 2 * (sum_d d(d+1) f_d  -  flat Laplacian of f), restricted to the sphere.
  SpherePolynomial r;
  for (const auto& [m, c] : f.terms()) {
    const double d = m.degree();
    std::map<Monomial, Complex> t{{m, c * d * (d + 1.0)}};
    r += SpherePolynomial::from_terms(t);
  }
  for (int var = 0; var < 3; ++var) r -= f.partial(var).partial(var);
  return canonicalize(Complex(2.0) * r);
}

Complex ChartForm::evaluate(Complex z) const {
  const Complex zb = std::conj(z);
  Complex num = 0.0;
  for (const auto& [jk, c] : numerator) {
    Complex t = c;
    for (int i = 0; i < jk.first; ++i) t *= z;
    for (int i = 0; i < jk.second; ++i) t *= zb;
    num += t;
  }
  return num / std::pow(1.0 + std::norm(z), denom_power);
}

namespace {

using ChartPoly = std::map<std::pair<int, int>, Complex>;

void chart_add(ChartPoly& p, std::pair<int, int> key, Complex c) {
  if (c == 0.0) return;
  auto [it, inserted] = p.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) p.erase(it);
  }
}

ChartPoly chart_mul(const ChartPoly& a, const ChartPoly& b) {
  ChartPoly r;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b)
      chart_add(r, {ka.first + kb.first, ka.second + kb.second}, ca * cb);
  return r;
}

ChartPoly chart_pow(const ChartPoly& base, int n) {
  ChartPoly r{{{0, 0}, 1.0}};
  for (int i = 0; i < n; ++i) r = chart_mul(r, base);
  return r;
}

}  // namespace

ChartForm to_chart(const SpherePolynomial& f) {
  // u = (1 - z zbar)/(1 + z zbar), v = (z + zbar)/(1 + z zbar),
  // w = -i (z - zbar)/(1 + z zbar); common denominator (1+z zbar)^deg(f).
  const int D = f.degree();
  const ChartPoly nu{{{0, 0}, 1.0}, {{1, 1}, -1.0}};
  const ChartPoly nv{{{1, 0}, 1.0}, {{0, 1}, 1.0}};
  const ChartPoly nw{{{1, 0}, Complex(0.0, -1.0)}, {{0, 1}, Complex(0.0, 1.0)}};
  const ChartPoly den{{{0, 0}, 1.0}, {{1, 1}, 1.0}};

  ChartForm out;
  out.denom_power = D;
  for (const auto& [m, c] : f.terms()) {
    ChartPoly t{{{0, 0}, c}};
    t = chart_mul(t, chart_pow(nu, m.a));
    t = chart_mul(t, chart_pow(nv, m.b));
    t = chart_mul(t, chart_pow(nw, m.c));
    t = chart_mul(t, chart_pow(den, D - m.degree()));
    for (const auto& [k, cc] : t) chart_add(out.numerator, k, cc);
  }
  return out;
}

ChartForm ChartForm::d_z() const {
  // d/dz [ N / (1+z zbar)^d ] = [ dN/dz (1+z zbar) - d zbar N ] / (1+z zbar)^(d+1)
  ChartPoly dN;
  for (const auto& [jk, c] : numerator)
    if (jk.first > 0) chart_add(dN, {jk.first - 1, jk.second}, double(jk.first) * c);
  const ChartPoly den{{{0, 0}, 1.0}, {{1, 1}, 1.0}};
  ChartPoly top = chart_mul(dN, den);
  for (const auto& [jk, c] : numerator)
    chart_add(top, {jk.first, jk.second + 1}, -double(denom_power) * c);
  ChartForm out;
  out.numerator = std::move(top);
  out.denom_power = denom_power + 1;
  return out;
}

ChartForm ChartForm::d_zbar() const {
  ChartPoly dN;
  for (const auto& [jk, c] : numerator)
    if (jk.second > 0) chart_add(dN, {jk.first, jk.second - 1}, double(jk.second) * c);
  const ChartPoly den{{{0, 0}, 1.0}, {{1, 1}, 1.0}};
  ChartPoly top = chart_mul(dN, den);
  for (const auto& [jk, c] : numerator)
    chart_add(top, {jk.first + 1, jk.second}, -double(denom_power) * c);
  ChartForm out;
  out.numerator = std::move(top);
  out.denom_power = denom_power + 1;
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 && iter >= 2) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

QuadratureGrid build_grid(int order) {
  if (order < 1) throw config_error("build_grid: order must be >= 1");
  const int n_polar = (order + 2) / 2;     // 2*n_polar - 1 >= order
  const int n_azimuth = order + 1;         // kills harmonics up to |k| = order
  std::vector<double> gl_nodes, gl_weights;
  gauss_legendre(n_polar, gl_nodes, gl_weights);

  QuadratureGrid grid;
  grid.exactness = std::min(2 * n_polar - 1, n_azimuth - 1);
  grid.nodes.reserve(size_t(n_polar) * n_azimuth);
  grid.weights.reserve(size_t(n_polar) * n_azimuth);
  for (int i = 0; i < n_polar; ++i) {
    const double u = gl_nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double wu = gl_weights[i] / (2.0 * n_azimuth);
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_azimuth;
      grid.nodes.emplace_back(u, s * std::cos(phi), s * std::sin(phi));
      grid.weights.push_back(wu);
    }
  }
  return grid;
}

Complex integrate(const QuadratureGrid& grid, const SpherePolynomial& f) {
  if (f.degree() > grid.exactness)
    throw exactness_error("integrate: polynomial degree " + std::to_string(f.degree()) +
                          " exceeds grid exactness " + std::to_string(grid.exactness));
  Complex acc = 0.0;
  for (size_t i = 0; i < grid.nodes.size(); ++i)
    acc += grid.weights[i] * f.evaluate(grid.nodes[i]);
  return acc;
}

double sup_norm(const SpherePolynomial& f, int samples) {
  if (samples < 100) throw config_error("sup_norm: need at least 100 samples");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double u = 1.0 - 2.0 * (i + 0.5) / samples;
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double phi = golden_angle * i;
    SpherePoint p(u, s * std::cos(phi), s * std::sin(phi));
    best = std::max(best, std::abs(f.evaluate(p)));
  }
  return best;
}

std::string SpherePolynomial::to_json() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) s += ",";
    first = false;
    s += "\"" + std::to_string(m.a) + "," + std::to_string(m.b) + "," + std::to_string(m.c) +
         "\":[" + format_double(c.real()) + "," + format_double(c.imag()) + "]";
  }
  return s + "}";
}

SpherePolynomial SpherePolynomial::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object()) throw config_error("SpherePolynomial JSON must be an object");
  std::map<Monomial, Complex> terms;
  for (const auto& [key, val] : j.items()) {
    Monomial m;
    if (std::sscanf(key.c_str(), "%d,%d,%d", &m.a, &m.b, &m.c) != 3 || m.a < 0 || m.b < 0 ||
        m.c < 0)
      throw config_error("bad monomial key '" + key + "'");
    if (!val.is_array() || val.size() != 2)
      throw config_error("coefficient for '" + key + "' must be [re, im]");
    terms[m] += Complex(val[0].get<double>(), val[1].get<double>());
  }
  return from_terms(terms);
}

}  // namespace btq
