#include "btq/moyal.hpp"

#include <algorithm>

#include <json.hpp>

namespace btq {

namespace {

void check_same_algebra(const FormalSeries& a, const FormalSeries& b, const char* who) {
  if (a.pairs() != b.pairs())
    throw config_error(std::string(who) + ": operands live over different numbers of pairs (" +
                       std::to_string(a.pairs()) + " vs " + std::to_string(b.pairs()) + ")");
}

Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

FormalSeries::FormalSeries(int n, int K, int hbar_min) : n_(n), K_(K), hbar_min_(hbar_min) {
  if (n < 1) throw config_error("FormalSeries: need at least one (x,p) pair");
  if (K < 0) throw config_error("FormalSeries: truncation K must be >= 0");
}

FormalSeries FormalSeries::one(int n, int K) {
  FormalSeries f(n, K);
  f.add_term(std::vector<int>(2 * n, 0), 0, GaussianRational(1));
  return f;
}

FormalSeries FormalSeries::x(int n, int K, int i) {
  if (i < 0 || i >= n) throw config_error("FormalSeries::x: pair index out of range");
  FormalSeries f(n, K);
  std::vector<int> e(2 * n, 0);
  e[2 * i] = 1;
  f.add_term(std::move(e), 0, GaussianRational(1));
  return f;
}

FormalSeries FormalSeries::p(int n, int K, int i) {
  if (i < 0 || i >= n) throw config_error("FormalSeries::p: pair index out of range");
  FormalSeries f(n, K);
  std::vector<int> e(2 * n, 0);
  e[2 * i + 1] = 1;
  f.add_term(std::move(e), 0, GaussianRational(1));
  return f;
}

FormalSeries FormalSeries::hbar(int n, int K) {
  FormalSeries f(n, K);
  f.add_term(std::vector<int>(2 * n, 0), 1, GaussianRational(1));
  return f;
}

FormalSeries FormalSeries::term(int n, int K, std::vector<int> exps, int hbar_power,
                                GaussianRational coeff, int hbar_min) {
  FormalSeries f(n, K, hbar_min);
  f.add_term(std::move(exps), hbar_power, coeff);
  return f;
}

void FormalSeries::add_term(std::vector<int> exps, int hbar_power, const GaussianRational& c) {
  if (static_cast<int>(exps.size()) != 2 * n_)
    throw config_error("FormalSeries::add_term: exponent vector has wrong length");
  if (hbar_power < hbar_min_)
    throw config_error("FormalSeries::add_term: hbar power " + std::to_string(hbar_power) +
                       " below declared minimum " + std::to_string(hbar_min_));
  if (c.is_zero() || hbar_power > K_) return;
  WeylKey key{std::move(exps), hbar_power};
  auto [it, inserted] = terms_.try_emplace(std::move(key), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int FormalSeries::var_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) {
    int s = 0;
    for (int e : k.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

int FormalSeries::min_hbar_present() const {
  int m = hbar_min_;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (first || k.hbar < m) m = k.hbar;
    first = false;
  }
  return m;
}

GaussianRational FormalSeries::coefficient(const std::vector<int>& exps, int hbar_power) const {
  auto it = terms_.find(WeylKey{exps, hbar_power});
  return it == terms_.end() ? GaussianRational() : it->second;
}

FormalSeries& FormalSeries::operator+=(const FormalSeries& o) {
  check_same_algebra(*this, o, "FormalSeries::operator+=");
  K_ = std::min(K_, o.K_);
  hbar_min_ = std::min(hbar_min_, o.hbar_min_);
  for (const auto& [k, c] : o.terms_)
    if (k.hbar <= K_) add_term(k.exps, k.hbar, c);
  // re-truncate what we already held
  std::erase_if(terms_, [this](const auto& kv) { return kv.first.hbar > K_; });
  return *this;
}

FormalSeries& FormalSeries::operator-=(const FormalSeries& o) {
  check_same_algebra(*this, o, "FormalSeries::operator-=");
  K_ = std::min(K_, o.K_);
  hbar_min_ = std::min(hbar_min_, o.hbar_min_);
  for (const auto& [k, c] : o.terms_)
    if (k.hbar <= K_) add_term(k.exps, k.hbar, -c);
  std::erase_if(terms_, [this](const auto& kv) { return kv.first.hbar > K_; });
  return *this;
}

FormalSeries operator*(const GaussianRational& s, const FormalSeries& f) {
  FormalSeries r(f.n_, f.K_, f.hbar_min_);
  if (s.is_zero()) return r;
  for (const auto& [k, c] : f.terms_) r.terms_[k] = s * c;
  return r;
}

FormalSeries mul_pointwise(const FormalSeries& a, const FormalSeries& b) {
  check_same_algebra(a, b, "mul_pointwise");
  FormalSeries r(a.pairs(), std::min(a.truncation(), b.truncation()),
                 a.hbar_min_power() + b.hbar_min_power());
  std::vector<int> e(2 * a.pairs());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      const int h = ka.hbar + kb.hbar;
      if (h > r.truncation()) continue;
      for (int i = 0; i < 2 * a.pairs(); ++i) e[i] = ka.exps[i] + kb.exps[i];
      r.add_term(e, h, ca * cb);
    }
  return r;
}

FormalSeries FormalSeries::shift_hbar(int j) const {
  FormalSeries r(n_, K_, hbar_min_ + j);
  for (const auto& [k, c] : terms_)
    if (k.hbar + j <= K_) r.add_term(k.exps, k.hbar + j, c);
  return r;
}

FormalSeries FormalSeries::truncate(int new_K) const {
  FormalSeries r(n_, new_K, hbar_min_);
  for (const auto& [k, c] : terms_)
    if (k.hbar <= new_K) r.add_term(k.exps, k.hbar, c);
  return r;
}

FormalSeries FormalSeries::partial(int v) const {
  if (v < 0 || v >= 2 * n_) throw config_error("FormalSeries::partial: variable out of range");
  FormalSeries r(n_, K_, hbar_min_);
  for (const auto& [k, c] : terms_) {
    if (k.exps[v] == 0) continue;
    std::vector<int> e = k.exps;
    const int ev = e[v];
    e[v] -= 1;
    r.add_term(std::move(e), k.hbar, GaussianRational(Rational(ev)) * c);
  }
  return r;
}

FormalSeries FormalSeries::partial_multi(const std::vector<int>& alpha) const {
  FormalSeries r = *this;
  for (int v = 0; v < 2 * n_; ++v)
    for (int i = 0; i < alpha[v]; ++i) {
      r = r.partial(v);
      if (r.is_zero()) return r;
    }
  return r;
}

FormalSeries FormalSeries::conjugated() const {
  FormalSeries r(n_, K_, hbar_min_);
  for (const auto& [k, c] : terms_) r.terms_[k] = c.conj();
  return r;
}

Bidifferential poisson_power(int n, int j) {
  // pi = sum_i (d_{x_i} (x) d_{p_i} - d_{p_i} (x) d_{x_i});
  // pi^j expands by the multinomial theorem over the 2n commuting slots.
  Bidifferential B;
  B.n = n;
  B.order = j;
  // Enumerate (alpha, beta) in N^n x N^n with |alpha| + |beta| = j; the term
  // carries weight (-1)^{|beta|} j!/(alpha! beta!), left derivative
  // d_x^alpha d_p^beta and right derivative d_p^alpha d_x^beta.
  std::vector<int> ab(2 * n, 0);  // packed (alpha_0..alpha_{n-1}, beta_0..beta_{n-1})
  const Rational jfact = factorial(j);
  auto emit = [&]() {
    Bidifferential::Term t;
    t.left.assign(2 * n, 0);
    t.right.assign(2 * n, 0);
    Rational denom(1);
    int beta_total = 0;
    for (int i = 0; i < n; ++i) {
      const int a = ab[i], b = ab[n + i];
      t.left[2 * i] = a;       // d_x^alpha on f
      t.left[2 * i + 1] = b;   // d_p^beta on f
      t.right[2 * i + 1] = a;  // d_p^alpha on g
      t.right[2 * i] = b;      // d_x^beta on g
      denom *= factorial(a) * factorial(b);
      beta_total += b;
    }
    t.weight = jfact / denom;
    if (beta_total % 2) t.weight = -t.weight;
    B.terms.push_back(std::move(t));
  };
  // compositions of j into 2n ordered parts
  auto rec = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == 2 * n - 1) {
      ab[slot] = remaining;
      emit();
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      ab[slot] = v;
      self(self, slot + 1, remaining - v);
    }
  };
  rec(rec, 0, j);
  return B;
}

FormalSeries apply_bidifferential(const Bidifferential& B, const FormalSeries& f,
                                  const FormalSeries& g) {
  check_same_algebra(f, g, "apply_bidifferential");
  if (B.n != f.pairs()) throw config_error("apply_bidifferential: wrong number of pairs");
  FormalSeries acc = FormalSeries::zero(f.pairs(), std::min(f.truncation(), g.truncation()));
  for (const auto& t : B.terms) {
    const FormalSeries df = f.partial_multi(t.left);
    if (df.is_zero()) continue;
    const FormalSeries dg = g.partial_multi(t.right);
    if (dg.is_zero()) continue;
    acc += GaussianRational(t.weight) * mul_pointwise(df, dg);
  }
  return acc;
}

FormalSeries moyal_product(const FormalSeries& f, const FormalSeries& g, int K) {
  check_same_algebra(f, g, "moyal_product");
  if (K < 0) throw config_error("moyal_product: K must be >= 0");
  const int n = f.pairs();
  const int hmin = f.hbar_min_power() + g.hbar_min_power();
  FormalSeries acc(n, K, hmin);
  // pi^j annihilates f (x) g once j exceeds either polynomial degree, and
  // hbar weights h_f + h_g + j beyond K are discarded anyway.
  const int j_cap = std::min({f.var_degree(), g.var_degree(),
                              K - f.min_hbar_present() - g.min_hbar_present()});
  GaussianRational phase(1);  // (-i)^j
  Rational scale(1);          // 1 / (2^j j!)
  for (int j = 0; j <= std::max(0, j_cap); ++j) {
    if (j > 0) {
      phase *= GaussianRational(Rational(0), Rational(-1));
      scale /= Rational(2 * j);
    }
    const Bidifferential B = poisson_power(n, j);
    FormalSeries layer = apply_bidifferential(B, f, g);
    if (layer.is_zero()) continue;
    FormalSeries shifted = (phase * GaussianRational(scale)) * layer;
    acc += shifted.shift_hbar(j).truncate(K);
  }
  return acc.truncate(K);
}

FormalSeries star_commutator(const FormalSeries& f, const FormalSeries& g, int K) {
  return moyal_product(f, g, K) - moyal_product(g, f, K);
}

FormalSeries associator(const FormalSeries& f, const FormalSeries& g, const FormalSeries& h,
                        int K) {
  return moyal_product(moyal_product(f, g, K), h, K) -
         moyal_product(f, moyal_product(g, h, K), K);
}

FormalSeries star_conjugate(const FormalSeries& f) { return f.conjugated(); }

FormalSeries lie_action(const FormalSeries& D, const FormalSeries& f, int K) {
  if (D.min_hbar_present() < -1 || D.hbar_min_power() < -1)
    throw config_error("lie_action: D has hbar powers below -1, not an element of hbar^{-1} W");
  const FormalSeries comm = star_commutator(D, f, K);
  for (const auto& [k, c] : comm.terms())
    if (k.hbar < 0)
      throw std::logic_error("lie_action: commutator left W (nonzero hbar^" +
                             std::to_string(k.hbar) + " term)");
  FormalSeries r(comm.pairs(), K, 0);
  for (const auto& [k, c] : comm.terms()) r.add_term(k.exps, k.hbar, c);
  return r;
}

namespace {

long to_long_checked(const mpz_class& z) {
  if (!z.fits_slong_p())
    throw config_error("FormalSeries serialization: coefficient exceeds 64-bit range");
  return z.get_si();
}

}  // namespace

std::string FormalSeries::to_json() const {
  std::string s = "{\"n\":" + std::to_string(n_) + ",\"K\":" + std::to_string(K_) +
                  ",\"terms\":[";
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) s += ",";
    first = false;
    s += "{\"exponents\":[";
    for (size_t i = 0; i < k.exps.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(k.exps[i]);
    }
    s += "],\"hbar\":" + std::to_string(k.hbar) + ",\"coeff\":[" +
         std::to_string(to_long_checked(c.re.get_num())) + "," +
         std::to_string(to_long_checked(c.re.get_den())) + "," +
         std::to_string(to_long_checked(c.im.get_num())) + "," +
         std::to_string(to_long_checked(c.im.get_den())) + "]}";
  }
  return s + "]}";
}

FormalSeries FormalSeries::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int n = j.at("n").get<int>();
  const int K = j.at("K").get<int>();
  int hbar_min = 0;
  for (const auto& t : j.at("terms"))
    hbar_min = std::min(hbar_min, t.at("hbar").get<int>());
  FormalSeries f(n, K, hbar_min);
  for (const auto& t : j.at("terms")) {
    const auto& co = t.at("coeff");
    if (!co.is_array() || co.size() != 4)
      throw config_error("FormalSeries JSON: coeff must be [num_re, den_re, num_im, den_im]");
    GaussianRational c(make_rational(co[0].get<long>(), co[1].get<long>()),
                       make_rational(co[2].get<long>(), co[3].get<long>()));
    f.add_term(t.at("exponents").get<std::vector<int>>(), t.at("hbar").get<int>(), c);
  }
  return f;
}

}  // namespace btq
