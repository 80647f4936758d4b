#include "atlfuse/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace atlf {

GaussQ GaussQ::inv() const {
  Rational n = re * re + im * im;
  if (n.is_zero()) throw DegenerateScalar("GaussQ: inverse of zero");
  return {re / n, -im / n};
}

std::pair<GaussQ, bool> GaussQ::sqrt() const {
  if (im.is_zero()) {
    if (!re.num().is_neg()) {
      auto [r, ok] = re.sqrt();
      return {GaussQ(r, Rational(0)), ok};
    }
    auto [r, ok] = (-re).sqrt();
    return {GaussQ(Rational(0), r), ok};
  }
  // (x+yi)^2 = re+im*i: x^2 = (re + |z|)/2, y = im/(2x)
  auto [t, okt] = (re * re + im * im).sqrt();
  if (!okt) return {GaussQ(), false};
  Rational half(BigInt(1), BigInt(2));
  auto [x, okx] = ((re + t) * half).sqrt();
  if (!okx || x.is_zero()) return {GaussQ(), false};
  Rational y = im / (x * Rational(2));
  GaussQ cand(x, y);
  if (cand * cand == *this) return {cand, true};
  return {GaussQ(), false};
}

std::string GaussQ::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  if (!re.is_zero()) out += re.to_string();
  if (!im.is_zero()) {
    if (!out.empty() && !im.num().is_neg()) out += "+";
    if (im == Rational(1))
      out += "i";
    else if (im == Rational(-1))
      out += "-i";
    else
      out += im.to_string() + "i";
  }
  return out;
}

void gp_trim(GPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

GPoly gp_add(const GPoly& a, const GPoly& b) {
  GPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] = r[i] + a[i];
    if (i < b.size()) r[i] = r[i] + b[i];
  }
  gp_trim(r);
  return r;
}

GPoly gp_sub(const GPoly& a, const GPoly& b) {
  GPoly nb = b;
  for (auto& c : nb) c = -c;
  return gp_add(a, nb);
}

GPoly gp_mul(const GPoly& a, const GPoly& b) {
  if (a.empty() || b.empty()) return {};
  GPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  gp_trim(r);
  return r;
}

std::pair<GPoly, GPoly> gp_divmod(const GPoly& a, const GPoly& b) {
  if (b.empty()) throw DegenerateScalar("poly division by zero");
  GPoly rem = a, q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, GaussQ());
  GaussQ lcinv = b.back().inv();
  while (rem.size() >= b.size()) {
    GaussQ c = rem.back() * lcinv;
    size_t off = rem.size() - b.size();
    q[off] = q[off] + c;
    for (size_t i = 0; i < b.size(); ++i) rem[off + i] = rem[off + i] - c * b[i];
    gp_trim(rem);
    if (rem.size() < b.size()) break;
    if (rem.empty()) break;
  }
  gp_trim(q);
  return {q, rem};
}

GPoly gp_gcd(GPoly a, GPoly b) {
  gp_trim(a);
  gp_trim(b);
  while (!b.empty()) {
    auto [q, r] = gp_divmod(a, b);
    (void)q;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    GaussQ lcinv = a.back().inv();
    for (auto& c : a) c = c * lcinv;
  }
  return a;
}

std::pair<GPoly, bool> gp_sqrt(const GPoly& a) {
  if (a.empty()) return {{}, true};
  if ((a.size() - 1) % 2 != 0) return {{}, false};
  size_t rd = (a.size() - 1) / 2;
  auto [lead, ok] = a.back().sqrt();
  if (!ok) return {{}, false};
  GPoly r(rd + 1);
  r[rd] = lead;
  GaussQ twoInv = (lead + lead).inv();
  // solve coefficients from the top down
  for (size_t k = rd; k-- > 0;) {
    // coefficient of s^{k+rd} in r^2 must equal a[k+rd]
    GaussQ acc;
    for (size_t i = k + 1; i < rd; ++i) {
      size_t j = k + rd - i;
      if (j <= rd) acc = acc + r[i] * r[j];
    }
    r[k] = (a[k + rd] - acc) * twoInv;
  }
  if (gp_mul(r, r) == a) return {r, true};
  return {{}, false};
}

namespace {

ExactRatio exact_normalize(long long lo, GPoly num, GPoly den) {
  gp_trim(num);
  gp_trim(den);
  if (den.empty()) throw DegenerateScalar("exact scalar: zero denominator");
  ExactRatio r;
  if (num.empty()) return r;  // zero
  // clear s-powers: shift factors of s between num/den and lo
  size_t kn = 0;
  while (kn < num.size() && num[kn].is_zero()) ++kn;
  if (kn) {
    num.erase(num.begin(), num.begin() + kn);
    lo += (long long)kn;
  }
  size_t kd = 0;
  while (kd < den.size() && den[kd].is_zero()) ++kd;
  if (kd) {
    den.erase(den.begin(), den.begin() + kd);
    lo -= (long long)kd;
  }
  if (den.size() > 1 && num.size() > 1) {
    GPoly g = gp_gcd(num, den);
    if (g.size() > 1) {
      num = gp_divmod(num, g).first;
      den = gp_divmod(den, g).first;
    }
  }
  if (!(den.back() == GaussQ(1))) {
    GaussQ lcinv = den.back().inv();
    for (auto& c : den) c = c * lcinv;
    for (auto& c : num) c = c * lcinv;
  }
  r.lo = lo;
  r.num = std::move(num);
  r.den = std::move(den);
  return r;
}

QPoly qp_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  return r;
}

QPoly qp_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] = r[i] + a[i];
    if (i < b.size()) r[i] = r[i] + b[i];
  }
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  return r;
}

std::pair<QPoly, QPoly> qp_divmod(const QPoly& a, const QPoly& b) {
  QPoly rem = a, q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  Rational lcinv = b.back().inv();
  while (rem.size() >= b.size() && !rem.empty()) {
    Rational c = rem.back() * lcinv;
    size_t off = rem.size() - b.size();
    q[off] = q[off] + c;
    for (size_t i = 0; i < b.size(); ++i) rem[off + i] = rem[off + i] - c * b[i];
    while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
  }
  while (!q.empty() && q.back().is_zero()) q.pop_back();
  return {q, rem};
}

// cyclotomic polynomial Phi_n over Q by recursive division of x^n - 1
QPoly cyclotomic_poly(int n) {
  QPoly xn1(n + 1, Rational(0));
  xn1[0] = Rational(-1);
  xn1[n] = Rational(1);
  QPoly acc = xn1;
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    QPoly phid = cyclotomic_poly(d);
    acc = qp_divmod(acc, phid).first;
  }
  return acc;
}

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

bool mr_is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  auto mulm = [&](uint64_t a, uint64_t b) { return (uint64_t)((__uint128_t)a * b % n); };
  auto powm = [&](uint64_t a, uint64_t e) {
    uint64_t acc = 1;
    while (e) {
      if (e & 1) acc = mulm(acc, a);
      a = mulm(a, a);
      e >>= 1;
    }
    return acc;
  };
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powm(a % n, d);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < r; ++i) {
      x = mulm(x, x);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

}  // namespace

Scalar FieldConfig::make_exact(ExactRatio r) const {
  Scalar s;
  s.cfg_ = this;
  s.v_ = std::move(r);
  return s;
}
Scalar FieldConfig::make_modp(uint64_t r) const {
  Scalar s;
  s.cfg_ = this;
  s.v_ = r % p_;
  return s;
}
Scalar FieldConfig::make_cyclo(QPoly r) const {
  Scalar s;
  s.cfg_ = this;
  s.v_ = cyc_reduce(std::move(r));
  return s;
}

FieldConfig FieldConfig::exact() {
  FieldConfig c;
  c.backend_ = Backend::Exact;
  return c;
}

FieldConfig FieldConfig::modp(uint64_t p, uint64_t seed) {
  if (p < 5 || !mr_is_prime(p) || p % 4 != 1)
    throw ConfigError("modp backend needs a prime p with p = 1 mod 4");
  FieldConfig c;
  c.backend_ = Backend::Modp;
  c.p_ = p;
  c.seed_ = seed;
  c.rng_state_ = seed ^ 0xa5a5a5a5deadbeefull;
  // fixed square root of -1: a^{(p-1)/4} for the first a that works
  for (uint64_t a = 2;; ++a) {
    uint64_t cand = c.mod_pow(a, (p - 1) / 4);
    if (c.mod_mul(cand, cand) == p - 1) {
      c.i_img_ = cand;
      break;
    }
  }
  c.s_img_ = c.next_random_nonzero();
  return c;
}

FieldConfig FieldConfig::cyclotomic(int p) {
  if (p < 2) throw ConfigError("cyclotomic backend needs p >= 2");
  FieldConfig c;
  c.backend_ = Backend::Cyclotomic;
  c.cyc_p_ = p;
  c.cyc_mod_ = cyclotomic_poly(4 * p);
  return c;
}

uint64_t FieldConfig::next_random_nonzero() const {
  while (true) {
    uint64_t v = splitmix64(rng_state_) % p_;
    if (v != 0) return v;
  }
}

uint64_t FieldConfig::mod_pow(uint64_t a, uint64_t e) const {
  uint64_t acc = 1;
  a %= p_;
  while (e) {
    if (e & 1) acc = mod_mul(acc, a);
    a = mod_mul(a, a);
    e >>= 1;
  }
  return acc;
}

uint64_t FieldConfig::mod_inv(uint64_t a) const {
  a %= p_;
  if (a == 0) throw DegenerateScalar("modp: inverse of zero");
  return mod_pow(a, p_ - 2);
}

QPoly FieldConfig::cyc_reduce(QPoly a) const {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  if (a.size() >= cyc_mod_.size()) a = qp_divmod(a, cyc_mod_).second;
  return a;
}

QPoly FieldConfig::cyc_inv(const QPoly& a) const {
  if (a.empty()) throw DegenerateScalar("cyclotomic: inverse of zero");
  // extended Euclid in Q[x]: r0 = modulus, r1 = a
  QPoly r0 = cyc_mod_, r1 = a, t0, t1{Rational(1)};
  while (!r1.empty()) {
    auto [q, r2] = qp_divmod(r0, r1);
    QPoly qt1 = qp_mul(q, t1);
    QPoly nt(std::max(t0.size(), qt1.size()));
    for (size_t i = 0; i < nt.size(); ++i) {
      Rational v = i < t0.size() ? t0[i] : Rational(0);
      if (i < qt1.size()) v = v - qt1[i];
      nt[i] = v;
    }
    while (!nt.empty() && nt.back().is_zero()) nt.pop_back();
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(nt);
  }
  if (r0.size() != 1) throw DegenerateScalar("cyclotomic: non-invertible element");
  Rational lcinv = r0[0].inv();
  for (auto& c : t0) c = c * lcinv;
  return cyc_reduce(t0);
}

Scalar FieldConfig::zero() const {
  switch (backend_) {
    case Backend::Exact:
      return make_exact(ExactRatio{});
    case Backend::Modp:
      return make_modp(0);
    case Backend::Cyclotomic:
      return make_cyclo({});
  }
  throw ConfigError("bad backend");
}

Scalar FieldConfig::one() const { return from_int(1); }

Scalar FieldConfig::from_int(long long v) const {
  switch (backend_) {
    case Backend::Exact: {
      ExactRatio r;
      if (v) r.num = {GaussQ(v)};
      return make_exact(std::move(r));
    }
    case Backend::Modp: {
      long long m = v % (long long)p_;
      if (m < 0) m += (long long)p_;
      return make_modp((uint64_t)m);
    }
    case Backend::Cyclotomic: {
      QPoly q;
      if (v) q = {Rational(v)};
      return make_cyclo(std::move(q));
    }
  }
  throw ConfigError("bad backend");
}

Scalar FieldConfig::from_rational(const Rational& r) const {
  switch (backend_) {
    case Backend::Exact: {
      ExactRatio e;
      if (!r.is_zero()) e.num = {GaussQ(r, Rational(0))};
      return make_exact(std::move(e));
    }
    case Backend::Modp: {
      uint64_t n = (uint64_t)((r.num().abs() % BigInt((long long)p_)).to_ll());
      uint64_t d = (uint64_t)((r.den() % BigInt((long long)p_)).to_ll());
      uint64_t v = mod_mul(n, mod_inv(d));
      if (r.num().is_neg() && v) v = p_ - v;
      return make_modp(v);
    }
    case Backend::Cyclotomic: {
      QPoly q;
      if (!r.is_zero()) q = {r};
      return make_cyclo(std::move(q));
    }
  }
  throw ConfigError("bad backend");
}

Scalar FieldConfig::i() const {
  switch (backend_) {
    case Backend::Exact: {
      ExactRatio r;
      r.num = {GaussQ(Rational(0), Rational(1))};
      return make_exact(std::move(r));
    }
    case Backend::Modp:
      return make_modp(i_img_);
    case Backend::Cyclotomic: {
      QPoly q(cyc_p_ + 1, Rational(0));
      q[cyc_p_] = Rational(1);  // i = x^p
      return make_cyclo(std::move(q));
    }
  }
  throw ConfigError("bad backend");
}

Scalar FieldConfig::s() const { return s_pow(1); }

Scalar FieldConfig::s_pow(long long k) const {
  switch (backend_) {
    case Backend::Exact: {
      ExactRatio r;
      r.num = {GaussQ(1)};
      r.lo = k;
      return make_exact(std::move(r));
    }
    case Backend::Modp:
      return k >= 0 ? make_modp(mod_pow(s_img_, (uint64_t)k))
                    : make_modp(mod_inv(mod_pow(s_img_, (uint64_t)(-k))));
    case Backend::Cyclotomic: {
      long long e = ((k % (4 * cyc_p_)) + 4 * cyc_p_) % (4 * cyc_p_);
      QPoly q(e + 1, Rational(0));
      q[e] = Rational(1);
      return make_cyclo(std::move(q));
    }
  }
  throw ConfigError("bad backend");
}

Scalar FieldConfig::loop_weight() const { return s_pow(2) + s_pow(-2); }

Scalar FieldConfig::z(const std::string& name) const {
  auto it = zreg_.find(name);
  if (it != zreg_.end()) return it->second;
  Scalar v;
  switch (backend_) {
    case Backend::Exact: {
      // default specializations: distinct small primes keep the exact
      // computation univariate and resonance values distinguishable
      static const long long primes[] = {3, 5, 7, 11, 13, 17, 19, 23};
      v = from_int(primes[next_exact_z_ % 8]);
      ++next_exact_z_;
      break;
    }
    case Backend::Modp:
      v = make_modp(next_random_nonzero());
      break;
    case Backend::Cyclotomic:
      throw ConfigError("cyclotomic backend has no default z; bind it explicitly");
  }
  zreg_.emplace(name, v);
  return v;
}

void FieldConfig::bind_z(const std::string& name, const Scalar& value) {
  if (value.cfg() != this) throw ConfigError("bind_z: scalar from another config");
  if (value.is_zero()) throw ConfigError("bind_z: z must be nonzero");
  zreg_[name] = value;
}

std::string FieldConfig::describe() const {
  std::ostringstream os;
  switch (backend_) {
    case Backend::Exact:
      os << "exact";
      break;
    case Backend::Modp:
      os << "modp p=" << p_ << " seed=" << seed_ << " s=" << s_img_;
      break;
    case Backend::Cyclotomic:
      os << "cyclotomic p=" << cyc_p_;
      break;
  }
  return os.str();
}

bool Scalar::is_zero() const {
  if (!cfg_) return true;
  switch (cfg_->backend()) {
    case Backend::Exact:
      return std::get<ExactRatio>(v_).num.empty();
    case Backend::Modp:
      return std::get<uint64_t>(v_) == 0;
    case Backend::Cyclotomic:
      return std::get<QPoly>(v_).empty();
  }
  return true;
}

namespace {
void check_same(const Scalar& a, const Scalar& b) {
  if (a.cfg() != b.cfg()) throw ConfigError("scalar backend mismatch");
}
}  // namespace

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(*this, o);
  switch (cfg_->backend()) {
    case Backend::Exact: {
      const auto& a = std::get<ExactRatio>(v_);
      const auto& b = std::get<ExactRatio>(o.v_);
      if (a.num.empty()) return o;
      if (b.num.empty()) return *this;
      long long lo = std::min(a.lo, b.lo);
      GPoly an = a.num, bn = b.num;
      an.insert(an.begin(), (size_t)(a.lo - lo), GaussQ());
      bn.insert(bn.begin(), (size_t)(b.lo - lo), GaussQ());
      GPoly num = gp_add(gp_mul(an, b.den), gp_mul(bn, a.den));
      return cfg_->make_exact(exact_normalize(lo, std::move(num), gp_mul(a.den, b.den)));
    }
    case Backend::Modp:
      return cfg_->make_modp(cfg_->mod_add(std::get<uint64_t>(v_), std::get<uint64_t>(o.v_)));
    case Backend::Cyclotomic:
      return cfg_->make_cyclo(qp_add(std::get<QPoly>(v_), std::get<QPoly>(o.v_)));
  }
  throw ConfigError("bad backend");
}

Scalar Scalar::operator-() const {
  if (!cfg_) return *this;
  switch (cfg_->backend()) {
    case Backend::Exact: {
      ExactRatio r = std::get<ExactRatio>(v_);
      for (auto& c : r.num) c = -c;
      return cfg_->make_exact(std::move(r));
    }
    case Backend::Modp: {
      uint64_t v = std::get<uint64_t>(v_);
      return cfg_->make_modp(v ? cfg_->prime() - v : 0);
    }
    case Backend::Cyclotomic: {
      QPoly r = std::get<QPoly>(v_);
      for (auto& c : r) c = -c;
      return cfg_->make_cyclo(std::move(r));
    }
  }
  throw ConfigError("bad backend");
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(*this, o);
  switch (cfg_->backend()) {
    case Backend::Exact: {
      const auto& a = std::get<ExactRatio>(v_);
      const auto& b = std::get<ExactRatio>(o.v_);
      if (a.num.empty() || b.num.empty()) return cfg_->zero();
      return cfg_->make_exact(
          exact_normalize(a.lo + b.lo, gp_mul(a.num, b.num), gp_mul(a.den, b.den)));
    }
    case Backend::Modp:
      return cfg_->make_modp(cfg_->mod_mul(std::get<uint64_t>(v_), std::get<uint64_t>(o.v_)));
    case Backend::Cyclotomic:
      return cfg_->make_cyclo(qp_mul(std::get<QPoly>(v_), std::get<QPoly>(o.v_)));
  }
  throw ConfigError("bad backend");
}

Scalar Scalar::inv() const {
  if (is_zero()) throw DegenerateScalar("inverse of zero scalar");
  switch (cfg_->backend()) {
    case Backend::Exact: {
      const auto& a = std::get<ExactRatio>(v_);
      return cfg_->make_exact(exact_normalize(-a.lo, a.den, a.num));
    }
    case Backend::Modp:
      return cfg_->make_modp(cfg_->mod_inv(std::get<uint64_t>(v_)));
    case Backend::Cyclotomic:
      return cfg_->make_cyclo(cfg_->cyc_inv(std::get<QPoly>(v_)));
  }
  throw ConfigError("bad backend");
}

Scalar Scalar::operator/(const Scalar& o) const {
  check_same(*this, o);
  if (o.is_zero()) throw DegenerateScalar("division by zero scalar");
  return *this * o.inv();
}

Scalar Scalar::pow(long long e) const {
  if (e == 0) return cfg_->one();
  Scalar base = e > 0 ? *this : inv();
  unsigned long long k = e > 0 ? (unsigned long long)e : (unsigned long long)(-e);
  Scalar acc = cfg_->one();
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

bool Scalar::operator==(const Scalar& o) const {
  check_same(*this, o);
  switch (cfg_->backend()) {
    case Backend::Exact: {
      const auto& a = std::get<ExactRatio>(v_);
      const auto& b = std::get<ExactRatio>(o.v_);
      return a.lo == b.lo && a.num == b.num && a.den == b.den;
    }
    case Backend::Modp:
      return std::get<uint64_t>(v_) == std::get<uint64_t>(o.v_);
    case Backend::Cyclotomic:
      return std::get<QPoly>(v_) == std::get<QPoly>(o.v_);
  }
  return false;
}

bool Scalar::operator<(const Scalar& o) const { return to_string() < o.to_string(); }

std::optional<Scalar> Scalar::sqrt() const {
  if (is_zero()) return cfg_->zero();
  switch (cfg_->backend()) {
    case Backend::Exact: {
      const auto& a = std::get<ExactRatio>(v_);
      if (a.lo % 2 != 0) {
        // try shifting one s from num into lo
        GPoly num = a.num;
        num.insert(num.begin(), GaussQ());
        auto [rn, okn] = gp_sqrt(num);
        auto [rdn, okd] = gp_sqrt(a.den);
        if (!okn || !okd) return std::nullopt;
        return cfg_->make_exact(exact_normalize((a.lo - 1) / 2, rn, rdn));
      }
      auto [rn, okn] = gp_sqrt(a.num);
      auto [rd, okd] = gp_sqrt(a.den);
      if (!okn || !okd) return std::nullopt;
      return cfg_->make_exact(exact_normalize(a.lo / 2, rn, rd));
    }
    case Backend::Modp: {
      // Tonelli-Shanks
      uint64_t p = cfg_->prime(), n = std::get<uint64_t>(v_);
      if (cfg_->mod_pow(n, (p - 1) / 2) != 1) return std::nullopt;
      uint64_t q = p - 1;
      int s = 0;
      while ((q & 1) == 0) {
        q >>= 1;
        ++s;
      }
      uint64_t zz = 2;
      while (cfg_->mod_pow(zz, (p - 1) / 2) != p - 1) ++zz;
      uint64_t m = s, c = cfg_->mod_pow(zz, q), t = cfg_->mod_pow(n, q),
               r = cfg_->mod_pow(n, (q + 1) / 2);
      while (t != 1) {
        uint64_t t2 = t;
        uint64_t ii = 0;
        while (t2 != 1) {
          t2 = cfg_->mod_mul(t2, t2);
          ++ii;
        }
        uint64_t b = c;
        for (uint64_t k = 0; k < m - ii - 1; ++k) b = cfg_->mod_mul(b, b);
        m = ii;
        c = cfg_->mod_mul(b, b);
        t = cfg_->mod_mul(t, c);
        r = cfg_->mod_mul(r, b);
      }
      return cfg_->make_modp(r);
    }
    case Backend::Cyclotomic:
      return std::nullopt;  // not needed in this backend
  }
  return std::nullopt;
}

std::string Scalar::to_string() const {
  if (!cfg_) return "0";
  std::ostringstream os;
  switch (cfg_->backend()) {
    case Backend::Exact: {
      const auto& a = std::get<ExactRatio>(v_);
      if (a.num.empty()) return "(0)/(1)";
      auto poly_str = [](const GPoly& p, long long lo) {
        std::string out;
        bool first = true;
        for (size_t k = p.size(); k-- > 0;) {
          if (p[k].is_zero()) continue;
          std::string c = p[k].to_string();
          if (!first) out += c[0] == '-' ? "" : "+";
          long long e = (long long)k + lo;
          bool unitc = (c == "1" || c == "-1");
          if (e == 0) {
            out += c;
          } else {
            if (c == "1")
              ;
            else if (c == "-1")
              out += "-";
            else {
              bool needParens = c.find('+') != std::string::npos ||
                                c.find('-', 1) != std::string::npos ||
                                c.find('/') != std::string::npos || c.find('i') != std::string::npos;
              out += needParens ? "(" + c + ")*" : c + "*";
            }
            out += "s";
            if (e != 1) out += "^" + std::to_string(e);
            (void)unitc;
          }
          first = false;
        }
        return out.empty() ? std::string("0") : out;
      };
      os << "(" << poly_str(a.num, a.lo) << ")/(" << poly_str(a.den, 0) << ")";
      return os.str();
    }
    case Backend::Modp:
      os << std::get<uint64_t>(v_);
      return os.str();
    case Backend::Cyclotomic: {
      const auto& a = std::get<QPoly>(v_);
      if (a.empty()) return "0";
      bool first = true;
      for (size_t k = a.size(); k-- > 0;) {
        if (a[k].is_zero()) continue;
        std::string c = a[k].to_string();
        if (!first && c[0] != '-') os << "+";
        if (k == 0)
          os << c;
        else {
          if (c == "1")
            ;
          else if (c == "-1")
            os << "-";
          else
            os << c << "*";
          os << "x";
          if (k != 1) os << "^" << k;
        }
        first = false;
      }
      return os.str();
    }
  }
  return "?";
}

size_t Scalar::hash() const {
  size_t h = 1469598103934665603ull;
  auto mix = [&](size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  if (!cfg_) return h;
  switch (cfg_->backend()) {
    case Backend::Exact: {
      const auto& a = std::get<ExactRatio>(v_);
      mix((size_t)a.lo);
      for (const auto& c : a.num) {
        mix(c.re.hash());
        mix(c.im.hash());
      }
      for (const auto& c : a.den) {
        mix(c.re.hash());
        mix(c.im.hash());
      }
      break;
    }
    case Backend::Modp:
      mix(std::get<uint64_t>(v_));
      break;
    case Backend::Cyclotomic:
      for (const auto& c : std::get<QPoly>(v_)) mix(c.hash());
      break;
  }
  return h;
}

std::pair<Scalar, Scalar> braid_coeffs(const FieldConfig& cfg, int sign) {
  Scalar i = cfg.i();
  if (sign >= 0) return {i * cfg.s_pow(1), -(i * cfg.s_pow(-1))};
  return {-(i * cfg.s_pow(-1)), i * cfg.s_pow(1)};
}

// --- tiny expression parser: products of factors, factor = atom['^'exp],
// atom = integer | i | q | s | z<name> | '(' expr ')', exp = (half-)integer.
namespace {

struct Parser {
  const FieldConfig& cfg;
  const std::string& txt;
  size_t pos = 0;

  void skip() {
    while (pos < txt.size() && isspace((unsigned char)txt[pos])) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < txt.size() && txt[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  // exponent in units of s: q^{a/2} holds a, s^{a} holds 2a internally? No:
  // we return exponent as multiples of 1/2 for q and integers for s.
  long long parse_int() {
    skip();
    bool neg = eat('-');
    if (!neg) eat('+');
    skip();
    if (pos >= txt.size() || !isdigit((unsigned char)txt[pos]))
      throw ConfigError("scalar parse: expected integer at '" + txt.substr(pos) + "'");
    long long v = 0;
    while (pos < txt.size() && isdigit((unsigned char)txt[pos])) v = v * 10 + (txt[pos++] - '0');
    return neg ? -v : v;
  }
  // returns numerator of exponent over 2 (so "3/2" -> 3, "2" -> 4)
  long long parse_exp_half() {
    bool paren = eat('(');
    long long n = parse_int();
    long long num2 = 2 * n;
    skip();
    if (eat('/')) {
      long long d = parse_int();
      if (d != 2) throw ConfigError("scalar parse: only halves supported in exponents");
      num2 = n;
    }
    if (paren && !eat(')')) throw ConfigError("scalar parse: missing ')'");
    return num2;
  }
  Scalar parse_atom() {
    skip();
    if (eat('(')) {
      Scalar v = parse_expr();
      if (!eat(')')) throw ConfigError("scalar parse: missing ')'");
      return v;
    }
    if (pos < txt.size() && (isdigit((unsigned char)txt[pos]))) {
      long long v = 0;
      while (pos < txt.size() && isdigit((unsigned char)txt[pos])) v = v * 10 + (txt[pos++] - '0');
      return cfg.from_int(v);
    }
    if (pos < txt.size() && isalpha((unsigned char)txt[pos])) {
      size_t start = pos;
      while (pos < txt.size() && (isalnum((unsigned char)txt[pos]) || txt[pos] == '_')) ++pos;
      std::string name = txt.substr(start, pos - start);
      if (name == "i") return cfg.i();
      if (name == "q") return cfg.s_pow(2);
      if (name == "s") return cfg.s();
      if (name == "m") return cfg.loop_weight();
      if (name.size() >= 1 && name[0] == 'z') return cfg.z(name);
      throw ConfigError("scalar parse: unknown symbol '" + name + "'");
    }
    throw ConfigError("scalar parse: unexpected input '" + txt.substr(pos) + "'");
  }
  Scalar parse_factor() {
    skip();
    size_t save = pos;
    bool isq = false, iss = false;
    if (pos < txt.size() && txt[pos] == 'q') isq = true;
    if (pos < txt.size() && txt[pos] == 's') iss = true;
    Scalar base = parse_atom();
    if (eat('^')) {
      long long e2 = parse_exp_half();
      if (isq && pos - save >= 1) {
        // q^{n/2} = s^n
        return cfg.s_pow(e2);
      }
      if (e2 % 2 != 0) {
        if (iss) return cfg.s_pow(e2 / 2);  // unreachable: s exponents are integers
        throw ConfigError("scalar parse: half-integer exponent only allowed on q");
      }
      return base.pow(e2 / 2);
    }
    return base;
  }
  Scalar parse_expr() {
    skip();
    bool neg = false;
    while (true) {
      if (eat('-'))
        neg = !neg;
      else if (eat('+'))
        ;
      else
        break;
    }
    Scalar acc = parse_factor();
    while (true) {
      skip();
      if (eat('*')) {
        acc = acc * parse_factor();
      } else if (eat('/')) {
        acc = acc / parse_factor();
      } else {
        break;
      }
    }
    return neg ? -acc : acc;
  }
};

}  // namespace

Scalar FieldConfig::parse(const std::string& expr) const {
  Parser p{*this, expr};
  Scalar v = p.parse_expr();
  p.skip();
  if (p.pos != expr.size()) throw ConfigError("scalar parse: trailing input in '" + expr + "'");
  return v;
}

}  // namespace atlf
