#include "atlfuse/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace atlf {

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  unsigned long long m = v < 0 ? -(unsigned long long)v : (unsigned long long)v;
  while (m) {
    mag_.push_back((uint32_t)(m & 0xffffffffu));
    m >>= 32;
  }
}

BigInt BigInt::from_string(const std::string& s) {
  BigInt r;
  size_t i = 0;
  int sg = 1;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') sg = -1;
    ++i;
  }
  if (i >= s.size()) throw std::invalid_argument("BigInt: empty string");
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
    r = r * BigInt(10) + BigInt(s[i] - '0');
  }
  if (!r.mag_.empty()) r.sign_ = sg;
  return r;
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r[i] = (uint32_t)(s & 0xffffffffu);
    carry = s >> 32;
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// requires a >= b
std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(a.size(), 0);
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t s = (int64_t)a[i] - borrow - (i < b.size() ? (int64_t)b[i] : 0);
    if (s < 0) {
      s += ((int64_t)1 << 32);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = (uint32_t)s;
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      uint64_t cur = (uint64_t)a[i] * b[j] + r[i + j] + carry;
      r[i + j] = (uint32_t)(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    size_t k = i + b.size();
    while (carry) {
      uint64_t cur = r[k] + carry;
      r[k] = (uint32_t)(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

// schoolbook long division, base 2^32
void BigInt::divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
  if (b.empty()) throw std::domain_error("BigInt: division by zero");
  q.clear();
  r.clear();
  if (cmp_mag(a, b) < 0) {
    r = a;
    return;
  }
  if (b.size() == 1) {
    uint64_t d = b[0], rem = 0;
    q.assign(a.size(), 0);
    for (size_t i = a.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | a[i];
      q[i] = (uint32_t)(cur / d);
      rem = cur % d;
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    if (rem) r.push_back((uint32_t)rem);
    return;
  }
  // Knuth D with normalization
  int shift = 0;
  uint32_t top = b.back();
  while (!(top & 0x80000000u)) {
    top <<= 1;
    ++shift;
  }
  auto shl = [&](const std::vector<uint32_t>& x) {
    if (shift == 0) return x;
    std::vector<uint32_t> y(x.size() + 1, 0);
    for (size_t i = 0; i < x.size(); ++i) {
      y[i] |= x[i] << shift;
      y[i + 1] = (uint32_t)((uint64_t)x[i] >> (32 - shift));
    }
    while (!y.empty() && y.back() == 0) y.pop_back();
    return y;
  };
  std::vector<uint32_t> u = shl(a), v = shl(b);
  size_t n = v.size(), m = u.size() - n;
  u.push_back(0);
  q.assign(m + 1, 0);
  for (size_t j = m + 1; j-- > 0;) {
    uint64_t num = ((uint64_t)u[j + n] << 32) | u[j + n - 1];
    uint64_t qhat = num / v[n - 1];
    uint64_t rhat = num % v[n - 1];
    while (qhat >= ((uint64_t)1 << 32) ||
           (n >= 2 && qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2]))) {
      --qhat;
      rhat += v[n - 1];
      if (rhat >= ((uint64_t)1 << 32)) break;
    }
    // multiply-subtract
    int64_t borrow = 0;
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
      uint64_t p = qhat * v[i] + carry;
      carry = p >> 32;
      int64_t t = (int64_t)u[i + j] - (int64_t)(p & 0xffffffffu) - borrow;
      if (t < 0) {
        t += ((int64_t)1 << 32);
        borrow = 1;
      } else {
        borrow = 0;
      }
      u[i + j] = (uint32_t)t;
    }
    int64_t t = (int64_t)u[j + n] - (int64_t)carry - borrow;
    if (t < 0) {
      // add back
      t += ((int64_t)1 << 32);
      --qhat;
      uint64_t c2 = 0;
      for (size_t i = 0; i < n; ++i) {
        uint64_t s = (uint64_t)u[i + j] + v[i] + c2;
        u[i + j] = (uint32_t)(s & 0xffffffffu);
        c2 = s >> 32;
      }
      t += (int64_t)c2;
    }
    u[j + n] = (uint32_t)t;
    q[j] = (uint32_t)qhat;
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
  u.resize(n);
  if (shift) {
    for (size_t i = 0; i < u.size(); ++i) {
      u[i] >>= shift;
      if (i + 1 < u.size()) u[i] |= u[i + 1] << (32 - shift);
    }
  }
  while (!u.empty() && u.back() == 0) u.pop_back();
  r = u;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  if (r.sign_ < 0) r.sign_ = 1;
  return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  if (sign_ == 0) return o;
  if (o.sign_ == 0) return *this;
  if (sign_ == o.sign_) {
    r.mag_ = add_mag(mag_, o.mag_);
    r.sign_ = sign_;
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) return BigInt();
    if (c > 0) {
      r.mag_ = sub_mag(mag_, o.mag_);
      r.sign_ = sign_;
    } else {
      r.mag_ = sub_mag(o.mag_, mag_);
      r.sign_ = o.sign_;
    }
  }
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt r;
  r.mag_ = mul_mag(mag_, o.mag_);
  r.sign_ = mag_.empty() || o.mag_.empty() ? 0 : sign_ * o.sign_;
  r.trim();
  return r;
}

BigInt BigInt::operator/(const BigInt& o) const {
  BigInt q, r;
  divmod_mag(mag_, o.mag_, q.mag_, r.mag_);
  q.sign_ = q.mag_.empty() ? 0 : sign_ * o.sign_;
  return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
  BigInt q, r;
  divmod_mag(mag_, o.mag_, q.mag_, r.mag_);
  r.sign_ = r.mag_.empty() ? 0 : sign_;
  return r;
}

bool BigInt::operator<(const BigInt& o) const {
  if (sign_ != o.sign_) return sign_ < o.sign_;
  int c = cmp_mag(mag_, o.mag_);
  return sign_ >= 0 ? c < 0 : c > 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.sign_ = a.mag_.empty() ? 0 : 1;
  b.sign_ = b.mag_.empty() ? 0 : 1;
  while (!b.is_zero()) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a;
}

std::pair<BigInt, bool> BigInt::sqrt(const BigInt& a) {
  if (a.sign_ < 0) return {BigInt(), false};
  if (a.is_zero()) return {BigInt(), true};
  // Newton iteration from a power-of-two overestimate
  size_t bits = a.mag_.size() * 32;
  BigInt x(1);
  for (size_t i = 0; i < bits / 2 + 2; ++i) x = x * BigInt(2);
  while (true) {
    BigInt y = (x + a / x) / BigInt(2);
    if (!(y < x)) break;
    x = y;
  }
  return {x, x * x == a};
}

std::string BigInt::to_string() const {
  if (is_zero()) return "0";
  std::string digits;
  std::vector<uint32_t> cur = mag_;
  while (!cur.empty()) {
    uint64_t rem = 0;
    for (size_t i = cur.size(); i-- > 0;) {
      uint64_t v = (rem << 32) | cur[i];
      cur[i] = (uint32_t)(v / 1000000000u);
      rem = v % 1000000000u;
    }
    while (!cur.empty() && cur.back() == 0) cur.pop_back();
    for (int k = 0; k < 9; ++k) {
      digits.push_back('0' + (char)(rem % 10));
      rem /= 10;
    }
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (sign_ < 0) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

long long BigInt::to_ll() const {
  if (mag_.size() > 2) throw std::overflow_error("BigInt: too large for long long");
  unsigned long long v = 0;
  for (size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
  if (v > 0x7fffffffffffffffull) throw std::overflow_error("BigInt: too large for long long");
  return sign_ < 0 ? -(long long)v : (long long)v;
}

size_t BigInt::hash() const {
  size_t h = 1469598103934665603ull ^ (size_t)sign_;
  for (uint32_t l : mag_) {
    h ^= l;
    h *= 1099511628211ull;
  }
  return h;
}

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
  if (den_.is_neg()) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = BigInt::gcd(num_, den_);
  if (!g.is_zero() && !g.is_one()) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
  if (num_.is_zero()) den_ = BigInt(1);
}

Rational Rational::operator-() const { return Rational(-num_, den_); }
Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num_ * o.num_, den_ * o.den_);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(num_ * o.den_, den_ * o.num_);
}
Rational Rational::inv() const {
  if (is_zero()) throw std::domain_error("Rational: inverse of zero");
  return Rational(den_, num_);
}

std::pair<Rational, bool> Rational::sqrt() const {
  if (num_.is_neg()) return {Rational(), false};
  auto [sn, okn] = BigInt::sqrt(num_);
  auto [sd, okd] = BigInt::sqrt(den_);
  if (!okn || !okd) return {Rational(), false};
  return {Rational(sn, sd), true};
}

std::string Rational::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

size_t Rational::hash() const { return num_.hash() * 31 + den_.hash(); }

}  // namespace atlf
