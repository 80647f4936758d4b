#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace atlf {

/// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
/// Only what exact rational-function arithmetic needs: ring ops, divmod,
/// gcd, comparisons, decimal I/O, integer square root.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);
  static BigInt from_string(const std::string& s);

  bool is_zero() const { return mag_.empty(); }
  bool is_neg() const { return sign_ < 0; }
  bool is_one() const { return sign_ > 0 && mag_.size() == 1 && mag_[0] == 1; }

  BigInt operator-() const;
  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncated toward zero
  BigInt operator%(const BigInt& o) const;

  bool operator==(const BigInt& o) const { return sign_ == o.sign_ && mag_ == o.mag_; }
  bool operator!=(const BigInt& o) const { return !(*this == o); }
  bool operator<(const BigInt& o) const;

  static BigInt gcd(BigInt a, BigInt b);
  BigInt abs() const;

  /// Floor square root; second member tells whether the input was a perfect square.
  static std::pair<BigInt, bool> sqrt(const BigInt& a);

  std::string to_string() const;
  long long to_ll() const;  // throws if out of range
  size_t hash() const;

 private:
  int sign_ = 0;                // -1, 0, +1
  std::vector<uint32_t> mag_;   // little-endian, no leading zeros

  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                         std::vector<uint32_t>& q, std::vector<uint32_t>& r);
  void trim();
};

/// Rational number, always reduced, denominator > 0.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(BigInt n, BigInt d);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_integer() const { return den_.is_one(); }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational inv() const;

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }

  /// Exact square root if it exists.
  std::pair<Rational, bool> sqrt() const;

  std::string to_string() const;
  size_t hash() const;

 private:
  BigInt num_, den_;
};

}  // namespace atlf
