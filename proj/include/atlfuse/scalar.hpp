#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "atlfuse/bigint.hpp"

namespace atlf {

/// Raised when a scalar operation is undefined (division by zero,
/// inverting zero, m = 0 where an idempotent e/m is required).
struct DegenerateScalar : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised on backend mismatch or invalid field configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element of Q(i).
struct GaussQ {
  Rational re, im;
  GaussQ() = default;
  GaussQ(long long v) : re(v) {}
  GaussQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  GaussQ operator-() const { return {-re, -im}; }
  GaussQ operator+(const GaussQ& o) const { return {re + o.re, im + o.im}; }
  GaussQ operator-(const GaussQ& o) const { return {re - o.re, im - o.im}; }
  GaussQ operator*(const GaussQ& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussQ inv() const;
  GaussQ operator/(const GaussQ& o) const { return *this * o.inv(); }
  bool operator==(const GaussQ& o) const { return re == o.re && im == o.im; }
  std::pair<GaussQ, bool> sqrt() const;
  std::string to_string() const;
};

/// Dense polynomial over Q(i); coeff[k] multiplies s^k, trimmed.
using GPoly = std::vector<GaussQ>;

GPoly gp_mul(const GPoly& a, const GPoly& b);
GPoly gp_add(const GPoly& a, const GPoly& b);
GPoly gp_sub(const GPoly& a, const GPoly& b);
void gp_trim(GPoly& a);
GPoly gp_gcd(GPoly a, GPoly b);
std::pair<GPoly, GPoly> gp_divmod(const GPoly& a, const GPoly& b);
std::pair<GPoly, bool> gp_sqrt(const GPoly& a);

/// Exact backend payload: s^lo * num(s) / den(s) with den monic,
/// den(0) != 0, num(0) != 0 (s-powers cleared into lo), gcd(num,den)=1.
struct ExactRatio {
  long long lo = 0;
  GPoly num;  // empty <=> zero
  GPoly den;  // size >= 1, monic
  ExactRatio() : den{GaussQ(1)} {}
};

/// Polynomial over Q, residue mod the cyclotomic modulus.
using QPoly = std::vector<Rational>;

enum class Backend { Exact, Modp, Cyclotomic };

class FieldConfig;

/// Immutable exact field element; all operations are pure.
class Scalar {
 public:
  Scalar() = default;

  bool is_zero() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar inv() const;
  Scalar pow(long long e) const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool operator<(const Scalar& o) const;  // canonical ordering, for maps

  /// Exact square root in the same backend, if one exists there.
  std::optional<Scalar> sqrt() const;

  std::string to_string() const;
  size_t hash() const;

  const FieldConfig* cfg() const { return cfg_; }

 private:
  friend class FieldConfig;
  const FieldConfig* cfg_ = nullptr;
  std::variant<ExactRatio, uint64_t, QPoly> v_;
};

/// One field backend with its specialization choices. Scalars hold a
/// pointer back to their config; keep it alive for the whole run.
class FieldConfig {
 public:
  static FieldConfig exact();
  /// Random nonzero images of s and of every named z, from the seed.
  static FieldConfig modp(uint64_t p, uint64_t seed);
  /// s = primitive 4p-th root of unity in Q[x]/Phi_4p(x), i = x^p.
  static FieldConfig cyclotomic(int p);

  Backend backend() const { return backend_; }
  uint64_t prime() const { return p_; }
  int cyclotomic_p() const { return cyc_p_; }
  uint64_t seed() const { return seed_; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long v) const;
  Scalar from_rational(const Rational& r) const;
  Scalar i() const;       // i^2 = -1 in every backend
  Scalar s() const;       // s = q^{1/2}
  Scalar s_pow(long long k) const;
  Scalar loop_weight() const;  // m = s^2 + s^-2

  /// Named z-parameter. Exact: previously bound value (default: small
  /// primes 3, 5, 7, ... in binding order). Modp: seeded random nonzero.
  Scalar z(const std::string& name) const;
  void bind_z(const std::string& name, const Scalar& value);

  /// Parse a scalar expression over {integers, i, q, s, z<k>} with
  /// product, division, unary minus and ^ with (half-)integer exponents.
  Scalar parse(const std::string& expr) const;

  std::string describe() const;

  // internal to Scalar ops
  uint64_t mod_add(uint64_t a, uint64_t b) const { return (a + b) % p_; }
  uint64_t mod_mul(uint64_t a, uint64_t b) const { return (__uint128_t)a * b % p_; }
  uint64_t mod_pow(uint64_t a, uint64_t e) const;
  uint64_t mod_inv(uint64_t a) const;
  const QPoly& modulus() const { return cyc_mod_; }
  QPoly cyc_reduce(QPoly a) const;
  QPoly cyc_inv(const QPoly& a) const;
  Scalar make_exact(ExactRatio r) const;
  Scalar make_modp(uint64_t r) const;
  Scalar make_cyclo(QPoly r) const;

 private:
  FieldConfig() = default;
  Backend backend_ = Backend::Exact;
  uint64_t p_ = 0;
  uint64_t seed_ = 0;
  uint64_t s_img_ = 0, i_img_ = 0;
  int cyc_p_ = 0;
  QPoly cyc_mod_;  // Phi_{4p}
  mutable std::map<std::string, Scalar> zreg_;
  mutable uint64_t rng_state_ = 0;
  mutable int next_exact_z_ = 0;
  uint64_t next_random_nonzero() const;
};

/// (alpha, beta) with g^{sign} = alpha*1 + beta*e_i:
/// +1 -> (i s, -i s^{-1}), -1 -> (-i s^{-1}, i s).
std::pair<Scalar, Scalar> braid_coeffs(const FieldConfig& cfg, int sign);

}  // namespace atlf
