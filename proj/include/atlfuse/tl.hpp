#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "atlfuse/scalar.hpp"

namespace atlf {

/// Planar pairing on a rectangle with n points on each side.
/// Boundary points 0..n-1 are on the bottom, n..2n-1 on the top;
/// top point k sits above bottom point k-n. Stored as a partner array.
struct TlDiagram {
  int n = 0;
  std::vector<int> pair;  // pair[p] = partner of p, perfect matching

  bool operator==(const TlDiagram& o) const { return n == o.n && pair == o.pair; }
  bool operator<(const TlDiagram& o) const {
    if (n != o.n) return n < o.n;
    return pair < o.pair;
  }
  bool planar() const;
  std::string to_string() const;
};

TlDiagram tl_identity(int n);
/// e_i, 1 <= i <= N-1: cup-cap joining sites i, i+1 on both sides.
TlDiagram gen_e(int i, int N);

/// d1 stacked on top of d2; d1*d2 acts as "first d2, then d1".
/// Returns the product diagram and the number of closed loops removed.
std::pair<TlDiagram, int> compose(const TlDiagram& d1, const TlDiagram& d2);

/// All planar perfect matchings on 2N points, lexicographically ordered
/// by partner array; |result| = Catalan(N).
std::vector<TlDiagram> enumerate_basis(int N);

unsigned long long catalan(int N);
unsigned long long binom(int n, int k);

/// Finite linear combination of same-size diagrams.
struct TlElement {
  int n = 0;
  std::map<TlDiagram, Scalar> terms;  // zero coefficients absent

  bool is_zero() const { return terms.empty(); }
  bool operator==(const TlElement& o) const;
  std::string to_string() const;
};

TlElement tl_elem(const TlDiagram& d, const Scalar& c);
TlElement tl_elem_one(const FieldConfig& cfg, int n);
TlElement elem_add(const TlElement& a, const TlElement& b);
TlElement elem_scale(const Scalar& c, const TlElement& a);
TlElement elem_mul(const FieldConfig& cfg, const TlElement& a, const TlElement& b);

/// alpha*1 + beta*e_i with (alpha, beta) = braid_coeffs(sign).
TlElement braid_g(const FieldConfig& cfg, int i, int N, int sign);

/// Word in the generators; index 0 is reserved for the affine wrap.
struct GenTok {
  enum Kind { E, U, Uinv, G, Ginv } kind;
  int i = 0;  // generator index for E/G
};
using GenWord = std::vector<GenTok>;

TlElement word_eval_tl(const FieldConfig& cfg, const GenWord& w, int N);

/// One named relation check.
struct CheckItem {
  std::string name;
  bool pass = true;
  std::string detail;
};
struct CheckReport {
  std::vector<CheckItem> items;
  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

/// One defining relation, lhs = rhs (optionally rhs scaled by m).
struct RelSpec {
  std::string name;
  GenWord lhs, rhs;
  bool rhs_times_m = false;
};

/// Defining TL_N relations; only the instances that exist at this N.
std::vector<RelSpec> tl_relations(int N);

/// e_j^2 = m e_j, e_j e_{j+-1} e_j = e_j, far commutation, checked as
/// exact diagram-algebra identities.
CheckReport verify_tl_relations(const FieldConfig& cfg, int N);

}  // namespace atlf
