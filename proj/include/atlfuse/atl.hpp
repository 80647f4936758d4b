#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "atlfuse/tl.hpp"

namespace atlf {

/// A boundary point of an annular diagram on the universal cover:
/// side 0 = bottom (inner), 1 = top (outer), pos in Z, periodic mod n.
struct LiftPt {
  int8_t side = 0;
  int64_t pos = 0;
  bool operator==(const LiftPt& o) const { return side == o.side && pos == o.pos; }
  bool operator<(const LiftPt& o) const {
    return side != o.side ? side < o.side : pos < o.pos;
  }
};

/// Affine (annular) diagram: n sites on each boundary, pairing stored on
/// the lift for the representative points 0..n-1 of each side, plus the
/// number of non-contractible loops carried by the diagram.
/// nloops > 0 forces zero through-lines.
struct AffineDiagram {
  int n = 0;
  std::vector<LiftPt> bpart, tpart;  // partner of bottom/top rep p
  int32_t nloops = 0;

  LiftPt partner(const LiftPt& x) const;
  int jlines2() const;  // number of through-lines (= 2j)
  bool valid() const;
  bool operator==(const AffineDiagram& o) const {
    return n == o.n && nloops == o.nloops && bpart == o.bpart && tpart == o.tpart;
  }
  bool operator<(const AffineDiagram& o) const;
  std::string to_string() const;
};

AffineDiagram atl_identity(int n);
/// Translation u^{sign}: bottom p joined to top p+sign on the lift.
AffineDiagram gen_u(int N, int sign);
/// e_i with i mod N; i=0 is the wrap generator e_0 = e_N joining sites
/// N and 1 across the seam.
AffineDiagram gen_e_affine(int i, int N);

/// a stacked on top of b (a*b acts as "first b, then a"); returns the
/// product diagram (with accumulated non-contractible loops) and the
/// number of contractible loops removed.
std::pair<AffineDiagram, int> compose_affine(const AffineDiagram& a, const AffineDiagram& b);

struct AtlElement {
  int n = 0;
  std::map<AffineDiagram, Scalar> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const AtlElement& o) const;
  std::string to_string() const;
};

AtlElement atl_elem(const AffineDiagram& d, const Scalar& c);
AtlElement atl_one(const FieldConfig& cfg, int n);
AtlElement atl_add(const AtlElement& a, const AtlElement& b);
AtlElement atl_scale(const Scalar& c, const AtlElement& a);
AtlElement atl_mul(const FieldConfig& cfg, const AtlElement& a, const AtlElement& b);

/// alpha*1 + beta*e_i, i mod N (i = 0 allowed).
AtlElement braid_g_affine(const FieldConfig& cfg, int i, int N, int sign);

/// Product of the elements named by the tokens {e_i, u, u^-1, g_i^{+-1}}.
AtlElement word_eval_affine(const FieldConfig& cfg, const GenWord& w, int N);

/// Defining ATL_N relations (Definition I instances that exist at this N:
/// the e e e = e family needs N >= 3, far commutation N >= 4).
std::vector<RelSpec> atl_relations(int N);

CheckReport verify_atl_relations(const FieldConfig& cfg, int N);

}  // namespace atlf
