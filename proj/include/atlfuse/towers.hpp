#pragma once

#include "atlfuse/modules.hpp"

namespace atlf {

/// Standard embedding TL_N -> TL_N' (vertical strands on the right).
struct FiniteStdEmbedding {
  int n = 0, targetN = 0;
  std::vector<TlElement> e;  // e[j-1] = image of e_j
};

/// Arc embedding TL_N -> corner of TL_{N+2}: psi(e_j) = E e_j E with the
/// idempotent E = e_{N+1}/m; the corner unit is E itself.
struct FiniteArcEmbedding {
  int n = 0;  // target is n + 2
  TlElement corner;          // E
  std::vector<TlElement> e;  // e[j-1] = image of e_j
};

/// eps_{N1,N2} (chirality +1) / eps^-_{N1,N2} (chirality -1):
/// ATL_{N1} (x) ATL_{N2} -> ATL_{N1+N2}.
struct AffinePairEmbedding {
  int n1 = 0, n2 = 0;
  int chirality = +1;
  AtlElement u1, u1inv, u2, u2inv;
  std::vector<AtlElement> e1, e2;  // index j mod Nf; only present when Nf >= 2

  int targetN() const { return n1 + n2; }
  /// Image of a factor generator token (factor = 1 or 2).
  const AtlElement& image(int factor, const GenTok& t) const;
};

/// psi: ATL_N -> corner E ATL_{N+2} E, E = e_{N+1}/m.
struct AffinePsiEmbedding {
  int n = 0;  // target is n + 2
  AtlElement corner;  // E
  AtlElement u, uinv;
  std::vector<AtlElement> e;  // e[j] = image of e_j, j mod N (e[0] = image of e_N)
};

FiniteStdEmbedding embed_standard_finite(const FieldConfig& cfg, int N, int Nprime);
FiniteArcEmbedding embed_arc_finite(const FieldConfig& cfg, int N);
AffinePairEmbedding embed_affine_eps(const FieldConfig& cfg, int N1, int N2, int chirality);
AffinePsiEmbedding embed_affine_psi(const FieldConfig& cfg, int N);

/// Machine check that every defining relation of the source algebra(s)
/// holds for the images, including cross-commutation for pair sources.
CheckReport verify_embedding(const FieldConfig& cfg, const FiniteStdEmbedding& t);
CheckReport verify_embedding(const FieldConfig& cfg, const FiniteArcEmbedding& t);
CheckReport verify_embedding(const FieldConfig& cfg, const AffinePairEmbedding& t);
CheckReport verify_embedding(const FieldConfig& cfg, const AffinePsiEmbedding& t);

/// Braiding element g_{N1,N2}: left strands pass over right strands.
TlElement braiding_element(const FieldConfig& cfg, int N1, int N2);
AtlElement braiding_element_affine(const FieldConfig& cfg, int N1, int N2);
GenWord braiding_word(int N1, int N2, bool inverse);

/// Localization M -> E M with TL_N (resp. ATL_N) acting through the arc
/// (resp. psi) images. Signals DegenerateScalar when m = 0.
ModuleRep localize(const FieldConfig& cfg, const ModuleRep& M);

/// Globalization TL_{N+2} E (x)_{TL_N} M by the induction engine
/// (finite case; the affine case lives with the fusion engine).
ModuleRep globalize_finite(const FieldConfig& cfg, const ModuleRep& M);

}  // namespace atlf
