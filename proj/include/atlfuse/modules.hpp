#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlfuse/atl.hpp"
#include "atlfuse/matrix.hpp"

namespace atlf {

/// Half-diagram on n points: partial non-crossing matching, -1 = defect.
/// Defects are reachable from the top (no arc covers one).
struct LinkState {
  int n = 0;
  std::vector<int> pair;
  bool operator==(const LinkState& o) const { return n == o.n && pair == o.pair; }
  bool operator<(const LinkState& o) const { return pair < o.pair; }
  int defects() const;
  std::string to_string() const;
};

/// Annular half-diagram in the lifted encoding: part[p] is the lifted
/// partner position of rep p, or DEFECT. Arcs have width < n, never
/// cover a defect line, and do not cross on the cylinder.
struct AffineLinkState {
  static constexpr int64_t DEFECT = INT64_MIN;
  int n = 0;
  std::vector<int64_t> part;
  bool operator==(const AffineLinkState& o) const { return n == o.n && part == o.part; }
  bool operator<(const AffineLinkState& o) const { return part < o.part; }
  int defects() const;
  std::vector<int> defect_positions() const;
  std::string to_string() const;
};

std::vector<LinkState> enumerate_link_states(int N, int twoJ);
std::vector<AffineLinkState> enumerate_affine_link_states(int N, int twoJ);

/// Diagrammatic action of a finite diagram on a link state:
/// zero (defect-lowering) or a single state with m^loops.
std::optional<std::pair<LinkState, int>> act_diagram(const TlDiagram& d, const LinkState& v);

struct AffineActResult {
  AffineLinkState state;
  int contractible = 0;     // factor m each
  int noncontractible = 0;  // factor z + z^-1 each (j = 0 only)
  int64_t slot_shift = 0;   // factor z^slot_shift (j > 0 only)
};
std::optional<AffineActResult> act_diagram_affine(const AffineDiagram& d,
                                                  const AffineLinkState& v);

/// Concrete module: one matrix per generator over Scalar.
/// Finite: eMat[i] is e_{i+1}, i = 0..n-2. Affine: eMat[i] is e_i,
/// i = 0..n-1, plus u and u^-1.
struct ModuleRep {
  bool affine = false;
  int n = 0;
  int dim = 0;
  int twoJ = -1;                // standard modules only
  std::optional<Scalar> z;     // affine standard modules only
  std::vector<Mat> eMat;
  Mat uMat, uinvMat;
  std::vector<std::string> basis;  // labels, optional

  const Mat& e(int i) const;  // finite: 1..n-1; affine: i mod n
  Mat word(const FieldConfig& cfg, const GenWord& w) const;
};

ModuleRep standard_finite(const FieldConfig& cfg, int N, int twoJ);
ModuleRep standard_affine(const FieldConfig& cfg, int N, int twoJ, const Scalar& z);

/// dim of the standard finite module, Catalan-binomial difference.
unsigned long long dim_standard_finite(int N, int twoJ);
unsigned long long dim_standard_affine(int N, int twoJ);

/// Matrix action of a word on a vector.
std::vector<Scalar> act(const FieldConfig& cfg, const ModuleRep& M, const GenWord& w,
                        const std::vector<Scalar>& v);

/// Cellular bilinear form on the standard finite module.
Mat gram_finite(const FieldConfig& cfg, int N, int twoJ);

/// Simple-module dimensions at q = exp(i pi / p) by Gram rank over the
/// cyclotomic backend, cross-checked against the subquotient recursion
/// dim L_j = d_j - dim L_{j+p-s(j)}; inconsistency throws.
std::vector<std::pair<int, int>> simple_dims_at_root(int N, int p);

/// All defining relations of the module's algebra as matrix identities;
/// for affine standard modules additionally u^N = z^{2j} Id.
CheckReport verify_module(const FieldConfig& cfg, const ModuleRep& M);

/// Intertwiner T with T A_src(g) = A_tgt(g) T for all generators;
/// returns an invertible one when the modules are isomorphic.
std::optional<Mat> find_intertwiner(const FieldConfig& cfg, const ModuleRep& src,
                                    const ModuleRep& tgt);

/// Quotient of M by the invariant subspace spanned by the given vectors
/// (closed under the action automatically).
ModuleRep quotient_module(const FieldConfig& cfg, const ModuleRep& M,
                          const std::vector<std::vector<Scalar>>& subspace);

}  // namespace atlf
