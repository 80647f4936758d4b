#pragma once

#include "atlfuse/hecke.hpp"
#include "atlfuse/towers.hpp"

namespace atlf {

/// An element left the bounded label set; retry with a larger bound.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite induction TL_N (x)_{TL_{N1} (x) TL_{N2}} M1 (x) M2 presented by
/// spanning labels (basis diagram, tensor index) and a row-reduced
/// relation set.
struct FiniteFusion {
  int N = 0, n1 = 0, n2 = 0;
  int d1 = 0, d2 = 0, mdim = 0;
  std::vector<TlDiagram> labels;
  std::map<TlDiagram, int> index;
  SparseReducer red;
  std::vector<int64_t> qb;
  std::unordered_map<int64_t, int> qix;
  ModuleRep mod;

  FiniteFusion(const FieldConfig& cfg) : red(cfg) {}
  int64_t lid(int lab, int v) const { return (int64_t)lab * mdim + v; }
  /// Quotient coordinates of x (x) e_v.
  std::vector<Scalar> project(const FieldConfig& cfg, const TlElement& x, int v) const;
  /// Left multiplication by an arbitrary element on the quotient.
  Mat elem_action(const FieldConfig& cfg, const TlElement& t) const;
};

FiniteFusion induce_finite(const FieldConfig& cfg, const ModuleRep& M1, const ModuleRep& M2);

/// Semisimple decomposition at generic q by trace probes; keys are 2j.
/// Throws when no small non-negative integer solution exists.
std::map<int, int> decompose_generic(const FieldConfig& cfg, const ModuleRep& M);

/// Affine induction by bounded closure: spanning labels are the diagrams
/// reachable by words of length <= L in {e_i, u, u^-1}, each with a
/// defining word; relations are imposed once fully registered, and the
/// quotient is certified by three consecutive stable levels.
struct AffineFusion {
  int N = 0, n1 = 0, n2 = 0, chirality = +1;
  int d1 = 0, d2 = 0, mdim = 0;
  std::vector<AffineDiagram> labels;
  std::map<AffineDiagram, int> index;
  std::vector<GenWord> words;
  std::vector<int> mexp;   // the word evaluates to m^mexp * diagram
  std::vector<int> level;
  SparseReducer red;
  std::vector<int64_t> qb;
  std::unordered_map<int64_t, int> qix;
  std::vector<int> dims;   // certified span dimension per level
  bool stabilized = false;
  int stable_level = -1;
  int built_level = 0;
  ModuleRep mod;

  AffineFusion(const FieldConfig& cfg) : red(cfg) {}
  int64_t lid(int lab, int v) const { return (int64_t)lab * mdim + v; }
  std::vector<Scalar> project(const FieldConfig& cfg, const AtlElement& x, int v) const;
};

AffineFusion fuse_affine_bounded(const FieldConfig& cfg, const ModuleRep& M1,
                                 const ModuleRep& M2, int chirality, int L);

/// Affine globalization ATL_{N+2} E (x)_{ATL_N} M via the same bounded
/// closure over the psi corner subalgebra.
ModuleRep globalize_affine(const FieldConfig& cfg, const ModuleRep& M, int L = -1);

struct FusionOutcome {
  int n1 = 0, n2 = 0;
  int dim = 0;
  bool inconclusive = false;
  int stable_level = -1;
  std::vector<int> dims_by_level;
  std::vector<Identification> identified;
};

FusionOutcome fuse_affine_outcome(const FieldConfig& cfg, const ModuleRep& M1,
                                  const ModuleRep& M2, int L,
                                  const std::vector<Scalar>& z_candidates);

/// Default word-length bound 2(N1+N2) + 4.
int default_bound(int N1, int N2);

/// Fuse at (N1, N2) and (N1, N2 + 2 shift) (or the N1 side when
/// shift_first) and compare identifications.
CheckReport check_stability(const FieldConfig& cfg, int twoJ1, const Scalar& z1, int N1,
                            int twoJ2, const Scalar& z2, int N2, int shift, bool shift_first);

/// z2 candidates swept by scan_resonances.
std::vector<std::pair<std::string, Scalar>> resonance_candidates(const FieldConfig& cfg,
                                                                 const Scalar& z1);

struct ResonanceHit {
  std::string relation;
  FusionOutcome forward, reverse;
};
std::vector<ResonanceHit> scan_resonances(const FieldConfig& cfg, int twoJ1, int N1, int twoJ2,
                                          int N2, const Scalar& z1);

/// Associator between the two bracketings of finite fusions, verified
/// well-defined on every spanning label, intertwining and bijective.
Mat associator_finite(const FieldConfig& cfg, const ModuleRep& M1, const ModuleRep& M2,
                      const ModuleRep& M3, const FiniteFusion& F12, const FiniteFusion& F12_3,
                      const FiniteFusion& F23, const FiniteFusion& F1_23);
CheckReport associator_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                    const ModuleRep& M2, const ModuleRep& M3);
CheckReport pentagon_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                  const ModuleRep& M2, const ModuleRep& M3, const ModuleRep& M4);

/// Braiding map c: M1 xf M2 -> M2 xf M1 (conjugation + swap), checked as
/// an intertwiner for the conjugated action, plus both hexagons.
Mat braiding_map_finite(const FieldConfig& cfg, const ModuleRep& M1, const ModuleRep& M2,
                        const FiniteFusion& F12, const FiniteFusion& F21);
CheckReport braiding_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                  const ModuleRep& M2);
CheckReport hexagon_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                 const ModuleRep& M2, const ModuleRep& M3);

/// Affine associator on a triple whose bracketings are both nonzero.
CheckReport associator_check_affine(const FieldConfig& cfg, const ModuleRep& M1,
                                    const ModuleRep& M2, const ModuleRep& M3, int L);

/// Semi-braiding: the algebra identities g u^(1) = utilde^(2) g etc. and
/// the module map M1 xf M2 -> M2 xf^- M1.
CheckReport semibraiding_check_affine(const FieldConfig& cfg, const ModuleRep& M1,
                                      const ModuleRep& M2, int L);

}  // namespace atlf
