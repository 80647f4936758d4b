#pragma once

#include "atlfuse/modules.hpp"

namespace atlf {

/// Affine Hecke module in the normalization g_i x_i g_i = x_{i+1},
/// u = x_1 g_1 ... g_{N-1}: invertible braid matrices g_1..g_{N-1} and
/// pairwise commuting invertible x_1..x_N.
struct HeckeModule {
  int n = 0;
  int dim = 0;
  std::vector<Mat> g;  // g[i-1] = g_i
  std::vector<Mat> x;  // x[j-1] = x_j
};

/// Pull back an ATL_N module along the quotient map: g_i from e_i via the
/// braid substitution, x_1 = u g_{N-1}^-1 ... g_1^-1, x_{i+1} = g_i x_i g_i.
HeckeModule pullback_atl(const FieldConfig& cfg, const ModuleRep& M);

/// All HeckeModule invariants as matrix identities.
CheckReport verify_hecke(const FieldConfig& cfg, const HeckeModule& H);

/// Zelevinsky tensor product: induction along the parabolic
/// AH_{N1} (x) AH_{N2} with the minimal-coset-word basis.
HeckeModule zelevinsky_induce(const FieldConfig& cfg, const HeckeModule& H1,
                              const HeckeModule& H2);

/// Quotient by the smallest invariant subspace containing the TL-defect
/// images (e_i e_{i+-1} e_i - e_i, e_i^2 - m e_i) and omega = u^2 e_{N-1}
/// - e_1...e_{N-1}; returns the ATL_N module on the quotient (dim 0 when
/// the ideal generates everything). Throws when the ATL relations fail
/// on a nonzero quotient.
ModuleRep tl_quotient(const FieldConfig& cfg, const HeckeModule& H);

struct Identification {
  int twoJ = -1;
  Scalar z;
  bool exact = false;  // an explicit intertwiner was found
  bool quotient_of_standard = false;
};

/// Identify a module as a standard W_{j,z}[N]: j from the dimension and
/// e-kernel pattern, z from the u^N eigenvalue (2j-th root; for j = 0 the
/// u^N value is trivial, so callers supply candidate z's). Exact entries
/// carry an explicit intertwiner certificate.
std::vector<Identification> identify_standard_affine(
    const FieldConfig& cfg, const ModuleRep& M, const std::vector<Scalar>& z_candidates = {});

}  // namespace atlf
