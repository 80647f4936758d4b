#include "atlfuse/hecke.hpp"

#include <algorithm>
#include <stdexcept>

namespace atlf {

namespace {

// quadratic data: g^2 = alpha g - q^{-1}, g^{-1} = -q g + q alpha
Scalar quad_alpha(const FieldConfig& cfg) {
  return cfg.i() * (cfg.s_pow(1) - cfg.s_pow(-3));
}

Mat g_from_e(const FieldConfig& cfg, const Mat& E, int sign) {
  auto [al, be] = braid_coeffs(cfg, sign);
  return mat_add(mat_scale(al, mat_identity(E.rows, cfg)), mat_scale(be, E));
}

Mat g_inverse(const FieldConfig& cfg, const Mat& G) {
  Scalar q = cfg.s_pow(2);
  return mat_add(mat_scale(-q, G), mat_scale(q * quad_alpha(cfg), mat_identity(G.rows, cfg)));
}

}  // namespace

HeckeModule pullback_atl(const FieldConfig& cfg, const ModuleRep& M) {
  if (!M.affine) throw std::invalid_argument("pullback_atl: affine modules only");
  HeckeModule H;
  H.n = M.n;
  H.dim = M.dim;
  for (int i = 1; i <= M.n - 1; ++i) H.g.push_back(g_from_e(cfg, M.e(i), +1));
  Mat x1 = M.uMat;
  for (int i = M.n - 1; i >= 1; --i) x1 = mat_mul(x1, g_inverse(cfg, H.g[(size_t)(i - 1)]));
  H.x.push_back(x1);
  for (int i = 1; i <= M.n - 1; ++i)
    H.x.push_back(mat_mul(mat_mul(H.g[(size_t)(i - 1)], H.x.back()), H.g[(size_t)(i - 1)]));
  auto rep = verify_hecke(cfg, H);
  if (!rep.all_pass()) throw std::logic_error("pullback_atl: inconsistent input module");
  return H;
}

CheckReport verify_hecke(const FieldConfig& cfg, const HeckeModule& H) {
  CheckReport rep;
  const int N = H.n;
  Mat id = mat_identity(H.dim, cfg);
  Scalar alpha = quad_alpha(cfg), qinv = cfg.s_pow(-2);
  auto item = [&](const std::string& name, bool pass) { rep.items.push_back({name, pass, ""}); };
  for (int i = 1; i <= N - 1; ++i) {
    const Mat& G = H.g[(size_t)(i - 1)];
    item("g" + std::to_string(i) + " quadratic",
         mat_mul(G, G) == mat_sub(mat_scale(alpha, G), mat_scale(qinv, id)));
    item("g" + std::to_string(i) + " invertible",
         mat_mul(G, g_inverse(cfg, G)) == id);
  }
  for (int i = 1; i + 1 <= N - 1; ++i)
    item("braid g" + std::to_string(i) + " g" + std::to_string(i + 1),
         mat_mul(mat_mul(H.g[i - 1], H.g[i]), H.g[i - 1]) ==
             mat_mul(mat_mul(H.g[i], H.g[i - 1]), H.g[i]));
  for (int i = 1; i <= N - 1; ++i)
    for (int j = i + 2; j <= N - 1; ++j)
      item("far gg " + std::to_string(i) + "," + std::to_string(j),
           mat_mul(H.g[i - 1], H.g[j - 1]) == mat_mul(H.g[j - 1], H.g[i - 1]));
  for (int i = 1; i <= N - 1; ++i)
    item("g" + std::to_string(i) + " x g = x" + std::to_string(i + 1),
         mat_mul(mat_mul(H.g[i - 1], H.x[i - 1]), H.g[i - 1]) == H.x[i]);
  for (int i = 1; i <= N; ++i)
    for (int j = i + 1; j <= N; ++j)
      item("[x" + std::to_string(i) + ",x" + std::to_string(j) + "] = 0",
           mat_mul(H.x[i - 1], H.x[j - 1]) == mat_mul(H.x[j - 1], H.x[i - 1]));
  for (int j = 1; j <= N; ++j)
    for (int i = 1; i <= N - 1; ++i) {
      if (j == i || j == i + 1) continue;
      item("[x" + std::to_string(j) + ",g" + std::to_string(i) + "] = 0",
           mat_mul(H.x[j - 1], H.g[i - 1]) == mat_mul(H.g[i - 1], H.x[j - 1]));
    }
  for (int j = 1; j <= N; ++j)
    item("x" + std::to_string(j) + " invertible",
         mat_rank(H.x[j - 1], cfg) == H.dim);
  return rep;
}

namespace {

using Perm = std::vector<int>;  // position -> value, 0-indexed

int inversions(const Perm& p) {
  int c = 0;
  for (size_t a = 0; a < p.size(); ++a)
    for (size_t b = a + 1; b < p.size(); ++b)
      if (p[a] > p[b]) ++c;
  return c;
}

Perm left_mul_s(const Perm& p, int i) {
  // s_i p with s_i swapping the values i-1 and i (0-indexed)
  Perm r = p;
  for (auto& v : r) {
    if (v == i - 1)
      v = i;
    else if (v == i)
      v = i - 1;
  }
  return r;
}

bool minimal_rep(const Perm& p, int N1) {
  for (size_t k = 1; k < p.size(); ++k) {
    if ((int)k == N1) continue;  // block boundary
    if (p[k - 1] > p[k]) return false;
  }
  return true;
}

}  // namespace

HeckeModule zelevinsky_induce(const FieldConfig& cfg, const HeckeModule& H1,
                              const HeckeModule& H2) {
  const int N1 = H1.n, N2 = H2.n, N = N1 + N2;
  const int d1 = H1.dim, d2 = H2.dim, dd = d1 * d2;
  // minimal coset representatives, ordered by (length, lexicographic)
  std::vector<Perm> cosets;
  {
    Perm p(N);
    for (int k = 0; k < N; ++k) p[k] = k;
    std::vector<Perm> all;
    do {
      if (minimal_rep(p, N1)) all.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(all.begin(), all.end(), [](const Perm& a, const Perm& b) {
      int la = inversions(a), lb = inversions(b);
      return la != lb ? la < lb : a < b;
    });
    cosets = std::move(all);
  }
  if (cosets.size() != binom(N, N1))
    throw std::logic_error("zelevinsky_induce: coset count is off");
  std::map<Perm, int> cindex;
  for (size_t k = 0; k < cosets.size(); ++k) cindex.emplace(cosets[k], (int)k);
  const int dim = (int)cosets.size() * dd;
  auto lab = [&](int c, int v1, int v2) { return (c * d1 + v1) * d2 + v2; };
  HeckeModule H;
  H.n = N;
  H.dim = dim;
  Scalar alpha = quad_alpha(cfg), qinv = cfg.s_pow(-2);
  // parabolic action of a factor generator matrix on the tensor slot
  auto tensor_apply = [&](Mat& target, int col_c, int v1, int v2, const Scalar& coef,
                          const Mat* A1, const Mat* A2, int row_c) {
    // target[:, (col_c,v1,v2)] += coef * (A1 (x) A2) e_{v1,v2} placed at coset row_c
    for (int w1 = 0; w1 < d1; ++w1) {
      Scalar c1 = A1 ? A1->at(w1, v1) : (w1 == v1 ? cfg.one() : cfg.zero());
      if (c1.is_zero()) continue;
      for (int w2 = 0; w2 < d2; ++w2) {
        Scalar c2 = A2 ? A2->at(w2, v2) : (w2 == v2 ? cfg.one() : cfg.zero());
        if (c2.is_zero()) continue;
        int r = lab(row_c, w1, w2);
        target.at(r, lab(col_c, v1, v2)) = target.at(r, lab(col_c, v1, v2)) + coef * c1 * c2;
      }
    }
  };
  // g_i matrices by the coset trichotomy
  for (int i = 1; i <= N - 1; ++i) {
    Mat G(dim, dim, cfg);
    for (size_t c = 0; c < cosets.size(); ++c) {
      const Perm& pi = cosets[c];
      Perm spi = left_mul_s(pi, i);
      bool longer = inversions(spi) > inversions(pi);
      if (minimal_rep(spi, N1)) {
        int c2 = cindex.at(spi);
        if (longer) {
          for (int v1 = 0; v1 < d1; ++v1)
            for (int v2 = 0; v2 < d2; ++v2)
              tensor_apply(G, (int)c, v1, v2, cfg.one(), nullptr, nullptr, c2);
        } else {
          // g_i g_pi = alpha g_pi - q^{-1} g_{s_i pi}
          for (int v1 = 0; v1 < d1; ++v1)
            for (int v2 = 0; v2 < d2; ++v2) {
              tensor_apply(G, (int)c, v1, v2, alpha, nullptr, nullptr, (int)c);
              tensor_apply(G, (int)c, v1, v2, -qinv, nullptr, nullptr, c2);
            }
        }
      } else {
        if (!longer) throw std::logic_error("zelevinsky_induce: trichotomy violated");
        // s_i pi = pi s_j with s_j parabolic: j from the positions of the
        // swapped values
        int p1 = -1, p2 = -1;
        for (int k = 0; k < N; ++k) {
          if (pi[k] == i - 1) p1 = k;
          if (pi[k] == i) p2 = k;
        }
        int lo = std::min(p1, p2);
        if (std::abs(p1 - p2) != 1) throw std::logic_error("zelevinsky_induce: non-adjacent swap");
        const Mat* A1 = nullptr;
        const Mat* A2 = nullptr;
        if (lo + 1 < N1) {
          A1 = &H1.g[(size_t)lo];  // factor-1 generator g_{lo+1}
        } else if (lo >= N1) {
          A2 = &H2.g[(size_t)(lo - N1)];
        } else {
          throw std::logic_error("zelevinsky_induce: swap across the block boundary");
        }
        for (int v1 = 0; v1 < d1; ++v1)
          for (int v2 = 0; v2 < d2; ++v2)
            tensor_apply(G, (int)c, v1, v2, cfg.one(), A1, A2, (int)c);
      }
    }
    H.g.push_back(std::move(G));
  }
  // x_j matrices: recursion over coset length
  std::vector<Mat> X(N, Mat(dim, dim, cfg));
  std::vector<Mat> Ginv;
  for (const auto& G : H.g) Ginv.push_back(g_inverse(cfg, G));
  for (size_t c = 0; c < cosets.size(); ++c) {
    const Perm& pi = cosets[c];
    int len = inversions(pi);
    if (len == 0) {
      // parabolic x on the tensor factors
      for (int j = 1; j <= N; ++j)
        for (int v1 = 0; v1 < d1; ++v1)
          for (int v2 = 0; v2 < d2; ++v2) {
            const Mat* A1 = j <= N1 ? &H1.x[(size_t)(j - 1)] : nullptr;
            const Mat* A2 = j > N1 ? &H2.x[(size_t)(j - N1 - 1)] : nullptr;
            tensor_apply(X[(size_t)(j - 1)], (int)c, v1, v2, cfg.one(), A1, A2, (int)c);
          }
      continue;
    }
    // left descent i: value i-1 sits right of value i
    int i = -1;
    for (int cand = 1; cand <= N - 1; ++cand) {
      int p1 = -1, p2 = -1;
      for (int k = 0; k < N; ++k) {
        if (pi[k] == cand - 1) p1 = k;
        if (pi[k] == cand) p2 = k;
      }
      if (p1 > p2) {
        i = cand;
        break;
      }
    }
    if (i < 0) throw std::logic_error("zelevinsky_induce: no left descent");
    Perm sigma = left_mul_s(pi, i);
    int cs = cindex.at(sigma);  // shorter, already computed
    for (int j = 1; j <= N; ++j) {
      Mat& Xj = X[(size_t)(j - 1)];
      for (int v1 = 0; v1 < d1; ++v1)
        for (int v2 = 0; v2 < d2; ++v2) {
          int col = lab((int)c, v1, v2);
          int scol = lab(cs, v1, v2);
          std::vector<Scalar> src(dim, cfg.zero()), out;
          if (j != i && j != i + 1) {
            for (int r = 0; r < dim; ++r) src[r] = Xj.at(r, scol);
            out = mat_apply(H.g[(size_t)(i - 1)], src);
          } else if (j == i) {
            for (int r = 0; r < dim; ++r) src[r] = X[(size_t)i].at(r, scol);
            out = mat_apply(Ginv[(size_t)(i - 1)], src);
          } else {  // j == i + 1
            std::vector<Scalar> a(dim, cfg.zero()), b(dim, cfg.zero());
            for (int r = 0; r < dim; ++r) a[r] = X[(size_t)i].at(r, scol);
            for (int r = 0; r < dim; ++r) b[r] = X[(size_t)(i - 1)].at(r, scol);
            auto gb = mat_apply(H.g[(size_t)(i - 1)], b);
            out.assign(dim, cfg.zero());
            for (int r = 0; r < dim; ++r) out[r] = alpha * a[r] - qinv * gb[r];
          }
          for (int r = 0; r < dim; ++r) Xj.at(r, col) = out[r];
        }
    }
  }
  H.x = std::move(X);
  auto rep = verify_hecke(cfg, H);
  if (!rep.all_pass()) {
    std::string bad;
    for (const auto& it : rep.items)
      if (!it.pass) bad += it.name + "; ";
    throw std::logic_error("zelevinsky_induce: invariants failed: " + bad);
  }
  return H;
}

namespace {

// invariant closure of a set of vectors under the given matrices
std::vector<std::vector<Scalar>> invariant_closure(std::vector<std::vector<Scalar>> seed,
                                                   const std::vector<Mat>& gens, int dim) {
  // echelon basis of the span
  std::vector<std::vector<Scalar>> basis;   // reduced rows
  std::vector<int> lead;                    // leading column per row
  auto insert = [&](std::vector<Scalar> v) -> bool {
    for (size_t r = 0; r < basis.size(); ++r) {
      if (v[(size_t)lead[r]].is_zero()) continue;
      Scalar f = v[(size_t)lead[r]];
      for (int c = 0; c < dim; ++c) v[(size_t)c] = v[(size_t)c] - f * basis[r][(size_t)c];
    }
    int l = -1;
    for (int c = 0; c < dim; ++c)
      if (!v[(size_t)c].is_zero()) {
        l = c;
        break;
      }
    if (l < 0) return false;
    Scalar inv = v[(size_t)l].inv();
    for (int c = 0; c < dim; ++c) v[(size_t)c] = v[(size_t)c] * inv;
    basis.push_back(std::move(v));
    lead.push_back(l);
    return true;
  };
  std::vector<std::vector<Scalar>> queue = std::move(seed);
  while (!queue.empty()) {
    auto v = std::move(queue.back());
    queue.pop_back();
    if (!insert(v)) continue;
    const auto& fresh = basis.back();
    for (const auto& G : gens) queue.push_back(mat_apply(G, fresh));
  }
  return basis;
}

}  // namespace

ModuleRep tl_quotient(const FieldConfig& cfg, const HeckeModule& H) {
  const int N = H.n;
  const int dim = H.dim;
  Scalar q = cfg.s_pow(2), iq = cfg.i() * cfg.s();
  Mat id = mat_identity(dim, cfg);
  // e_i = q + i q^{1/2} g_i
  std::vector<Mat> E;
  for (int i = 1; i <= N - 1; ++i)
    E.push_back(mat_add(mat_scale(q, id), mat_scale(iq, H.g[(size_t)(i - 1)])));
  // u = x_1 g_1 ... g_{N-1}
  Mat U = H.x[0];
  for (int i = 1; i <= N - 1; ++i) U = mat_mul(U, H.g[(size_t)(i - 1)]);
  // defect operators
  std::vector<Mat> defects;
  Scalar m = cfg.loop_weight();
  for (int i = 1; i <= N - 1; ++i)
    defects.push_back(mat_sub(mat_mul(E[i - 1], E[i - 1]), mat_scale(m, E[i - 1])));
  for (int i = 1; i <= N - 1; ++i)
    for (int d : {+1, -1}) {
      int j = i + d;
      if (j < 1 || j > N - 1) continue;
      defects.push_back(mat_sub(mat_mul(mat_mul(E[i - 1], E[j - 1]), E[i - 1]), E[i - 1]));
    }
  if (N >= 2) {
    Mat rhs = E[0];
    for (int i = 2; i <= N - 1; ++i) rhs = mat_mul(rhs, E[i - 1]);
    Mat lhs = mat_mul(mat_mul(U, U), E[N - 2]);
    defects.push_back(mat_sub(lhs, rhs));
  }
  // closure generators: all g_i^{+-1} and x_1^{+-1}
  std::vector<Mat> gens;
  for (const auto& G : H.g) {
    gens.push_back(G);
    gens.push_back(g_inverse(cfg, G));
  }
  gens.push_back(H.x[0]);
  auto x1inv = mat_inverse(H.x[0], cfg);
  if (!x1inv) throw std::logic_error("tl_quotient: x_1 not invertible");
  gens.push_back(*x1inv);
  std::vector<std::vector<Scalar>> seed;
  for (const auto& D : defects)
    for (int c = 0; c < dim; ++c) {
      std::vector<Scalar> v(dim, cfg.zero());
      bool nz = false;
      for (int r = 0; r < dim; ++r) {
        v[(size_t)r] = D.at(r, c);
        nz = nz || !v[(size_t)r].is_zero();
      }
      if (nz) seed.push_back(std::move(v));
    }
  auto sub = invariant_closure(std::move(seed), gens, dim);
  // assemble the quotient as an ATL_N module
  ModuleRep big;
  big.affine = true;
  big.n = N;
  big.dim = dim;
  if (N >= 2) {
    big.eMat.resize(N);
    for (int i = 1; i <= N - 1; ++i) big.eMat[(size_t)i] = E[(size_t)(i - 1)];
  }
  big.uMat = U;
  auto Uinv = mat_inverse(U, cfg);
  if (!Uinv) throw std::logic_error("tl_quotient: u not invertible");
  big.uinvMat = *Uinv;
  if (N >= 2) big.eMat[0] = mat_mul(mat_mul(U, big.eMat[(size_t)(N - 1)]), big.uinvMat);
  ModuleRep Q = quotient_module(cfg, big, sub);
  if (Q.dim > 0) {
    // u stays invertible on the quotient; refresh its inverse exactly
    auto qinvu = mat_inverse(Q.uMat, cfg);
    if (!qinvu) throw std::logic_error("tl_quotient: u singular on the quotient");
    Q.uinvMat = *qinvu;
    auto rep = verify_module(cfg, Q);
    if (!rep.all_pass())
      throw std::logic_error("tl_quotient: ATL relations fail on the quotient");
  }
  return Q;
}

std::vector<Identification> identify_standard_affine(const FieldConfig& cfg, const ModuleRep& M,
                                                     const std::vector<Scalar>& z_candidates) {
  std::vector<Identification> out;
  if (M.dim == 0) return out;
  const int N = M.n;
  Mat uN = mat_pow(M.uMat, N, cfg);
  auto central = mat_as_scalar(uN, cfg);
  for (int twoJ = N % 2; twoJ <= N; twoJ += 2) {
    if ((unsigned long long)M.dim != dim_standard_affine(N, twoJ)) continue;
    std::vector<Scalar> zs;
    for (const auto& zc : z_candidates) {
      if (zc.is_zero()) continue;
      if (central && !(zc.pow(twoJ) == *central)) continue;
      zs.push_back(zc);
      zs.push_back(zc.inv());
    }
    if (M.dim == 1 && twoJ == N) {
      // all-defect module: u itself acts by z
      zs.push_back(M.uMat.at(0, 0));
    }
    if (central && twoJ >= 1) {
      if (twoJ == 1) {
        zs.push_back(*central);
      } else if (twoJ == 2) {
        auto r = central->sqrt();
        if (r) {
          zs.push_back(*r);
          zs.push_back(-*r);
        }
      } else if (twoJ == 4) {
        auto r = central->sqrt();
        if (r) {
          for (const Scalar& rr : {*r, -*r}) {
            auto r2 = rr.sqrt();
            if (r2) {
              zs.push_back(*r2);
              zs.push_back(-*r2);
            }
          }
        }
      } else if (twoJ == 3) {
        // odd roots only via candidates
      }
    }
    // dedupe (for j = 0 the module depends on z only through z + z^-1)
    std::vector<Scalar> uniq;
    for (const auto& z : zs) {
      bool dup = false;
      for (const auto& u : uniq) {
        dup = dup || u == z;
        if (twoJ == 0) dup = dup || u + u.inv() == z + z.inv();
      }
      if (!dup) uniq.push_back(z);
    }
    // cheap trace prefilter before solving any intertwiner system
    std::vector<GenWord> probes;
    probes.push_back({{GenTok::U, 0}});
    probes.push_back({{GenTok::U, 0}, {GenTok::U, 0}});
    if (N >= 2) {
      for (int i = 0; i < N; ++i) probes.push_back({{GenTok::E, i}});
      probes.push_back({{GenTok::U, 0}, {GenTok::E, 1}});
      probes.push_back({{GenTok::E, 0}, {GenTok::E, 1}});
    }
    std::vector<Scalar> mtr;
    for (const auto& w : probes) mtr.push_back(mat_trace(M.word(cfg, w), cfg));
    bool found = false;
    for (const auto& z : uniq) {
      ModuleRep W = standard_affine(cfg, N, twoJ, z);
      bool traces_match = true;
      for (size_t p = 0; p < probes.size() && traces_match; ++p)
        traces_match = mat_trace(W.word(cfg, probes[p]), cfg) == mtr[p];
      if (!traces_match) continue;
      auto T = find_intertwiner(cfg, M, W);
      if (T) {
        out.push_back({twoJ, z, true, false});
        found = true;
      }
    }
    if (!found && central && twoJ >= 1) {
      // dimension matches but no certificate: heuristic candidate from the
      // central value alone
      if (twoJ == 1) out.push_back({twoJ, *central, false, false});
    }
  }
  return out;
}

}  // namespace atlf
