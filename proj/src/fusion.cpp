#include "atlfuse/fusion.hpp"

#include <algorithm>
#include <stdexcept>

namespace atlf {

namespace {

int posmod_i(int a, int b) {
  int r = a % b;
  return r < 0 ? r + b : r;
}

// tensor-slot action: A on factor 1 (dim d1) or B on factor 2 (dim d2)
Mat kron_action(const FieldConfig& cfg, const Mat* A, const Mat* B, int d1, int d2) {
  Mat R(d1 * d2, d1 * d2, cfg);
  for (int v1 = 0; v1 < d1; ++v1)
    for (int v2 = 0; v2 < d2; ++v2)
      for (int w1 = 0; w1 < d1; ++w1) {
        Scalar c1 = A ? A->at(w1, v1) : (w1 == v1 ? cfg.one() : cfg.zero());
        if (c1.is_zero()) continue;
        for (int w2 = 0; w2 < d2; ++w2) {
          Scalar c2 = B ? B->at(w2, v2) : (w2 == v2 ? cfg.one() : cfg.zero());
          if (c2.is_zero()) continue;
          R.at(w1 * d2 + w2, v1 * d2 + v2) = c1 * c2;
        }
      }
  return R;
}

}  // namespace

// ---------------------------------------------------------------- finite

std::vector<Scalar> FiniteFusion::project(const FieldConfig& cfg, const TlElement& x,
                                          int v) const {
  SparseRow row;
  for (const auto& [d, c] : x.terms) {
    auto it = index.find(d);
    if (it == index.end()) throw TruncationError("finite project: unregistered diagram");
    row.emplace_back(lid(it->second, v), c);
  }
  row = red.reduce(std::move(row));
  std::vector<Scalar> out(qb.size(), cfg.zero());
  for (const auto& [l, c] : row) out[(size_t)qix.at(l)] = c;
  return out;
}

Mat FiniteFusion::elem_action(const FieldConfig& cfg, const TlElement& t) const {
  Mat A((int)qb.size(), (int)qb.size(), cfg);
  Scalar m = cfg.loop_weight();
  for (size_t k = 0; k < qb.size(); ++k) {
    int lab = (int)(qb[k] / mdim);
    int v = (int)(qb[k] % mdim);
    SparseRow row;
    for (const auto& [dt, c] : t.terms) {
      auto [d2, loops] = compose(dt, labels[(size_t)lab]);
      row.emplace_back(lid(index.at(d2), v), c * m.pow(loops));
    }
    row = red.reduce(std::move(row));
    for (const auto& [l, c] : row) A.at(qix.at(l), (int)k) = c;
  }
  return A;
}

FiniteFusion induce_finite(const FieldConfig& cfg, const ModuleRep& M1, const ModuleRep& M2) {
  if (M1.affine || M2.affine) throw std::invalid_argument("induce_finite: finite modules only");
  FiniteFusion F(cfg);
  F.n1 = M1.n;
  F.n2 = M2.n;
  F.N = M1.n + M2.n;
  F.d1 = std::max(M1.dim, 0);
  F.d2 = std::max(M2.dim, 0);
  F.mdim = std::max(F.d1 * F.d2, 1);
  F.labels = enumerate_basis(F.N);
  for (size_t k = 0; k < F.labels.size(); ++k) F.index.emplace(F.labels[k], (int)k);
  Scalar m = cfg.loop_weight();
  // subalgebra generators: e_i^(1) -> e_i, e_k^(2) -> e_{N1+k}
  std::vector<std::pair<TlDiagram, Mat>> gens;
  for (int i = 1; i <= M1.n - 1; ++i)
    gens.push_back({gen_e(i, F.N), kron_action(cfg, &M1.e(i), nullptr, F.d1, F.d2)});
  for (int k = 1; k <= M2.n - 1; ++k)
    gens.push_back({gen_e(M1.n + k, F.N), kron_action(cfg, nullptr, &M2.e(k), F.d1, F.d2)});
  for (size_t li = 0; li < F.labels.size(); ++li) {
    for (const auto& [img, act] : gens) {
      auto [d2, loops] = compose(F.labels[li], img);
      Scalar coef = m.pow(loops);
      int lab2 = F.index.at(d2);
      for (int v = 0; v < F.d1 * F.d2; ++v) {
        SparseRow row;
        row.emplace_back(F.lid(lab2, v), coef);
        for (int w = 0; w < F.d1 * F.d2; ++w)
          if (!act.at(w, v).is_zero()) row.emplace_back(F.lid((int)li, w), -act.at(w, v));
        F.red.add_relation(std::move(row));
      }
    }
  }
  for (size_t li = 0; li < F.labels.size(); ++li)
    for (int v = 0; v < F.d1 * F.d2; ++v)
      if (!F.red.is_pivot(F.lid((int)li, v))) F.qb.push_back(F.lid((int)li, v));
  std::sort(F.qb.begin(), F.qb.end());
  for (size_t k = 0; k < F.qb.size(); ++k) F.qix.emplace(F.qb[k], (int)k);
  F.mod.affine = false;
  F.mod.n = F.N;
  F.mod.dim = (int)F.qb.size();
  for (int i = 1; i <= F.N - 1; ++i)
    F.mod.eMat.push_back(F.elem_action(cfg, tl_elem(gen_e(i, F.N), cfg.one())));
  return F;
}

std::map<int, int> decompose_generic(const FieldConfig& cfg, const ModuleRep& M) {
  const int N = M.n;
  std::vector<int> twoJs;
  for (int twoJ = N % 2; twoJ <= N; twoJ += 2) twoJs.push_back(twoJ);
  std::vector<ModuleRep> W;
  for (int twoJ : twoJs) W.push_back(standard_finite(cfg, N, twoJ));
  // probe words: empty, length-1, length-2 e-words plus seeded random ones
  std::vector<GenWord> probes;
  probes.push_back({});
  // products of k disjoint generators separate the standard characters
  for (int k = 1; 2 * k - 1 <= N - 1; ++k) {
    GenWord w;
    for (int i = 1; i <= 2 * k - 1; i += 2) w.push_back({GenTok::E, i});
    probes.push_back(std::move(w));
  }
  for (int i = 1; i <= N - 1; ++i) probes.push_back({{GenTok::E, i}});
  for (int i = 1; i <= N - 1; ++i)
    for (int j = 1; j <= N - 1; ++j) probes.push_back({{GenTok::E, i}, {GenTok::E, j}});
  for (int i = 1; i <= N - 1; ++i)
    for (int j = 1; j <= N - 1; ++j)
      for (int k = 1; k <= N - 1; ++k)
        probes.push_back({{GenTok::E, i}, {GenTok::E, j}, {GenTok::E, k}});
  uint64_t st = 0xc0ffee123456789ull ^ (uint64_t)N;
  auto rnd = [&]() {
    st ^= st << 13;
    st ^= st >> 7;
    st ^= st << 17;
    return st;
  };
  for (int t = 0; t < 16 && N >= 2; ++t) {
    GenWord w;
    for (int k = 0; k < 4 + (t % 3); ++k) w.push_back({GenTok::E, 1 + (int)(rnd() % (N - 1))});
    probes.push_back(std::move(w));
  }
  auto trace_of = [&](const ModuleRep& R, const GenWord& w) {
    Scalar t = cfg.zero();
    for (int v = 0; v < R.dim; ++v) {
      std::vector<Scalar> e(R.dim, cfg.zero());
      e[(size_t)v] = cfg.one();
      for (size_t k = w.size(); k-- > 0;) e = mat_apply(R.e(w[k].i), e);
      t = t + e[(size_t)v];
    }
    return t;
  };
  // select greedily a full-rank probe subset on the standards (cheap),
  // then evaluate only those words on M
  const int unknowns = (int)twoJs.size();
  std::vector<GenWord> chosen;
  std::vector<std::vector<Scalar>> rows;
  {
    std::vector<std::vector<Scalar>> ech;
    std::vector<int> lead;
    for (const auto& w : probes) {
      if ((int)chosen.size() == unknowns) break;
      std::vector<Scalar> row;
      for (size_t j = 0; j < W.size(); ++j) row.push_back(trace_of(W[j], w));
      std::vector<Scalar> red = row;
      for (size_t r = 0; r < ech.size(); ++r) {
        Scalar f = red[(size_t)lead[r]];
        if (f.is_zero()) continue;
        for (int c = 0; c < unknowns; ++c) red[(size_t)c] = red[(size_t)c] - f * ech[r][(size_t)c];
      }
      int l = -1;
      for (int c = 0; c < unknowns; ++c)
        if (!red[(size_t)c].is_zero()) {
          l = c;
          break;
        }
      if (l < 0) continue;
      Scalar inv = red[(size_t)l].inv();
      for (int c = 0; c < unknowns; ++c) red[(size_t)c] = red[(size_t)c] * inv;
      ech.push_back(std::move(red));
      lead.push_back(l);
      chosen.push_back(w);
      rows.push_back(std::move(row));
    }
  }
  if ((int)chosen.size() != unknowns)
    throw std::logic_error("decompose_generic: singular probe system");
  Mat P(unknowns, unknowns, cfg);
  std::vector<Scalar> target;
  for (int p = 0; p < unknowns; ++p) {
    for (int j = 0; j < unknowns; ++j) P.at(p, j) = rows[(size_t)p][(size_t)j];
    target.push_back(trace_of(M, chosen[(size_t)p]));
  }
  auto sol = mat_solve(P, target, cfg);
  if (!sol) throw std::logic_error("decompose_generic: inconsistent trace system");
  // the solved multiplicities must also reproduce unused probes
  {
    int checked = 0;
    for (const auto& w : probes) {
      if (checked >= 4) break;
      bool used = false;
      for (const auto& cw : chosen) {
        if (cw.size() != w.size()) continue;
        bool same = true;
        for (size_t k = 0; k < w.size(); ++k)
          same = same && cw[k].kind == w[k].kind && cw[k].i == w[k].i;
        if (same) used = true;
      }
      if (used) continue;
      Scalar lhs = trace_of(M, w);
      Scalar rhs = cfg.zero();
      for (size_t j = 0; j < W.size(); ++j) rhs = rhs + (*sol)[j] * trace_of(W[j], w);
      if (!(lhs == rhs)) throw std::logic_error("decompose_generic: residual probe mismatch");
      ++checked;
    }
  }
  std::map<int, int> out;
  unsigned long long total = 0;
  for (size_t j = 0; j < twoJs.size(); ++j) {
    // lift the multiplicity to a small non-negative integer
    long long c = -1;
    for (long long cand = 0; cand <= 4096; ++cand)
      if ((*sol)[j] == cfg.from_int(cand)) {
        c = cand;
        break;
      }
    if (c < 0) throw std::logic_error("decompose_generic: non-integer multiplicity");
    if (c) out[twoJs[j]] = (int)c;
    total += (unsigned long long)c * dim_standard_finite(N, twoJs[j]);
  }
  if (total != (unsigned long long)M.dim)
    throw std::logic_error("decompose_generic: dimensions do not add up");
  return out;
}

// ---------------------------------------------------------------- affine

std::vector<Scalar> AffineFusion::project(const FieldConfig& cfg, const AtlElement& x,
                                          int v) const {
  SparseRow row;
  for (const auto& [d, c] : x.terms) {
    auto it = index.find(d);
    if (it == index.end()) throw TruncationError("affine project: unregistered diagram");
    row.emplace_back(lid(it->second, v), c);
  }
  row = red.reduce(std::move(row));
  std::vector<Scalar> out(qb.size(), cfg.zero());
  for (const auto& [l, c] : row) {
    auto jt = qix.find(l);
    if (jt == qix.end()) throw TruncationError("affine project: landed outside the basis");
    out[(size_t)jt->second] = c;
  }
  return out;
}

namespace {

struct SubalgGen {
  AtlElement img;
  Mat act;
};

struct Seed {
  AffineDiagram d;
  GenWord word;
  int mexp;
  int level;
};

// common bounded-closure engine
void run_affine_engine(const FieldConfig& cfg, AffineFusion& F, const std::vector<Seed>& seeds,
                       const std::vector<SubalgGen>& gens, int L) {
  Scalar m = cfg.loop_weight();
  const int N = F.N;
  auto add_label = [&](const AffineDiagram& d, GenWord w, int me, int lv) -> int {
    auto it = F.index.find(d);
    if (it != F.index.end()) return it->second;
    int id = (int)F.labels.size();
    F.labels.push_back(d);
    F.index.emplace(d, id);
    F.words.push_back(std::move(w));
    F.mexp.push_back(me);
    F.level.push_back(lv);
    return id;
  };
  for (const auto& s : seeds) add_label(s.d, s.word, s.mexp, s.level);
  // ambient generators for the closure
  std::vector<std::pair<GenTok, AffineDiagram>> amb;
  for (int i = 0; i < N; ++i) amb.push_back({{GenTok::E, i}, gen_e_affine(i, N)});
  amb.push_back({{GenTok::U, 0}, gen_u(N, +1)});
  amb.push_back({{GenTok::Uinv, 0}, gen_u(N, -1)});
  // pending relations per (label, gen); retried after each level
  struct Pending {
    int lab, gen;
  };
  std::vector<Pending> pending;
  std::vector<char> done;  // (lab * gens.size() + gen)
  auto try_add_relation = [&](int lab, int gi) -> bool {
    const auto& g = gens[(size_t)gi];
    // x * img(a): all product diagrams must be registered
    std::vector<std::pair<int, Scalar>> prod;
    for (const auto& [dg, cg] : g.img.terms) {
      auto [d2, loops] = compose_affine(F.labels[(size_t)lab], dg);
      auto it = F.index.find(d2);
      if (it == F.index.end()) return false;
      prod.emplace_back(it->second, cg * m.pow(loops));
    }
    for (int v = 0; v < F.mdim; ++v) {
      SparseRow row;
      for (const auto& [lab2, c] : prod) row.emplace_back(F.lid(lab2, v), c);
      for (int w = 0; w < F.mdim; ++w)
        if (!g.act.at(w, v).is_zero()) row.emplace_back(F.lid(lab, w), -g.act.at(w, v));
      F.red.add_relation(std::move(row));
    }
    return true;
  };
  size_t frontier_begin = 0;
  for (int lvl = 1; lvl <= L; ++lvl) {
    size_t frontier_end = F.labels.size();
    for (size_t li = frontier_begin; li < frontier_end; ++li) {
      for (const auto& [tok, dg] : amb) {
        auto [d2, loops] = compose_affine(dg, F.labels[li]);
        if (F.index.count(d2)) continue;
        GenWord w{tok};
        for (const auto& t : F.words[li]) w.push_back(t);
        add_label(d2, std::move(w), F.mexp[li] + loops, lvl);
      }
    }
    frontier_begin = frontier_end;
    // impose newly registerable relations
    done.resize(F.labels.size() * gens.size(), 0);
    for (size_t li = 0; li < F.labels.size(); ++li)
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        size_t key = li * gens.size() + gi;
        if (done[key]) continue;
        if (try_add_relation((int)li, (int)gi)) done[key] = 1;
      }
    F.built_level = lvl;
    // certified level C: all labels of level <= C have all relations in
    int C = lvl;
    for (size_t li = 0; li < F.labels.size() && C > 0; ++li) {
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        if (!done[li * gens.size() + gi] && F.level[li] <= C) C = F.level[li] - 1;
      }
    }
    // span dimensions per level (labels ordered by discovery = by level)
    F.dims.assign((size_t)lvl + 1, 0);
    {
      std::vector<int> nonpiv((size_t)lvl + 1, 0);
      for (size_t li = 0; li < F.labels.size(); ++li) {
        if (F.level[li] > lvl) continue;
        for (int v = 0; v < F.mdim; ++v)
          if (!F.red.is_pivot(F.lid((int)li, v))) ++nonpiv[(size_t)F.level[li]];
      }
      int acc = 0;
      for (int l = 0; l <= lvl; ++l) {
        acc += nonpiv[(size_t)l];
        F.dims[(size_t)l] = acc;
      }
    }
    for (int l = 0; l + 2 <= C; ++l) {
      if (F.dims[(size_t)l] == F.dims[(size_t)(l + 1)] &&
          F.dims[(size_t)l] == F.dims[(size_t)(l + 2)]) {
        F.stabilized = true;
        F.stable_level = l;
        break;
      }
    }
    if (F.stabilized) break;
  }
  if (!F.stabilized) return;
  // quotient basis: non-pivot labels at level <= stable_level
  for (size_t li = 0; li < F.labels.size(); ++li) {
    if (F.level[li] > F.stable_level) continue;
    for (int v = 0; v < F.mdim; ++v)
      if (!F.red.is_pivot(F.lid((int)li, v))) F.qb.push_back(F.lid((int)li, v));
  }
  std::sort(F.qb.begin(), F.qb.end());
  for (size_t k = 0; k < F.qb.size(); ++k) F.qix.emplace(F.qb[k], (int)k);
  // generator matrices
  F.mod.affine = true;
  F.mod.n = N;
  F.mod.dim = (int)F.qb.size();
  auto build = [&](const AffineDiagram& dg) {
    Mat A((int)F.qb.size(), (int)F.qb.size(), cfg);
    for (size_t k = 0; k < F.qb.size(); ++k) {
      int lab = (int)(F.qb[k] / F.mdim);
      int v = (int)(F.qb[k] % F.mdim);
      auto [d2, loops] = compose_affine(dg, F.labels[(size_t)lab]);
      auto it = F.index.find(d2);
      if (it == F.index.end()) throw TruncationError("affine engine: closure left the label set");
      SparseRow row{{F.lid(it->second, v), m.pow(loops)}};
      row = F.red.reduce(std::move(row));
      for (const auto& [l, c] : row) {
        auto jt = F.qix.find(l);
        if (jt == F.qix.end()) throw TruncationError("affine engine: span not closed");
        A.at(jt->second, (int)k) = c;
      }
    }
    return A;
  };
  if (F.mod.dim > 0) {
    if (N >= 2) {
      F.mod.eMat.resize(N);
      for (int i = 0; i < N; ++i) F.mod.eMat[(size_t)i] = build(gen_e_affine(i, N));
    }
    F.mod.uMat = build(gen_u(N, +1));
    F.mod.uinvMat = build(gen_u(N, -1));
    auto rep = verify_module(cfg, F.mod);
    if (!rep.all_pass()) {
      F.stabilized = false;  // never silently truncate
      F.stable_level = -1;
    }
  }
}

}  // namespace

AffineFusion fuse_affine_bounded(const FieldConfig& cfg, const ModuleRep& M1,
                                 const ModuleRep& M2, int chirality, int L) {
  if (!M1.affine || !M2.affine)
    throw std::invalid_argument("fuse_affine_bounded: affine modules only");
  AffineFusion F(cfg);
  F.n1 = M1.n;
  F.n2 = M2.n;
  F.N = M1.n + M2.n;
  F.chirality = chirality;
  F.d1 = M1.dim;
  F.d2 = M2.dim;
  F.mdim = std::max(F.d1 * F.d2, 1);
  if (M1.dim == 0 || M2.dim == 0) {
    // induction from the zero module is zero
    F.stabilized = true;
    F.stable_level = 0;
    F.dims = {0};
    F.mod.affine = true;
    F.mod.n = F.N;
    F.mod.dim = 0;
    return F;
  }
  AffinePairEmbedding eps = embed_affine_eps(cfg, M1.n, M2.n, chirality);
  std::vector<SubalgGen> gens;
  auto addgen = [&](const AtlElement& img, const Mat* A, const Mat* B) {
    gens.push_back({img, kron_action(cfg, A, B, F.d1, F.d2)});
  };
  addgen(eps.u1, &M1.uMat, nullptr);
  addgen(eps.u1inv, &M1.uinvMat, nullptr);
  addgen(eps.u2, nullptr, &M2.uMat);
  addgen(eps.u2inv, nullptr, &M2.uinvMat);
  for (int j = 0; j < (int)eps.e1.size(); ++j) addgen(eps.e1[(size_t)j], &M1.e(j), nullptr);
  for (int k = 0; k < (int)eps.e2.size(); ++k) addgen(eps.e2[(size_t)k], nullptr, &M2.e(k));
  std::vector<Seed> seeds{{atl_identity(F.N), {}, 0, 0}};
  run_affine_engine(cfg, F, seeds, gens, L);
  return F;
}

ModuleRep globalize_affine(const FieldConfig& cfg, const ModuleRep& M, int L) {
  if (!M.affine) throw std::invalid_argument("globalize_affine: affine modules only");
  const int N = M.n, NN = N + 2;
  if (L < 0) L = default_bound(N, 2);
  AffinePsiEmbedding psi = embed_affine_psi(cfg, N);
  AffineFusion F(cfg);
  F.n1 = N;
  F.n2 = 2;
  F.N = NN;
  F.d1 = M.dim;
  F.d2 = 1;
  F.mdim = std::max(M.dim, 1);
  std::vector<SubalgGen> gens;
  gens.push_back({psi.u, M.uMat});
  gens.push_back({psi.uinv, M.uinvMat});
  if (N >= 2)
    for (int j = 0; j < N; ++j) gens.push_back({psi.e[(size_t)j], M.e(j)});
  std::vector<Seed> seeds{
      {gen_e_affine(N + 1, NN), {{GenTok::E, posmod_i(N + 1, NN)}}, 0, 0}};
  run_affine_engine(cfg, F, seeds, gens, L);
  if (!F.stabilized) throw TruncationError("globalize_affine: no stabilization within bound");
  return F.mod;
}

int default_bound(int N1, int N2) { return 2 * (N1 + N2) + 4; }

FusionOutcome fuse_affine_outcome(const FieldConfig& cfg, const ModuleRep& M1,
                                  const ModuleRep& M2, int L,
                                  const std::vector<Scalar>& z_candidates) {
  FusionOutcome out;
  out.n1 = M1.n;
  out.n2 = M2.n;
  AffineFusion F = fuse_affine_bounded(cfg, M1, M2, +1, L);
  out.dims_by_level = F.dims;
  if (!F.stabilized) {
    out.inconclusive = true;
    out.dim = -1;
    return out;
  }
  out.stable_level = F.stable_level;
  out.dim = F.mod.dim;
  if (F.mod.dim > 0) out.identified = identify_standard_affine(cfg, F.mod, z_candidates);
  return out;
}

namespace {

bool same_identification(const FusionOutcome& a, const FusionOutcome& b) {
  if (a.inconclusive || b.inconclusive) return false;
  if ((a.dim == 0) != (b.dim == 0)) return false;
  if (a.dim == 0) return true;
  // compare the exact identifications: same 2j and, for j > 0, same z;
  // for j = 0 compare z + z^-1 (the documented ambiguity)
  for (const auto& ia : a.identified) {
    if (!ia.exact) continue;
    for (const auto& ib : b.identified) {
      if (!ib.exact || ia.twoJ != ib.twoJ) continue;
      if (ia.twoJ == 0) {
        if (ia.z + ia.z.inv() == ib.z + ib.z.inv()) return true;
      } else if (ia.z == ib.z || ia.z == ib.z.inv()) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

CheckReport check_stability(const FieldConfig& cfg, int twoJ1, const Scalar& z1, int N1,
                            int twoJ2, const Scalar& z2, int N2, int shift, bool shift_first) {
  CheckReport rep;
  ModuleRep A = standard_affine(cfg, N1, twoJ1, z1);
  ModuleRep B = standard_affine(cfg, N2, twoJ2, z2);
  int N1b = shift_first ? N1 + 2 * shift : N1;
  int N2b = shift_first ? N2 : N2 + 2 * shift;
  ModuleRep A2 = standard_affine(cfg, N1b, twoJ1, z1);
  ModuleRep B2 = standard_affine(cfg, N2b, twoJ2, z2);
  std::vector<Scalar> cands;
  for (const auto& [name, zc] : resonance_candidates(cfg, z1)) {
    (void)name;
    cands.push_back(zc);
  }
  FusionOutcome base = fuse_affine_outcome(cfg, A, B, default_bound(N1, N2), cands);
  FusionOutcome shifted = fuse_affine_outcome(cfg, A2, B2, default_bound(N1b, N2b), cands);
  std::string name = "stability " + std::to_string(N1) + "+" + std::to_string(N2) + " vs " +
                     std::to_string(N1b) + "+" + std::to_string(N2b);
  bool pass = !base.inconclusive && !shifted.inconclusive &&
              (base.dim == 0 ? shifted.dim == 0 : same_identification(base, shifted));
  std::string detail = "dims " + std::to_string(base.dim) + " / " + std::to_string(shifted.dim);
  rep.items.push_back({name, pass, detail});
  return rep;
}

std::vector<std::pair<std::string, Scalar>> resonance_candidates(const FieldConfig& cfg,
                                                                 const Scalar& z1) {
  std::vector<std::pair<std::string, Scalar>> out;
  Scalar q = cfg.s_pow(2), i = cfg.i();
  for (int inv = 0; inv <= 1; ++inv) {
    Scalar z = inv ? z1.inv() : z1;
    std::string zs = inv ? "z1^-1" : "z1";
    out.push_back({zs, z});
    out.push_back({"-q*" + zs, -(q * z)});
    out.push_back({"-q^-1*" + zs, -(q.inv() * z)});
    out.push_back({"i*q^(1/2)*" + zs, i * cfg.s_pow(1) * z});
    out.push_back({"-i*q^(1/2)*" + zs, -(i * cfg.s_pow(1) * z)});
    out.push_back({"i*q^(-1/2)*" + zs, i * cfg.s_pow(-1) * z});
    out.push_back({"-i*q^(-1/2)*" + zs, -(i * cfg.s_pow(-1) * z)});
    out.push_back({"i*q^(3/2)*" + zs, i * cfg.s_pow(3) * z});
    out.push_back({"-i*q^(3/2)*" + zs, -(i * cfg.s_pow(3) * z)});
    out.push_back({"i*q^(-3/2)*" + zs, i * cfg.s_pow(-3) * z});
    out.push_back({"-i*q^(-3/2)*" + zs, -(i * cfg.s_pow(-3) * z)});
  }
  return out;
}

std::vector<ResonanceHit> scan_resonances(const FieldConfig& cfg, int twoJ1, int N1, int twoJ2,
                                          int N2, const Scalar& z1) {
  std::vector<ResonanceHit> hits;
  ModuleRep M1 = standard_affine(cfg, N1, twoJ1, z1);
  auto cands = resonance_candidates(cfg, z1);
  // a few generic points on top of the structured sweep
  for (long long g : {101, 103, 107, 109, 113})
    cands.push_back({"generic " + std::to_string(g), cfg.from_int(g)});
  std::vector<Scalar> idcands;
  for (const auto& [name, zc] : cands) {
    (void)name;
    idcands.push_back(zc);
  }
  for (const auto& [name, z2] : cands) {
    ModuleRep M2 = standard_affine(cfg, N2, twoJ2, z2);
    FusionOutcome fwd = fuse_affine_outcome(cfg, M1, M2, default_bound(N1, N2), idcands);
    FusionOutcome rev = fuse_affine_outcome(cfg, M2, M1, default_bound(N2, N1), idcands);
    if (fwd.dim != 0 || rev.dim != 0 || fwd.inconclusive || rev.inconclusive) {
      ResonanceHit h;
      h.relation = "z2=" + name;
      h.forward = fwd;
      h.reverse = rev;
      hits.push_back(std::move(h));
    }
  }
  return hits;
}

// ------------------------------------------------------------- associator

namespace {

TlDiagram extend_right(const TlDiagram& d, int extra) {
  // add vertical strands on the right: TL_n diagram into TL_{n+extra}
  TlDiagram r = tl_identity(d.n + extra);
  int n = d.n, N = d.n + extra;
  auto remap = [&](int p) { return p < n ? p : N + (p - n); };
  for (int p = 0; p < 2 * n; ++p) {
    int q = d.pair[p];
    r.pair[(size_t)remap(p)] = remap(q);
  }
  return r;
}

// verified linear map between induction quotients: columns from a label
// image function, checked against every spanning label
struct MappedColumns {
  Mat A;
  bool well_defined = true;
};

}  // namespace

Mat associator_finite(const FieldConfig& cfg, const ModuleRep& M1, const ModuleRep& M2,
                      const ModuleRep& M3, const FiniteFusion& F12, const FiniteFusion& F12_3,
                      const FiniteFusion& F23, const FiniteFusion& F1_23) {
  Scalar m = cfg.loop_weight();
  const int d2 = M2.dim, d3 = M3.dim;
  const int dim23 = (int)F23.qb.size();
  // image of a raw source vector (outer diagram da, inner LABEL (db, v1, v2), v3)
  auto image = [&](const TlDiagram& da, const TlDiagram& db, int v1, int v2,
                   int v3) -> std::vector<Scalar> {
    auto [dab, loops] = compose(da, extend_right(db, M3.n));
    // inner target: identity (x) (v2, v3) reduced in F23
    auto y = F23.project(cfg, tl_elem_one(cfg, M2.n + M3.n), v2 * d3 + v3);
    std::vector<Scalar> out(F1_23.qb.size(), cfg.zero());
    for (int r = 0; r < dim23; ++r) {
      if (y[(size_t)r].is_zero()) continue;
      auto col = F1_23.project(cfg, tl_elem(dab, m.pow(loops) * y[(size_t)r]), v1 * dim23 + r);
      for (size_t k = 0; k < out.size(); ++k) out[k] = out[k] + col[k];
    }
    return out;
  };
  Mat A((int)F1_23.qb.size(), (int)F12_3.qb.size(), cfg);
  for (size_t k = 0; k < F12_3.qb.size(); ++k) {
    int lab = (int)(F12_3.qb[k] / F12_3.mdim);
    int v = (int)(F12_3.qb[k] % F12_3.mdim);
    int q12 = v / d3, v3 = v % d3;
    int64_t idIn = F12.qb[(size_t)q12];
    int labIn = (int)(idIn / F12.mdim);
    int vIn = (int)(idIn % F12.mdim);
    auto col = image(F12_3.labels[(size_t)lab], F12.labels[(size_t)labIn], vIn / d2, vIn % d2, v3);
    for (size_t r = 0; r < col.size(); ++r) A.at((int)r, (int)k) = col[(size_t)r];
  }
  // well-definedness on every spanning label of both layers
  for (size_t labO = 0; labO < F12_3.labels.size(); ++labO) {
    for (size_t labI = 0; labI < F12.labels.size(); ++labI) {
      for (int vIn = 0; vIn < F12.mdim; ++vIn) {
        auto inner = F12.project(cfg, tl_elem(F12.labels[labI], cfg.one()), vIn);
        for (int v3 = 0; v3 < d3; ++v3) {
          // A applied to the projected source vector
          std::vector<Scalar> src(F12_3.qb.size(), cfg.zero());
          for (int r = 0; r < (int)F12.qb.size(); ++r) {
            if (inner[(size_t)r].is_zero()) continue;
            auto part = F12_3.project(cfg, tl_elem(F12_3.labels[labO], inner[(size_t)r]),
                                      r * d3 + v3);
            for (size_t t = 0; t < src.size(); ++t) src[t] = src[t] + part[t];
          }
          auto lhs = mat_apply(A, src);
          auto rhs = image(F12_3.labels[labO], F12.labels[labI], vIn / d2, vIn % d2, v3);
          if (!(lhs == rhs)) throw std::logic_error("associator_finite: map not well-defined");
        }
      }
    }
  }
  return A;
}

CheckReport associator_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                    const ModuleRep& M2, const ModuleRep& M3) {
  CheckReport rep;
  FiniteFusion F12 = induce_finite(cfg, M1, M2);
  FiniteFusion F12_3 = induce_finite(cfg, F12.mod, M3);
  FiniteFusion F23 = induce_finite(cfg, M2, M3);
  FiniteFusion F1_23 = induce_finite(cfg, M1, F23.mod);
  std::string tag = "associator(" + std::to_string(M1.n) + "," + std::to_string(M2.n) + "," +
                    std::to_string(M3.n) + "): ";
  Mat A = associator_finite(cfg, M1, M2, M3, F12, F12_3, F23, F1_23);
  rep.items.push_back({tag + "dimensions agree", F12_3.mod.dim == F1_23.mod.dim, ""});
  auto inv = mat_inverse(A, cfg);
  rep.items.push_back({tag + "bijective", inv.has_value(), ""});
  if (inv)
    rep.items.push_back(
        {tag + "inverse composes to identity",
         mat_mul(A, *inv) == mat_identity(A.rows, cfg) &&
             mat_mul(*inv, A) == mat_identity(A.rows, cfg),
         ""});
  bool intertwines = true;
  for (int i = 1; i <= M1.n + M2.n + M3.n - 1; ++i)
    intertwines = intertwines &&
                  mat_mul(A, F12_3.mod.e(i)) == mat_mul(F1_23.mod.e(i), A);
  rep.items.push_back({tag + "intertwines the ambient action", intertwines, ""});
  return rep;
}

CheckReport pentagon_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                  const ModuleRep& M2, const ModuleRep& M3,
                                  const ModuleRep& M4) {
  CheckReport rep;
  std::string tag = "pentagon(" + std::to_string(M1.n) + "," + std::to_string(M2.n) + "," +
                    std::to_string(M3.n) + "," + std::to_string(M4.n) + "): ";
  FiniteFusion F12 = induce_finite(cfg, M1, M2);
  FiniteFusion F23 = induce_finite(cfg, M2, M3);
  FiniteFusion F34 = induce_finite(cfg, M3, M4);
  FiniteFusion F12_3 = induce_finite(cfg, F12.mod, M3);
  FiniteFusion F1_23 = induce_finite(cfg, M1, F23.mod);
  FiniteFusion F23_4 = induce_finite(cfg, F23.mod, M4);
  FiniteFusion F2_34 = induce_finite(cfg, M2, F34.mod);
  FiniteFusion P1 = induce_finite(cfg, F12_3.mod, M4);   // ((12)3)4
  FiniteFusion P2 = induce_finite(cfg, F12.mod, F34.mod);  // (12)(34)
  FiniteFusion P3 = induce_finite(cfg, M1, F2_34.mod);     // 1(2(34))
  FiniteFusion P4 = induce_finite(cfg, F1_23.mod, M4);     // (1(23))4
  FiniteFusion P5 = induce_finite(cfg, M1, F23_4.mod);     // 1((23)4)
  Mat aA = associator_finite(cfg, F12.mod, M3, M4, F12_3, P1, F34, P2);
  Mat aB = associator_finite(cfg, M1, M2, F34.mod, F12, P2, F2_34, P3);
  Mat a123 = associator_finite(cfg, M1, M2, M3, F12, F12_3, F23, F1_23);
  Mat a234 = associator_finite(cfg, M2, M3, M4, F23, F23_4, F34, F2_34);
  Mat aD = associator_finite(cfg, M1, F23.mod, M4, F1_23, P4, F23_4, P5);
  // aC = a123 xf id4 : P1 -> P4 and aE = id1 xf a234 : P5 -> P3
  auto functor_right = [&](const FiniteFusion& src, const FiniteFusion& tgt, const Mat& f,
                           int rightDim) {
    Mat A((int)tgt.qb.size(), (int)src.qb.size(), cfg);
    auto image = [&](int lab, int q, int v4) {
      std::vector<Scalar> out(tgt.qb.size(), cfg.zero());
      for (int r = 0; r < f.rows; ++r) {
        if (f.at(r, q).is_zero()) continue;
        auto col = tgt.project(cfg, tl_elem(src.labels[(size_t)lab], f.at(r, q)),
                               r * rightDim + v4);
        for (size_t t = 0; t < out.size(); ++t) out[t] = out[t] + col[t];
      }
      return out;
    };
    for (size_t k = 0; k < src.qb.size(); ++k) {
      int lab = (int)(src.qb[k] / src.mdim);
      int v = (int)(src.qb[k] % src.mdim);
      auto col = image(lab, v / rightDim, v % rightDim);
      for (size_t r = 0; r < col.size(); ++r) A.at((int)r, (int)k) = col[(size_t)r];
    }
    // well-definedness across all labels
    for (size_t lab = 0; lab < src.labels.size(); ++lab)
      for (int v = 0; v < src.mdim; ++v) {
        auto lhs = mat_apply(A, src.project(cfg, tl_elem(src.labels[lab], cfg.one()), v));
        auto rhs = image((int)lab, v / rightDim, v % rightDim);
        if (!(lhs == rhs)) throw std::logic_error("functor_right: map not well-defined");
      }
    return A;
  };
  auto functor_left = [&](const FiniteFusion& src, const FiniteFusion& tgt, const Mat& f,
                          int leftDim) {
    Mat A((int)tgt.qb.size(), (int)src.qb.size(), cfg);
    int srcInner = src.mdim / leftDim;
    (void)srcInner;
    auto image = [&](int lab, int v1, int q) {
      std::vector<Scalar> out(tgt.qb.size(), cfg.zero());
      int tgtInner = f.rows;
      for (int r = 0; r < f.rows; ++r) {
        if (f.at(r, q).is_zero()) continue;
        auto col = tgt.project(cfg, tl_elem(src.labels[(size_t)lab], f.at(r, q)),
                               v1 * tgtInner + r);
        for (size_t t = 0; t < out.size(); ++t) out[t] = out[t] + col[t];
      }
      return out;
    };
    int inner = src.mdim / leftDim;
    for (size_t k = 0; k < src.qb.size(); ++k) {
      int lab = (int)(src.qb[k] / src.mdim);
      int v = (int)(src.qb[k] % src.mdim);
      auto col = image(lab, v / inner, v % inner);
      for (size_t r = 0; r < col.size(); ++r) A.at((int)r, (int)k) = col[(size_t)r];
    }
    for (size_t lab = 0; lab < src.labels.size(); ++lab)
      for (int v = 0; v < src.mdim; ++v) {
        auto lhs = mat_apply(A, src.project(cfg, tl_elem(src.labels[lab], cfg.one()), v));
        auto rhs = image((int)lab, v / inner, v % inner);
        if (!(lhs == rhs)) throw std::logic_error("functor_left: map not well-defined");
      }
    return A;
  };
  Mat aC = functor_right(P1, P4, a123, M4.dim);
  Mat aE = functor_left(P5, P3, a234, M1.dim);
  Mat lhs = mat_mul(aB, aA);
  Mat rhs = mat_mul(aE, mat_mul(aD, aC));
  rep.items.push_back({tag + "pentagon identity", lhs == rhs, ""});
  return rep;
}

// --------------------------------------------------------------- braiding

Mat braiding_map_finite(const FieldConfig& cfg, const ModuleRep& M1, const ModuleRep& M2,
                        const FiniteFusion& F12, const FiniteFusion& F21) {
  const int N = M1.n + M2.n;
  TlElement g = braiding_element(cfg, M1.n, M2.n);
  TlElement ginv = word_eval_tl(cfg, braiding_word(M1.n, M2.n, true), N);
  const int d2 = M2.dim;
  auto image = [&](const TlDiagram& d, int v1, int v2) {
    TlElement conj = elem_mul(cfg, elem_mul(cfg, g, tl_elem(d, cfg.one())), ginv);
    std::vector<Scalar> out(F21.qb.size(), cfg.zero());
    for (const auto& [dd, c] : conj.terms) {
      auto col = F21.project(cfg, tl_elem(dd, c), v2 * M1.dim + v1);
      for (size_t t = 0; t < out.size(); ++t) out[t] = out[t] + col[t];
    }
    return out;
  };
  Mat C((int)F21.qb.size(), (int)F12.qb.size(), cfg);
  for (size_t k = 0; k < F12.qb.size(); ++k) {
    int lab = (int)(F12.qb[k] / F12.mdim);
    int v = (int)(F12.qb[k] % F12.mdim);
    auto col = image(F12.labels[(size_t)lab], v / d2, v % d2);
    for (size_t r = 0; r < col.size(); ++r) C.at((int)r, (int)k) = col[(size_t)r];
  }
  for (size_t lab = 0; lab < F12.labels.size(); ++lab)
    for (int v = 0; v < F12.mdim; ++v) {
      auto lhs = mat_apply(C, F12.project(cfg, tl_elem(F12.labels[lab], cfg.one()), v));
      auto rhs = image(F12.labels[lab], v / d2, v % d2);
      if (!(lhs == rhs)) throw std::logic_error("braiding_map_finite: map not well-defined");
    }
  return C;
}

CheckReport braiding_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                  const ModuleRep& M2) {
  CheckReport rep;
  std::string tag = "braiding(" + std::to_string(M1.n) + "," + std::to_string(M2.n) + "): ";
  const int N = M1.n + M2.n;
  FiniteFusion F12 = induce_finite(cfg, M1, M2);
  FiniteFusion F21 = induce_finite(cfg, M2, M1);
  Mat C = braiding_map_finite(cfg, M1, M2, F12, F21);
  rep.items.push_back({tag + "dimensions agree", F12.mod.dim == F21.mod.dim, ""});
  rep.items.push_back({tag + "bijective", mat_inverse(C, cfg).has_value(), ""});
  // c intertwines the conjugated action: C rho(t) = rho(g t g^-1) C
  TlElement g = braiding_element(cfg, M1.n, M2.n);
  TlElement ginv = word_eval_tl(cfg, braiding_word(M1.n, M2.n, true), N);
  bool twisted = true;
  for (int i = 1; i <= N - 1; ++i) {
    TlElement conj =
        elem_mul(cfg, elem_mul(cfg, g, tl_elem(gen_e(i, N), cfg.one())), ginv);
    twisted = twisted &&
              mat_mul(C, F12.mod.e(i)) == mat_mul(F21.elem_action(cfg, conj), C);
  }
  rep.items.push_back({tag + "intertwines the conjugated action", twisted, ""});
  // and the naive action equality fails in general; not asserted here
  return rep;
}

namespace {

TlDiagram extend_left(const TlDiagram& d, int extra) {
  TlDiagram r = tl_identity(d.n + extra);
  int n = d.n, N = d.n + extra;
  auto remap = [&](int p) { return p < n ? p + extra : N + (p - n) + extra; };
  for (int p = 0; p < 2 * n; ++p) r.pair[(size_t)remap(p)] = remap(d.pair[p]);
  return r;
}

}  // namespace

CheckReport hexagon_check_finite(const FieldConfig& cfg, const ModuleRep& M1,
                                 const ModuleRep& M2, const ModuleRep& M3) {
  // Both hexagons are verified as equalities of composite maps evaluated
  // on representatives. The braiding is used in its right-multiplication
  // form x (x) m1 (x) m2 -> x g^-1 (x) m2 (x) m1, the honest module
  // isomorphism that the conjugation form induces on classes; the two
  // sides then reduce to the braid-string identities
  //   g_{N1,N2+N3} = (1 (x) g_{N1,N3}) (g_{N1,N2} (x) 1),
  //   g_{N1+N2,N3} = (g_{N1,N3} (x) 1) (1 (x) g_{N2,N3}).
  CheckReport rep;
  std::string tag = "hexagon(" + std::to_string(M1.n) + "," + std::to_string(M2.n) + "," +
                    std::to_string(M3.n) + "): ";
  const int N1 = M1.n, N2 = M2.n, N3 = M3.n;
  const int N = N1 + N2 + N3;
  const int d1 = M1.dim, d2 = M2.dim, d3 = M3.dim;
  FiniteFusion F12 = induce_finite(cfg, M1, M2);
  FiniteFusion F23 = induce_finite(cfg, M2, M3);
  FiniteFusion F31 = induce_finite(cfg, M3, M1);
  FiniteFusion F12_3 = induce_finite(cfg, F12.mod, M3);
  FiniteFusion F1_23 = induce_finite(cfg, M1, F23.mod);
  FiniteFusion F2_31 = induce_finite(cfg, M2, F31.mod);
  FiniteFusion F31_2 = induce_finite(cfg, F31.mod, M2);
  const int dim31 = (int)F31.qb.size();
  TlElement g13inv_31 = word_eval_tl(cfg, braiding_word(N1, N3, true), N1 + N3);
  // hexagon-1, from (M1xM2)xM3 to M2x(M3xM1), on a (x) (b (x) m1 m2) (x) m3:
  //   LHS: a ext(b) G1^-1 (x) (m2 (x) (1 (x) m3 m1))
  //   RHS: a ext(b g12^-1) (x) (m2 (x) (g13^-1 (x) m3 m1))
  {
    TlElement G1inv = word_eval_tl(cfg, braiding_word(N1, N2 + N3, true), N);
    TlElement g12inv = word_eval_tl(cfg, braiding_word(N1, N2, true), N1 + N2);
    auto proj = [&](const TlElement& big, const TlElement& inner, int v2, int v3, int v1) {
      auto y = F31.project(cfg, inner, v3 * d1 + v1);
      std::vector<Scalar> out(F2_31.qb.size(), cfg.zero());
      for (int r = 0; r < dim31; ++r) {
        if (y[(size_t)r].is_zero()) continue;
        auto col = F2_31.project(cfg, elem_scale(y[(size_t)r], big), v2 * dim31 + r);
        for (size_t t = 0; t < out.size(); ++t) out[t] = out[t] + col[t];
      }
      return out;
    };
    TlElement one31 = tl_elem_one(cfg, N3 + N1);
    // both composites are linear in the source class, so equality on the
    // quotient basis of ((M1xM2)xM3) decides the identity
    bool pass = true;
    for (size_t k = 0; k < F12_3.qb.size() && pass; ++k) {
      int labO = (int)(F12_3.qb[k] / F12_3.mdim);
      int v = (int)(F12_3.qb[k] % F12_3.mdim);
      int q12 = v / d3, v3 = v % d3;
      int64_t idIn = F12.qb[(size_t)q12];
      int labI = (int)(idIn / F12.mdim);
      int vIn = (int)(idIn % F12.mdim);
      int v1 = vIn / d2, v2 = vIn % d2;
      TlElement a = tl_elem(F12_3.labels[(size_t)labO], cfg.one());
      TlElement aext =
          elem_mul(cfg, a, tl_elem(extend_right(F12.labels[(size_t)labI], N3), cfg.one()));
      TlElement lhsElt = elem_mul(cfg, aext, G1inv);
      TlElement bg = elem_mul(cfg, tl_elem(F12.labels[(size_t)labI], cfg.one()), g12inv);
      TlElement rhsElt;
      rhsElt.n = N;
      for (const auto& [dd, c] : bg.terms)
        rhsElt = elem_add(rhsElt, elem_scale(c, elem_mul(cfg, a, tl_elem(extend_right(dd, N3),
                                                                         cfg.one()))));
      pass = proj(lhsElt, one31, v2, v3, v1) == proj(rhsElt, g13inv_31, v2, v3, v1);
    }
    rep.items.push_back({tag + "hexagon-1", pass, ""});
  }
  // hexagon-2, from M1x(M2xM3) to (M3xM1)xM2, on a (x) (m1 (x) (c (x) m2 m3)):
  //   LHS: a shift(c) G2^-1 (x) ((1 (x) m3 m1) (x) m2)
  //   RHS: a shift(c g23^-1) (x) ((g13^-1 (x) m3 m1) (x) m2)
  {
    TlElement G2inv = word_eval_tl(cfg, braiding_word(N1 + N2, N3, true), N);
    TlElement g23inv = word_eval_tl(cfg, braiding_word(N2, N3, true), N2 + N3);
    auto proj = [&](const TlElement& big, const TlElement& inner, int v3, int v1, int v2) {
      auto y = F31.project(cfg, inner, v3 * d1 + v1);
      std::vector<Scalar> out(F31_2.qb.size(), cfg.zero());
      for (int r = 0; r < dim31; ++r) {
        if (y[(size_t)r].is_zero()) continue;
        auto col = F31_2.project(cfg, elem_scale(y[(size_t)r], big), r * d2 + v2);
        for (size_t t = 0; t < out.size(); ++t) out[t] = out[t] + col[t];
      }
      return out;
    };
    TlElement one31 = tl_elem_one(cfg, N3 + N1);
    bool pass = true;
    for (size_t k = 0; k < F1_23.qb.size() && pass; ++k) {
      int labO = (int)(F1_23.qb[k] / F1_23.mdim);
      int v = (int)(F1_23.qb[k] % F1_23.mdim);
      int dim23 = (int)F23.qb.size();
      int v1 = v / dim23, q23 = v % dim23;
      int64_t idIn = F23.qb[(size_t)q23];
      int labI = (int)(idIn / F23.mdim);
      int vIn = (int)(idIn % F23.mdim);
      int v2 = vIn / d3, v3 = vIn % d3;
      TlElement a = tl_elem(F1_23.labels[(size_t)labO], cfg.one());
      TlElement ac =
          elem_mul(cfg, a, tl_elem(extend_left(F23.labels[(size_t)labI], N1), cfg.one()));
      TlElement lhsElt = elem_mul(cfg, ac, G2inv);
      TlElement cg = elem_mul(cfg, tl_elem(F23.labels[(size_t)labI], cfg.one()), g23inv);
      TlElement rhsElt;
      rhsElt.n = N;
      for (const auto& [dd, c] : cg.terms)
        rhsElt = elem_add(
            rhsElt, elem_scale(c, elem_mul(cfg, a, tl_elem(extend_left(dd, N1), cfg.one()))));
      pass = proj(lhsElt, one31, v3, v1, v2) == proj(rhsElt, g13inv_31, v3, v1, v2);
    }
    rep.items.push_back({tag + "hexagon-2", pass, ""});
  }
  return rep;
}

// ------------------------------------------------- affine associator etc.

CheckReport associator_check_affine(const FieldConfig& cfg, const ModuleRep& M1,
                                    const ModuleRep& M2, const ModuleRep& M3, int L) {
  CheckReport rep;
  std::string tag = "affine associator(" + std::to_string(M1.n) + "," + std::to_string(M2.n) +
                    "," + std::to_string(M3.n) + "): ";
  Scalar m = cfg.loop_weight();
  AffineFusion F12 = fuse_affine_bounded(cfg, M1, M2, +1, L);
  AffineFusion F23 = fuse_affine_bounded(cfg, M2, M3, +1, L);
  if (!F12.stabilized || !F23.stabilized) {
    rep.items.push_back({tag + "inner fusions stabilize", false, ""});
    return rep;
  }
  AffineFusion F12_3 = fuse_affine_bounded(cfg, F12.mod, M3, +1, L);
  AffineFusion F1_23 = fuse_affine_bounded(cfg, M1, F23.mod, +1, L);
  if (!F12_3.stabilized || !F1_23.stabilized) {
    rep.items.push_back({tag + "outer fusions stabilize", false, ""});
    return rep;
  }
  if (F12_3.mod.dim == 0 && F1_23.mod.dim == 0) {
    rep.items.push_back({tag + "both bracketings zero (vacuous pass)", true, ""});
    return rep;
  }
  // map a (x) (b (x) m1 m2) (x) m3 -> a eps(b) (x) (m1 (x) (1 (x) m2 m3))
  AffinePairEmbedding eps = embed_affine_eps(cfg, M1.n + M2.n, M3.n, +1);
  const int d2 = M2.dim, d3 = M3.dim;
  const int dim23 = (int)F23.qb.size();
  auto eps_of_label = [&](int labIn) {
    // evaluate eps on the defining word of the inner label, divided by
    // the accumulated loop factor
    AtlElement acc = atl_one(cfg, M1.n + M2.n + M3.n);
    for (const auto& tok : F12.words[(size_t)labIn]) {
      AtlElement img;
      switch (tok.kind) {
        case GenTok::U:
          img = eps.u1;
          break;
        case GenTok::Uinv:
          img = eps.u1inv;
          break;
        case GenTok::E:
          img = eps.e1[(size_t)tok.i];
          break;
        default:
          throw std::logic_error("unexpected token in label word");
      }
      acc = atl_mul(cfg, acc, img);
    }
    return atl_scale(m.pow(-F12.mexp[(size_t)labIn]), acc);
  };
  auto image = [&](int labO, int labIn, int v1, int v2, int v3) -> std::vector<Scalar> {
    AtlElement ab =
        atl_mul(cfg, atl_elem(F12_3.labels[(size_t)labO], cfg.one()), eps_of_label(labIn));
    auto y = F23.project(cfg, atl_one(cfg, M2.n + M3.n), v2 * d3 + v3);
    std::vector<Scalar> out(F1_23.qb.size(), cfg.zero());
    for (int r = 0; r < dim23; ++r) {
      if (y[(size_t)r].is_zero()) continue;
      auto col = F1_23.project(cfg, atl_scale(y[(size_t)r], ab), v1 * dim23 + r);
      for (size_t t = 0; t < out.size(); ++t) out[t] = out[t] + col[t];
    }
    return out;
  };
  Mat A((int)F1_23.qb.size(), (int)F12_3.qb.size(), cfg);
  bool well = true;
  try {
    for (size_t k = 0; k < F12_3.qb.size(); ++k) {
      int lab = (int)(F12_3.qb[k] / F12_3.mdim);
      int v = (int)(F12_3.qb[k] % F12_3.mdim);
      int q12 = v / d3, v3 = v % d3;
      int64_t idIn = F12.qb[(size_t)q12];
      auto col = image(lab, (int)(idIn / F12.mdim), (int)(idIn % F12.mdim) / d2,
                       (int)(idIn % F12.mdim) % d2, v3);
      for (size_t r = 0; r < col.size(); ++r) A.at((int)r, (int)k) = col[(size_t)r];
    }
    // well-definedness over the certified labels
    for (size_t labO = 0; labO < F12_3.labels.size() && well; ++labO) {
      if (F12_3.level[labO] > F12_3.stable_level) continue;
      for (size_t labIn = 0; labIn < F12.labels.size() && well; ++labIn) {
        if (F12.level[labIn] > F12.stable_level) continue;
        for (int vIn = 0; vIn < F12.mdim && well; ++vIn) {
          auto inner = F12.project(cfg, atl_elem(F12.labels[labIn], cfg.one()), vIn);
          for (int v3 = 0; v3 < d3 && well; ++v3) {
            std::vector<Scalar> src(F12_3.qb.size(), cfg.zero());
            for (int r = 0; r < (int)F12.qb.size(); ++r) {
              if (inner[(size_t)r].is_zero()) continue;
              auto part = F12_3.project(
                  cfg, atl_elem(F12_3.labels[labO], inner[(size_t)r]), r * d3 + v3);
              for (size_t t = 0; t < src.size(); ++t) src[t] = src[t] + part[t];
            }
            auto lhs = mat_apply(A, src);
            auto rhs = image((int)labO, (int)labIn, vIn / d2, vIn % d2, v3);
            well = lhs == rhs;
          }
        }
      }
    }
  } catch (const TruncationError&) {
    rep.items.push_back({tag + "within truncation bound", false, "retry with larger L"});
    return rep;
  }
  rep.items.push_back({tag + "well-defined on representatives", well, ""});
  rep.items.push_back({tag + "dimensions agree", F12_3.mod.dim == F1_23.mod.dim, ""});
  rep.items.push_back({tag + "bijective", mat_inverse(A, cfg).has_value(), ""});
  bool intertwines = true;
  const int N = M1.n + M2.n + M3.n;
  for (int i = 0; i < N; ++i)
    intertwines = intertwines && mat_mul(A, F12_3.mod.e(i)) == mat_mul(F1_23.mod.e(i), A);
  intertwines = intertwines && mat_mul(A, F12_3.mod.uMat) == mat_mul(F1_23.mod.uMat, A);
  rep.items.push_back({tag + "intertwines the ambient action", intertwines, ""});
  return rep;
}

CheckReport semibraiding_check_affine(const FieldConfig& cfg, const ModuleRep& M1,
                                      const ModuleRep& M2, int L) {
  CheckReport rep;
  const int N1 = M1.n, N2 = M2.n, N = N1 + N2;
  std::string tag = "semibraiding(" + std::to_string(N1) + "," + std::to_string(N2) + "): ";
  // exact element identities g u^(1) = utilde^(2) g and g u^(2) = utilde^(1) g
  auto plus = embed_affine_eps(cfg, N1, N2, +1);
  auto minusSwap = embed_affine_eps(cfg, N2, N1, -1);
  AtlElement g = braiding_element_affine(cfg, N1, N2);
  rep.items.push_back({tag + "g u1 = utilde2 g",
                       atl_mul(cfg, g, plus.u1) == atl_mul(cfg, minusSwap.u2, g), ""});
  rep.items.push_back({tag + "g u2 = utilde1 g",
                       atl_mul(cfg, g, plus.u2) == atl_mul(cfg, minusSwap.u1, g), ""});
  // the module map M1 xf M2 -> M2 xf^- M1
  AffineFusion F = fuse_affine_bounded(cfg, M1, M2, +1, L);
  AffineFusion G = fuse_affine_bounded(cfg, M2, M1, -1, L);
  if (!F.stabilized || !G.stabilized) {
    rep.items.push_back({tag + "fusions stabilize", false, ""});
    return rep;
  }
  rep.items.push_back({tag + "dimensions agree", F.mod.dim == G.mod.dim, ""});
  if (F.mod.dim == 0) {
    rep.items.push_back({tag + "both zero (vacuous iso)", G.mod.dim == 0, ""});
    return rep;
  }
  AtlElement ginv = word_eval_affine(cfg, braiding_word(N1, N2, true), N);
  const int d1 = M1.dim, d2 = M2.dim;
  auto image = [&](int lab, int v1, int v2) {
    AtlElement conj =
        atl_mul(cfg, atl_mul(cfg, g, atl_elem(F.labels[(size_t)lab], cfg.one())), ginv);
    std::vector<Scalar> out(G.qb.size(), cfg.zero());
    for (const auto& [dd, c] : conj.terms) {
      auto col = G.project(cfg, atl_elem(dd, c), v2 * d1 + v1);
      for (size_t t = 0; t < out.size(); ++t) out[t] = out[t] + col[t];
    }
    return out;
  };
  Mat C((int)G.qb.size(), (int)F.qb.size(), cfg);
  bool well = true;
  try {
    for (size_t k = 0; k < F.qb.size(); ++k) {
      int lab = (int)(F.qb[k] / F.mdim);
      int v = (int)(F.qb[k] % F.mdim);
      auto col = image(lab, v / d2, v % d2);
      for (size_t r = 0; r < col.size(); ++r) C.at((int)r, (int)k) = col[(size_t)r];
    }
    for (size_t lab = 0; lab < F.labels.size() && well; ++lab) {
      if (F.level[lab] > F.stable_level) continue;
      for (int v = 0; v < F.mdim && well; ++v) {
        auto lhs = mat_apply(C, F.project(cfg, atl_elem(F.labels[lab], cfg.one()), v));
        auto rhs = image((int)lab, v / d2, v % d2);
        well = lhs == rhs;
      }
    }
  } catch (const TruncationError&) {
    rep.items.push_back({tag + "within truncation bound", false, "retry with larger L"});
    return rep;
  }
  rep.items.push_back({tag + "map well-defined", well, ""});
  rep.items.push_back({tag + "bijective", mat_inverse(C, cfg).has_value(), ""});
  // twisted intertwining: C rho(t) = rho(g t g^-1) C on the quotients
  bool twisted = true;
  std::vector<GenWord> genwords;
  for (int i = 0; i < N; ++i) genwords.push_back({{GenTok::E, i}});
  genwords.push_back({{GenTok::U, 0}});
  for (const auto& w : genwords) {
    GenWord conj = braiding_word(N1, N2, false);
    for (const auto& t : w) conj.push_back(t);
    for (const auto& t : braiding_word(N1, N2, true)) conj.push_back(t);
    twisted = twisted && mat_mul(C, F.mod.word(cfg, w)) == mat_mul(G.mod.word(cfg, conj), C);
  }
  rep.items.push_back({tag + "intertwines the conjugated action", twisted, ""});
  return rep;
}

}  // namespace atlf
