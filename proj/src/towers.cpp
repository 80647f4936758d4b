#include "atlfuse/towers.hpp"

#include <algorithm>
#include <stdexcept>

namespace atlf {

namespace {
int posmod_i(int a, int b) {
  int r = a % b;
  return r < 0 ? r + b : r;
}
}  // namespace

FiniteStdEmbedding embed_standard_finite(const FieldConfig& cfg, int N, int Nprime) {
  if (N > Nprime) throw std::invalid_argument("embed_standard_finite: N > N'");
  FiniteStdEmbedding t;
  t.n = N;
  t.targetN = Nprime;
  for (int j = 1; j <= N - 1; ++j) t.e.push_back(tl_elem(gen_e(j, Nprime), cfg.one()));
  return t;
}

FiniteArcEmbedding embed_arc_finite(const FieldConfig& cfg, int N) {
  Scalar m = cfg.loop_weight();
  if (m.is_zero()) throw DegenerateScalar("embed_arc_finite: m = 0");
  FiniteArcEmbedding t;
  t.n = N;
  Scalar minv = m.inv();
  t.corner = tl_elem(gen_e(N + 1, N + 2), minv);
  for (int j = 1; j <= N - 1; ++j) {
    TlElement im = elem_mul(cfg, t.corner, tl_elem(gen_e(j, N + 2), cfg.one()));
    t.e.push_back(elem_mul(cfg, im, t.corner));
  }
  return t;
}

AffinePairEmbedding embed_affine_eps(const FieldConfig& cfg, int N1, int N2, int chirality) {
  if (N1 < 1 || N2 < 1) throw std::invalid_argument("embed_affine_eps: sizes >= 1");
  if (chirality != 1 && chirality != -1)
    throw std::invalid_argument("embed_affine_eps: chirality +-1");
  const int N = N1 + N2;
  AffinePairEmbedding t;
  t.n1 = N1;
  t.n2 = N2;
  t.chirality = chirality;
  auto ev = [&](const GenWord& w) { return word_eval_affine(cfg, w, N); };
  auto G = [&](int i, int s) {
    int sign = s * chirality;
    return GenTok{sign > 0 ? GenTok::G : GenTok::Ginv, posmod_i(i, N)};
  };
  GenTok U{GenTok::U, 0}, Ui{GenTok::Uinv, 0};
  auto E = [&](int i) { return GenTok{GenTok::E, posmod_i(i, N)}; };
  // u^(1) -> u g_{N-1}^-1 ... g_{N1}^-1 (upper signs for chirality +)
  {
    GenWord w{U};
    for (int i = N - 1; i >= N1; --i) w.push_back(G(i, -1));
    t.u1 = ev(w);
    GenWord winv;
    for (int i = N1; i <= N - 1; ++i) winv.push_back(G(i, +1));
    winv.push_back(Ui);
    t.u1inv = ev(winv);
  }
  // u^(2) -> g_{N1} ... g_1 u
  {
    GenWord w;
    for (int i = N1; i >= 1; --i) w.push_back(G(i, +1));
    w.push_back(U);
    t.u2 = ev(w);
    GenWord winv{Ui};
    for (int i = 1; i <= N1; ++i) winv.push_back(G(i, -1));
    t.u2inv = ev(winv);
  }
  // e^(1)_j -> e_j, e^(2)_k -> e_{N1+k}
  if (N1 >= 2) {
    t.e1.resize(N1);
    for (int j = 1; j <= N1 - 1; ++j) t.e1[j] = ev({E(j)});
    GenWord w;
    for (int i = N1; i <= N - 1; ++i) w.push_back(G(i, +1));
    w.push_back(E(0));
    for (int i = N - 1; i >= N1; --i) w.push_back(G(i, -1));
    t.e1[0] = ev(w);
  }
  if (N2 >= 2) {
    t.e2.resize(N2);
    for (int k = 1; k <= N2 - 1; ++k) t.e2[k] = ev({E(N1 + k)});
    GenWord w;
    for (int i = 0; i <= N1 - 1; ++i) w.push_back(G(i, -1));
    w.push_back(E(N1));
    for (int i = N1 - 1; i >= 0; --i) w.push_back(G(i, +1));
    t.e2[0] = ev(w);
  }
  return t;
}

const AtlElement& AffinePairEmbedding::image(int factor, const GenTok& tok) const {
  const bool one = factor == 1;
  switch (tok.kind) {
    case GenTok::U:
      return one ? u1 : u2;
    case GenTok::Uinv:
      return one ? u1inv : u2inv;
    case GenTok::E: {
      const auto& v = one ? e1 : e2;
      int nf = one ? n1 : n2;
      return v.at((size_t)posmod_i(tok.i, nf));
    }
    default:
      throw std::invalid_argument("AffinePairEmbedding::image: unsupported token");
  }
}

AffinePsiEmbedding embed_affine_psi(const FieldConfig& cfg, int N) {
  Scalar m = cfg.loop_weight();
  if (m.is_zero()) throw DegenerateScalar("embed_affine_psi: m = 0");
  AffinePsiEmbedding t;
  t.n = N;
  const int NN = N + 2;
  Scalar minv = m.inv();
  AtlElement eN1 = atl_elem(gen_e_affine(N + 1, NN), cfg.one());
  t.corner = atl_scale(minv, eN1);
  auto sand = [&](const AtlElement& x) {
    return atl_mul(cfg, atl_mul(cfg, t.corner, x), t.corner);
  };
  t.u = atl_scale(m, sand(atl_elem(gen_u(NN, 1), cfg.one())));
  t.uinv = atl_scale(m, sand(atl_elem(gen_u(NN, -1), cfg.one())));
  if (N >= 2) {
    t.e.resize(N);
    for (int j = 1; j <= N - 1; ++j)
      t.e[j] = atl_mul(cfg, t.corner, atl_elem(gen_e_affine(j, NN), cfg.one()));
    // e_N -> m E e_N e_{N+2} E
    AtlElement mid = atl_mul(cfg, atl_elem(gen_e_affine(N, NN), cfg.one()),
                             atl_elem(gen_e_affine(N + 2, NN), cfg.one()));
    t.e[0] = atl_scale(m, sand(mid));
  }
  return t;
}

namespace {

TlElement eval_words_tl(const FieldConfig& cfg, const GenWord& w,
                        const std::vector<const TlElement*>& img, const TlElement& unit) {
  TlElement acc = unit;
  for (const auto& tok : w) {
    if (tok.kind != GenTok::E) throw std::invalid_argument("finite embedding word: e tokens only");
    acc = elem_mul(cfg, acc, *img.at((size_t)(tok.i - 1)));
  }
  return acc;
}

}  // namespace

CheckReport verify_embedding(const FieldConfig& cfg, const FiniteStdEmbedding& t) {
  CheckReport rep;
  Scalar m = cfg.loop_weight();
  std::vector<const TlElement*> img;
  for (const auto& x : t.e) img.push_back(&x);
  TlElement unit = tl_elem_one(cfg, t.targetN);
  for (const auto& rel : tl_relations(t.n)) {
    TlElement lhs = eval_words_tl(cfg, rel.lhs, img, unit);
    TlElement rhs = eval_words_tl(cfg, rel.rhs, img, unit);
    if (rel.rhs_times_m) rhs = elem_scale(m, rhs);
    rep.items.push_back({"std-embed TL" + std::to_string(t.n) + "->TL" +
                             std::to_string(t.targetN) + ": " + rel.name,
                         lhs == rhs, ""});
  }
  return rep;
}

CheckReport verify_embedding(const FieldConfig& cfg, const FiniteArcEmbedding& t) {
  CheckReport rep;
  Scalar m = cfg.loop_weight();
  std::vector<const TlElement*> img;
  for (const auto& x : t.e) img.push_back(&x);
  // the corner unit E replaces the source identity
  rep.items.push_back({"arc-embed: corner idempotent E^2 = E",
                       elem_mul(cfg, t.corner, t.corner) == t.corner, ""});
  for (const auto& rel : tl_relations(t.n)) {
    TlElement lhs = eval_words_tl(cfg, rel.lhs, img, t.corner);
    TlElement rhs = eval_words_tl(cfg, rel.rhs, img, t.corner);
    if (rel.rhs_times_m) rhs = elem_scale(m, rhs);
    rep.items.push_back(
        {"arc-embed TL" + std::to_string(t.n) + ": " + rel.name, lhs == rhs, ""});
  }
  return rep;
}

namespace {

AtlElement eval_words_pair(const FieldConfig& cfg, const AffinePairEmbedding& t, int factor,
                           const GenWord& w) {
  AtlElement acc = atl_one(cfg, t.targetN());
  for (const auto& tok : w) {
    if (tok.kind == GenTok::G || tok.kind == GenTok::Ginv)
      throw std::invalid_argument("pair embedding: e/u tokens only");
    acc = atl_mul(cfg, acc, t.image(factor, tok));
  }
  return acc;
}

}  // namespace

CheckReport verify_embedding(const FieldConfig& cfg, const AffinePairEmbedding& t) {
  CheckReport rep;
  Scalar m = cfg.loop_weight();
  std::string tag = "eps(" + std::to_string(t.n1) + "," + std::to_string(t.n2) + "," +
                    (t.chirality > 0 ? "+" : "-") + ") ";
  for (int factor : {1, 2}) {
    int nf = factor == 1 ? t.n1 : t.n2;
    for (const auto& rel : atl_relations(nf)) {
      AtlElement lhs = eval_words_pair(cfg, t, factor, rel.lhs);
      AtlElement rhs = eval_words_pair(cfg, t, factor, rel.rhs);
      if (rel.rhs_times_m) rhs = atl_scale(m, rhs);
      rep.items.push_back({tag + "factor " + std::to_string(factor) + ": " + rel.name,
                           lhs == rhs, ""});
    }
  }
  // cross-commutation of the two embedded subalgebras
  std::vector<std::pair<std::string, const AtlElement*>> g1, g2;
  g1.push_back({"u1", &t.u1});
  g1.push_back({"u1^-1", &t.u1inv});
  for (size_t j = 0; j < t.e1.size(); ++j)
    g1.push_back({"e1_" + std::to_string(j), &t.e1[j]});
  g2.push_back({"u2", &t.u2});
  g2.push_back({"u2^-1", &t.u2inv});
  for (size_t k = 0; k < t.e2.size(); ++k)
    g2.push_back({"e2_" + std::to_string(k), &t.e2[k]});
  for (const auto& [na, a] : g1)
    for (const auto& [nb, b] : g2)
      rep.items.push_back({tag + na + " " + nb + " = " + nb + " " + na,
                           atl_mul(cfg, *a, *b) == atl_mul(cfg, *b, *a), ""});
  return rep;
}

CheckReport verify_embedding(const FieldConfig& cfg, const AffinePsiEmbedding& t) {
  CheckReport rep;
  Scalar m = cfg.loop_weight();
  std::string tag = "psi(ATL" + std::to_string(t.n) + ") ";
  rep.items.push_back({tag + "corner idempotent E^2 = E",
                       atl_mul(cfg, t.corner, t.corner) == t.corner, ""});
  auto image = [&](const GenTok& tok) -> const AtlElement& {
    switch (tok.kind) {
      case GenTok::U:
        return t.u;
      case GenTok::Uinv:
        return t.uinv;
      case GenTok::E:
        return t.e[(size_t)posmod_i(tok.i, t.n)];
      default:
        throw std::invalid_argument("psi embedding: e/u tokens only");
    }
  };
  auto ev = [&](const GenWord& w) {
    AtlElement acc = t.corner;  // corner unit
    for (const auto& tok : w) acc = atl_mul(cfg, acc, image(tok));
    return acc;
  };
  for (const auto& rel : atl_relations(t.n)) {
    AtlElement lhs = ev(rel.lhs);
    AtlElement rhs = ev(rel.rhs);
    if (rel.rhs_times_m) rhs = atl_scale(m, rhs);
    rep.items.push_back({tag + rel.name, lhs == rhs, ""});
  }
  return rep;
}

GenWord braiding_word(int N1, int N2, bool inverse) {
  // g_{N1,N2} = prod_{k=1..N1} ( g_{N2+k-1}^-1 ... g_k^-1 )
  GenWord w;
  for (int k = 1; k <= N1; ++k)
    for (int i = N2 + k - 1; i >= k; --i) w.push_back({GenTok::Ginv, i});
  if (inverse) {
    std::reverse(w.begin(), w.end());
    for (auto& tok : w) tok.kind = GenTok::G;
  }
  return w;
}

TlElement braiding_element(const FieldConfig& cfg, int N1, int N2) {
  return word_eval_tl(cfg, braiding_word(N1, N2, false), N1 + N2);
}

AtlElement braiding_element_affine(const FieldConfig& cfg, int N1, int N2) {
  return word_eval_affine(cfg, braiding_word(N1, N2, false), N1 + N2);
}

ModuleRep localize(const FieldConfig& cfg, const ModuleRep& M) {
  Scalar m = cfg.loop_weight();
  if (m.is_zero()) throw DegenerateScalar("localize: m = 0");
  const int NN = M.n;       // ambient size N+2
  const int N = NN - 2;     // target size
  if (N < 1) throw std::invalid_argument("localize: target size would be < 1");
  Mat E = mat_scale(m.inv(), M.e(N + 1));
  // pivot columns of E span its image: one echelon pass
  std::vector<int> cols;
  {
    Mat ech = E;
    int row = 0;
    for (int c = 0; c < ech.cols && row < ech.rows; ++c) {
      int pr = -1;
      for (int i = row; i < ech.rows; ++i)
        if (!ech.at(i, c).is_zero()) {
          pr = i;
          break;
        }
      if (pr == -1) continue;
      if (pr != row)
        for (int j = 0; j < ech.cols; ++j) std::swap(ech.at(pr, j), ech.at(row, j));
      Scalar inv = ech.at(row, c).inv();
      for (int j = c; j < ech.cols; ++j) ech.at(row, j) = ech.at(row, j) * inv;
      for (int i = 0; i < ech.rows; ++i) {
        if (i == row || ech.at(i, c).is_zero()) continue;
        Scalar f = ech.at(i, c);
        for (int j = c; j < ech.cols; ++j) ech.at(i, j) = ech.at(i, j) - f * ech.at(row, j);
      }
      cols.push_back(c);
      ++row;
    }
  }
  int r = (int)cols.size();
  Mat basis(M.dim, r, cfg);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < M.dim; ++i) basis.at(i, k) = E.at(i, cols[k]);
  // extend the basis to a square invertible matrix and invert once;
  // coordinates in the span are the first r rows applied to a vector.
  // complement: unit vectors at the non-pivot rows of the echelon form
  Mat square(M.dim, M.dim, cfg);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < M.dim; ++i) square.at(i, k) = basis.at(i, k);
  {
    std::vector<bool> used(M.dim, false);
    Mat work = basis;
    for (int c = 0; c < r; ++c) {
      int pr = -1;
      for (int i = 0; i < M.dim; ++i)
        if (!used[(size_t)i] && !work.at(i, c).is_zero()) {
          pr = i;
          break;
        }
      if (pr == -1) throw std::logic_error("localize: dependent basis column");
      used[(size_t)pr] = true;
      Scalar inv = work.at(pr, c).inv();
      for (int j = c; j < r; ++j) work.at(pr, j) = work.at(pr, j) * inv;
      for (int i = 0; i < M.dim; ++i) {
        if (i == pr || work.at(i, c).is_zero()) continue;
        Scalar f = work.at(i, c);
        for (int j = c; j < r; ++j) work.at(i, j) = work.at(i, j) - f * work.at(pr, j);
      }
    }
    int extra = r;
    for (int i = 0; i < M.dim; ++i)
      if (!used[(size_t)i]) square.at(i, extra++) = cfg.one();
  }
  auto sqinv = mat_inverse(square, cfg);
  if (!sqinv) throw std::logic_error("localize: basis completion failed");
  auto coords = [&](const std::vector<Scalar>& v) {
    auto full = mat_apply(*sqinv, v);
    for (int k = r; k < M.dim; ++k)
      if (!full[(size_t)k].is_zero())
        throw std::logic_error("localize: vector not in the corner image");
    full.resize((size_t)r);
    return full;
  };
  ModuleRep L;
  L.affine = M.affine;
  L.n = N;
  L.dim = r;
  L.twoJ = M.twoJ;
  L.z = M.z;
  auto restrict_op = [&](const Mat& A) {
    Mat B(r, r, cfg);
    for (int c = 0; c < r; ++c) {
      std::vector<Scalar> col(M.dim, cfg.zero());
      for (int i = 0; i < M.dim; ++i) col[i] = basis.at(i, c);
      auto img = mat_apply(A, col);
      auto co = coords(img);
      for (int i = 0; i < r; ++i) B.at(i, c) = co[(size_t)i];
    }
    return B;
  };
  if (!M.affine) {
    // arc images: psi(e_j) = E e_j E
    for (int j = 1; j <= N - 1; ++j)
      L.eMat.push_back(restrict_op(mat_mul(mat_mul(E, M.e(j)), E)));
  } else {
    // psi images: u -> m E u E, e_j -> E e_j, e_N -> m E e_N e_{N+2} E
    if (N >= 2) {
      L.eMat.resize(N);
      for (int j = 1; j <= N - 1; ++j) L.eMat[(size_t)j] = restrict_op(mat_mul(E, M.e(j)));
      Mat mid = mat_mul(M.e(N), M.e(N + 2));
      L.eMat[0] = restrict_op(mat_scale(m, mat_mul(mat_mul(E, mid), E)));
    }
    L.uMat = restrict_op(mat_scale(m, mat_mul(mat_mul(E, M.uMat), E)));
    L.uinvMat = restrict_op(mat_scale(m, mat_mul(mat_mul(E, M.uinvMat), E)));
  }
  return L;
}

ModuleRep globalize_finite(const FieldConfig& cfg, const ModuleRep& M) {
  Scalar m = cfg.loop_weight();
  if (m.is_zero()) throw DegenerateScalar("globalize: m = 0");
  if (M.affine) throw std::invalid_argument("globalize_finite: finite modules only");
  const int N = M.n;
  const int NN = N + 2;
  // labels: distinct diagrams d * e_{N+1} (the right ideal), times module basis
  auto basis = enumerate_basis(NN);
  TlDiagram eTop = gen_e(N + 1, NN);
  std::vector<TlDiagram> labels;
  std::map<TlDiagram, int> index;
  for (const auto& d : basis) {
    auto [x, loops] = compose(d, eTop);
    (void)loops;
    if (!index.count(x)) {
      index.emplace(x, (int)labels.size());
      labels.push_back(x);
    }
  }
  const int mdim = std::max(M.dim, 1);
  auto lid = [&](int lab, int v) { return (int64_t)lab * mdim + v; };
  SparseReducer red(cfg);
  // arc images of the source generators and their action on M
  FiniteArcEmbedding psi = embed_arc_finite(cfg, N);
  for (size_t li = 0; li < labels.size(); ++li) {
    const auto& x = labels[li];
    for (int j = 1; j <= N - 1; ++j) {
      // x * psi(e_j) (+ the corner unit relation x * E = x handled below)
      TlElement prod = elem_mul(cfg, tl_elem(x, cfg.one()), psi.e[(size_t)(j - 1)]);
      for (int v = 0; v < M.dim; ++v) {
        SparseRow row;
        for (const auto& [d, c] : prod.terms) row.emplace_back(lid(index.at(d), v), c);
        const Mat& A = M.e(j);
        for (int w = 0; w < M.dim; ++w)
          if (!A.at(w, v).is_zero()) row.emplace_back(lid((int)li, w), -A.at(w, v));
        red.add_relation(std::move(row));
      }
    }
    // x * E = x  (E is the unit of the induced-from corner algebra)
    TlElement xe = elem_mul(cfg, tl_elem(x, cfg.one()), psi.corner);
    for (int v = 0; v < M.dim; ++v) {
      SparseRow row;
      for (const auto& [d, c] : xe.terms) row.emplace_back(lid(index.at(d), v), c);
      row.emplace_back(lid((int)li, v), -cfg.one());
      red.add_relation(std::move(row));
    }
  }
  // quotient basis
  std::vector<int64_t> qb;
  for (size_t li = 0; li < labels.size(); ++li)
    for (int v = 0; v < M.dim; ++v)
      if (!red.is_pivot(lid((int)li, v))) qb.push_back(lid((int)li, v));
  std::sort(qb.begin(), qb.end());
  std::map<int64_t, int> qix;
  for (size_t k = 0; k < qb.size(); ++k) qix.emplace(qb[k], (int)k);
  ModuleRep G;
  G.affine = false;
  G.n = NN;
  G.dim = (int)qb.size();
  G.twoJ = M.twoJ;
  for (int i = 1; i <= NN - 1; ++i) {
    Mat A(G.dim, G.dim, cfg);
    TlDiagram ei = gen_e(i, NN);
    for (size_t k = 0; k < qb.size(); ++k) {
      int lab = (int)(qb[k] / mdim);
      int v = (int)(qb[k] % mdim);
      auto [d2, loops] = compose(ei, labels[(size_t)lab]);
      SparseRow row{{lid(index.at(d2), v), m.pow(loops)}};
      row = red.reduce(std::move(row));
      for (const auto& [l, c] : row) A.at(qix.at(l), (int)k) = c;
    }
    G.eMat.push_back(std::move(A));
  }
  return G;
}

}  // namespace atlf
