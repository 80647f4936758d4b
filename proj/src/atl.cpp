#include "atlfuse/atl.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace atlf {

namespace {
int64_t floordiv(int64_t a, int64_t b) {
  int64_t q = a / b, r = a % b;
  return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}
int64_t posmod(int64_t a, int64_t b) { return a - floordiv(a, b) * b; }
}  // namespace

LiftPt AffineDiagram::partner(const LiftPt& x) const {
  int64_t rep = posmod(x.pos, n);
  int64_t shift = x.pos - rep;
  LiftPt base = x.side == 0 ? bpart[(size_t)rep] : tpart[(size_t)rep];
  return {base.side, base.pos + shift};
}

int AffineDiagram::jlines2() const {
  int c = 0;
  for (int p = 0; p < n; ++p)
    if (bpart[p].side == 1) ++c;
  return c;
}

bool AffineDiagram::valid() const {
  if ((int)bpart.size() != n || (int)tpart.size() != n) return false;
  for (int p = 0; p < n; ++p) {
    for (int side : {0, 1}) {
      LiftPt x{(int8_t)side, p};
      LiftPt y = partner(x);
      if (y == x) return false;
      if (!(partner(y) == x)) return false;
    }
  }
  if (nloops > 0 && jlines2() > 0) return false;
  if (nloops < 0) return false;
  return true;
}

bool AffineDiagram::operator<(const AffineDiagram& o) const {
  if (n != o.n) return n < o.n;
  if (nloops != o.nloops) return nloops < o.nloops;
  if (bpart != o.bpart) return bpart < o.bpart;
  return tpart < o.tpart;
}

std::string AffineDiagram::to_string() const {
  std::ostringstream os;
  auto pt = [](const LiftPt& x) {
    return std::string(x.side ? "t" : "b") + std::to_string(x.pos);
  };
  os << "{";
  for (int p = 0; p < n; ++p) os << (p ? " " : "") << "b" << p << ":" << pt(bpart[p]);
  for (int p = 0; p < n; ++p) os << " t" << p << ":" << pt(tpart[p]);
  if (nloops) os << " | loops=" << nloops;
  os << "}";
  return os.str();
}

AffineDiagram atl_identity(int n) {
  AffineDiagram d;
  d.n = n;
  d.bpart.resize(n);
  d.tpart.resize(n);
  for (int p = 0; p < n; ++p) {
    d.bpart[p] = {1, p};
    d.tpart[p] = {0, p};
  }
  return d;
}

AffineDiagram gen_u(int N, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("gen_u: sign must be +-1");
  AffineDiagram d;
  d.n = N;
  d.bpart.resize(N);
  d.tpart.resize(N);
  for (int p = 0; p < N; ++p) {
    d.bpart[p] = {1, p + sign};
    d.tpart[p] = {0, p - sign};
  }
  return d;
}

AffineDiagram gen_e_affine(int i, int N) {
  if (N < 2) throw std::invalid_argument("gen_e_affine: N >= 2");
  int site = posmod(i - 1, N);  // e_i joins 1-based sites (i, i+1): 0-based (i-1, i)
  AffineDiagram d = atl_identity(N);
  // cup joining 0-based sites site and site+1 (lifted, may cross the seam)
  int other = site + 1;  // lifted position
  int otherRep = other % N;
  int shift = other - otherRep;  // 0 or N
  d.bpart[site] = {0, other};
  d.bpart[otherRep] = {0, site - shift};  // equivariant partner
  d.tpart[site] = {1, other};
  d.tpart[otherRep] = {1, site - shift};
  return d;
}

std::pair<AffineDiagram, int> compose_affine(const AffineDiagram& a, const AffineDiagram& b) {
  if (a.n != b.n) throw std::invalid_argument("compose_affine: size mismatch");
  const int n = a.n;
  AffineDiagram r;
  r.n = n;
  r.bpart.resize(n);
  r.tpart.resize(n);
  // layers: a on top, b below; glue a-bottom pos p with b-top pos p.
  // Walk from a boundary point of the product to the other end.
  int64_t maxshift = 2;
  for (int p = 0; p < n; ++p) {
    for (const auto* d : {&a, &b}) {
      maxshift = std::max(maxshift, std::abs(d->bpart[p].pos - p));
      maxshift = std::max(maxshift, std::abs(d->tpart[p].pos - p));
    }
  }
  const int64_t step_bound = 64 + 16 * (int64_t)n * (maxshift + 2) * (maxshift + 2);
  struct End {
    int side;  // 0 = product bottom (in b), 1 = product top (in a)
    int64_t pos;
  };
  std::vector<int8_t> seen(n, 0);  // glue orbits visited by boundary paths
  auto walk = [&](int layer, LiftPt x) -> End {
    int64_t steps = 0;
    while (true) {
      if (++steps > step_bound) throw std::logic_error("compose_affine: walk did not terminate");
      if (layer == 0) {
        LiftPt y = a.partner(x);
        if (y.side == 1) return {1, y.pos};  // a top = product top
        seen[posmod(y.pos, n)] = 1;
        layer = 1;
        x = {1, y.pos};  // b top at same glue position
      } else {
        LiftPt y = b.partner(x);
        if (y.side == 0) return {0, y.pos};  // b bottom = product bottom
        seen[posmod(y.pos, n)] = 1;
        layer = 0;
        x = {0, y.pos};  // a bottom at same glue position
      }
    }
  };
  for (int p = 0; p < n; ++p) {
    End e = walk(0, LiftPt{1, p});  // from product top rep p (a's top)
    r.tpart[p] = {(int8_t)e.side, e.pos};
  }
  for (int p = 0; p < n; ++p) {
    End e = walk(1, LiftPt{0, p});  // from product bottom rep p (b's bottom)
    r.bpart[p] = {(int8_t)e.side, e.pos};
  }
  // interior cycles: glue orbits untouched by any boundary path
  int contractible = 0, noncontractible = 0;
  for (int p = 0; p < n; ++p) {
    if (seen[p]) continue;
    // alternate a-bottom and b-top arcs until the orbit closes
    int64_t pos = p;
    int64_t steps = 0;
    while (true) {
      if (++steps > step_bound) throw std::logic_error("compose_affine: cycle did not terminate");
      seen[posmod(pos, n)] = 1;
      LiftPt y = a.partner(LiftPt{0, pos});
      if (y.side != 0) throw std::logic_error("compose_affine: boundary hit inside a cycle");
      seen[posmod(y.pos, n)] = 1;
      LiftPt z = b.partner(LiftPt{1, y.pos});
      if (z.side != 1) throw std::logic_error("compose_affine: boundary hit inside a cycle");
      pos = z.pos;
      if (posmod(pos, n) == p) {
        if (pos == p)
          ++contractible;
        else
          ++noncontractible;
        break;
      }
    }
  }
  r.nloops = a.nloops + b.nloops + noncontractible;
  if (r.nloops > 0 && r.jlines2() > 0)
    throw std::logic_error("compose_affine: loops with through-lines");
  return {r, contractible};
}

bool AtlElement::operator==(const AtlElement& o) const {
  if (n != o.n || terms.size() != o.terms.size()) return false;
  auto it = terms.begin();
  auto jt = o.terms.begin();
  for (; it != terms.end(); ++it, ++jt)
    if (!(it->first == jt->first) || it->second != jt->second) return false;
  return true;
}

std::string AtlElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, c] : terms) {
    if (!first) os << " + ";
    os << c.to_string() << "*" << d.to_string();
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

AtlElement atl_elem(const AffineDiagram& d, const Scalar& c) {
  AtlElement e;
  e.n = d.n;
  if (!c.is_zero()) e.terms.emplace(d, c);
  return e;
}

AtlElement atl_one(const FieldConfig& cfg, int n) { return atl_elem(atl_identity(n), cfg.one()); }

AtlElement atl_add(const AtlElement& a, const AtlElement& b) {
  if (a.n != b.n) throw std::invalid_argument("atl_add: size mismatch");
  AtlElement r = a;
  for (const auto& [d, c] : b.terms) {
    auto it = r.terms.find(d);
    if (it == r.terms.end())
      r.terms.emplace(d, c);
    else {
      it->second = it->second + c;
      if (it->second.is_zero()) r.terms.erase(it);
    }
  }
  return r;
}

AtlElement atl_scale(const Scalar& c, const AtlElement& a) {
  AtlElement r;
  r.n = a.n;
  if (c.is_zero()) return r;
  for (const auto& [d, x] : a.terms) {
    Scalar y = c * x;
    if (!y.is_zero()) r.terms.emplace(d, y);
  }
  return r;
}

AtlElement atl_mul(const FieldConfig& cfg, const AtlElement& a, const AtlElement& b) {
  if (a.n != b.n) throw std::invalid_argument("atl_mul: size mismatch");
  AtlElement r;
  r.n = a.n;
  Scalar m = cfg.loop_weight();
  for (const auto& [da, ca] : a.terms) {
    for (const auto& [db, cb] : b.terms) {
      auto [d, loops] = compose_affine(da, db);
      Scalar c = ca * cb * m.pow(loops);
      auto it = r.terms.find(d);
      if (it == r.terms.end()) {
        if (!c.is_zero()) r.terms.emplace(d, c);
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) r.terms.erase(it);
      }
    }
  }
  return r;
}

AtlElement braid_g_affine(const FieldConfig& cfg, int i, int N, int sign) {
  auto [alpha, beta] = braid_coeffs(cfg, sign);
  return atl_add(atl_scale(alpha, atl_one(cfg, N)), atl_elem(gen_e_affine(i, N), beta));
}

AtlElement word_eval_affine(const FieldConfig& cfg, const GenWord& w, int N) {
  AtlElement acc = atl_one(cfg, N);
  for (const auto& t : w) {
    AtlElement f;
    switch (t.kind) {
      case GenTok::E:
        f = atl_elem(gen_e_affine(t.i, N), cfg.one());
        break;
      case GenTok::U:
        f = atl_elem(gen_u(N, +1), cfg.one());
        break;
      case GenTok::Uinv:
        f = atl_elem(gen_u(N, -1), cfg.one());
        break;
      case GenTok::G:
        f = braid_g_affine(cfg, t.i, N, +1);
        break;
      case GenTok::Ginv:
        f = braid_g_affine(cfg, t.i, N, -1);
        break;
      default:
        throw std::invalid_argument("word_eval_affine: invalid token");
    }
    acc = atl_mul(cfg, acc, f);
  }
  return acc;
}

std::vector<RelSpec> atl_relations(int N) {
  std::vector<RelSpec> rels;
  auto E = [](int i) { return GenTok{GenTok::E, i}; };
  GenTok U{GenTok::U, 0}, Ui{GenTok::Uinv, 0};
  auto nm = [&](int i) { return "e" + std::to_string(posmod(i, N)); };
  rels.push_back({"u u^-1 = 1", {U, Ui}, {}, false});
  if (N >= 2) {
    for (int j = 0; j < N; ++j)
      rels.push_back({nm(j) + "^2 = m " + nm(j), {E(j), E(j)}, {E(j)}, true});
    for (int j = 0; j < N; ++j)
      rels.push_back({"u " + nm(j) + " u^-1 = " + nm(j + 1),
                      {U, E(j), Ui},
                      {E((int)posmod(j + 1, N))},
                      false});
    GenWord lhs{U, U, E(N - 1)};
    GenWord rhs;
    for (int j = 1; j <= N - 1; ++j) rhs.push_back(E(j));
    rels.push_back({"u^2 e" + std::to_string(N - 1) + " = e1...e" + std::to_string(N - 1),
                    lhs, rhs, false});
  }
  if (N >= 3) {
    for (int j = 0; j < N; ++j)
      for (int d : {+1, -1})
        rels.push_back({nm(j) + " " + nm(j + d) + " " + nm(j) + " = " + nm(j),
                        {E(j), E((int)posmod(j + d, N)), E(j)},
                        {E(j)},
                        false});
  }
  if (N >= 4) {
    for (int j = 0; j < N; ++j)
      for (int k = j + 2; k < N; ++k) {
        if (posmod(k - j, N) == 1 || posmod(j - k, N) == 1) continue;
        rels.push_back({nm(j) + " " + nm(k) + " = " + nm(k) + " " + nm(j),
                        {E(j), E(k)},
                        {E(k), E(j)},
                        false});
      }
  }
  return rels;
}

CheckReport verify_atl_relations(const FieldConfig& cfg, int N) {
  CheckReport rep;
  Scalar m = cfg.loop_weight();
  for (const auto& rel : atl_relations(N)) {
    AtlElement lhs = word_eval_affine(cfg, rel.lhs, N);
    AtlElement rhs = word_eval_affine(cfg, rel.rhs, N);
    if (rel.rhs_times_m) rhs = atl_scale(m, rhs);
    CheckItem item;
    item.name = "ATL" + std::to_string(N) + ": " + rel.name;
    item.pass = (lhs == rhs);
    if (!item.pass) item.detail = lhs.to_string() + " != " + rhs.to_string();
    rep.items.push_back(std::move(item));
  }
  return rep;
}

}  // namespace atlf
