#include "atlfuse/tl.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace atlf {

unsigned long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (unsigned long long)(n - k + i) / i;
  return r;
}

unsigned long long catalan(int N) { return binom(2 * N, N) / (N + 1); }

namespace {

// position of boundary point p in the cyclic order around the rectangle:
// bottom 0..n-1 left to right, then top right to left
int circle_pos(int p, int n) { return p < n ? p : n + (2 * n - 1 - p); }

}  // namespace

bool TlDiagram::planar() const {
  for (int a = 0; a < 2 * n; ++a) {
    int b = pair[a];
    if (b == a) return false;
    for (int c = a + 1; c < 2 * n; ++c) {
      int d = pair[c];
      int pa = circle_pos(a, n), pb = circle_pos(b, n), pc = circle_pos(c, n),
          pd = circle_pos(d, n);
      if (pa > pb) std::swap(pa, pb);
      if (pc > pd) std::swap(pc, pd);
      bool c_in = pa < pc && pc < pb;
      bool d_in = pa < pd && pd < pb;
      if (c_in != d_in) return false;
    }
  }
  return true;
}

std::string TlDiagram::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int p = 0; p < 2 * n; ++p) {
    if (p) os << " ";
    os << pair[p];
  }
  os << "]";
  return os.str();
}

TlDiagram tl_identity(int n) {
  TlDiagram d;
  d.n = n;
  d.pair.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    d.pair[k] = n + k;
    d.pair[n + k] = k;
  }
  return d;
}

TlDiagram gen_e(int i, int N) {
  if (i < 1 || i > N - 1) throw std::out_of_range("gen_e: index out of range");
  TlDiagram d = tl_identity(N);
  int a = i - 1, b = i;  // 0-indexed sites
  d.pair[a] = b;
  d.pair[b] = a;
  d.pair[N + a] = N + b;
  d.pair[N + b] = N + a;
  return d;
}

std::pair<TlDiagram, int> compose(const TlDiagram& d1, const TlDiagram& d2) {
  if (d1.n != d2.n) throw std::invalid_argument("compose: size mismatch");
  const int n = d1.n;
  // glue d1's bottom point k to d2's top point n+k; walk the union.
  // Result boundary: bottom = d2's bottom (0..n-1), top = d1's top (n..2n-1).
  TlDiagram r;
  r.n = n;
  r.pair.assign(2 * n, -1);
  // encode walk state: in d1 at point p (0..2n-1), or in d2
  auto trace = [&](bool start_in_d1, int start) {
    bool in1 = start_in_d1;
    int p = start;
    while (true) {
      int q = in1 ? d1.pair[p] : d2.pair[p];
      if (in1 && q >= n) return std::pair<bool, int>{true, q};    // d1 top
      if (!in1 && q < n) return std::pair<bool, int>{false, q};   // d2 bottom
      // crossing the glue seam
      if (in1) {
        p = n + q;  // d1 bottom q -> d2 top n+q
        in1 = false;
      } else {
        p = q - n;  // d2 top q -> d1 bottom q-n
        in1 = true;
      }
    }
  };
  for (int k = 0; k < n; ++k) {
    if (r.pair[k] != -1) continue;
    auto [top, q] = trace(false, k);
    int dst = top ? q : q;  // d1 top keeps its index n..2n-1; d2 bottom keeps 0..n-1
    if (top) {
      r.pair[k] = q;
      r.pair[q] = k;
    } else {
      r.pair[k] = dst;
      r.pair[dst] = k;
    }
  }
  for (int k = n; k < 2 * n; ++k) {
    if (r.pair[k] != -1) continue;
    auto [top, q] = trace(true, k);
    (void)top;
    r.pair[k] = q;
    r.pair[q] = k;
  }
  // loops: interior cycles not reached from the boundary
  std::vector<bool> seen(n, false);  // glue position k = d1 bottom k = d2 top n+k
  // mark glue positions visited by boundary paths
  auto trace_mark = [&](bool start_in_d1, int start) {
    bool in1 = start_in_d1;
    int p = start;
    while (true) {
      int q = in1 ? d1.pair[p] : d2.pair[p];
      if (in1 && q >= n) return;
      if (!in1 && q < n) return;
      if (in1) {
        seen[q] = true;
        p = n + q;
        in1 = false;
      } else {
        seen[q - n] = true;
        p = q - n;
        in1 = true;
      }
    }
  };
  for (int k = 0; k < n; ++k) trace_mark(false, k);
  for (int k = n; k < 2 * n; ++k) trace_mark(true, k);
  int loops = 0;
  for (int k = 0; k < n; ++k) {
    if (seen[k]) continue;
    // interior cycle through glue position k, alternating d1-bottom and
    // d2-top arcs
    ++loops;
    int p = k;
    while (!seen[p]) {
      seen[p] = true;
      int q = d1.pair[p];  // stays interior on a cycle
      seen[q] = true;
      p = d2.pair[n + q] - n;
    }
  }
  return {r, loops};
}

std::vector<TlDiagram> enumerate_basis(int N) {
  if (N < 1) throw std::invalid_argument("enumerate_basis: N >= 1");
  std::vector<TlDiagram> out;
  std::vector<int> pr(2 * N, -1);
  // match points in circle order to guarantee planarity
  std::function<void(int)> rec = [&](int fromCircle) {
    int a = -1;
    for (int c = fromCircle; c < 2 * N; ++c) {
      // find boundary point with circle position c
      int p = c < N ? c : N + (2 * N - 1 - c);
      if (pr[p] == -1) {
        a = c;
        break;
      }
    }
    if (a == -1) {
      TlDiagram d;
      d.n = N;
      d.pair = pr;
      out.push_back(d);
      return;
    }
    int pa = a < N ? a : N + (2 * N - 1 - a);
    for (int b = a + 1; b < 2 * N; b += 2) {
      int pb = b < N ? b : N + (2 * N - 1 - b);
      if (pr[pb] != -1) continue;
      // no point strictly between a and b (circle order) may pair outside:
      // recursion order takes care of it since inner block must match within
      // check: number of unmatched strictly inside is even and they can
      // only match inside; enforce by counting
      int unmatched_inside = 0;
      bool blocked = false;
      for (int c = a + 1; c < b; ++c) {
        int pc = c < N ? c : N + (2 * N - 1 - c);
        if (pr[pc] == -1)
          ++unmatched_inside;
        else {
          int d = pr[pc];
          int cd = circle_pos(d, N);
          if (cd < a || cd > b) blocked = true;
        }
      }
      (void)unmatched_inside;
      if (blocked) continue;
      pr[pa] = pb;
      pr[pb] = pa;
      rec(a + 1);
      pr[pa] = -1;
      pr[pb] = -1;
    }
  };
  rec(0);
  for (auto& d : out)
    if (!d.planar()) throw std::logic_error("enumerate_basis produced a crossing diagram");
  std::sort(out.begin(), out.end());
  return out;
}

bool TlElement::operator==(const TlElement& o) const {
  if (n != o.n || terms.size() != o.terms.size()) return false;
  auto it = terms.begin();
  auto jt = o.terms.begin();
  for (; it != terms.end(); ++it, ++jt) {
    if (!(it->first == jt->first) || it->second != jt->second) return false;
  }
  return true;
}

std::string TlElement::to_string() const {
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

TlElement tl_elem(const TlDiagram& d, const Scalar& c) {
  TlElement e;
  e.n = d.n;
  if (!c.is_zero()) e.terms.emplace(d, c);
  return e;
}

TlElement tl_elem_one(const FieldConfig& cfg, int n) { return tl_elem(tl_identity(n), cfg.one()); }

TlElement elem_add(const TlElement& a, const TlElement& b) {
  if (a.n != b.n) throw std::invalid_argument("elem_add: size mismatch");
  TlElement r = a;
  for (const auto& [d, c] : b.terms) {
    auto it = r.terms.find(d);
    if (it == r.terms.end()) {
      r.terms.emplace(d, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) r.terms.erase(it);
    }
  }
  return r;
}

TlElement elem_scale(const Scalar& c, const TlElement& a) {
  TlElement r;
  r.n = a.n;
  if (c.is_zero()) return r;
  for (const auto& [d, x] : a.terms) {
    Scalar y = c * x;
    if (!y.is_zero()) r.terms.emplace(d, y);
  }
  return r;
}

TlElement elem_mul(const FieldConfig& cfg, const TlElement& a, const TlElement& b) {
  if (a.n != b.n) throw std::invalid_argument("elem_mul: size mismatch");
  TlElement r;
  r.n = a.n;
  Scalar m = cfg.loop_weight();
  for (const auto& [da, ca] : a.terms) {
    for (const auto& [db, cb] : b.terms) {
      auto [d, loops] = compose(da, db);
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

TlElement braid_g(const FieldConfig& cfg, int i, int N, int sign) {
  auto [alpha, beta] = braid_coeffs(cfg, sign);
  TlElement r = elem_scale(alpha, tl_elem_one(cfg, N));
  return elem_add(r, tl_elem(gen_e(i, N), beta));
}

TlElement word_eval_tl(const FieldConfig& cfg, const GenWord& w, int N) {
  TlElement acc = tl_elem_one(cfg, N);
  for (const auto& t : w) {
    TlElement f;
    switch (t.kind) {
      case GenTok::E:
        f = tl_elem(gen_e(t.i, N), cfg.one());
        break;
      case GenTok::G:
        f = braid_g(cfg, t.i, N, +1);
        break;
      case GenTok::Ginv:
        f = braid_g(cfg, t.i, N, -1);
        break;
      default:
        throw std::invalid_argument("word_eval_tl: invalid token for finite TL");
    }
    acc = elem_mul(cfg, acc, f);
  }
  return acc;
}

std::vector<RelSpec> tl_relations(int N) {
  std::vector<RelSpec> rels;
  auto E = [](int i) { return GenTok{GenTok::E, i}; };
  auto nm = [](int i) { return "e" + std::to_string(i); };
  for (int i = 1; i <= N - 1; ++i)
    rels.push_back({nm(i) + "^2 = m " + nm(i), {E(i), E(i)}, {E(i)}, true});
  for (int i = 1; i <= N - 1; ++i) {
    for (int d : {+1, -1}) {
      int j = i + d;
      if (j < 1 || j > N - 1) continue;
      rels.push_back({nm(i) + " " + nm(j) + " " + nm(i) + " = " + nm(i),
                      {E(i), E(j), E(i)},
                      {E(i)},
                      false});
    }
  }
  for (int i = 1; i <= N - 1; ++i)
    for (int j = i + 2; j <= N - 1; ++j)
      rels.push_back({nm(i) + " " + nm(j) + " = " + nm(j) + " " + nm(i),
                      {E(i), E(j)},
                      {E(j), E(i)},
                      false});
  return rels;
}

CheckReport verify_tl_relations(const FieldConfig& cfg, int N) {
  CheckReport rep;
  Scalar m = cfg.loop_weight();
  for (const auto& rel : tl_relations(N)) {
    TlElement lhs = word_eval_tl(cfg, rel.lhs, N);
    TlElement rhs = word_eval_tl(cfg, rel.rhs, N);
    if (rel.rhs_times_m) rhs = elem_scale(m, rhs);
    CheckItem item;
    item.name = "TL" + std::to_string(N) + ": " + rel.name;
    item.pass = (lhs == rhs);
    if (!item.pass) item.detail = lhs.to_string() + " != " + rhs.to_string();
    rep.items.push_back(std::move(item));
  }
  return rep;
}

}  // namespace atlf
