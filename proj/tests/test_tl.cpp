#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "atlfuse/tl.hpp"

using namespace atlf;

namespace {

// independent oracle: enumerate all perfect matchings on 2N points and keep
// the non-crossing ones (crossing test on the rectangle boundary circle)
int circle_pos(int p, int n) { return p < n ? p : n + (2 * n - 1 - p); }

bool oracle_planar(const std::vector<int>& pr, int n) {
  for (int a = 0; a < 2 * n; ++a) {
    for (int c = 0; c < 2 * n; ++c) {
      int b = pr[a], d = pr[c];
      if (a == c || a == d) continue;
      int pa = circle_pos(a, n), pb = circle_pos(b, n), pc = circle_pos(c, n),
          pd = circle_pos(d, n);
      if (pa > pb) std::swap(pa, pb);
      if (pc > pd) std::swap(pc, pd);
      if ((pa < pc && pc < pb) != (pa < pd && pd < pb)) return false;
    }
  }
  return true;
}

std::set<std::vector<int>> oracle_all_matchings(int N) {
  std::set<std::vector<int>> out;
  std::vector<int> pr(2 * N, -1);
  std::function<void()> rec = [&]() {
    int a = -1;
    for (int p = 0; p < 2 * N; ++p)
      if (pr[p] == -1) {
        a = p;
        break;
      }
    if (a == -1) {
      if (oracle_planar(pr, N)) out.insert(pr);
      return;
    }
    for (int b = a + 1; b < 2 * N; ++b) {
      if (pr[b] != -1) continue;
      pr[a] = b;
      pr[b] = a;
      rec();
      pr[a] = -1;
      pr[b] = -1;
    }
  };
  rec();
  return out;
}

// slow reference composition: union-find path tracing over 4n points
std::pair<TlDiagram, int> oracle_compose(const TlDiagram& a, const TlDiagram& b) {
  int n = a.n;
  // points: 0..2n-1 = b's (result bottom 0..n-1, glue n..2n-1),
  //         2n..4n-1 = a's (glue 2n..3n-1, result top 3n..4n-1)
  std::vector<std::vector<int>> adj(4 * n);
  for (int p = 0; p < 2 * n; ++p) {
    int q = b.pair[p];
    if (p < q) {
      adj[p].push_back(q);
      adj[q].push_back(p);
    }
  }
  for (int p = 0; p < 2 * n; ++p) {
    int q = a.pair[p];
    if (p < q) {
      adj[2 * n + p].push_back(2 * n + q);
      adj[2 * n + q].push_back(2 * n + p);
    }
  }
  for (int k = 0; k < n; ++k) {
    adj[n + k].push_back(2 * n + k);
    adj[2 * n + k].push_back(n + k);
  }
  auto is_boundary = [&](int p) { return p < n || p >= 3 * n; };
  std::vector<bool> seen(4 * n, false);
  TlDiagram r;
  r.n = n;
  r.pair.assign(2 * n, -1);
  for (int p = 0; p < 4 * n; ++p) {
    if (!is_boundary(p) || seen[p]) continue;
    // walk to the other end
    int prev = -1, cur = p;
    seen[cur] = true;
    while (true) {
      int nxt = -1;
      for (int q : adj[cur])
        if (q != prev) {
          nxt = q;
          break;
        }
      if (nxt == -1) break;
      prev = cur;
      cur = nxt;
      seen[cur] = true;
      if (is_boundary(cur)) break;
    }
    auto rid = [&](int x) { return x < n ? x : x - 2 * n; };
    r.pair[rid(p)] = rid(cur);
    r.pair[rid(cur)] = rid(p);
  }
  int loops = 0;
  for (int p = n; p < 3 * n; ++p) {
    if (seen[p]) continue;
    ++loops;
    int prev = -1, cur = p;
    while (!seen[cur]) {
      seen[cur] = true;
      int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      prev = cur;
      cur = nxt;
    }
  }
  return {r, loops};
}

uint64_t rngs = 99;
uint64_t rnd() {
  rngs ^= rngs << 13;
  rngs ^= rngs >> 7;
  rngs ^= rngs << 17;
  return rngs;
}

}  // namespace

TEST_CASE("basis enumeration matches brute-force oracle") {
  for (int N : {1, 2, 3, 4, 6}) {
    auto basis = enumerate_basis(N);
    auto oracle = oracle_all_matchings(N);
    CHECK(basis.size() == oracle.size());
    CHECK(basis.size() == catalan(N));
    for (const auto& d : basis) CHECK(oracle.count(d.pair) == 1);
  }
  CHECK(enumerate_basis(1).size() == 1);
  CHECK(enumerate_basis(3).size() == 5);
  CHECK(enumerate_basis(6).size() == 132);
}

TEST_CASE("catalan counts up to N=10") {
  unsigned long long expect[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
  for (int N = 1; N <= 10; ++N) CHECK(catalan(N) == expect[N]);
  CHECK(enumerate_basis(8).size() == 1430);
}

TEST_CASE("gen_e shapes") {
  TlDiagram e1 = gen_e(1, 2);
  CHECK(e1.pair == std::vector<int>{1, 0, 3, 2});
  TlDiagram e2 = gen_e(2, 4);
  CHECK(e2.pair == std::vector<int>{4, 2, 1, 7, 0, 6, 5, 3});
  CHECK_THROWS(gen_e(0, 3));
  CHECK_THROWS(gen_e(3, 3));
}

TEST_CASE("compose: loop counting and the Z diagram") {
  auto [d, loops] = compose(gen_e(1, 2), gen_e(1, 2));
  CHECK(d == gen_e(1, 2));
  CHECK(loops == 1);

  auto [z, zl] = compose(gen_e(1, 3), gen_e(2, 3));
  CHECK(zl == 0);
  auto [zo, zol] = oracle_compose(gen_e(1, 3), gen_e(2, 3));
  CHECK(z == zo);
  CHECK(zol == 0);

  // identity absorbs
  for (const auto& d4 : enumerate_basis(4)) {
    auto [p, l] = compose(tl_identity(4), d4);
    CHECK(p == d4);
    CHECK(l == 0);
  }

  // e1 e2 e1 = e1 with no loops
  auto [w, wl] = compose(z, gen_e(1, 3));
  CHECK(wl == 0);
  CHECK(w == gen_e(1, 3));
}

TEST_CASE("compose agrees with path-tracing oracle on random pairs") {
  for (int N : {2, 3, 4, 5}) {
    auto basis = enumerate_basis(N);
    for (int t = 0; t < 300; ++t) {
      const auto& a = basis[rnd() % basis.size()];
      const auto& b = basis[rnd() % basis.size()];
      auto [p1, l1] = compose(a, b);
      auto [p2, l2] = oracle_compose(a, b);
      CHECK(p1 == p2);
      CHECK(l1 == l2);
    }
  }
}

TEST_CASE("associativity with loop bookkeeping") {
  FieldConfig cfg = FieldConfig::exact();
  for (int N : {2, 3, 4, 5, 6}) {
    auto basis = enumerate_basis(N);
    for (int t = 0; t < 100; ++t) {
      TlElement a = tl_elem(basis[rnd() % basis.size()], cfg.one());
      TlElement b = tl_elem(basis[rnd() % basis.size()], cfg.one());
      TlElement c = tl_elem(basis[rnd() % basis.size()], cfg.one());
      CHECK(elem_mul(cfg, elem_mul(cfg, a, b), c) == elem_mul(cfg, a, elem_mul(cfg, b, c)));
    }
  }
}

TEST_CASE("TL relation suite") {
  FieldConfig cfg = FieldConfig::exact();
  for (int N = 2; N <= 6; ++N) {
    auto rep = verify_tl_relations(cfg, N);
    CHECK(rep.all_pass());
    CHECK(!rep.items.empty());
  }
}

TEST_CASE("negative control: corrupted loop count fails e^2 = m e") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar m = cfg.loop_weight();
  TlElement e1 = tl_elem(gen_e(1, 2), cfg.one());
  // a composition with an off-by-one loop count would produce m^2 e1
  TlElement mutated = elem_scale(m * m, e1);
  TlElement correct = elem_mul(cfg, e1, e1);
  CHECK(correct == elem_scale(m, e1));
  CHECK(!(mutated == elem_scale(m, e1)));
}

TEST_CASE("braid elements") {
  FieldConfig cfg = FieldConfig::exact();
  // braid relation g1 g2 g1 = g2 g1 g2 in TL_3
  auto G = [&](int i, int N, int s) { return braid_g(cfg, i, N, s); };
  auto mul = [&](const TlElement& a, const TlElement& b) { return elem_mul(cfg, a, b); };
  CHECK(mul(mul(G(1, 3, 1), G(2, 3, 1)), G(1, 3, 1)) ==
        mul(mul(G(2, 3, 1), G(1, 3, 1)), G(2, 3, 1)));
  // g g^{-1} = 1
  CHECK(mul(G(1, 2, 1), G(1, 2, -1)) == tl_elem_one(cfg, 2));
  // far commutation g1 g3 = g3 g1 in TL_4
  CHECK(mul(G(1, 4, 1), G(3, 4, 1)) == mul(G(3, 4, 1), G(1, 4, 1)));
  // braid relations for all i at N <= 6
  for (int N = 3; N <= 6; ++N)
    for (int i = 1; i + 1 <= N - 1; ++i)
      CHECK(mul(mul(G(i, N, 1), G(i + 1, N, 1)), G(i, N, 1)) ==
            mul(mul(G(i + 1, N, 1), G(i, N, 1)), G(i + 1, N, 1)));
  // the twist: e1 g2 e1 = i q^{3/2} e1 in TL_3
  TlElement e1 = tl_elem(gen_e(1, 3), cfg.one());
  TlElement lhs = mul(mul(e1, G(2, 3, 1)), e1);
  TlElement rhs = elem_scale(cfg.i() * cfg.s_pow(3), e1);
  CHECK(lhs == rhs);
  // and the arc-slide identities g_i g_{i+1} e_i = e_{i+1} e_i
  TlElement lhs2 = mul(mul(G(1, 3, 1), G(2, 3, 1)), e1);
  TlElement rhs2 = mul(tl_elem(gen_e(2, 3), cfg.one()), e1);
  CHECK(lhs2 == rhs2);
}

TEST_CASE("dimension identity sum d_j^2 = dim TL_N") {
  for (int N = 1; N <= 10; ++N) {
    unsigned long long sum = 0;
    for (int twoJ = N % 2; twoJ <= N; twoJ += 2) {
      unsigned long long dj = binom(N, (N + twoJ) / 2) - binom(N, (N + twoJ) / 2 + 1);
      sum += dj * dj;
    }
    CHECK(sum == catalan(N));
  }
}

TEST_CASE("word evaluation") {
  FieldConfig cfg = FieldConfig::exact();
  GenWord w;  // empty word = identity
  CHECK(word_eval_tl(cfg, w, 3) == tl_elem_one(cfg, 3));
  GenWord braid1{{GenTok::G, 1}, {GenTok::G, 2}, {GenTok::G, 1}};
  GenWord braid2{{GenTok::G, 2}, {GenTok::G, 1}, {GenTok::G, 2}};
  CHECK(word_eval_tl(cfg, braid1, 3) == word_eval_tl(cfg, braid2, 3));
}
