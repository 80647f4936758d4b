#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atlfuse/modules.hpp"

using namespace atlf;

TEST_CASE("standard finite dimensions") {
  FieldConfig cfg = FieldConfig::exact();
  CHECK(standard_finite(cfg, 4, 2).dim == 3);
  CHECK(standard_finite(cfg, 6, 0).dim == 5);
  for (int N = 1; N <= 10; ++N)
    for (int twoJ = N % 2; twoJ <= N; twoJ += 2)
      CHECK(enumerate_link_states(N, twoJ).size() == dim_standard_finite(N, twoJ));
  CHECK_THROWS(standard_finite(cfg, 5, 2));  // parity guard
  CHECK_THROWS(standard_finite(cfg, 4, 6));
}

TEST_CASE("defect-lowering action is set to zero") {
  FieldConfig cfg = FieldConfig::exact();
  ModuleRep M = standard_finite(cfg, 2, 2);
  CHECK(M.dim == 1);
  CHECK(M.e(1).is_zero());
}

TEST_CASE("standard finite module relations, N <= 6") {
  FieldConfig cfg = FieldConfig::exact();
  for (int N = 2; N <= 6; ++N)
    for (int twoJ = N % 2; twoJ <= N; twoJ += 2) {
      auto rep = verify_module(cfg, standard_finite(cfg, N, twoJ));
      for (const auto& it : rep.items) {
        INFO(it.name);
        CHECK(it.pass);
      }
    }
}

TEST_CASE("e_1 on the arc state of W_0[2] gives m times it") {
  FieldConfig cfg = FieldConfig::exact();
  ModuleRep M = standard_finite(cfg, 2, 0);
  CHECK(M.dim == 1);
  std::vector<Scalar> v{cfg.one()};
  auto w = act(cfg, M, {{GenTok::E, 1}}, v);
  CHECK(w[0] == cfg.loop_weight());
  // identity word
  auto idw = act(cfg, M, {}, v);
  CHECK(idw[0] == cfg.one());
}

TEST_CASE("affine standard dimensions, independent of z") {
  FieldConfig cfg = FieldConfig::exact();
  for (int N = 1; N <= 8; ++N)
    for (int twoJ = N % 2; twoJ <= N; twoJ += 2)
      CHECK(enumerate_affine_link_states(N, twoJ).size() == dim_standard_affine(N, twoJ));
  Scalar z1 = cfg.from_int(3), z2 = cfg.from_int(7);
  CHECK(standard_affine(cfg, 4, 2, z1).dim == standard_affine(cfg, 4, 2, z2).dim);
  CHECK_THROWS(standard_affine(cfg, 3, 1, cfg.zero()));
  CHECK_THROWS(standard_affine(cfg, 3, 2, cfg.one()));  // parity
}

TEST_CASE("W_{0,z}[2]: loop weights and translation") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar z = cfg.from_int(3);
  Scalar w = z + z.inv();
  ModuleRep M = standard_affine(cfg, 2, 0, z);
  REQUIRE(M.dim == 2);
  // sorted bases: index 0 = seam arc v0, index 1 = adjacent arc v1
  CHECK(M.e(0).at(0, 1) == w);  // e_0 v_1 = (z + z^-1) v_0
  CHECK(M.e(1).at(1, 0) == w);  // e_1 v_0 = (z + z^-1) v_1
  CHECK(M.e(1).at(1, 1) == cfg.loop_weight());
  CHECK(M.uMat.at(1, 0) == cfg.one());
  CHECK(M.uMat.at(0, 1) == cfg.one());
  auto rep = verify_module(cfg, M);
  CHECK(rep.all_pass());
}

TEST_CASE("W_{1/2,z}[1]: u acts as z") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar z = cfg.from_int(5);
  ModuleRep M = standard_affine(cfg, 1, 1, z);
  REQUIRE(M.dim == 1);
  CHECK(M.uMat.at(0, 0) == z);
  CHECK(M.uinvMat.at(0, 0) == z.inv());
}

TEST_CASE("W_{1,z}[2]: all-defect module") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar z = cfg.from_int(3);
  ModuleRep M = standard_affine(cfg, 2, 2, z);
  REQUIRE(M.dim == 1);
  CHECK(M.e(0).is_zero());
  CHECK(M.e(1).is_zero());
  Mat u2 = mat_mul(M.uMat, M.uMat);
  CHECK(u2.at(0, 0) == z * z);  // u^N = z^{2j}
}

TEST_CASE("u^N = z^{2j} on W_{j,z}[N]") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar z = cfg.from_int(3);
  for (int N = 1; N <= 5; ++N)
    for (int twoJ = N % 2; twoJ <= N; twoJ += 2) {
      ModuleRep M = standard_affine(cfg, N, twoJ, z);
      auto rep = verify_module(cfg, M);
      for (const auto& it : rep.items) {
        INFO("N=", N, " 2j=", twoJ, " ", it.name);
        CHECK(it.pass);
      }
      Mat uN = mat_pow(M.uMat, N, cfg);
      auto c = mat_as_scalar(uN, cfg);
      REQUIRE(c.has_value());
      CHECK(*c == z.pow(twoJ));
    }
}

TEST_CASE("e_0 = u e_{N-1} u^-1 as matrices") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar z = cfg.from_int(3);
  for (int N = 2; N <= 5; ++N)
    for (int twoJ = N % 2; twoJ <= N; twoJ += 2) {
      ModuleRep M = standard_affine(cfg, N, twoJ, z);
      Mat lhs = M.e(0);
      Mat rhs = mat_mul(mat_mul(M.uMat, M.e(N - 1)), M.uinvMat);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("W_{0,z} vs W_{0,-z}: sign twist on the e-matrices") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar z = cfg.from_int(3);
  ModuleRep A = standard_affine(cfg, 2, 0, z);
  ModuleRep B = standard_affine(cfg, 2, 0, -z);
  // conjugation by diag(1,-1) carries the e-matrices of one to the other
  Mat D(2, 2, cfg);
  D.at(0, 0) = cfg.one();
  D.at(1, 1) = -cfg.one();
  for (int i = 0; i < 2; ++i)
    CHECK(mat_mul(mat_mul(D, A.e(i)), D) == B.e(i));
  // while u is the plain rotation in both (the twist flips its sign),
  // and W_{0,z} equals W_{0,z^-1} on the nose
  CHECK(mat_mul(mat_mul(D, A.uMat), D) == mat_scale(-cfg.one(), B.uMat));
  ModuleRep C = standard_affine(cfg, 2, 0, z.inv());
  CHECK(A.uMat == C.uMat);
  for (int i = 0; i < 2; ++i) CHECK(A.e(i) == C.e(i));
}

TEST_CASE("gram matrices") {
  FieldConfig cfg = FieldConfig::exact();
  Mat g20 = gram_finite(cfg, 2, 0);
  REQUIRE(g20.rows == 1);
  CHECK(g20.at(0, 0) == cfg.loop_weight());
  Mat g21 = gram_finite(cfg, 2, 2);
  REQUIRE(g21.rows == 1);
  CHECK(g21.at(0, 0) == cfg.one());
  // (4, 0): generically nonsingular, modp rank 2 at 3 specializations
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    FieldConfig fp = FieldConfig::modp(2147483629ull, seed);
    CHECK(mat_rank(gram_finite(fp, 4, 0), fp) == 2);
  }
}

TEST_CASE("generic gram rank equals d_j for N <= 8") {
  for (uint64_t seed : {11ull, 22ull, 33ull}) {
    FieldConfig fp = FieldConfig::modp(2147483629ull, seed);
    for (int N = 2; N <= 8; ++N)
      for (int twoJ = N % 2; twoJ <= N; twoJ += 2)
        CHECK(mat_rank(gram_finite(fp, N, twoJ), fp) == (int)dim_standard_finite(N, twoJ));
  }
}

TEST_CASE("simple dimensions at roots of unity") {
  // p = 3, N = 6: L_3 = 1, L_2 = d_2 - L_3 = 4, L_1 = d_1 = 9 (s=0),
  // L_0 = d_0 - L_2 = 1; the function itself cross-checks rank vs recursion
  auto dims = simple_dims_at_root(6, 3);
  REQUIRE(dims.size() == 4);
  CHECK(dims[0] == std::pair<int, int>{0, 1});
  CHECK(dims[1] == std::pair<int, int>{2, 9});
  CHECK(dims[2] == std::pair<int, int>{4, 4});
  CHECK(dims[3] == std::pair<int, int>{6, 1});
  for (int p : {3, 4})
    for (int N = 2; N <= 8; ++N) CHECK_NOTHROW(simple_dims_at_root(N, p));
  // s(j) = 0 standards are simple: p=3, 2j=2 -> rank d_j handled above
}

TEST_CASE("intertwiner finder and quotients") {
  FieldConfig cfg = FieldConfig::exact();
  Scalar z = cfg.from_int(3);
  ModuleRep A = standard_affine(cfg, 3, 1, z);
  auto T = find_intertwiner(cfg, A, A);
  REQUIRE(T.has_value());
  // quotient by nothing keeps the dimension; by everything kills it
  std::vector<std::vector<Scalar>> none;
  CHECK(quotient_module(cfg, A, none).dim == A.dim);
  std::vector<std::vector<Scalar>> all;
  for (int i = 0; i < A.dim; ++i) {
    std::vector<Scalar> v(A.dim, cfg.zero());
    v[i] = cfg.one();
    all.push_back(v);
  }
  CHECK(quotient_module(cfg, A, all).dim == 0);
}
