#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "atlfuse.h"

namespace {
std::string take(char* s) {
  std::string out = s ? s : "";
  atlf_free(s);
  return out;
}
}  // namespace

TEST_CASE("context creation and config errors") {
  char* err = nullptr;
  atlf_ctx* ctx = atlf_ctx_new("", &err);
  REQUIRE(ctx != nullptr);
  atlf_ctx_free(ctx);

  ctx = atlf_ctx_new("backend=bogus\n", &err);
  CHECK(ctx == nullptr);
  std::string msg = take(err);
  CHECK(msg.find("backend") != std::string::npos);

  ctx = atlf_ctx_new("backend=modp\nprime=2147483647\n", &err);  // 3 mod 4
  CHECK(ctx == nullptr);
  take(err);
}

TEST_CASE("verify suite through the C API") {
  atlf_ctx* ctx = atlf_ctx_new("", nullptr);
  REQUIRE(ctx);
  char* out = nullptr;
  atlf_status st = atlf_verify(ctx, "tl", "max_n=4\n", &out);
  std::string report = take(out);
  CHECK(st == ATLF_OK);
  CHECK(report.find("\"pass\": true") != std::string::npos);
  st = atlf_verify(ctx, "nope", "", &out);
  take(out);
  CHECK(st == ATLF_CONFIG_ERROR);
  atlf_ctx_free(ctx);
}

TEST_CASE("fusion records through the C API") {
  atlf_ctx* ctx = atlf_ctx_new("", nullptr);
  REQUIRE(ctx);
  char* out = nullptr;
  atlf_status st =
      atlf_fuse(ctx, "affine", "n1=1\nj1=0.5\nn2=1\nj2=0.5\nzrel=-q*z1\nboth_orders=1\n", &out);
  std::string rec = take(out);
  CHECK(st == ATLF_OK);
  CHECK(rec.find("\"dim\": 1") != std::string::npos);   // forward
  CHECK(rec.find("\"dim\": 0") != std::string::npos);   // reverse
  CHECK(rec.find("\"two_j\": 2") != std::string::npos);
  st = atlf_fuse(ctx, "finite", "n1=1\nj1=0.5\nn2=1\nj2=0.5\n", &out);
  rec = take(out);
  CHECK(st == ATLF_OK);
  CHECK(rec.find("decomposition") != std::string::npos);
  // missing options are a config error
  st = atlf_fuse(ctx, "affine", "n1=1\n", &out);
  take(out);
  CHECK(st == ATLF_CONFIG_ERROR);
  atlf_ctx_free(ctx);
}

TEST_CASE("dims through the C API, including TSV format") {
  atlf_ctx* ctx = atlf_ctx_new("max_n=4\nformat=tsv\n", nullptr);
  REQUIRE(ctx);
  char* out = nullptr;
  atlf_status st = atlf_dims(ctx, "", &out);
  std::string table = take(out);
  CHECK(st == ATLF_OK);
  CHECK(table.find("n\tdim_tl") != std::string::npos);
  CHECK(table.find("14") != std::string::npos);  // catalan(4)
  atlf_ctx_free(ctx);
  CHECK(std::string(atlf_version()).find("atlfuse") != std::string::npos);
}

TEST_CASE("reproducibility: identical config gives identical bytes") {
  const char* cfg = "backend=modp\nseed=42\n";
  atlf_ctx* a = atlf_ctx_new(cfg, nullptr);
  atlf_ctx* b = atlf_ctx_new(cfg, nullptr);
  REQUIRE(a);
  REQUIRE(b);
  char* oa = nullptr;
  char* ob = nullptr;
  atlf_fuse(a, "affine", "n1=1\nj1=0.5\nn2=1\nj2=0.5\nscan=1\n", &oa);
  atlf_fuse(b, "affine", "n1=1\nj1=0.5\nn2=1\nj2=0.5\nscan=1\n", &ob);
  std::string sa = take(oa), sb = take(ob);
  CHECK(sa == sb);
  CHECK(!sa.empty());
  atlf_ctx_free(a);
  atlf_ctx_free(b);
}
