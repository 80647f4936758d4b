#include "atlfuse.h"

#include <cstring>
#include <functional>
#include <string>

#include "atlfuse/suites.hpp"

struct atlf_ctx {
  atlf::RunConfig rc;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = (char*)malloc(s.size() + 1);
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::map<std::string, std::string> parse_options(const char* options) {
  std::map<std::string, std::string> out;
  if (!options) return out;
  std::string text(options);
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      out[line] = "";
    else
      out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

atlf_status run_guarded(atlf_ctx* ctx, char** out,
                        const std::function<atlf::SuiteResult(atlf::RunConfig&)>& fn) {
  if (!ctx) return ATLF_CONFIG_ERROR;
  try {
    atlf::SuiteResult r = fn(ctx->rc);
    if (out) *out = dup_string(r.output);
    switch (r.exit_code) {
      case 0:
        return ATLF_OK;
      case 1:
        return ATLF_FAIL;
      case 2:
        return ATLF_INCONCLUSIVE;
      case 3:
        return ATLF_CONFIG_ERROR;
      default:
        return ATLF_ERROR;
    }
  } catch (const atlf::ConfigError& e) {
    if (out) *out = dup_string(std::string("config error: ") + e.what() + "\n");
    return ATLF_CONFIG_ERROR;
  } catch (const atlf::TruncationError& e) {
    if (out) *out = dup_string(std::string("inconclusive: ") + e.what() + "\n");
    return ATLF_INCONCLUSIVE;
  } catch (const std::exception& e) {
    if (out) *out = dup_string(std::string("error: ") + e.what() + "\n");
    return ATLF_ERROR;
  }
}

}  // namespace

extern "C" {

atlf_ctx* atlf_ctx_new(const char* config_text, char** err_out) {
  try {
    auto* ctx = new atlf_ctx{};
    ctx->rc = atlf::RunConfig::parse_text(config_text ? config_text : "");
    ctx->rc.make_field();  // validate backend parameters eagerly
    return ctx;
  } catch (const std::exception& e) {
    if (err_out) *err_out = dup_string(e.what());
    return nullptr;
  }
}

void atlf_ctx_free(atlf_ctx* ctx) { delete ctx; }

atlf_status atlf_verify(atlf_ctx* ctx, const char* suite, const char* options, char** out) {
  std::string suite_s = suite ? suite : "";
  auto opts = parse_options(options);
  return run_guarded(ctx, out,
                     [&](atlf::RunConfig& rc) { return atlf::run_verify(rc, suite_s, opts); });
}

atlf_status atlf_fuse(atlf_ctx* ctx, const char* kind, const char* options, char** out) {
  std::string kind_s = kind ? kind : "";
  auto opts = parse_options(options);
  return run_guarded(ctx, out,
                     [&](atlf::RunConfig& rc) { return atlf::run_fuse(rc, kind_s, opts); });
}

atlf_status atlf_dims(atlf_ctx* ctx, const char* options, char** out) {
  auto opts = parse_options(options);
  return run_guarded(ctx, out,
                     [&](atlf::RunConfig& rc) { return atlf::run_dims(rc, opts); });
}

void atlf_free(char* s) { free(s); }

const char* atlf_version(void) {
  static std::string v = atlf::version_string();
  return v.c_str();
}

}  // extern "C"
