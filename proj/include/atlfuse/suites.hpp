#pragma once

#include <map>
#include <string>

#include "atlfuse/fusion.hpp"

namespace atlf {

/// Flat key=value configuration; [section] headers allowed and ignored
/// for addressing (keys stay global). Command-line --set overrides win.
struct RunConfig {
  std::string backend = "exact";  // exact | modp | cyclotomic
  uint64_t prime = 2147483629ull;
  int cyc_p = 3;
  uint64_t seed = 1;
  int max_n = 0;       // 0 = per-suite default
  int bound = -1;      // affine word-length bound; -1 = default per size
  std::string cache_dir;
  std::string format = "json";  // json | tsv
  std::map<std::string, std::string> zbind;  // z name -> scalar expression

  static RunConfig parse_text(const std::string& text);
  void apply(const std::string& key, const std::string& value);
  FieldConfig make_field() const;
  std::string canonical() const;
};

struct SuiteResult {
  int exit_code = 0;  // 0 pass, 1 failure, 2 inconclusive, 3 config error
  std::string output;
};

SuiteResult run_verify(const RunConfig& rc, const std::string& suite,
                       const std::map<std::string, std::string>& opts);
SuiteResult run_fuse(const RunConfig& rc, const std::string& kind,
                     const std::map<std::string, std::string>& opts);
SuiteResult run_dims(const RunConfig& rc, const std::map<std::string, std::string>& opts);

/// Disk-cached standard module constructors (JSON documents keyed by a
/// content hash of operation, parameters and backend config).
ModuleRep cached_standard_finite(const FieldConfig& cfg, const RunConfig& rc, int N, int twoJ);
ModuleRep cached_standard_affine(const FieldConfig& cfg, const RunConfig& rc, int N, int twoJ,
                                 const Scalar& z);

std::string version_string();

}  // namespace atlf
