// Command-line front end for the atlfuse shared library. Talks to the
// engine exclusively through the C API in atlfuse.h.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "atlfuse.h"

namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> sets;
  std::string backend, format, cache_dir;
  uint64_t prime = 0, seed = 0;
  int cyc_p = 0, max_n = 0, bound = 0;

  std::string config_text() const {
    std::ostringstream os;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw CLI::ValidationError("--config", "cannot open " + config_file);
      os << in.rdbuf() << "\n";
    }
    if (!backend.empty()) os << "backend=" << backend << "\n";
    if (prime) os << "prime=" << prime << "\n";
    if (cyc_p) os << "p=" << cyc_p << "\n";
    if (seed) os << "seed=" << seed << "\n";
    if (max_n) os << "max_n=" << max_n << "\n";
    if (bound) os << "bound=" << bound << "\n";
    if (!format.empty()) os << "format=" << format << "\n";
    if (!cache_dir.empty()) os << "cache_dir=" << cache_dir << "\n";
    for (const auto& kv : sets) os << kv << "\n";
    return os.str();
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_file, "configuration file (flat key=value)");
  app->add_option("--set", c.sets, "override a configuration key, key=value")->take_all();
  app->add_option("--backend", c.backend, "exact | modp | cyclotomic");
  app->add_option("--prime", c.prime, "modp prime (1 mod 4)");
  app->add_option("--cyclotomic-p", c.cyc_p, "cyclotomic p for q = exp(i pi/p)");
  app->add_option("--seed", c.seed, "seed for modp specializations");
  app->add_option("--max-n", c.max_n, "size range bound for suites/tables");
  app->add_option("--bound", c.bound, "affine word-length bound L");
  app->add_option("--format", c.format, "json | tsv");
  app->add_option("--cache-dir", c.cache_dir, "module cache directory");
}

int finish(atlf_status st, char* out) {
  if (out) {
    std::fputs(out, stdout);
    atlf_free(out);
  }
  return (int)st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"atlfuse: exact Temperley-Lieb and affine Temperley-Lieb fusion engine"};
  app.require_subcommand(1);

  Common c;
  std::string suite, kind;
  std::string j1, j2, z1, z2, zrel;
  int n1 = 0, n2 = 0;
  bool scan = false, both = false;
  std::vector<std::string> pairs;

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "tl | atl | embeddings | functors | axioms")->required();
  add_common(verify, c);
  bool pentagon = false, hexagon = false;
  verify->add_flag("--pentagon", pentagon, "axioms: include pentagon checks");
  verify->add_flag("--hexagon", hexagon, "axioms: include hexagon checks");
  int max_site = 0;
  verify->add_option("--max-site", max_site, "axioms: largest module size per slot");
  verify->add_option("--pairs", pairs, "embeddings: restrict to size pairs like 1,2")->take_all();

  auto* fuse = app.add_subcommand("fuse", "compute a fusion product");
  fuse->add_option("kind", kind, "finite | affine | affine-hecke")->required();
  add_common(fuse, c);
  fuse->add_option("--j1", j1, "first spin (0.5, 1, 3/2, ...)")->required();
  fuse->add_option("--n1", n1, "first size")->required();
  fuse->add_option("--j2", j2, "second spin")->required();
  fuse->add_option("--n2", n2, "second size")->required();
  fuse->add_option("--z1", z1, "first z (scalar expression)");
  fuse->add_option("--z2", z2, "second z (scalar expression)");
  fuse->add_option("--zrel", zrel, "second z as an expression in z1, e.g. '-q*z1'");
  fuse->add_flag("--scan", scan, "sweep the resonance candidate set for z2");
  fuse->add_flag("--both-orders", both, "also compute the reversed order");

  auto* dims = app.add_subcommand("dims", "dimension tables");
  add_common(dims, c);

  CLI11_PARSE(app, argc, argv);

  char* err = nullptr;
  atlf_ctx* ctx = atlf_ctx_new(c.config_text().c_str(), &err);
  if (!ctx) {
    std::fprintf(stderr, "configuration error: %s\n", err ? err : "unknown");
    atlf_free(err);
    return (int)ATLF_CONFIG_ERROR;
  }

  int rc = 0;
  char* out = nullptr;
  if (app.got_subcommand(verify)) {
    std::ostringstream opts;
    if (pentagon) opts << "pentagon=1\n";
    if (hexagon) opts << "hexagon=1\n";
    if (max_site) opts << "max_site=" << max_site << "\n";
    atlf_status st = atlf_verify(ctx, suite.c_str(), opts.str().c_str(), &out);
    rc = finish(st, out);
  } else if (app.got_subcommand(fuse)) {
    std::ostringstream opts;
    opts << "n1=" << n1 << "\nn2=" << n2 << "\nj1=" << j1 << "\nj2=" << j2 << "\n";
    if (!z1.empty()) opts << "z1=" << z1 << "\n";
    if (!z2.empty()) opts << "z2=" << z2 << "\n";
    if (!zrel.empty()) opts << "zrel=" << zrel << "\n";
    if (scan) opts << "scan=1\n";
    if (both) opts << "both_orders=1\n";
    atlf_status st = atlf_fuse(ctx, kind.c_str(), opts.str().c_str(), &out);
    rc = finish(st, out);
  } else if (app.got_subcommand(dims)) {
    atlf_status st = atlf_dims(ctx, "", &out);
    rc = finish(st, out);
  }
  atlf_ctx_free(ctx);
  return rc;
}
