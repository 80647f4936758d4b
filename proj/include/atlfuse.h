/* atlfuse — exact engine for finite and affine Temperley–Lieb fusion.
 *
 * C API over the C++ core: opaque context handle, status codes matching
 * the CLI exit codes, results returned as heap strings (JSON or TSV)
 * released with atlf_free().
 */

#ifndef ATLFUSE_H
#define ATLFUSE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct atlf_ctx atlf_ctx;

typedef enum {
  ATLF_OK = 0,           /* all checks passed / result produced */
  ATLF_FAIL = 1,         /* a verification item failed */
  ATLF_INCONCLUSIVE = 2, /* a bounded computation did not stabilize */
  ATLF_CONFIG_ERROR = 3, /* bad configuration or options */
  ATLF_ERROR = 4         /* internal error */
} atlf_status;

/* Create a context from flat key=value configuration text (may be empty
 * for defaults). Keys: backend (exact|modp|cyclotomic), prime, p, seed,
 * max_n, bound, cache_dir, format (json|tsv), z1..z9 (scalar expressions).
 * On failure returns NULL and, when err_out is non-NULL, stores a message
 * to be released with atlf_free(). */
atlf_ctx* atlf_ctx_new(const char* config_text, char** err_out);
void atlf_ctx_free(atlf_ctx* ctx);

/* Run a verification suite: tl, atl, embeddings, functors, axioms.
 * options is flat key=value text (may be NULL). *out receives the report. */
atlf_status atlf_verify(atlf_ctx* ctx, const char* suite, const char* options, char** out);

/* Run a fusion computation: kind is finite, affine or affine-hecke.
 * Options: n1, j1, n2, j2 (j as 0.5, 1, 3/2, ...), z1, z2 or zrel
 * (scalar expressions in i, q, s, z1), scan, both_orders. */
atlf_status atlf_fuse(atlf_ctx* ctx, const char* kind, const char* options, char** out);

/* Dimension tables; in the cyclotomic backend also the simple dimensions
 * by Gram rank. */
atlf_status atlf_dims(atlf_ctx* ctx, const char* options, char** out);

void atlf_free(char* s);
const char* atlf_version(void);

#ifdef __cplusplus
}
#endif

#endif /* ATLFUSE_H */
