/* C interface to lsmcd: community detection in the latent space model.
 *
 * Maintained by hand to match crates/ffi/src/lib.rs; a cbindgen.toml is
 * provided for cross-checking the declarations when cbindgen is available
 * (`cbindgen --crate lsmcd-ffi --output lsmcd.gen.h` and diff).
 *
 * Conventions:
 *  - Every fallible function returns LsmcdStatus; LSMCD_OK is 0.
 *  - Out-parameters are written only on LSMCD_OK.
 *  - Handles own their data; release with the matching *_free. Freeing
 *    NULL is a no-op.
 *  - Matrix buffers are row-major, length n*n, caller-allocated.
 *  - lsmcd_last_error_message retrieves a thread-local description of the
 *    most recent failure on the calling thread.
 *  - All functions are thread-safe; handles must not be freed while another
 *    thread is reading them.
 */

#ifndef LSMCD_H
#define LSMCD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum LsmcdStatus {
  LSMCD_OK = 0,
  LSMCD_ERR_NULL_POINTER = 1,
  LSMCD_ERR_INVALID_PARAMETER = 2,
  LSMCD_ERR_INVALID_INPUT = 3,
  LSMCD_ERR_DIMENSION_MISMATCH = 4,
  LSMCD_ERR_RESOURCE_LIMIT = 5,
  LSMCD_ERR_NUMERICAL = 6,
  LSMCD_ERR_IO = 7,
  LSMCD_ERR_BUFFER_TOO_SMALL = 8,
  LSMCD_ERR_PANIC = 9
} LsmcdStatus;

typedef enum LsmcdVerdict {
  LSMCD_VERDICT_HOLDS = 0,
  LSMCD_VERDICT_FAILS = 1,
  LSMCD_VERDICT_NOT_APPLICABLE = 2,
  LSMCD_VERDICT_PRECONDITION_VIOLATED = 3
} LsmcdVerdict;

/* Opaque handles. */
typedef struct LsmcdInstance LsmcdInstance;
typedef struct LsmcdSolution LsmcdSolution;

typedef struct LsmcdSolveSummary {
  double objective;
  size_t iterations;
  double primal_residual;
  double dual_residual;
  int converged;  /* 0/1 */
  int exact_flag; /* 0/1: solution numerically rank one with +-1 entries */
} LsmcdSolveSummary;

typedef struct LsmcdCertificateSummary {
  double lambda_min;
  double lambda_2;
  int psd;             /* 0/1 */
  int unique;          /* 0/1: certificate proves unique exact recovery */
  int gap_identity_ok; /* 0/1 */
} LsmcdCertificateSummary;

typedef struct LsmcdMoments {
  double p;
  double p_prime;
  double q;
  double q_prime;
  double r;
  double s0;
  double s1;
} LsmcdMoments;

typedef struct LsmcdRegimeSummary {
  LsmcdVerdict impossible;
  LsmcdVerdict mle_recoverable;
  LsmcdVerdict sdp_recoverable;
  int precondition_ok; /* 0/1: p(1+q) <= 1 */
} LsmcdRegimeSummary;

/* Version string of the library, static storage, never freed. */
const char *lsmcd_version(void);

/* Copy the calling thread's most recent error message into buf (NUL
 * terminated, truncated to len bytes). Returns the full message length in
 * bytes excluding the terminator; buf may be NULL to query the length. */
size_t lsmcd_last_error_message(char *buf, size_t len);

/* --- Synthetic instances ------------------------------------------------ */

/* Generate an n-node instance (n even, >= 4) with latent dimension d, mean
 * separation mu_norm, and noise sigma. On success *out owns the instance. */
LsmcdStatus lsmcd_instance_generate(size_t n, size_t d, double mu_norm,
                                    double sigma, uint64_t seed,
                                    LsmcdInstance **out);
void lsmcd_instance_free(LsmcdInstance *instance);

LsmcdStatus lsmcd_instance_n(const LsmcdInstance *instance, size_t *out);
LsmcdStatus lsmcd_instance_edge_count(const LsmcdInstance *instance,
                                      size_t *out);
/* buf: n*n bytes, row-major 0/1. */
LsmcdStatus lsmcd_instance_adjacency(const LsmcdInstance *instance,
                                     uint8_t *buf, size_t len);
/* buf: n entries of +-1. */
LsmcdStatus lsmcd_instance_labels(const LsmcdInstance *instance, int8_t *buf,
                                  size_t len);

/* --- SDP solver --------------------------------------------------------- */

/* Solve the SDP relaxation of the community MLE on a row-major 0/1
 * adjacency of order n. max_iters = 0 and tol <= 0 select the defaults
 * (5000 iterations, 1e-6). On success *out owns the solution. */
LsmcdStatus lsmcd_solve(const uint8_t *adjacency, size_t n, size_t max_iters,
                        double tol, LsmcdSolution **out);
void lsmcd_solution_free(LsmcdSolution *solution);

LsmcdStatus lsmcd_solution_summary(const LsmcdSolution *solution,
                                   LsmcdSolveSummary *out);
/* buf: n entries; the rounded +-1 labels (first entry +1). */
LsmcdStatus lsmcd_solution_labels(const LsmcdSolution *solution, int8_t *buf,
                                  size_t len);
/* buf: n*n doubles, row-major; the final PSD iterate Y. */
LsmcdStatus lsmcd_solution_matrix(const LsmcdSolution *solution, double *buf,
                                  size_t len);

/* --- Dual certificate --------------------------------------------------- */

/* Certify exact recovery of the +-1 balanced labeling on the given graph.
 * eig_tol <= 0 selects the default 1e-8 * n. */
LsmcdStatus lsmcd_certify(const uint8_t *adjacency, const int8_t *labels,
                          size_t n, double eig_tol,
                          LsmcdCertificateSummary *out);

/* --- Moments and regimes ------------------------------------------------ */

/* The seven closed-form Gaussian moments for the squared-exponential
 * kernel at latent dimension d, separation mu_norm, noise sigma. */
LsmcdStatus lsmcd_moments_closed_form(size_t d, double mu_norm, double sigma,
                                      LsmcdMoments *out);

/* Classify the parameter point (n, d, mu_norm, sigma) with default theorem
 * constants. */
LsmcdStatus lsmcd_classify(size_t n, size_t d, double mu_norm, double sigma,
                           LsmcdRegimeSummary *out);

/* --- Exact MLE ---------------------------------------------------------- */

/* Exhaustive maximum-likelihood search (n <= 24). labels receives the
 * lexicographically first optimum (n entries). balanced_only != 0 restricts
 * the search to balanced labelings (n must then be even). */
LsmcdStatus lsmcd_mle(const uint8_t *adjacency, size_t n, int balanced_only,
                      int8_t *labels, int64_t *objective,
                      uint64_t *num_optima);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LSMCD_H */
