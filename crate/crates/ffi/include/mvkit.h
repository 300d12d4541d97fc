#ifndef MVKIT_H
#define MVKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MvkitStatus {
  MVKIT_STATUS_OK = 0,
  MVKIT_STATUS_NULL_ARGUMENT = 1,
  MVKIT_STATUS_INVALID_UTF8 = 2,
  MVKIT_STATUS_SYNTAX_ERROR = 3,
  MVKIT_STATUS_UNKNOWN_NAME = 4,
  MVKIT_STATUS_USAGE_ERROR = 5,
  // A mathematical precondition failed (invalid unit, element outside
  // the algebra, unsupported shape, ...).
  MVKIT_STATUS_DOMAIN_ERROR = 6,
  MVKIT_STATUS_VERIFICATION_FAILED = 7,
  MVKIT_STATUS_PANIC = 8,
} MvkitStatus;

// Binary operations on elements given as text.
typedef enum MvkitOp {
  // `x ⊕ y`
  MVKIT_OP_PLUS = 0,
  // `x ⊙ y`
  MVKIT_OP_TIMES = 1,
  MVKIT_OP_JOIN = 2,
  MVKIT_OP_MEET = 3,
  // `x ⊙ ¬y`
  MVKIT_OP_MINUS = 4,
  // `d(x, y)`
  MVKIT_OP_DISTANCE = 5,
} MvkitOp;

// An MV-algebra.
typedef struct MvkitAlgebra MvkitAlgebra;

// A parsed and resolved specification file.
typedef struct MvkitSpec MvkitSpec;

// Knobs for sampled and size-bounded computations.
typedef struct MvkitConfig {
  uint64_t samples;
  uint64_t seed;
  uint64_t cap;
  uint64_t surrogate_depth;
} MvkitConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default configuration: 1000 samples, seed 1, cap 64, surrogate depth 2.
struct MvkitConfig mvkit_config_default(void);

// Message of the last failed call on this thread, or an empty string. The
// pointer stays valid until the next call on the same thread.
const char *mvkit_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void mvkit_string_free(char *s);

// Parses and resolves a specification file.
//
// # Safety
// `text` must be a nul-terminated string and `out` a writable pointer.
enum MvkitStatus mvkit_spec_parse(const char *text,
                                  const struct MvkitConfig *cfg,
                                  struct MvkitSpec **out);

// # Safety
// `spec` must be null or a handle from `mvkit_spec_parse`, freed once.
void mvkit_spec_free(struct MvkitSpec *spec);

// Runs a CLI command and returns its JSON report and exit code (0 ok, 1
// verification failed, 2 error). The status is `Ok` whenever a report was
// produced; the report itself carries command errors.
//
// # Safety
// `spec` may be null; `args` must point to `nargs` nul-terminated strings;
// `cfg` may be null for the defaults; `report` and `exit_code` must be
// writable.
enum MvkitStatus mvkit_run(const struct MvkitSpec *spec,
                           const char *command,
                           const char *const *args,
                           size_t nargs,
                           const struct MvkitConfig *cfg,
                           char **report,
                           int *exit_code);

// Builds an algebra from an expression such as `product(chain(2), chain(3))`
// or a name declared in `spec` (which may be null).
//
// # Safety
// `expr` must be a nul-terminated string and `out` writable.
enum MvkitStatus mvkit_algebra_new(const struct MvkitSpec *spec,
                                   const char *expr,
                                   const struct MvkitConfig *cfg,
                                   struct MvkitAlgebra **out);

// # Safety
// `a` must be null or a handle from `mvkit_algebra_new`, freed once.
void mvkit_algebra_free(struct MvkitAlgebra *a);

// Canonical text of the algebra.
//
// # Safety
// `a` must be a live handle and `out` writable.
enum MvkitStatus mvkit_algebra_describe(const struct MvkitAlgebra *a, char **out);

// Number of elements, or 0 when the carrier is infinite or above the cap.
//
// # Safety
// `a` must be a live handle and `out` writable.
enum MvkitStatus mvkit_algebra_size(const struct MvkitAlgebra *a, uint64_t cap, uint64_t *out);

// Applies `op` to two elements written as literals, e.g. `(1, 1/2)`.
//
// # Safety
// `a` must be a live handle, `x` and `y` nul-terminated strings and `out`
// writable.
enum MvkitStatus mvkit_algebra_op(const struct MvkitAlgebra *a,
                                  enum MvkitOp op,
                                  const char *x,
                                  const char *y,
                                  char **out);

// `¬x`.
//
// # Safety
// `a` must be a live handle, `x` a nul-terminated string and `out` writable.
enum MvkitStatus mvkit_algebra_neg(const struct MvkitAlgebra *a, const char *x, char **out);

// Checks the six axioms, exhaustively on carriers within the cap and on
// seeded samples otherwise. `passed` receives 1 or 0.
//
// # Safety
// `a` must be a live handle, `cfg` null or valid, `passed` writable.
enum MvkitStatus mvkit_algebra_check_axioms(const struct MvkitAlgebra *a,
                                            const struct MvkitConfig *cfg,
                                            int *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MVKIT_H */
