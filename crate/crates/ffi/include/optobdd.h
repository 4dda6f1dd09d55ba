#ifndef OPTOBDD_H
#define OPTOBDD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define OPTOBDD_KIND_OBDD 0

#define OPTOBDD_KIND_ZDD 1

#define OPTOBDD_MODE_CLASSICAL 0

#define OPTOBDD_MODE_QSIM 1

typedef enum OptobddStatus {
  OPTOBDD_STATUS_OK = 0,
  OPTOBDD_STATUS_NULL_POINTER = 1,
  OPTOBDD_STATUS_INVALID_ARGUMENT = 2,
  OPTOBDD_STATUS_PARSE = 3,
  OPTOBDD_STATUS_TOO_LARGE = 4,
  OPTOBDD_STATUS_SOLVER = 5,
  OPTOBDD_STATUS_BUFFER_TOO_SMALL = 6,
  OPTOBDD_STATUS_PANIC = 7,
} OptobddStatus;

// A reduced OBDD or ZDD for a fixed order.
typedef struct OptobddDiagram OptobddDiagram;

// A Boolean function given by its truth table.
typedef struct OptobddFunction OptobddFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static nul-terminated string.
const char *optobdd_version(void);

// Message of the most recent failure on this thread, or NULL. Valid until
// the next failing call on the same thread.
const char *optobdd_last_error(void);

// Parse an expression over `x1..xn` (`~ & ^ |`, parentheses, `0`, `1`).
//
// # Safety
// `expr` must be null or a nul-terminated string; `out` must be null or
// writable.
enum OptobddStatus optobdd_function_from_expr(const char *expr,
                                              size_t n,
                                              struct OptobddFunction **out);

// Read the text format: an `n=<n>` line followed by `2^n` bits, `x1` least
// significant.
//
// # Safety
// As [`optobdd_function_from_expr`].
enum OptobddStatus optobdd_function_from_text(const char *text, struct OptobddFunction **out);

// Uniformly random function, reproducible from `seed`.
//
// # Safety
// `out` must be null or writable.
enum OptobddStatus optobdd_function_random(size_t n, uint64_t seed, struct OptobddFunction **out);

// Number of variables, 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t optobdd_function_num_vars(const struct OptobddFunction *f);

// Value at the point whose bit `i` (from the least significant) is `x_{i+1}`.
//
// # Safety
// `f` must be null or a live handle; `out` null or writable.
enum OptobddStatus optobdd_function_evaluate(const struct OptobddFunction *f,
                                             uint64_t point,
                                             bool *out);

// # Safety
// `f` must be null or a handle not yet freed.
void optobdd_function_free(struct OptobddFunction *f);

// Exact minimum by the subset sweep. Writes the optimal order (root first,
// 1-based) into `order_out[0..n]` and its nonterminal count into `cost_out`.
//
// # Safety
// `f` must be null or a live handle; `order_out` must hold `order_cap`
// elements; `cost_out` null or writable.
enum OptobddStatus optobdd_minimize_fs(const struct OptobddFunction *f,
                                       uint32_t kind,
                                       size_t *order_out,
                                       size_t order_cap,
                                       uint32_t *cost_out);

// Divide-and-conquer minimum. `alphas` holds `levels` rows of `k` split
// fractions, innermost level first; `levels == 1` is the single-level
// driver. `query_bound_out` may be NULL; in `OPTOBDD_MODE_QSIM` it receives
// the summed nominal query bound.
//
// # Safety
// `alphas` must hold `levels * k` values; other pointers as in
// [`optobdd_minimize_fs`].
enum OptobddStatus optobdd_minimize_dnc(const struct OptobddFunction *f,
                                        uint32_t kind,
                                        const double *alphas,
                                        size_t k,
                                        size_t levels,
                                        uint32_t mode,
                                        size_t *order_out,
                                        size_t order_cap,
                                        uint32_t *cost_out,
                                        uint64_t *query_bound_out);

// Build the reduced diagram for `read_order` (root first, 1-based).
//
// # Safety
// `f` null or live; `read_order` must hold `len` values; `out` null or
// writable.
enum OptobddStatus optobdd_diagram_build(const struct OptobddFunction *f,
                                         const size_t *read_order,
                                         size_t len,
                                         uint32_t kind,
                                         struct OptobddDiagram **out);

// Nonterminal node count, 0 for a null handle.
//
// # Safety
// `d` must be null or a live handle.
size_t optobdd_diagram_nonterminals(const struct OptobddDiagram *d);

// Nonterminals plus reachable terminals, 0 for a null handle.
//
// # Safety
// `d` must be null or a live handle.
size_t optobdd_diagram_total_size(const struct OptobddDiagram *d);

// Number of nodes labelled with variable `var` (1-based).
//
// # Safety
// `d` null or live; `out` null or writable.
enum OptobddStatus optobdd_diagram_width(const struct OptobddDiagram *d, size_t var, size_t *out);

// Graphviz rendering; release the string with [`optobdd_string_free`].
//
// # Safety
// `d` null or live; `out` null or writable.
enum OptobddStatus optobdd_diagram_to_dot(const struct OptobddDiagram *d, char **out);

// # Safety
// `d` must be null or a handle not yet freed.
void optobdd_diagram_free(struct OptobddDiagram *d);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void optobdd_string_free(char *s);

// Balanced split fractions for `k` splits over a `gamma^n` subroutine.
// Writes `k` values into `alphas_out` and the resulting base into
// `beta_out`.
//
// # Safety
// `alphas_out` must hold `alphas_cap` values; `beta_out` null or writable.
enum OptobddStatus optobdd_solve_params(size_t k,
                                        double gamma,
                                        double *alphas_out,
                                        size_t alphas_cap,
                                        double *beta_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPTOBDD_H */
