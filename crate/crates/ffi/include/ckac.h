#ifndef CKAC_H
#define CKAC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CkacStatus {
  CKAC_STATUS_OK = 0,
  CKAC_STATUS_NULL_ARGUMENT = 1,
  CKAC_STATUS_INVALID_UTF8 = 2,
  CKAC_STATUS_SYNTAX = 3,
  CKAC_STATUS_INVALID_INPUT = 4,
  CKAC_STATUS_UNSUPPORTED = 5,
  CKAC_STATUS_CAP_EXCEEDED = 6,
  CKAC_STATUS_INTERNAL = 7,
} CkacStatus;

// A pomset automaton together with its communication table.
typedef struct CkacAutomaton CkacAutomaton;

// A parsed expression together with the communication table it was parsed against.
typedef struct CkacExpr CkacExpr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *ckac_last_error(void);

// Parses `text`. `comm_table` holds lines `a b result`; null means every
// pair of actions communicates.
//
// # Safety
// Pointer arguments must be null or valid; strings must be nul-terminated.
enum CkacStatus ckac_expr_parse(const char *text,
                                const char *comm_table,
                                struct CkacExpr **out_expr);

// # Safety
// `expr` must be null or a handle from this library not yet freed.
void ckac_expr_free(struct CkacExpr *expr);

// Prints an expression. Free the result with `ckac_string_free`.
//
// # Safety
// `expr` must be a live handle and `out_text` writable.
enum CkacStatus ckac_expr_to_string(const struct CkacExpr *expr, char **out_text);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void ckac_string_free(char *s);

// Whether the two expressions denote the same pomsets with at most `bound` events.
//
// # Safety
// Handles must be live and `out_equal` writable.
enum CkacStatus ckac_lang_equiv(const struct CkacExpr *x,
                                const struct CkacExpr *y,
                                size_t bound,
                                bool *out_equal);

// Whether the two expressions are step bisimilar, exploring at most `cap`
// states. The communication table of `x` is used.
//
// # Safety
// Handles must be live and `out_bisimilar` writable.
enum CkacStatus ckac_step_bisimilar(const struct CkacExpr *x,
                                    const struct CkacExpr *y,
                                    size_t cap,
                                    bool *out_bisimilar);

// An expression for the closure of `x` under the exchange laws.
//
// # Safety
// `x` must be live and `out_expr` writable.
enum CkacStatus ckac_closure(const struct CkacExpr *x, struct CkacExpr **out_expr);

// Reads an automaton from its JSON form.
//
// # Safety
// Pointer arguments must be null or valid; strings must be nul-terminated.
enum CkacStatus ckac_automaton_from_json(const char *json,
                                         const char *comm_table,
                                         struct CkacAutomaton **out_automaton);

// Whether the automaton accepts the pomset (JSON) from the named state.
// Communication edges in the pomset are merged into single events first.
//
// # Safety
// Pointer arguments must be valid; strings must be nul-terminated.
enum CkacStatus ckac_automaton_accepts(const struct CkacAutomaton *automaton,
                                       const char *state,
                                       const char *pomset_json,
                                       bool *out_accepted);

// # Safety
// `automaton` must be null or a handle from this library not yet freed.
void ckac_automaton_free(struct CkacAutomaton *automaton);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CKAC_H */
