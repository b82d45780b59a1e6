#ifndef VALENCE_H
#define VALENCE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes; the first four match the exit codes of the `valence` CLI.
 */
typedef enum VlcStatus {
  VLC_STATUS_OK = 0,
  VLC_STATUS_ERROR = 1,
  /**
   * A decided negative verdict: infinite case or refused conversion.
   */
  VLC_STATUS_REFUSED = 2,
  /**
   * Unknown gate verdict or a budget-limited answer.
   */
  VLC_STATUS_UNKNOWN = 3,
  VLC_STATUS_NULL_POINTER = 4,
  VLC_STATUS_INVALID_UTF8 = 5,
  VLC_STATUS_PANIC = 6,
} VlcStatus;

typedef struct VlcAutomaton VlcAutomaton;

typedef struct VlcGrammar VlcGrammar;

typedef struct VlcMonoid VlcMonoid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the last failed call on this thread; empty after a
 * successful call. Owned by the library.
 */
const char *vlc_last_error(void);

/**
 * The library version as a static string.
 */
const char *vlc_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void vlc_string_free(char *s);

/**
 * Parses a monoid description.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum VlcStatus vlc_monoid_from_json(const char *json, struct VlcMonoid **out);

/**
 * # Safety
 * `m` must be null or a handle from [`vlc_monoid_from_json`], freed once.
 */
void vlc_monoid_free(struct VlcMonoid *m);

/**
 * Multiplies two element literals and writes the product literal.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`vlc_string_free`].
 */
enum VlcStatus vlc_monoid_mul(const struct VlcMonoid *m, const char *a, const char *b, char **out);

/**
 * Dichotomy verdict; `Refused` signals the infinite-chain case.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`vlc_string_free`].
 */
enum VlcStatus vlc_monoid_classify(const struct VlcMonoid *m, char **out);

/**
 * Finiteness gate for the submonoid generated by a generator map such as
 * `{"x1": [1], "x2": [-1]}`. `Ok` for finite, `Refused` for infinite,
 * `Unknown` otherwise; the verdict JSON is written in every case.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`vlc_string_free`].
 */
enum VlcStatus vlc_gate(const struct VlcMonoid *m,
                        const char *generators,
                        uint64_t norm_cap,
                        char **out);

/**
 * Parses a valence automaton; the monoid must be given inline.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum VlcStatus vlc_automaton_from_json(const char *json, struct VlcAutomaton **out);

/**
 * # Safety
 * `a` must be null or an automaton handle, freed once.
 */
void vlc_automaton_free(struct VlcAutomaton *a);

/**
 * # Safety
 * Pointers must be valid; `out` receives a string for [`vlc_string_free`].
 */
enum VlcStatus vlc_automaton_to_json(const struct VlcAutomaton *a, char **out);

/**
 * Membership of `word`. Returns `Unknown` (with `accepted` false) when the
 * norm cap cut the search short.
 *
 * # Safety
 * Pointers must be valid.
 */
enum VlcStatus vlc_automaton_accepts(const struct VlcAutomaton *a,
                                     const char *word,
                                     uint64_t norm_cap,
                                     bool *accepted);

/**
 * Accepted words up to `maxlen` as a JSON language sample.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`vlc_string_free`].
 */
enum VlcStatus vlc_automaton_enumerate(const struct VlcAutomaton *a,
                                       uintptr_t maxlen,
                                       uint64_t norm_cap,
                                       char **out);

/**
 * Converts to an NFA. On refusal `out` is left untouched, the status is
 * `Refused` or `Unknown`, and [`vlc_last_error`] holds the gate verdict
 * as JSON.
 *
 * # Safety
 * Pointers must be valid; `out` receives a handle for
 * [`vlc_automaton_free`].
 */
enum VlcStatus vlc_automaton_to_nfa(const struct VlcAutomaton *a,
                                    uint64_t norm_cap,
                                    struct VlcAutomaton **out);

/**
 * Parses a valence grammar; the monoid must be given inline.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum VlcStatus vlc_grammar_from_json(const char *json, struct VlcGrammar **out);

/**
 * # Safety
 * `g` must be null or a grammar handle, freed once.
 */
void vlc_grammar_free(struct VlcGrammar *g);

/**
 * # Safety
 * Pointers must be valid; `out` receives a string for [`vlc_string_free`].
 */
enum VlcStatus vlc_grammar_to_json(const struct VlcGrammar *g, char **out);

/**
 * Generated words up to `maxlen` as a JSON language sample.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string for [`vlc_string_free`].
 */
enum VlcStatus vlc_grammar_enumerate(const struct VlcGrammar *g,
                                     uintptr_t maxlen,
                                     uint64_t norm_cap,
                                     char **out);

/**
 * Normalizes and converts to a context-free grammar, with refusals
 * reported as in [`vlc_automaton_to_nfa`].
 *
 * # Safety
 * Pointers must be valid; `out` receives a handle for [`vlc_grammar_free`].
 */
enum VlcStatus vlc_grammar_to_cfg(const struct VlcGrammar *g,
                                  uint64_t norm_cap,
                                  struct VlcGrammar **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VALENCE_H */
