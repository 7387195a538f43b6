#ifndef PRENASH_H
#define PRENASH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum PrenashStatus {
  PRENASH_STATUS_OK = 0,
  PRENASH_STATUS_NULL_POINTER = 1,
  PRENASH_STATUS_INVALID_UTF8 = 2,
  PRENASH_STATUS_PARSE_ERROR = 3,
  PRENASH_STATUS_SHAPE_ERROR = 4,
  PRENASH_STATUS_VALUE_ERROR = 5,
  PRENASH_STATUS_INVALID_GAME = 6,
  PRENASH_STATUS_INVALID_DISTRIBUTION = 7,
  PRENASH_STATUS_DIMENSION_MISMATCH = 8,
  PRENASH_STATUS_INDEX_OUT_OF_RANGE = 9,
  PRENASH_STATUS_NEGATIVE_EPSILON = 10,
  PRENASH_STATUS_EMPTY_SUPPORT = 11,
  PRENASH_STATUS_PARAMETER_OUT_OF_RANGE = 12,
  PRENASH_STATUS_RESOLUTION_ZERO = 13,
  PRENASH_STATUS_BUDGET_EXCEEDED = 14,
  PRENASH_STATUS_NO_PRE_EQUILIBRIUM_FOUND = 15,
  PRENASH_STATUS_NOT_SINGLE_PLAYER = 16,
  PRENASH_STATUS_NOT_TWO_PLAYER = 17,
  PRENASH_STATUS_IO_ERROR = 18,
  PRENASH_STATUS_PANIC = 99,
} PrenashStatus;

/**
 * Opaque game handle; exact rational payoffs.
 */
typedef struct PrenashGame PrenashGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a game document (same schema as game files). On success `*out`
 * receives a handle to release with [`prenash_game_free`].
 */
enum PrenashStatus prenash_game_from_json(const char *json, struct PrenashGame **out);

/**
 * Releases a game handle. Null is ignored.
 */
void prenash_game_free(struct PrenashGame *game);

/**
 * Number of players, or 0 for a null handle.
 */
size_t prenash_game_num_players(const struct PrenashGame *game);

/**
 * Number of pure strategies of `player`, or 0 if the handle is null or the
 * player does not exist.
 */
size_t prenash_game_num_strategies(const struct PrenashGame *game, size_t player);

/**
 * Runs the refinement loop and writes the JSON report to `*out_json`.
 * Non-convergence is not an error: inspect `final.converged` in the report.
 */
enum PrenashStatus prenash_solve(const struct PrenashGame *game,
                                 const char *eps,
                                 uint32_t m0,
                                 uint32_t refine_factor,
                                 uint32_t max_stages,
                                 char **out_json);

/**
 * Gain table and root label at a profile given as a JSON array of arrays.
 */
enum PrenashStatus prenash_eval(const struct PrenashGame *game,
                                const char *profile_json,
                                char **out_json);

/**
 * Judges a profile against `eps`. `*out_equilibrium` receives the verdict;
 * `out_json` may be null when the evidence is not wanted.
 */
enum PrenashStatus prenash_verify(const struct PrenashGame *game,
                                  const char *profile_json,
                                  const char *eps,
                                  bool *out_equilibrium,
                                  char **out_json);

/**
 * Releases a string produced by this library. Null is ignored.
 */
void prenash_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *prenash_last_error(void);

/**
 * Library version, a static string.
 */
const char *prenash_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRENASH_H */
