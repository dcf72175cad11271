#ifndef MOBIUS_H
#define MOBIUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum MobiusStatus {
  MOBIUS_OK = 0,
  MOBIUS_ERR_NULL_POINTER = 1,
  /**
   * Field parameters rejected (not prime, reducible, too large, q too small).
   */
  MOBIUS_ERR_BAD_PARAMS = 2,
  MOBIUS_ERR_KEY_MISMATCH = 3,
  MOBIUS_ERR_KEYSOURCE_EXHAUSTED = 4,
  MOBIUS_ERR_INVALID_CONTAINER = 5,
  MOBIUS_ERR_PANIC = 6,
  MOBIUS_ERR_OTHER = 7,
} MobiusStatus;

/**
 * An owned byte buffer produced by the library.
 */
typedef struct MobiusBuffer MobiusBuffer;

/**
 * A Möbius plane over GF(p^n) with default polynomials.
 */
typedef struct MobiusPlane MobiusPlane;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates the plane over GF(p^n).
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum MobiusStatus mobius_plane_new(uint64_t p, uint32_t n, struct MobiusPlane **out);

/**
 * # Safety
 * `plane` must come from `mobius_plane_new` and not be used afterwards.
 */
void mobius_plane_free(struct MobiusPlane *plane);

/**
 * Order q of the base field, or 0 for a null handle.
 *
 * # Safety
 * `plane` must be null or a live handle.
 */
uint64_t mobius_plane_q(const struct MobiusPlane *plane);

/**
 * Encrypts `len` bytes into a MOBC container using the seeded point stream.
 *
 * # Safety
 * `plane` must be live, `data` valid for `len` bytes, `out` valid for a write.
 */
enum MobiusStatus mobius_encrypt_seeded(const struct MobiusPlane *plane,
                                        const uint8_t *data,
                                        size_t len,
                                        uint64_t seed,
                                        struct MobiusBuffer **out);

/**
 * Decrypts a stream-mode container; field parameters come from its header.
 *
 * # Safety
 * `container` valid for `len` bytes, `out` valid for a write.
 */
enum MobiusStatus mobius_decrypt_seeded(const uint8_t *container,
                                        size_t len,
                                        uint64_t seed,
                                        struct MobiusBuffer **out);

/**
 * Writes a MOBS keystream file of `count` seeded points.
 *
 * # Safety
 * `plane` must be live and `out` valid for a write.
 */
enum MobiusStatus mobius_keystream_generate(const struct MobiusPlane *plane,
                                            uint64_t seed,
                                            size_t count,
                                            struct MobiusBuffer **out);

/**
 * Encrypts with a pre-shared MOBS keystream; the field comes from the keystream.
 *
 * # Safety
 * Both byte ranges must be valid; `out` valid for a write.
 */
enum MobiusStatus mobius_encrypt_keystream(const uint8_t *keystream,
                                           size_t keystream_len,
                                           const uint8_t *data,
                                           size_t len,
                                           struct MobiusBuffer **out);

/**
 * # Safety
 * Both byte ranges must be valid; `out` valid for a write.
 */
enum MobiusStatus mobius_decrypt_keystream(const uint8_t *keystream,
                                           size_t keystream_len,
                                           const uint8_t *container,
                                           size_t len,
                                           struct MobiusBuffer **out);

/**
 * # Safety
 * `buf` must be null or a live buffer.
 */
const uint8_t *mobius_buffer_data(const struct MobiusBuffer *buf);

/**
 * # Safety
 * `buf` must be null or a live buffer.
 */
size_t mobius_buffer_len(const struct MobiusBuffer *buf);

/**
 * # Safety
 * `buf` must come from this library and not be used afterwards.
 */
void mobius_buffer_free(struct MobiusBuffer *buf);

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; empty if none.
 */
const char *mobius_last_error(void);

/**
 * Static description of a status code; unknown codes give "unknown".
 */
const char *mobius_status_str(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOBIUS_H */
