#ifndef STLOCUS_H
#define STLOCUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Storage modes accepted by [`stl_index_build`].
 */
typedef enum StlMode {
  /*
   Dense tables over all block documents.
   */
  STL_MODE_STANDARD = 0,
  /*
   Shortened documents with packed tables.
   */
  STL_MODE_COMPACT = 1,
} StlMode;

/*
 Status codes returned by every fallible function.
 */
typedef enum StlStatus {
  /*
   Success.
   */
  STL_STATUS_OK = 0,
  /*
   An argument violated a precondition (bad positions, bad mode).
   */
  STL_STATUS_INVALID_ARGUMENT = 1,
  /*
   An internal consistency check failed.
   */
  STL_STATUS_INVARIANT = 2,
  /*
   Reading or writing a file failed.
   */
  STL_STATUS_IO = 3,
  /*
   A serialized index was malformed.
   */
  STL_STATUS_FORMAT = 4,
  /*
   A required pointer was null or a string was not UTF-8.
   */
  STL_STATUS_NULL_POINTER = 5,
  /*
   The output buffer was too small; the required size was reported.
   */
  STL_STATUS_BUFFER_TOO_SMALL = 6,
  /*
   A panic was caught at the boundary.
   */
  STL_STATUS_PANIC = 7,
} StlStatus;

/*
 Opaque index handle.
 */
typedef struct StlIndex StlIndex;

/*
 Locus of a substring in the suffix tree of the text.
 */
typedef struct StlLocus {
  /*
   1 when the locus is an explicit node, 0 when it lies inside an edge.
   */
  uint8_t explicit_node;
  /*
   The explicit node, or the lower end of the edge.
   */
  uint32_t node;
  /*
   Upper end of the edge; equal to `node` for an explicit locus.
   */
  uint32_t parent;
  /*
   String depth of the locus, the substring length.
   */
  uint32_t depth;
} StlLocus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Builds the index of `text[0..len]` and stores the handle in `*out`.

 # Safety
 `text` must point to `len` readable bytes and `out` must be writable.
 */
enum StlStatus stl_index_build(const uint8_t *text,
                               size_t len,
                               enum StlMode mode,
                               struct StlIndex **out);

/*
 Loads an index saved by [`stl_index_save`] and stores the handle in `*out`.

 # Safety
 `path` must be a NUL-terminated string and `out` must be writable.
 */
enum StlStatus stl_index_load(const char *path, struct StlIndex **out);

/*
 Saves the index to `path`.

 # Safety
 `idx` must be a live handle and `path` a NUL-terminated string.
 */
enum StlStatus stl_index_save(const struct StlIndex *idx, const char *path);

/*
 Releases a handle. A null handle is ignored.

 # Safety
 `idx` must be null or a handle not yet freed.
 */
void stl_index_free(struct StlIndex *idx);

/*
 Length of the indexed text, 0 for a null handle.

 # Safety
 `idx` must be null or a live handle.
 */
size_t stl_index_len(const struct StlIndex *idx);

/*
 Total words used by the index, 0 for a null handle.

 # Safety
 `idx` must be null or a live handle.
 */
uint64_t stl_index_words(const struct StlIndex *idx);

/*
 Locus of `text[i..j]` in the suffix tree of the text.

 # Safety
 `idx` must be a live handle and `out` writable.
 */
enum StlStatus stl_substring_locus(const struct StlIndex *idx,
                                   size_t i,
                                   size_t j,
                                   struct StlLocus *out);

/*
 Perfect hash of `text[i..j]` packed into one integer: equal exactly
 for equal substrings of the same text.

 # Safety
 `idx` must be a live handle and `out` writable.
 */
enum StlStatus stl_substring_hash(const struct StlIndex *idx, size_t i, size_t j, uint64_t *out);

/*
 Writes the sorted starting positions of `text[i..j]` into
 `buf[0..cap]` and their number into `*count`. When `cap` is too small
 nothing is written to `buf`, `*count` receives the required size and
 the status is `BufferTooSmall`.

 # Safety
 `idx` must be a live handle, `count` writable and `buf` writable for
 `cap` elements (it may be null when `cap` is 0).
 */
enum StlStatus stl_occurrences(const struct StlIndex *idx,
                               size_t i,
                               size_t j,
                               size_t *buf,
                               size_t cap,
                               size_t *count);

/*
 Message of the last failure on this thread, or null. The pointer is
 valid until the next failing call on the same thread.
 */
const char *stl_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* STLOCUS_H */
