#ifndef CONDORCET_DOMAINS_H
#define CONDORCET_DOMAINS_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every API function.
 */
typedef enum MucdStatus {
  MUCD_STATUS_OK = 0,
  MUCD_STATUS_NULL_ARGUMENT = 1,
  MUCD_STATUS_DEGREE_OUT_OF_RANGE = 2,
  MUCD_STATUS_INDEX_OUT_OF_RANGE = 3,
  MUCD_STATUS_BUFFER_TOO_SMALL = 4,
  MUCD_STATUS_RUNTIME_ERROR = 5,
} MucdStatus;

/**
 * Opaque handle to an enumerated list of canonical classes of one degree.
 */
typedef struct MucdClassList MucdClassList;

/**
 * Classification flags of a single class.
 */
typedef struct MucdFlags {
  uint32_t size;
  uint32_t core_order;
  uint32_t dual_intersection;
  bool connected;
  bool peak_pit;
  bool normal;
  bool symmetric;
  bool self_dual;
  bool copious;
  bool ample;
  bool fixing;
  bool reducible;
  bool arrow_sp;
  bool usp;
  bool nuspd;
  bool sp_tree;
  bool sp_star;
} MucdFlags;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Enumerates every maximal unitary Condorcet domain class of `degree`
 * (3..=6 supported here; degree 7 is out of scope for the C surface).
 * On success stores a freshly allocated handle in `*out`; release it with
 * `mucd_class_list_free`.
 */
enum MucdStatus mucd_enumerate(uint32_t degree, uint32_t jobs, struct MucdClassList **out);

/**
 * Releases a handle returned by `mucd_enumerate`. Null is a no-op.
 */
void mucd_class_list_free(struct MucdClassList *list);

/**
 * Number of classes in the list.
 */
enum MucdStatus mucd_class_list_len(const struct MucdClassList *list, uintptr_t *out);

/**
 * Degree of the enumerated classes.
 */
enum MucdStatus mucd_class_list_degree(const struct MucdClassList *list, uint32_t *out);

/**
 * Member count of class `index`.
 */
enum MucdStatus mucd_class_size(const struct MucdClassList *list, uintptr_t index, uint32_t *out);

/**
 * Copies the members of class `index` into `buf` as permutations laid out
 * contiguously (`degree` alternatives each, values 1..=degree). `cap` is
 * the capacity of `buf` in u8 units; `*written` receives the number used.
 */
enum MucdStatus mucd_class_members(const struct MucdClassList *list,
                                   uintptr_t index,
                                   uint8_t *buf,
                                   uintptr_t cap,
                                   uintptr_t *written);

/**
 * Classifies class `index` into `*flags`.
 */
enum MucdStatus mucd_classify(const struct MucdClassList *list,
                              uintptr_t index,
                              struct MucdFlags *flags);

/**
 * Closed-form size of the alternating scheme for `degree` in 3..=7.
 */
enum MucdStatus mucd_alternating_size(uint32_t degree, uint64_t *out);

/**
 * Constructs the alternating scheme and stores it as a one-class list.
 */
enum MucdStatus mucd_alternating(uint32_t degree, struct MucdClassList **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONDORCET_DOMAINS_H */
