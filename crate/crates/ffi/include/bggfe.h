#ifndef BGGFE_H
#define BGGFE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BggfeStatus {
  BGGFE_STATUS_OK = 0,
  BGGFE_STATUS_NULL_ARGUMENT = 1,
  BGGFE_STATUS_INVALID_UTF8 = 2,
  BGGFE_STATUS_INVALID_ARGUMENT = 3,
  BGGFE_STATUS_MESH = 4,
  BGGFE_STATUS_ELEMENT = 5,
  BGGFE_STATUS_DIAGRAM = 6,
  BGGFE_STATUS_CURVATURE = 7,
  BGGFE_STATUS_IO = 8,
  BGGFE_STATUS_PANIC = 9,
} BggfeStatus;

typedef enum BggfeFormat {
  BGGFE_FORMAT_JSON = 0,
  BGGFE_FORMAT_CSV = 1,
  BGGFE_FORMAT_MD = 2,
} BggfeFormat;

/**
 * Which diagram `bggfe_verify` builds; `Auto` follows the mesh's macro kind.
 */
typedef enum BggfeDiagram {
  BGGFE_DIAGRAM_AUTO = 0,
  BGGFE_DIAGRAM_STRESS = 1,
  BGGFE_DIAGRAM_STRAIN = 2,
} BggfeDiagram;

/**
 * A loaded macro mesh.
 */
typedef struct BggfeMesh BggfeMesh;

/**
 * A rendered report with its pass/fail verdict.
 */
typedef struct BggfeReport BggfeReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 */
const char *bggfe_last_error(void);

/**
 * Loads a built-in mesh by name or a mesh JSON file by path.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is a valid pointer.
 */
enum BggfeStatus bggfe_mesh_load(const char *name, struct BggfeMesh **out);

/**
 * # Safety
 * `mesh` is null or a handle from `bggfe_mesh_load` not yet freed.
 */
void bggfe_mesh_free(struct BggfeMesh *mesh);

/**
 * Vertex count including split points; 0 for a null handle.
 *
 * # Safety
 * `mesh` is null or a live handle.
 */
uintptr_t bggfe_mesh_vertex_count(const struct BggfeMesh *mesh);

/**
 * Edge count including interior split edges; 0 for a null handle.
 *
 * # Safety
 * `mesh` is null or a live handle.
 */
uintptr_t bggfe_mesh_edge_count(const struct BggfeMesh *mesh);

/**
 * Sub-triangle count; 0 for a null handle.
 *
 * # Safety
 * `mesh` is null or a live handle.
 */
uintptr_t bggfe_mesh_triangle_count(const struct BggfeMesh *mesh);

/**
 * # Safety
 * `mesh` is null or a live handle.
 */
uintptr_t bggfe_mesh_macro_count(const struct BggfeMesh *mesh);

/**
 * Dimension table. `mesh` and `element` may be null for the defaults.
 *
 * # Safety
 * String arguments are null or NUL-terminated; `out` is a valid pointer.
 */
enum BggfeStatus bggfe_dims(const char *mesh,
                            const char *element,
                            enum BggfeFormat format,
                            struct BggfeReport **out);

/**
 * Builds and checks a diagram. A report whose checks fail is still `Ok`;
 * inspect it with `bggfe_report_passed`.
 *
 * # Safety
 * `mesh` is null or NUL-terminated; `out` is a valid pointer.
 */
enum BggfeStatus bggfe_verify(const char *mesh,
                              enum BggfeDiagram diagram,
                              enum BggfeFormat format,
                              struct BggfeReport **out);

/**
 * Runs curvature identities on the seeded random corpus. `check` may be
 * null for all identities.
 *
 * # Safety
 * `check` is null or NUL-terminated; `out` is a valid pointer.
 */
enum BggfeStatus bggfe_curvature(const char *check,
                                 uint64_t seed,
                                 uintptr_t cases,
                                 enum BggfeFormat format,
                                 struct BggfeReport **out);

/**
 * # Safety
 * `report` is null or a live handle.
 */
bool bggfe_report_passed(const struct BggfeReport *report);

/**
 * Rendered report text, valid until the report is freed; null for a null handle.
 *
 * # Safety
 * `report` is null or a live handle.
 */
const char *bggfe_report_text(const struct BggfeReport *report);

/**
 * # Safety
 * `report` is null or a live handle.
 */
uintptr_t bggfe_report_failure_count(const struct BggfeReport *report);

/**
 * Description of failed check `index`, or null when out of range.
 *
 * # Safety
 * `report` is null or a live handle.
 */
const char *bggfe_report_failure(const struct BggfeReport *report, uintptr_t index);

/**
 * # Safety
 * `report` is null or a handle not yet freed.
 */
void bggfe_report_free(struct BggfeReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BGGFE_H */
