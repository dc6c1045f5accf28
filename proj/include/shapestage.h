/*
 * Flat C boundary of the shapestage engine.
 *
 * Only scalars, booleans and UTF-8 JSON strings cross this boundary. A
 * session is an opaque positive integer owning one stage. Calls on a given
 * session must be serialized by the host; distinct sessions are
 * independent. Handles and drag tokens are never reused, so stale values
 * fail with SS_E_INVALID_HANDLE / SS_E_NO_ACTIVE_DRAG instead of touching
 * another session.
 *
 * Failing calls return a negative SS_E_* code and record a message that
 * last_error() returns for the session (or for handle 0 when no session is
 * involved, e.g. a failed session_create).
 *
 * Strings returned by the library stay valid until the next call that
 * returns a string for the same session.
 */
#ifndef SHAPESTAGE_H
#define SHAPESTAGE_H

#include <stdbool.h>
#include <stdint.h>

#if defined(SHAPESTAGE_BUILDING)
#define SHAPESTAGE_API __attribute__((visibility("default")))
#else
#define SHAPESTAGE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define SS_OK 0
#define SS_E_INVALID_HANDLE (-1)
#define SS_E_INVALID_ARGUMENT (-2)
#define SS_E_DEGENERATE_POLYGON (-3)
#define SS_E_NO_SUCH_SHAPE (-4)
#define SS_E_DRAG_ACTIVE (-5)
#define SS_E_NO_ACTIVE_DRAG (-6)
#define SS_E_MALFORMED_DOCUMENT (-7)
#define SS_E_CONTAINMENT (-8)
#define SS_E_NO_POLYGON (-9)
#define SS_E_IO (-10)
#define SS_E_OUT_OF_BOUNDS (-11)
#define SS_E_DUPLICATE_VERTEX (-12)
#define SS_E_UNKNOWN_STYLE (-13)
#define SS_E_MALFORMED_IMAGE (-14)
#define SS_E_INTERNAL (-99)

/* Sentinel returned by hit() when no shape is under the point. */
#define SS_NO_SHAPE 0

/* Sessions. Returns a handle > 0 or a negative error code. */
SHAPESTAGE_API int64_t session_create(int64_t width, int64_t height);
SHAPESTAGE_API int32_t session_destroy(int64_t session);

/* Polygon drawing. add_vertex returns false for rejected vertices (outside
 * the stage, repeated, no polygon in progress, bad handle); last_error()
 * says why. close_polygon returns the new shape id (> 0) or an error. */
SHAPESTAGE_API int32_t begin_polygon(int64_t session);
SHAPESTAGE_API bool add_vertex(int64_t session, double x, double y);
SHAPESTAGE_API int64_t close_polygon(int64_t session);
SHAPESTAGE_API int32_t cancel_polygon(int64_t session);

/* Constrained drag. drag_begin returns a token (> 0). drag_move takes the
 * pointer displacement since drag_begin, clamps start + displacement so the
 * shape stays on the stage, applies it and writes the resulting absolute
 * translation to applied_x / applied_y (either may be NULL). */
SHAPESTAGE_API int64_t drag_begin(int64_t session, int64_t shape_id);
SHAPESTAGE_API int32_t drag_move(int64_t token, double x, double y, double* applied_x, double* applied_y);
SHAPESTAGE_API int32_t drag_end(int64_t token);

/* Queries. hit returns the topmost shape id, SS_NO_SHAPE, or an error.
 * document returns canonical compact JSON, or NULL on a bad handle.
 * version returns the change counter (>= 0) or an error. */
SHAPESTAGE_API int64_t hit(int64_t session, double x, double y);
SHAPESTAGE_API const char* document(int64_t session);
SHAPESTAGE_API int64_t version(int64_t session);

/* Structural edits. */
SHAPESTAGE_API int64_t add_rectangle(int64_t session, double x, double y, double width, double height);
SHAPESTAGE_API int32_t remove_shape(int64_t session, int64_t shape_id);
SHAPESTAGE_API int32_t move_shape_to_top(int64_t session, int64_t shape_id);

/* Replaces the session's stage with the given ShapeDocument. The stage
 * bounds are taken from the document; any active drag or in-progress
 * polygon is discarded and version() still increases. */
SHAPESTAGE_API int32_t load_document(int64_t session, const char* json);

/* Renders to a binary PPM file. options_json:
 *   {"styles": {"name": {"fill": [r,g,b], "stroke": [r,g,b], "stroke_width": n}},
 *    "background": [r,g,b] | "path/to/background.ppm"}
 * Both keys are optional; the default style table maps "default" to a
 * blue fill with a 1 px dark outline and the background is white. */
SHAPESTAGE_API int32_t render_ppm(int64_t session, const char* options_json, const char* out_path);

/* Scalability benchmark. config_json:
 *   {"counts": [..], "vertices": n, "trials": n, "width": n, "height": n, "seed": n}
 * Writes the CSV to csv_path (skipped when NULL) and returns a JSON summary
 * {"slope_ms_per_shape":..,"intercept_ms":..,"r2":..,"medians":[[n,ms],..]},
 * or NULL on error (see last_error(0)). */
SHAPESTAGE_API const char* bench_run(const char* config_json, const char* csv_path);

/* Message for the most recent failure on the session; "" if none. */
SHAPESTAGE_API const char* last_error(int64_t session);

#ifdef __cplusplus
}
#endif

#endif /* SHAPESTAGE_H */
