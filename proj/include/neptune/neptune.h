/* neptune.h - C API for the NEPTUNE near-drowning detection library.
 *
 * The library turns grayscale pool footage into per-second struggle
 * detections: each m-second window of frames (m = 1..5) is collapsed to a
 * normalized per-pixel spectral-magnitude matrix, segmented with 3-means and
 * 4-means clustering, reduced to 18 per-segment variables, quantized against
 * percentile tables and matched against confidence-1 association rules.
 *
 * All functions returning neptune_status report NEPTUNE_OK (0) on success.
 * On failure a human-readable message is available from neptune_last_error()
 * on the calling thread. Objects are opaque handles created and destroyed by
 * the matching _free function; passing NULL where a handle is required is an
 * error, while _free(NULL) is a no-op.
 */
#ifndef NEPTUNE_H
#define NEPTUNE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define NEPTUNE_API __declspec(dllexport)
#else
#  define NEPTUNE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum neptune_status {
  NEPTUNE_OK = 0,
  NEPTUNE_ERROR_INVALID_ARGUMENT = 1,
  NEPTUNE_ERROR_IO = 2,
  NEPTUNE_ERROR_PARSE = 3,
  NEPTUNE_ERROR_CONFIG_MISMATCH = 4,
  NEPTUNE_ERROR_TRAINING = 5,
  NEPTUNE_ERROR_INTERNAL = 6
} neptune_status;

NEPTUNE_API const char* neptune_version(void);
NEPTUNE_API const char* neptune_status_name(neptune_status status);
/* Message from the last failing call on this thread; empty string if none. */
NEPTUNE_API const char* neptune_last_error(void);

/* ---- configuration ----------------------------------------------------- */

typedef struct neptune_config neptune_config;

/* Defaults: fps unset (must be provided), stride_s=1, dc_policy=exclude_dc,
 * adjacency=four, percentile_source=computed, no crop. */
NEPTUNE_API neptune_status neptune_config_create(neptune_config** out);
NEPTUNE_API neptune_status neptune_config_load(const char* json_path,
                                               neptune_config** out);
/* Keys: fps, stride_s, dc_policy (exclude_dc|include_dc), adjacency
 * (four|eight), percentile_source (computed|builtin|builtin_repaired),
 * crop ("x0,y0,w,h" or "none"), raw_width, raw_height. */
NEPTUNE_API neptune_status neptune_config_set(neptune_config* cfg,
                                              const char* key,
                                              const char* value);
NEPTUNE_API void neptune_config_free(neptune_config* cfg);

/* ---- frame streams ------------------------------------------------------ */

typedef struct neptune_frames neptune_frames;

/* format: "pgm_dir", "png_dir" (directory of frames, lexicographic order) or
 * "raw_y8" (single headerless file; dimensions from config raw_width/height).
 * The config crop, if any, is applied on load. */
NEPTUNE_API neptune_status neptune_frames_load(const char* path,
                                               const char* format,
                                               const neptune_config* cfg,
                                               neptune_frames** out);
NEPTUNE_API int64_t neptune_frames_count(const neptune_frames* frames);
NEPTUNE_API int neptune_frames_width(const neptune_frames* frames);
NEPTUNE_API int neptune_frames_height(const neptune_frames* frames);
NEPTUNE_API void neptune_frames_free(neptune_frames* frames);

/* ---- synthetic pool scenes ---------------------------------------------- */

/* Renders the JSON scene spec to a directory of PGM frames plus a labels CSV
 * ("start_frame,end_frame,min_x,min_y,max_x,max_y"). labels_csv_path may be
 * NULL to skip writing labels. */
NEPTUNE_API neptune_status neptune_synth(const char* scene_json_path,
                                         const char* frames_dir,
                                         const char* labels_csv_path);

/* ---- training ------------------------------------------------------------ */

typedef struct neptune_model neptune_model;

/* Runs the full pipeline for window lengths 1..5 s, mines confidence-1 rule
 * sets and selects one per length. summary_csv_path (optional) receives the
 * per-size sweep statistics. */
NEPTUNE_API neptune_status neptune_train(const neptune_frames* frames,
                                         const char* labels_csv_path,
                                         const neptune_config* cfg,
                                         const char* summary_csv_path,
                                         neptune_model** out);

NEPTUNE_API neptune_status neptune_model_save(const neptune_model* model,
                                              const char* path);
NEPTUNE_API neptune_status neptune_model_load(const char* path,
                                              neptune_model** out);
NEPTUNE_API void neptune_model_free(neptune_model* model);

/* Training statistics for one window length. Any output pointer may be NULL.
 * Available on freshly trained models and on loaded ones (counts are stored
 * in the model file). */
NEPTUNE_API neptune_status neptune_model_window_stats(
    const neptune_model* model, int window_s, int64_t* positive_windows,
    int64_t* negative_windows, int* num_variables, int64_t* rule_count,
    int64_t* positives_covered);

/* ---- detection ----------------------------------------------------------- */

typedef struct neptune_timeline neptune_timeline;

/* Evaluates every window length 1..5 at every integer second of the stream
 * and forms the per-second union. The config must match the model's pipeline
 * settings. */
NEPTUNE_API neptune_status neptune_detect(const neptune_model* model,
                                          const neptune_frames* frames,
                                          const neptune_config* cfg,
                                          neptune_timeline** out);

NEPTUNE_API int neptune_timeline_seconds(const neptune_timeline* timeline);
/* 1 detected, 0 not detected; -1 if (second, window_s) was not evaluated. */
NEPTUNE_API int neptune_timeline_detected(const neptune_timeline* timeline,
                                          int second, int window_s);
NEPTUNE_API int neptune_timeline_union_at(const neptune_timeline* timeline,
                                          int second);
NEPTUNE_API neptune_status neptune_timeline_write_csv(
    const neptune_timeline* timeline, const char* path);
NEPTUNE_API neptune_status neptune_timeline_write_svg(
    const neptune_timeline* timeline, const char* path);
NEPTUNE_API void neptune_timeline_free(neptune_timeline* timeline);

/* ---- baseline regression formulas --------------------------------------- */

/* Evaluates the fixed linear baseline formula for window_s on every segment,
 * writes "start_frame,segment_id,actual,predicted" rows and reports the
 * Pearson correlation between actual labels and predicted scores. Errors if
 * either side has zero variance. pearson_out may be NULL. */
NEPTUNE_API neptune_status neptune_baseline(const neptune_frames* frames,
                                            const char* labels_csv_path,
                                            int window_s,
                                            const neptune_config* cfg,
                                            const char* report_csv_path,
                                            double* pearson_out);

/* ---- debug dumps ---------------------------------------------------------- */

/* Merged matrix of the window starting at start_second, as PGM (values x255)
 * and/or CSV. Either output path may be NULL. */
NEPTUNE_API neptune_status neptune_dump_merge(const neptune_frames* frames,
                                              const neptune_config* cfg,
                                              int start_second, int window_s,
                                              const char* pgm_path,
                                              const char* csv_path);

/* Segment map (cluster shades, largest cluster white) and segment list CSV
 * for the same window. */
NEPTUNE_API neptune_status neptune_dump_segments(const neptune_frames* frames,
                                                 const neptune_config* cfg,
                                                 int start_second,
                                                 int window_s,
                                                 const char* pgm_path,
                                                 const char* csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NEPTUNE_H */
