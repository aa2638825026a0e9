/* evrecon: event-camera simulation, encoding and recursive sparse-coding
 * video reconstruction behind a C ABI.
 *
 * Every fallible call returns an evr_status; on failure a description is
 * available from evr_last_error() on the same thread until the next call.
 * Objects are opaque and owned by the caller once returned through an out
 * pointer; release them with the matching *_free function (NULL is a no-op).
 * Strings returned through char** are released with evr_string_free. */
#ifndef EVRECON_EVRECON_H
#define EVRECON_EVRECON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EVRECON_BUILDING)
#    define EVR_API __declspec(dllexport)
#  else
#    define EVR_API __declspec(dllimport)
#  endif
#else
#  define EVR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evr_status {
  EVR_OK = 0,
  EVR_ERR_PARAMETER = 1,
  EVR_ERR_IO = 2,
  EVR_ERR_FORMAT = 3,
  EVR_ERR_DIMENSION = 4,
  EVR_ERR_NUMERIC = 5,
  EVR_ERR_CONFIG = 6,
  EVR_ERR_PROVIDER = 7,
  EVR_ERR_INTERNAL = 8
} evr_status;

EVR_API const char* evr_version(void);
EVR_API const char* evr_last_error(void);
EVR_API const char* evr_status_name(evr_status status);
EVR_API void evr_string_free(char* s);

/* ---- events ---------------------------------------------------------- */

typedef struct evr_events evr_events;

typedef struct evr_event {
  int32_t x;
  int32_t y;
  double t;
  int32_t polarity; /* +1 or -1 */
} evr_event;

typedef enum evr_event_format { EVR_EVENTS_BINARY = 0, EVR_EVENTS_TEXT = 1 } evr_event_format;

EVR_API evr_status evr_events_create(int32_t width, int32_t height, double t_start, double t_end,
                                     evr_events** out);
/* Appends one event; the stream is validated when it is used or written. */
EVR_API evr_status evr_events_push(evr_events* events, const evr_event* e);
/* Sorts by (t, y, x, polarity). */
EVR_API evr_status evr_events_sort(evr_events* events);
EVR_API evr_status evr_events_info(const evr_events* events, int32_t* width, int32_t* height,
                                   double* t_start, double* t_end, size_t* count);
EVR_API evr_status evr_events_get(const evr_events* events, size_t index, evr_event* out);
/* Format is detected from the file contents. */
EVR_API evr_status evr_events_read(const char* path, evr_events** out);
EVR_API evr_status evr_events_write(const evr_events* events, const char* path, evr_event_format format);
EVR_API void evr_events_free(evr_events* events);

/* ---- images and flow --------------------------------------------------- */

typedef struct evr_image evr_image;
typedef struct evr_flow evr_flow;

EVR_API evr_status evr_image_create(int32_t width, int32_t height, evr_image** out);
EVR_API evr_status evr_image_size(const evr_image* img, int32_t* width, int32_t* height);
/* Row-major pixels, width * height doubles, valid while the image lives. */
EVR_API double* evr_image_data(evr_image* img);
EVR_API const double* evr_image_cdata(const evr_image* img);
EVR_API evr_status evr_image_read(const char* path, evr_image** out);
/* .pgm or .png by extension; bit_depth 8 or 16. */
EVR_API evr_status evr_image_write(const evr_image* img, const char* path, int32_t bit_depth);
/* Signed map rescaled from [-m, m] to [0, 1] for display. */
EVR_API evr_status evr_image_signed_display(const evr_image* img, evr_image** out);
EVR_API void evr_image_free(evr_image* img);

EVR_API evr_status evr_flow_create(int32_t width, int32_t height, evr_flow** out);
EVR_API evr_status evr_flow_size(const evr_flow* flow, int32_t* width, int32_t* height);
EVR_API evr_status evr_flow_get(const evr_flow* flow, int32_t x, int32_t y, float* u, float* v);
EVR_API evr_status evr_flow_set(evr_flow* flow, int32_t x, int32_t y, float u, float v);
EVR_API evr_status evr_flow_read(const char* path, evr_flow** out);
EVR_API evr_status evr_flow_write(const evr_flow* flow, const char* path);
EVR_API void evr_flow_free(evr_flow* flow);

/* ---- scenes and the event simulator ------------------------------------ */

typedef struct evr_scene evr_scene;

typedef struct evr_sim_params {
  double threshold_mean;
  double threshold_std;
  double neg_pos_ratio_mean;
  double neg_pos_ratio_std;
  double cutoff_hz; /* 0 disables the photoreceptor lowpass */
  double refractory_s;
  double leak_rate_hz;
  double shot_noise_hz;
  uint64_t seed;
} evr_sim_params;

/* Default sensor model. */
EVR_API void evr_sim_params_default(evr_sim_params* out);
/* Noise-free model with a single fixed threshold. */
EVR_API void evr_sim_params_ideal(double threshold, uint64_t seed, evr_sim_params* out);

EVR_API evr_status evr_scene_random(int32_t width, int32_t height, double duration, int32_t objects,
                                    uint64_t seed, evr_scene** out);
EVR_API evr_status evr_scene_from_json(const char* json, evr_scene** out);
EVR_API evr_status evr_scene_to_json(const evr_scene* scene, char** out);
EVR_API evr_status evr_scene_read(const char* path, evr_scene** out);
EVR_API evr_status evr_scene_write(const evr_scene* scene, const char* path);
EVR_API evr_status evr_scene_info(const evr_scene* scene, int32_t* width, int32_t* height, double* duration);
EVR_API evr_status evr_scene_render(const evr_scene* scene, double t, evr_image** out);
/* Exact flow of the topmost layer from t0 to t1. */
EVR_API evr_status evr_scene_flow(const evr_scene* scene, double t0, double t1, evr_flow** out);
/* Renders the scene at adaptive time steps and converts it to events. */
EVR_API evr_status evr_simulate(const evr_scene* scene, const evr_sim_params* params, evr_events** out);
EVR_API void evr_scene_free(evr_scene* scene);

/* ---- encoding and warping ---------------------------------------------- */

/* One tensor container per group of n_events (0: a single group) in `dir`,
 * named voxel_NNNN.cwts, holding tensors "voxel" [B, H, W] and "window" [2]. */
EVR_API evr_status evr_encode_voxels(const evr_events* events, int32_t bins, size_t n_events,
                                     int32_t normalize, const char* dir, size_t* n_groups);
/* Reconstruction windows of the groups of n_events events: window i runs
 * from the end of window i-1 (the stream start for i = 0) to the group's last
 * event. Writes up to `capacity` pairs; *count receives the total. */
EVR_API evr_status evr_step_windows(const evr_events* events, size_t n_events, double* starts, double* ends,
                                    size_t capacity, size_t* count);
/* Signed per-pixel polarity sum. */
EVR_API evr_status evr_event_image(const evr_events* events, evr_image** out);
/* Events moved to t_ref along the flow (read as displacement over the
 * stream window) and splatted bilinearly. */
EVR_API evr_status evr_warp_events(const evr_events* events, const evr_flow* flow, double t_ref,
                                   evr_image** out);
/* Variance of the warped event image over that of the unwarped one. */
EVR_API evr_status evr_fwl(const evr_events* events, const evr_flow* flow, double t_ref, double* out);
EVR_API evr_status evr_warp_frame(const evr_image* frame, const evr_flow* flow, evr_image** out);

/* ---- metrics ------------------------------------------------------------ */

EVR_API evr_status evr_mse(const evr_image* a, const evr_image* b, double* out);
EVR_API evr_status evr_ssim(const evr_image* a, const evr_image* b, double* out);
EVR_API evr_status evr_epe(const evr_flow* pred, const evr_flow* gt, double* out);
EVR_API evr_status evr_outlier_pct(const evr_flow* pred, const evr_flow* gt, double* out);

/* ---- reconstruction weights --------------------------------------------- */

typedef struct evr_weights evr_weights;

typedef struct evr_arch {
  int32_t bins;
  int32_t features;
  int32_t codes;
  int32_t kernel;
  int32_t blocks;
  int32_t lsrc_channels;
} evr_arch;

typedef struct evr_bridge_options {
  int32_t bins;
  int32_t blocks;
  double lambda;      /* sparsity weight */
  double frame_gain;  /* fusion gain of the warped previous frame */
  double event_gain;  /* fusion gain of the summed voxel bins */
  int32_t warm_start; /* start ISTA from the incoming codes */
} evr_bridge_options;

EVR_API void evr_bridge_options_default(evr_bridge_options* out);
/* Weights that make the network an exact unrolled ISTA over a fixed image
 * dictionary. */
EVR_API evr_status evr_weights_bridge(const evr_bridge_options* options, evr_weights** out);
EVR_API evr_status evr_weights_random(const evr_arch* arch, uint64_t seed, double scale, evr_weights** out);
/* Unknown tensors are dropped; their count goes to *n_ignored (may be NULL). */
EVR_API evr_status evr_weights_load(const char* path, evr_weights** out, size_t* n_ignored);
EVR_API evr_status evr_weights_save(const evr_weights* w, const char* path);
EVR_API evr_status evr_weights_arch(const evr_weights* w, evr_arch* out);
EVR_API void evr_weights_free(evr_weights* w);

/* ---- recursive reconstruction ------------------------------------------- */

typedef struct evr_provider evr_provider;

EVR_API evr_status evr_provider_zero(evr_provider** out);
EVR_API evr_status evr_provider_ground_truth(const evr_scene* scene, evr_provider** out);
/* One flow_NNNN.flo per step in `dir`. */
EVR_API evr_status evr_provider_external(const char* dir, evr_provider** out);
EVR_API void evr_provider_free(evr_provider* p);

typedef enum evr_warp_mode {
  EVR_WARP_NONE = 0,
  EVR_WARP_FRAME = 1,
  EVR_WARP_FRAME_AND_CODES = 2
} evr_warp_mode;

typedef struct evr_run_config {
  int32_t bins;
  size_t events_per_group;
  evr_warp_mode warp;
  int32_t normalize_voxels;
  int32_t record_timings;
  int32_t emit_initial_frame;
} evr_run_config;

EVR_API void evr_run_config_default(evr_run_config* out);

typedef struct evr_result evr_result;

EVR_API evr_status evr_reconstruct(const evr_events* events, const evr_run_config* config,
                                   evr_provider* provider, const evr_weights* weights, evr_result** out);
EVR_API size_t evr_result_frame_count(const evr_result* r);
/* Borrowed; valid while the result lives. */
EVR_API const evr_image* evr_result_frame(const evr_result* r, size_t index);
EVR_API const evr_flow* evr_result_flow(const evr_result* r, size_t index);
EVR_API double evr_result_frame_time(const evr_result* r, size_t index);
/* Frames, timestamps.txt and (when write_flows) flows into `dir`. */
EVR_API evr_status evr_result_write(const evr_result* r, const char* dir, int32_t bit_depth, int32_t write_flows);
/* Report as JSON. config_echo_json (may be NULL) is embedded verbatim. */
EVR_API evr_status evr_result_report_json(const evr_result* r, const char* config_echo_json, char** out);
EVR_API void evr_result_free(evr_result* r);

/* ---- evaluation ---------------------------------------------------------- */

typedef struct evr_eval_options {
  const char* pred_dir;      /* frames and timestamps.txt */
  const char* gt_dir;        /* reference frames; may be NULL */
  const char* flow_pred_dir; /* flow_NNNN.flo; may be NULL */
  const char* flow_gt_dir;   /* may be NULL */
  const evr_events* events;  /* may be NULL; enables per-step FWL */
  size_t events_per_group;
  int32_t normalize;         /* rescale frames to [0, 1] before MSE/SSIM */
} evr_eval_options;

/* One step per predicted frame (or flow). Frames are matched to references
 * by nearest timestamp, flows by index. Report as JSON (csv != 0: CSV). */
EVR_API evr_status evr_evaluate(const evr_eval_options* options, const char* config_echo_json, int32_t csv,
                                char** out);

/* ---- configuration */

/* Reads a .toml or JSON configuration file and returns it as a JSON object
 * string. Unreadable or malformed files give EVR_ERR_CONFIG. */
EVR_API evr_status evr_config_load(const char* path, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
