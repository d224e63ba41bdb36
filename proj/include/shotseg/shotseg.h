/*
 * shotseg: shot-boundary detection from block texture descriptors.
 *
 * C interface. Objects are opaque handles created by *_open / shotseg_detect
 * and released by the matching *_free function. Every fallible call returns a
 * shotseg_status; on failure shotseg_last_error() describes the problem for
 * the calling thread. Strings returned through char** are owned by the caller
 * and released with shotseg_string_free().
 */
#ifndef SHOTSEG_SHOTSEG_H
#define SHOTSEG_SHOTSEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SHOTSEG_BUILDING_LIBRARY)
#    define SHOTSEG_API __declspec(dllexport)
#  else
#    define SHOTSEG_API __declspec(dllimport)
#  endif
#else
#  define SHOTSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shotseg_status {
  SHOTSEG_OK = 0,
  SHOTSEG_ERR_INVALID_ARGUMENT = 1,
  SHOTSEG_ERR_IO = 2,
  SHOTSEG_ERR_FORMAT = 3,
  SHOTSEG_ERR_NO_FRAMES = 4,
  SHOTSEG_ERR_TOO_FEW_FRAMES = 5,
  SHOTSEG_ERR_JSON = 6,
  SHOTSEG_ERR_VALIDATION = 7,
  SHOTSEG_ERR_NUMERIC = 8,
  SHOTSEG_ERR_INTERNAL = 9
} shotseg_status;

enum {
  SHOTSEG_ORIENT_0 = 1u << 0,
  SHOTSEG_ORIENT_45 = 1u << 1,
  SHOTSEG_ORIENT_90 = 1u << 2,
  SHOTSEG_ORIENT_135 = 1u << 3,
  SHOTSEG_ORIENT_ALL = 0xFu
};

enum { SHOTSEG_FRAME_SIDE = 256, SHOTSEG_FRAME_PIXELS = 256 * 256 };

typedef enum shotseg_stage {
  SHOTSEG_STAGE_REPRESENTATION = 0,
  SHOTSEG_STAGE_SEGMENTATION = 1
} shotseg_stage;

typedef struct shotseg_config {
  int k;                       /* clusters per frame, 2..64 (default 6) */
  int gray_levels;             /* quantized gray levels, 2..256 (default 8) */
  int distance;                /* co-occurrence offset (default 1) */
  unsigned orientation_mask;   /* SHOTSEG_ORIENT_* bits (default all) */
  size_t min_seg_len;          /* shortest shot in frames (default 2) */
  uint64_t seed;               /* clustering seed (default 42) */
  size_t tolerance;            /* evaluation window in frames (default 5) */
  unsigned threads;            /* 0 = hardware concurrency */
} shotseg_config;

typedef struct shotseg_report {
  size_t detected;      /* D */
  size_t missed;        /* MD */
  size_t false_alarms;  /* FA */
  double precision;     /* percent */
  double recall;        /* percent */
  double f_measure;     /* percent */
} shotseg_report;

typedef struct shotseg_video shotseg_video;
typedef struct shotseg_detection shotseg_detection;

SHOTSEG_API const char* shotseg_status_name(shotseg_status status);
SHOTSEG_API const char* shotseg_last_error(void);
SHOTSEG_API void shotseg_string_free(char* text);

SHOTSEG_API void shotseg_config_default(shotseg_config* config);
/* Applies the keys of a JSON object (k, graylevels, distance, min_seg_len,
 * seed, tolerance, threads, orientations) on top of *config. */
SHOTSEG_API shotseg_status shotseg_config_merge_json(shotseg_config* config, const char* json_text);
/* "0,45,90,135" */
SHOTSEG_API shotseg_status shotseg_config_set_orientations(shotseg_config* config, const char* list);
SHOTSEG_API shotseg_status shotseg_config_validate(const shotseg_config* config);

/* Y4M file, single PGM/PNG, a directory of images, or a file-name glob. */
SHOTSEG_API shotseg_status shotseg_video_open(const char* input, shotseg_video** out);
SHOTSEG_API size_t shotseg_video_frame_count(const shotseg_video* video);
/* Copies SHOTSEG_FRAME_PIXELS luma bytes of frame `index` into `pixels`. */
SHOTSEG_API shotseg_status shotseg_video_frame(const shotseg_video* video, size_t index, uint8_t* pixels);
SHOTSEG_API void shotseg_video_free(shotseg_video* video);

SHOTSEG_API shotseg_status shotseg_detect(const shotseg_video* video, const shotseg_config* config,
                                          shotseg_detection** out);
SHOTSEG_API size_t shotseg_detection_shot_count(const shotseg_detection* detection);
SHOTSEG_API shotseg_status shotseg_detection_shot(const shotseg_detection* detection, size_t index, size_t* start,
                                                  size_t* end);
SHOTSEG_API size_t shotseg_detection_transition_count(const shotseg_detection* detection);
SHOTSEG_API shotseg_status shotseg_detection_transition(const shotseg_detection* detection, size_t index,
                                                        size_t* frame);
SHOTSEG_API double shotseg_detection_stage_seconds(const shotseg_detection* detection, shotseg_stage stage);
SHOTSEG_API shotseg_status shotseg_detection_shots_json(const shotseg_detection* detection, char** out);
SHOTSEG_API shotseg_status shotseg_detection_representatives_json(const shotseg_detection* detection, char** out);
SHOTSEG_API void shotseg_detection_free(shotseg_detection* detection);

/* Per-block texture features, one CSV row per block of every frame. */
SHOTSEG_API shotseg_status shotseg_features_csv(const shotseg_video* video, const shotseg_config* config, char** out);

/* Both documents carry {"total_frames":N,"transitions":[...]}. */
SHOTSEG_API shotseg_status shotseg_evaluate_json(const char* detected_json, const char* truth_json, size_t tolerance,
                                                 shotseg_report* out);
SHOTSEG_API shotseg_status shotseg_report_json(const shotseg_report* report, char** out);
SHOTSEG_API shotseg_status shotseg_report_table(const shotseg_report* report, char** out);

/* Renders a synthetic MONO Y4M video from a shot list; returns the ground-truth JSON. */
SHOTSEG_API shotseg_status shotseg_synth(const char* spec_json, const char* y4m_path, char** truth_json);

#ifdef __cplusplus
}
#endif

#endif /* SHOTSEG_SHOTSEG_H */
