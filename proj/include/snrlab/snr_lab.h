#ifndef SNRLAB_SNR_LAB_H
#define SNRLAB_SNR_LAB_H

/* C interface to the spatial numerical range laboratory.
 *
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function (NULL is accepted). Every call returning snr_status leaves
 * a description of the last failure in snr_last_error(), per thread.
 * Complex vectors are passed as interleaved (re, im) doubles. A norm
 * exponent p is a double, with INFINITY standing for p = inf. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SNR_API __declspec(dllexport)
#else
#define SNR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum snr_status {
  SNR_OK = 0,
  SNR_ERR_ARGUMENT = 1,     /* NULL pointer, bad size, unknown option */
  SNR_ERR_SPEC = 2,         /* malformed algebra, norm, region or config */
  SNR_ERR_PRECONDITION = 3, /* e.g. a non-unit vector or an empty set */
  SNR_ERR_HYPOTHESIS = 4,   /* witness asked to run outside its hypotheses */
  SNR_ERR_INTERNAL = 5
} snr_status;

typedef struct snr_algebra snr_algebra;
typedef struct snr_cloud snr_cloud;
typedef struct snr_region snr_region;

typedef struct snr_estimate_options {
  size_t samples;
  size_t resolution; /* functional grid size k */
  uint64_t seed;
  unsigned threads;  /* 0: SNR_LAB_THREADS, then the hardware count */
  int fill;          /* nonzero: add interior points of each V(a; x) */
} snr_estimate_options;

SNR_API const char* snr_version(void);
SNR_API const char* snr_last_error(void);
SNR_API const char* snr_status_name(snr_status status);
/* Strings returned through char** out-parameters. */
SNR_API void snr_string_free(char* s);

/* Algebras */
SNR_API snr_status snr_algebra_from_json(const char* json, snr_algebra** out);
SNR_API snr_status snr_algebra_from_table(int row, double p, snr_algebra** out);
SNR_API snr_status snr_algebra_to_json(const snr_algebra* algebra, char** out);
SNR_API snr_status snr_algebra_dim(const snr_algebra* algebra, size_t* out);
SNR_API snr_status snr_algebra_norm(const snr_algebra* algebra, const double* element, size_t dim, double* out);
SNR_API snr_status snr_algebra_is_associative(const snr_algebra* algebra, int* out);
SNR_API void snr_algebra_free(snr_algebra* algebra);

/* Estimation */
SNR_API void snr_estimate_options_init(snr_estimate_options* options);
SNR_API snr_status snr_estimate(const snr_algebra* algebra, const double* element, size_t dim,
                                const snr_estimate_options* options, snr_cloud** out);
SNR_API snr_status snr_cloud_size(const snr_cloud* cloud, size_t* out);
/* Copies min(capacity, size) points into out (2 doubles each). */
SNR_API snr_status snr_cloud_points(const snr_cloud* cloud, double* out, size_t capacity);
SNR_API snr_status snr_cloud_radius(const snr_cloud* cloud, double* out);
SNR_API snr_status snr_cloud_defect(const snr_cloud* cloud, size_t probes, uint64_t seed, double* out);
SNR_API snr_status snr_cloud_to_json(const snr_cloud* cloud, char** out);
SNR_API void snr_cloud_free(snr_cloud* cloud);

/* Regions */
SNR_API snr_status snr_region_table_oracle(int row, double p, const double a[4], snr_region** out);
SNR_API snr_status snr_region_from_json(const char* json, snr_region** out);
SNR_API snr_status snr_region_to_json(const snr_region* region, char** out);
SNR_API snr_status snr_region_distance(const snr_region* region, double re, double im, double* out);
/* Largest distance of a cloud point from the region, and the Hausdorff
 * distance between hull(cloud) and the hull of a region sample. */
SNR_API snr_status snr_region_compare(const snr_region* region, const snr_cloud* cloud, double* max_outside,
                                      double* hull_hausdorff);
SNR_API void snr_region_free(snr_region* region);

/* Runs a CLI subcommand pipeline on a JSON config. On success *out holds
 * {"report_text", "report_path", "summary", "exit_code", "artifacts":
 * [{"path", "content"}]}; nothing is written to disk. */
SNR_API snr_status snr_run(const char* subcommand, const char* config_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
