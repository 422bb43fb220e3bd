/* Exercises the C interface from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "snrlab/snr_lab.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_algebra(void) {
  snr_algebra* a = NULL;
  size_t dim = 0;
  int assoc = 0;
  double n = 0.0;
  const double x[4] = {3.0, 0.0, 0.0, 4.0}; /* (3, 4i) */
  char* json = NULL;
  snr_algebra* b = NULL;

  EXPECT(snr_algebra_from_table(1, 2.0, &a) == SNR_OK);
  EXPECT(snr_algebra_dim(a, &dim) == SNR_OK && dim == 2);
  EXPECT(snr_algebra_is_associative(a, &assoc) == SNR_OK && assoc == 1);
  EXPECT(snr_algebra_norm(a, x, 2, &n) == SNR_OK && fabs(n - 5.0) < 1e-12);
  EXPECT(snr_algebra_norm(a, x, 3, &n) == SNR_ERR_ARGUMENT);

  EXPECT(snr_algebra_to_json(a, &json) == SNR_OK && json != NULL);
  EXPECT(snr_algebra_from_json(json, &b) == SNR_OK);
  EXPECT(snr_algebra_norm(b, x, 2, &n) == SNR_OK && fabs(n - 5.0) < 1e-12);
  snr_string_free(json);
  snr_algebra_free(b);
  snr_algebra_free(a);

  a = NULL;
  EXPECT(snr_algebra_from_table(25, 2.0, &a) == SNR_ERR_SPEC);
  EXPECT(a == NULL);
  EXPECT(strstr(snr_last_error(), "25") != NULL);
  EXPECT(snr_algebra_from_table(36, 1.0, &a) == SNR_ERR_SPEC);
  EXPECT(snr_algebra_from_table(1, INFINITY, &a) == SNR_OK);
  snr_algebra_free(a);
  EXPECT(snr_algebra_from_json("{not json", &a) == SNR_ERR_SPEC);
  EXPECT(snr_algebra_from_json(NULL, &a) == SNR_ERR_ARGUMENT);
  EXPECT(strcmp(snr_status_name(SNR_ERR_HYPOTHESIS), "hypothesis violated") == 0);
  EXPECT(strcmp(snr_status_name(SNR_OK), "ok") == 0);
}

static void test_estimate(void) {
  snr_algebra* a = NULL;
  snr_cloud* c = NULL;
  snr_region* r = NULL;
  snr_estimate_options o;
  const double element[4] = {0.0, 0.0, 1.0, 0.0}; /* (0, 1) */
  const double coords[4] = {0.0, 0.0, 1.0, 0.0};
  size_t size = 0;
  double radius = 0.0, outside = 0.0, hd = 0.0, d = 0.0, defect = 0.0;
  double* pts = NULL;
  size_t i;

  EXPECT(snr_algebra_from_table(16, 2.0, &a) == SNR_OK);
  snr_estimate_options_init(&o);
  EXPECT(o.samples > 0 && o.resolution > 0);
  o.samples = 20000;
  EXPECT(snr_estimate(a, element, 2, &o, &c) == SNR_OK);
  EXPECT(snr_cloud_size(c, &size) == SNR_OK && size > 0);
  pts = malloc(2 * size * sizeof(double));
  EXPECT(snr_cloud_points(c, pts, size) == SNR_OK);
  for (i = 0; i < size; ++i) EXPECT(fabs(pts[2 * i + 1]) < 1e-9 && pts[2 * i] > -1e-9 && pts[2 * i] < 1.0 + 1e-9);
  free(pts);
  EXPECT(snr_cloud_radius(c, &radius) == SNR_OK && radius <= 1.0 + 1e-9);
  EXPECT(snr_cloud_defect(c, 2000, 0, &defect) == SNR_OK && defect <= 0.02);

  EXPECT(snr_region_table_oracle(16, 2.0, coords, &r) == SNR_OK);
  EXPECT(snr_region_distance(r, 2.0, 0.0, &d) == SNR_OK && fabs(d - 1.0) < 1e-12);
  EXPECT(snr_region_compare(r, c, &outside, &hd) == SNR_OK);
  EXPECT(outside <= 1e-6);
  EXPECT(hd <= 0.05);

  snr_region_free(r);
  EXPECT(snr_region_from_json("{\"kind\":\"disk\",\"center\":[0,0],\"radius\":-1}", &r) == SNR_ERR_SPEC);
  snr_cloud_free(c);
  snr_algebra_free(a);
}

static void test_run(void) {
  char* out = NULL;
  EXPECT(snr_run("witness", "{\"case\":\"l1-line\",\"z_grid\":\"4x2\"}", &out) == SNR_OK);
  EXPECT(out != NULL && strstr(out, "\"exit_code\":0") != NULL);
  snr_string_free(out);
  out = NULL;
  EXPECT(snr_run("hunt", "{\"bogus\":1}", &out) == SNR_ERR_SPEC);
  EXPECT(out == NULL);
  EXPECT(strstr(snr_last_error(), "bogus") != NULL);
  EXPECT(strlen(snr_version()) > 0);
}

int main(void) {
  test_algebra();
  test_estimate();
  test_run();
  if (failures) {
    fprintf(stderr, "%d C API checks failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
