#include "snrlab/snr_lab.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "snrlab/io.hpp"
#include "snrlab/oracles.hpp"
#include "snrlab/pipelines.hpp"

struct snr_algebra {
  snrlab::AlgebraSpec spec;
};
struct snr_cloud {
  snrlab::PointCloud cloud;
};
struct snr_region {
  snrlab::Region region;
};

namespace {

thread_local std::string last_error;

snr_status fail(snr_status s, std::string message) {
  last_error = std::move(message);
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
snr_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SNR_OK;
  } catch (const snrlab::SpecError& e) {
    return fail(SNR_ERR_SPEC, e.what());
  } catch (const snrlab::PreconditionError& e) {
    return fail(SNR_ERR_PRECONDITION, e.what());
  } catch (const snrlab::HypothesisError& e) {
    return fail(SNR_ERR_HYPOTHESIS, e.what());
  } catch (const std::exception& e) {
    return fail(SNR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SNR_ERR_INTERNAL, "unknown error");
  }
}

snrlab::Exponent exponent(double p) {
  if (std::isinf(p) && p > 0) return snrlab::Exponent::infinity();
  return snrlab::Exponent::finite(p);
}

snrlab::Element element(const double* v, std::size_t dim) {
  snrlab::Element e = snrlab::Element::zero(dim);
  for (std::size_t i = 0; i < dim; ++i) e[i] = {v[2 * i], v[2 * i + 1]};
  return e;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define SNR_REQUIRE(cond, what) \
  if (!(cond)) return fail(SNR_ERR_ARGUMENT, what)

}  // namespace

extern "C" {

const char* snr_version(void) {
  static const std::string v = snrlab::library_version();
  return v.c_str();
}

const char* snr_last_error(void) { return last_error.c_str(); }

const char* snr_status_name(snr_status status) {
  switch (status) {
    case SNR_OK: return "ok";
    case SNR_ERR_ARGUMENT: return "invalid argument";
    case SNR_ERR_SPEC: return "invalid specification";
    case SNR_ERR_PRECONDITION: return "precondition violated";
    case SNR_ERR_HYPOTHESIS: return "hypothesis violated";
    case SNR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void snr_string_free(char* s) { std::free(s); }

snr_status snr_algebra_from_json(const char* json, snr_algebra** out) {
  SNR_REQUIRE(json && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto spec = snrlab::io::algebra_from_json(snrlab::io::parse_json(json, "algebra"));
    *out = new snr_algebra{std::move(spec)};
  });
}

snr_status snr_algebra_from_table(int row, double p, snr_algebra** out) {
  SNR_REQUIRE(out, "NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new snr_algebra{snrlab::table_algebra(row, exponent(p))}; });
}

snr_status snr_algebra_to_json(const snr_algebra* algebra, char** out) {
  SNR_REQUIRE(algebra && out, "NULL argument");
  return guarded([&] { *out = dup(snrlab::io::algebra_to_json(algebra->spec).dump()); });
}

snr_status snr_algebra_dim(const snr_algebra* algebra, size_t* out) {
  SNR_REQUIRE(algebra && out, "NULL argument");
  *out = algebra->spec.dim();
  return SNR_OK;
}

snr_status snr_algebra_norm(const snr_algebra* algebra, const double* v, size_t dim, double* out) {
  SNR_REQUIRE(algebra && v && out, "NULL argument");
  SNR_REQUIRE(dim == algebra->spec.dim(), "element dimension does not match the algebra");
  return guarded([&] { *out = snrlab::norm(algebra->spec, element(v, dim)); });
}

snr_status snr_algebra_is_associative(const snr_algebra* algebra, int* out) {
  SNR_REQUIRE(algebra && out, "NULL argument");
  return guarded([&] { *out = snrlab::is_associative(algebra->spec.tensor) ? 1 : 0; });
}

void snr_algebra_free(snr_algebra* algebra) { delete algebra; }

void snr_estimate_options_init(snr_estimate_options* o) {
  if (!o) return;
  const snrlab::EstimateOptions d;
  o->samples = d.samples;
  o->resolution = d.resolution;
  o->seed = d.seed;
  o->threads = d.threads;
  o->fill = d.fill ? 1 : 0;
}

snr_status snr_estimate(const snr_algebra* algebra, const double* v, size_t dim, const snr_estimate_options* options,
                        snr_cloud** out) {
  SNR_REQUIRE(algebra && v && out, "NULL argument");
  SNR_REQUIRE(dim == algebra->spec.dim(), "element dimension does not match the algebra");
  *out = nullptr;
  snrlab::EstimateOptions o;
  if (options) {
    SNR_REQUIRE(options->samples > 0 && options->resolution > 0, "samples and resolution must be positive");
    o.samples = options->samples;
    o.resolution = options->resolution;
    o.seed = options->seed;
    o.threads = options->threads;
    o.fill = options->fill != 0;
  }
  return guarded([&] { *out = new snr_cloud{snrlab::estimate_snr(algebra->spec, element(v, dim), o)}; });
}

snr_status snr_cloud_size(const snr_cloud* cloud, size_t* out) {
  SNR_REQUIRE(cloud && out, "NULL argument");
  *out = cloud->cloud.points.size();
  return SNR_OK;
}

snr_status snr_cloud_points(const snr_cloud* cloud, double* out, size_t capacity) {
  SNR_REQUIRE(cloud && (out || capacity == 0), "NULL argument");
  const auto& p = cloud->cloud.points;
  for (std::size_t i = 0; i < std::min(capacity, p.size()); ++i) {
    out[2 * i] = p[i].real();
    out[2 * i + 1] = p[i].imag();
  }
  return SNR_OK;
}

snr_status snr_cloud_radius(const snr_cloud* cloud, double* out) {
  SNR_REQUIRE(cloud && out, "NULL argument");
  return guarded([&] { *out = snrlab::numerical_radius(cloud->cloud); });
}

snr_status snr_cloud_defect(const snr_cloud* cloud, size_t probes, uint64_t seed, double* out) {
  SNR_REQUIRE(cloud && out, "NULL argument");
  return guarded([&] { *out = snrlab::convexity_defect(cloud->cloud.points, snrlab::DefectOptions{probes, seed}); });
}

snr_status snr_cloud_to_json(const snr_cloud* cloud, char** out) {
  SNR_REQUIRE(cloud && out, "NULL argument");
  return guarded([&] { *out = dup(snrlab::io::cloud_to_json(cloud->cloud).dump()); });
}

void snr_cloud_free(snr_cloud* cloud) { delete cloud; }

snr_status snr_region_table_oracle(int row, double p, const double a[4], snr_region** out) {
  SNR_REQUIRE(a && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    *out = new snr_region{snrlab::table_oracle(row, exponent(p), {a[0], a[1]}, {a[2], a[3]})};
  });
}

snr_status snr_region_from_json(const char* json, snr_region** out) {
  SNR_REQUIRE(json && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    *out = new snr_region{snrlab::io::region_from_json(snrlab::io::parse_json(json, "region"))};
  });
}

snr_status snr_region_to_json(const snr_region* region, char** out) {
  SNR_REQUIRE(region && out, "NULL argument");
  return guarded([&] { *out = dup(snrlab::io::region_to_json(region->region).dump()); });
}

snr_status snr_region_distance(const snr_region* region, double re, double im, double* out) {
  SNR_REQUIRE(region && out, "NULL argument");
  return guarded([&] { *out = snrlab::region_distance(region->region, {re, im}); });
}

snr_status snr_region_compare(const snr_region* region, const snr_cloud* cloud, double* max_outside,
                              double* hull_hausdorff) {
  SNR_REQUIRE(region && cloud && max_outside && hull_hausdorff, "NULL argument");
  return guarded([&] {
    const auto& pts = cloud->cloud.points;
    if (pts.empty()) throw snrlab::PreconditionError("empty cloud");
    double worst = 0.0;
    for (const auto& z : pts) worst = std::max(worst, snrlab::region_distance(region->region, z));
    *max_outside = worst;
    *hull_hausdorff = snrlab::hull_hausdorff(snrlab::convex_hull(pts),
                                             snrlab::convex_hull(snrlab::region_sample(region->region)));
  });
}

void snr_region_free(snr_region* region) { delete region; }

snr_status snr_run(const char* subcommand, const char* config_json, char** out) {
  SNR_REQUIRE(subcommand && config_json && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    const auto r = snrlab::run_pipeline(subcommand, snrlab::io::parse_json(config_json, "config"));
    snrlab::io::Json artifacts = snrlab::io::Json::array();
    for (const auto& a : r.artifacts) artifacts.push_back({{"path", a.path}, {"content", a.content}});
    const snrlab::io::Json bundle{{"report_text", r.report.dump(2) + "\n"},
                                  {"report_path", r.report_path},
                                  {"summary", r.summary},
                                  {"exit_code", r.exit_code},
                                  {"artifacts", std::move(artifacts)}};
    *out = dup(bundle.dump());
  });
}

}  // extern "C"
