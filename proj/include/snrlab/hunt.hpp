#pragma once

// Randomized search for an algebra and element whose SNR is numerically
// non-convex. Unital algebras with ||1|| = 1 always have convex SNR, so a
// large defect there is an estimator artifact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snrlab/algebra.hpp"
#include "snrlab/snr.hpp"

namespace snrlab {

enum class CoefficientPool { integer, real };

struct HuntConfig {
  std::size_t dim = 2;
  CoefficientPool pool = CoefficientPool::integer;
  int coef_lo = -3, coef_hi = 3;  // integer pool range (0 excluded); real pool draws uniform in it
  std::size_t sparsity = 4;       // max nonzero tensor entries
  std::vector<Exponent> p_choices{Exponent::finite(1.0), Exponent::finite(2.0), Exponent::infinity()};
  std::size_t elements_per_algebra = 2;
  std::size_t samples = 20000;
  std::size_t resolution = 64;
  std::size_t probes = 20000;
  double threshold = 0.1;
  std::uint64_t seed = 0;
  std::size_t budget = 1000;
  std::size_t scale_samples = 2000;
  std::size_t recheck_factor = 4;
  // Null calibration: cycle through the 35 table algebras (all compatible p)
  // with their prescribed norms instead of drawing random tensors.
  bool table_only = false;
  unsigned threads = 0;

  void validate() const;
};

StructureTensor random_tensor(const HuntConfig& config, std::uint64_t seed);

struct DetectedIdentity {
  Element element;
  double norm = 0.0;
};

// e with e o x = x = x o e on the basis (residual <= 1e-8), and ||e||.
std::optional<DetectedIdentity> detect_identity(const AlgebraSpec& algebra);

struct HuntReport {
  std::size_t candidate = 0;
  std::size_t element_index = 0;
  int table_row = 0;  // table-only mode
  AlgebraSpec algebra;
  Element element;
  double defect = 0.0;          // at recheck_factor * samples; matches `cloud`
  double initial_defect = 0.0;  // at samples
  double associativity_residual = 0.0;
  double scale = 1.0;
  std::optional<DetectedIdentity> identity;
  bool unital_norm_one = false;
  PointCloud cloud;
  std::uint64_t estimate_seed = 0;
  std::uint64_t defect_seed = 0;
};

struct HuntSummary {
  std::vector<HuntReport> survivors;  // sorted by defect, descending
  std::size_t drawn = 0;
  std::size_t zero_tensors = 0;
  std::size_t associative = 0;
  std::size_t evaluated_elements = 0;
  std::size_t unital_norm_one = 0;
  std::size_t above_threshold = 0;   // before the recheck
  std::size_t faded_on_recheck = 0;  // defect dropped to <= threshold / 2
  std::size_t artifacts_rejected = 0;
  double max_defect = 0.0;
  // Defect histogram over all evaluated elements, bin edges in `histogram_edges`.
  std::vector<double> histogram_edges;
  std::vector<std::size_t> histogram;
};

HuntSummary hunt_nonconvex(const HuntConfig& config);

}  // namespace snrlab
