#pragma once

// Sampling estimator for the spatial numerical range
//   V_A(a) = union over ||x|| = 1 of { phi(a o x) : phi in D_A(x) }.
// Clouds are inner approximations: every point lies in V_A(a).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snrlab/algebra.hpp"
#include "snrlab/duality.hpp"

namespace snrlab {

enum class SamplerStrategy { gaussian, structured, mixed };

const char* to_string(SamplerStrategy s) noexcept;
SamplerStrategy parse_strategy(const std::string& text);

// Unit vectors for a given norm. Sample `index` depends only on (seed, index),
// so any partition of the index range reproduces the same sequence.
class SphereSampler {
 public:
  explicit SphereSampler(SamplerStrategy strategy = SamplerStrategy::mixed, std::uint64_t seed = 0)
      : strategy_(strategy), seed_(seed) {}

  SamplerStrategy strategy() const noexcept { return strategy_; }
  std::uint64_t seed() const noexcept { return seed_; }

  // |norm(x) - 1| <= 1e-12. In mixed mode the first n indices are the
  // coordinate axes.
  Element sample(const AlgebraNorm& norm, std::size_t index) const;

 private:
  SamplerStrategy strategy_;
  std::uint64_t seed_;
};

struct CloudMeta {
  std::string algebra;  // fingerprint()
  std::size_t samples = 0;
  std::size_t resolution = 0;
  std::uint64_t seed = 0;
  SamplerStrategy strategy = SamplerStrategy::mixed;
  double element_norm = 0.0;
};

struct PointCloud {
  std::vector<Complex> points;
  CloudMeta meta;
};

struct EstimateOptions {
  std::size_t samples = 50000;
  std::size_t resolution = 64;
  std::uint64_t seed = 0;
  SamplerStrategy strategy = SamplerStrategy::mixed;
  // Add interior points of each V_A(a; x) (centroid and radial midpoints of
  // the extreme values). Off: only extreme values are kept.
  bool fill = true;
  // Points closer than this on a square grid are merged; the first one in
  // sample order is kept. 0 disables merging.
  double dedup_grid = 1e-6;
  // Per-x cap on the functional family size.
  std::size_t budget = 256;
  unsigned threads = 0;
};

// { phi_h(a o x) : h in norming_functionals(x) }. Precondition ||x|| = 1.
std::vector<Complex> snr_at(const AlgebraSpec& algebra, const Element& a, const Element& x,
                            const FamilyOptions& options = {});

PointCloud estimate_snr(const AlgebraSpec& algebra, const Element& a,
                        const EstimateOptions& options = {});

// max |lambda| over the cloud, a lower bound for the numerical radius.
double numerical_radius(const PointCloud& cloud);
double numerical_radius(std::span<const Complex> points);

struct UnitalReport {
  double max_distance = 0.0;  // max over the cloud of dist(z, hull(V_A(a; 1)))
  double tolerance = 0.02;
  bool pass = false;
  std::size_t cloud_size = 0;
  std::vector<Complex> at_identity;  // V_A(a; 1_A) samples
};

// Checks V_A(a) = V_A(a; 1_A). Needs an identity with ||1_A|| = 1.
UnitalReport unital_reduction_check(const AlgebraSpec& algebra, const Element& a,
                                    const EstimateOptions& options = {}, double tolerance = 0.02);

}  // namespace snrlab
