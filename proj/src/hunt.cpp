#include "snrlab/hunt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snrlab/detail/parallel.hpp"
#include "snrlab/detail/random.hpp"
#include "snrlab/geometry.hpp"
#include "snrlab/oracles.hpp"

namespace snrlab {

namespace {

constexpr std::uint64_t kTensorStream = 0x7e45;
constexpr std::uint64_t kElementStream = 0xe1e3;
constexpr std::uint64_t kEstimateStream = 0xe5e5;
constexpr std::uint64_t kDefectStream = 0xdef0;
constexpr std::uint64_t kNormStream = 0x90a3;

struct Outcome {
  bool zero = false;
  bool associative = false;
  bool unital_norm_one = false;
  std::vector<double> defects;
  std::size_t above = 0, faded = 0, artifacts = 0;
  std::vector<HuntReport> survivors;
};

Element random_unit_element(const AlgebraSpec& a, detail::Rng& rng) {
  for (;;) {
    Element x = Element::zero(a.dim());
    for (auto& c : x.coords) c = detail::complex_gaussian(rng);
    const double n = norm(a, x);
    if (n > 0.0 && std::isfinite(n)) return x.scaled(1.0 / n);
  }
}

std::vector<std::pair<int, Exponent>> table_pairs(const HuntConfig& config) {
  std::vector<std::pair<int, Exponent>> out;
  for (int row = 1; row <= kTableRows; ++row)
    for (const auto& p : config.p_choices)
      if (row_accepts(row, p)) out.emplace_back(row, p);
  return out;
}

double defect_of(const PointCloud& cloud, std::size_t probes, std::uint64_t seed) {
  return convexity_defect(cloud.points, DefectOptions{probes, seed});
}

}  // namespace

void HuntConfig::validate() const {
  if (dim < 1 || dim > 4) throw SpecError("hunt dim must be in 1..4");
  if (coef_lo > coef_hi) throw SpecError("hunt coefficient range is empty");
  if (pool == CoefficientPool::integer && coef_lo == 0 && coef_hi == 0)
    throw SpecError("integer pool needs a nonzero coefficient");
  if (p_choices.empty()) throw SpecError("hunt needs at least one p");
  if (elements_per_algebra == 0) throw SpecError("hunt needs elements_per_algebra >= 1");
  if (samples == 0 || resolution == 0 || probes == 0) throw SpecError("hunt samples, resolution and probes must be >= 1");
  if (!(threshold > 0.0)) throw SpecError("hunt threshold must be > 0");
  if (recheck_factor == 0) throw SpecError("hunt recheck_factor must be >= 1");
  if (scale_samples == 0) throw SpecError("hunt scale_samples must be >= 1");
}

StructureTensor random_tensor(const HuntConfig& config, std::uint64_t seed) {
  const std::size_t n = config.dim;
  StructureTensor t(n);
  if (config.sparsity == 0) return t;
  auto rng = detail::rng_for(seed, 0, kTensorStream);
  const std::size_t terms = 1 + detail::uniform_index(rng, config.sparsity);
  for (std::size_t m = 0; m < terms; ++m) {
    const std::size_t i = detail::uniform_index(rng, n), j = detail::uniform_index(rng, n),
                      k = detail::uniform_index(rng, n);
    double c;
    if (config.pool == CoefficientPool::integer) {
      std::vector<int> pool;
      for (int v = config.coef_lo; v <= config.coef_hi; ++v)
        if (v != 0) pool.push_back(v);
      c = pool[detail::uniform_index(rng, pool.size())];
    } else {
      c = detail::uniform(rng, config.coef_lo, config.coef_hi);
    }
    t.set(i, j, k, c);
  }
  return t;
}

std::optional<DetectedIdentity> detect_identity(const AlgebraSpec& algebra) {
  auto e = solve_identity(algebra.tensor, 1e-8);
  if (!e) return std::nullopt;
  const double n = norm(algebra, *e);
  return DetectedIdentity{std::move(*e), n};
}

HuntSummary hunt_nonconvex(const HuntConfig& config) {
  config.validate();
  const auto pairs = config.table_only ? table_pairs(config) : std::vector<std::pair<int, Exponent>>{};
  const std::size_t candidates = config.table_only ? std::min(config.budget, pairs.size()) : config.budget;

  std::vector<Outcome> outcomes(candidates);
  auto evaluate = [&](std::size_t c) {
    Outcome& out = outcomes[c];
    AlgebraSpec algebra;
    double scale = 1.0;
    int row = 0;
    if (config.table_only) {
      row = pairs[c].first;
      algebra = table_algebra(row, pairs[c].second);
      out.associative = true;
    } else {
      StructureTensor t = random_tensor(config, detail::mix_seed(config.seed, c, kTensorStream));
      if (t.is_zero()) {
        out.zero = true;
        return;
      }
      if (!is_associative(t)) return;
      out.associative = true;
      auto prng = detail::rng_for(config.seed, c, kNormStream);
      const Exponent p = config.p_choices[detail::uniform_index(prng, config.p_choices.size())];
      algebra = AlgebraSpec{std::move(t), NormSpec::lp(p, config.dim), std::nullopt};
      scale = submultiplicative_scale(algebra, config.scale_samples, detail::mix_seed(config.seed, c, kNormStream));
      algebra.norm = NormSpec::lp(p, config.dim, scale);
    }
    const double residual = associativity_residual(algebra.tensor);
    const auto identity = detect_identity(algebra);
    out.unital_norm_one = identity && std::abs(identity->norm - 1.0) <= 1e-6;

    auto erng = detail::rng_for(config.seed, c, kElementStream);
    for (std::size_t e = 0; e < config.elements_per_algebra; ++e) {
      const Element a = random_unit_element(algebra, erng);
      const std::uint64_t idx = c * 1024 + e;
      EstimateOptions eo;
      eo.samples = config.samples;
      eo.resolution = config.resolution;
      eo.seed = detail::mix_seed(config.seed, idx, kEstimateStream);
      eo.threads = 1;
      const std::uint64_t dseed = detail::mix_seed(config.seed, idx, kDefectStream);
      const PointCloud cloud = estimate_snr(algebra, a, eo);
      const double defect = defect_of(cloud, config.probes, dseed);
      out.defects.push_back(defect);
      if (defect <= config.threshold) continue;
      ++out.above;

      eo.samples = config.samples * config.recheck_factor;
      PointCloud recheck = estimate_snr(algebra, a, eo);
      const double again = defect_of(recheck, config.probes, dseed);
      if (again <= config.threshold / 2.0) {
        ++out.faded;
        continue;
      }
      if (out.unital_norm_one) {
        // Convex by the unital reduction; the defect is a sampling artifact.
        ++out.artifacts;
        continue;
      }
      HuntReport r;
      r.candidate = c;
      r.element_index = e;
      r.table_row = row;
      r.algebra = algebra;
      r.element = a;
      r.defect = again;
      r.initial_defect = defect;
      r.associativity_residual = residual;
      r.scale = scale;
      r.identity = identity;
      r.unital_norm_one = out.unital_norm_one;
      r.cloud = std::move(recheck);
      r.estimate_seed = eo.seed;
      r.defect_seed = dseed;
      out.survivors.push_back(std::move(r));
    }
  };

  detail::parallel_chunks(candidates, detail::resolve_threads(config.threads), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) evaluate(c);
  });

  HuntSummary s;
  s.drawn = candidates;
  s.histogram_edges = {0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, std::numeric_limits<double>::infinity()};
  s.histogram.assign(s.histogram_edges.size() - 1, 0);
  for (auto& o : outcomes) {
    s.zero_tensors += o.zero;
    s.associative += o.associative;
    s.unital_norm_one += o.unital_norm_one;
    s.above_threshold += o.above;
    s.faded_on_recheck += o.faded;
    s.artifacts_rejected += o.artifacts;
    for (double d : o.defects) {
      ++s.evaluated_elements;
      s.max_defect = std::max(s.max_defect, d);
      for (std::size_t b = 0; b + 1 < s.histogram_edges.size(); ++b)
        if (d >= s.histogram_edges[b] && d < s.histogram_edges[b + 1]) {
          ++s.histogram[b];
          break;
        }
    }
    for (auto& r : o.survivors) s.survivors.push_back(std::move(r));
  }
  std::stable_sort(s.survivors.begin(), s.survivors.end(),
                   [](const HuntReport& a, const HuntReport& b) { return a.defect > b.defect; });
  return s;
}

}  // namespace snrlab
