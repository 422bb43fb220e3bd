#include "snrlab/snr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "snrlab/detail/parallel.hpp"
#include "snrlab/detail/random.hpp"
#include "snrlab/geometry.hpp"

namespace snrlab {

namespace {

constexpr std::uint64_t kSamplerStream = 0x5a3b1e;

std::vector<NormSpec> blocks_of(const AlgebraNorm& norm) {
  if (const auto* spec = std::get_if<NormSpec>(&norm)) return {*spec};
  return std::get<SumNorm>(norm).blocks;
}

void fill_gaussian(detail::Rng& rng, std::span<Complex> x) {
  for (auto& z : x) z = detail::complex_gaussian(rng);
}

// One structured vector inside a single block (weights w).
void fill_structured(detail::Rng& rng, std::span<Complex> x, const NormSpec& block) {
  const std::size_t n = x.size();
  const auto& w = block.weights;
  std::fill(x.begin(), x.end(), Complex{});
  switch (detail::uniform_index(rng, 4)) {
    case 0: {  // axis with a phase
      x[detail::uniform_index(rng, n)] = detail::unit_phase(rng);
      break;
    }
    case 1: {  // two coordinates on a 64-angle grid
      const std::size_t i = detail::uniform_index(rng, n);
      std::size_t j = detail::uniform_index(rng, n);
      if (n > 1)
        while (j == i) j = detail::uniform_index(rng, n);
      const double g = static_cast<double>(detail::uniform_index(rng, 64));
      const double angle = (g + 0.5) / 64.0 * std::numbers::pi / 2.0;
      x[i] += std::cos(angle) * detail::unit_phase(rng);
      x[j] += std::sin(angle) * detail::unit_phase(rng);
      break;
    }
    case 2: {  // random sparse support
      const std::size_t size = 1 + detail::uniform_index(rng, n);
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      for (std::size_t s = 0; s < size; ++s) {
        std::swap(idx[s], idx[s + detail::uniform_index(rng, n - s)]);
        x[idx[s]] = detail::complex_gaussian(rng);
      }
      break;
    }
    default: {  // several coordinates tied at the sup-norm level
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (detail::uniform(rng) < 0.5) {
          x[i] = detail::unit_phase(rng) / w[i];
          any = true;
        } else {
          x[i] = detail::uniform(rng) * detail::unit_phase(rng) / w[i];
        }
      }
      if (!any) x[detail::uniform_index(rng, n)] = detail::unit_phase(rng) / w[0];
      break;
    }
  }
}

struct CellHash {
  std::size_t operator()(const std::pair<long long, long long>& c) const noexcept {
    return static_cast<std::size_t>(detail::splitmix64(static_cast<std::uint64_t>(c.first) * 0x9e3779b97f4a7c15ULL ^
                                                       static_cast<std::uint64_t>(c.second)));
  }
};

using CellSet = std::unordered_set<std::pair<long long, long long>, CellHash>;

std::pair<long long, long long> cell_of(Complex z, double grid) {
  return {std::llround(z.real() / grid), std::llround(z.imag() / grid)};
}

void append_filled(std::vector<Complex>& out, const std::vector<Complex>& values, bool fill) {
  out.insert(out.end(), values.begin(), values.end());
  if (!fill || values.size() < 2) return;
  Complex centroid{};
  for (const auto& v : values) centroid += v;
  centroid /= static_cast<double>(values.size());
  double spread = 0.0;
  for (const auto& v : values) spread = std::max(spread, std::abs(v - centroid));
  if (spread <= 1e-12) return;
  out.push_back(centroid);
  for (const auto& v : values)
    for (double t : {0.25, 0.5, 0.75}) out.push_back(centroid + t * (v - centroid));
}

}  // namespace

const char* to_string(SamplerStrategy s) noexcept {
  switch (s) {
    case SamplerStrategy::gaussian: return "gaussian";
    case SamplerStrategy::structured: return "structured";
    case SamplerStrategy::mixed: return "mixed";
  }
  return "unknown";
}

SamplerStrategy parse_strategy(const std::string& text) {
  if (text == "gaussian") return SamplerStrategy::gaussian;
  if (text == "structured") return SamplerStrategy::structured;
  if (text == "mixed") return SamplerStrategy::mixed;
  throw SpecError("unknown sampler strategy '" + text + "'");
}

Element SphereSampler::sample(const AlgebraNorm& norm, std::size_t index) const {
  const std::size_t n = norm_dim(norm);
  if (n == 0) throw SpecError("sampling the sphere of a zero-dimensional space");
  Element x = Element::zero(n);
  auto rng = detail::rng_for(seed_, index, kSamplerStream);

  bool structured = strategy_ == SamplerStrategy::structured;
  if (strategy_ == SamplerStrategy::mixed) {
    if (index < n) {
      x.coords[index] = 1.0;
      return x.scaled(1.0 / norm_value(norm, x.coords));
    }
    structured = detail::uniform(rng) < 0.5;
  }

  const auto blocks = blocks_of(norm);
  for (;;) {
    if (!structured) {
      fill_gaussian(rng, x.coords);
    } else {
      std::fill(x.coords.begin(), x.coords.end(), Complex{});
      // For block norms, a random nonempty subset of blocks is active.
      std::vector<bool> active(blocks.size(), true);
      if (blocks.size() > 1) {
        bool any = false;
        for (std::size_t b = 0; b < blocks.size(); ++b) any |= (active[b] = detail::uniform(rng) < 0.5);
        if (!any) active[detail::uniform_index(rng, blocks.size())] = true;
      }
      std::size_t offset = 0;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::size_t m = blocks[b].dim();
        if (active[b]) {
          auto part = std::span<Complex>(x.coords).subspan(offset, m);
          fill_structured(rng, part, blocks[b]);
          const double nb = blocks[b](part);
          if (nb > 0.0) {
            // Random share of the total norm for this block.
            const double share = blocks.size() > 1 ? detail::uniform(rng, 0.05, 1.0) : 1.0;
            for (auto& z : part) z *= share / nb;
          }
        }
        offset += m;
      }
    }
    const double value = norm_value(norm, x.coords);
    if (value > 0.0 && std::isfinite(value)) return x.scaled(1.0 / value);
  }
}

std::vector<Complex> snr_at(const AlgebraSpec& algebra, const Element& a, const Element& x,
                            const FamilyOptions& options) {
  if (a.dim() != algebra.dim() || x.dim() != algebra.dim()) throw SpecError("snr_at: dimension mismatch");
  const auto family = norming_functionals(algebra.norm, x.coords, options);
  const Element ax = multiply(algebra, a, x);
  return family.values(ax.coords);
}

PointCloud estimate_snr(const AlgebraSpec& algebra, const Element& a, const EstimateOptions& options) {
  algebra.validate();
  const std::size_t n = algebra.dim();
  if (a.dim() != n) throw SpecError("estimate_snr: dimension mismatch");
  if (!a.is_finite()) throw SpecError("estimate_snr: element must be finite");
  if (options.samples == 0) throw PreconditionError("estimate_snr needs at least one sample");
  if (options.resolution == 0) throw PreconditionError("estimate_snr needs resolution >= 1");

  const auto left = algebra.tensor.left_multiplication(a.coords);
  const SphereSampler sampler(options.strategy, options.seed);
  const double grid = options.dedup_grid;

  const unsigned threads = detail::resolve_threads(options.threads);
  // Fixed chunking by sample index; the worker count only decides who runs
  // which chunk, so the merged result does not depend on it.
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (options.samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Complex>> parts(chunks);

  detail::parallel_chunks(chunks, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<Complex> v(n);
    for (std::size_t c = begin; c < end; ++c) {
      std::vector<Complex> out;
      CellSet seen;
      const std::size_t lo = c * kChunk, hi = std::min(options.samples, lo + kChunk);
      std::vector<Complex> local;
      for (std::size_t s = lo; s < hi; ++s) {
        const Element x = sampler.sample(algebra.norm, s);
        for (std::size_t k = 0; k < n; ++k) {
          Complex acc{};
          for (std::size_t j = 0; j < n; ++j) acc += left[k * n + j] * x.coords[j];
          v[k] = acc;
        }
        FamilyOptions fo{options.resolution, options.budget, detail::mix_seed(options.seed, s, 0xfa)};
        const auto values = norming_functionals(algebra.norm, x.coords, fo).values(v);
        local.clear();
        append_filled(local, values, options.fill);
        for (const auto& z : local) {
          if (grid > 0.0 && !seen.insert(cell_of(z, grid)).second) continue;
          out.push_back(z);
        }
      }
      parts[c] = std::move(out);
    }
  });

  PointCloud cloud;
  CellSet seen;
  for (auto& part : parts)
    for (const auto& z : part)
      if (grid <= 0.0 || seen.insert(cell_of(z, grid)).second) cloud.points.push_back(z);
  cloud.meta = CloudMeta{fingerprint(algebra), options.samples, options.resolution, options.seed,
                         options.strategy, norm(algebra, a)};
  return cloud;
}

double numerical_radius(std::span<const Complex> points) {
  if (points.empty()) throw PreconditionError("numerical radius of an empty cloud");
  double r = 0.0;
  for (const auto& z : points) r = std::max(r, std::abs(z));
  return r;
}

double numerical_radius(const PointCloud& cloud) { return numerical_radius(cloud.points); }

UnitalReport unital_reduction_check(const AlgebraSpec& algebra, const Element& a,
                                    const EstimateOptions& options, double tolerance) {
  if (!algebra.identity) throw PreconditionError("unital reduction needs an identity");
  const Element& e = algebra.identity->element;
  if (std::abs(norm(algebra, e) - 1.0) > 1e-10)
    throw PreconditionError("unital reduction needs ||1_A|| = 1");

  UnitalReport report;
  report.tolerance = tolerance;
  FamilyOptions fo{options.resolution, std::max<std::size_t>(options.budget, 4096), options.seed};
  report.at_identity = snr_at(algebra, a, e, fo);
  const HullPolygon hull = convex_hull(report.at_identity);
  const PointCloud cloud = estimate_snr(algebra, a, options);
  report.cloud_size = cloud.points.size();
  for (const auto& z : cloud.points) report.max_distance = std::max(report.max_distance, hull.distance(z));
  report.pass = report.max_distance <= tolerance;
  return report;
}

}  // namespace snrlab
