#include "snrlab/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snrlab/detail/random.hpp"

namespace snrlab {

namespace {

constexpr double kUnitTol = 1e-10;
// Ties for the max coordinate in the sup norm.
constexpr double kTieTol = 1e-12;

Complex conj_sign(Complex z) { return std::conj(z) / std::abs(z); }

// k equispaced angles in [-pi, pi), starting at 0.
std::vector<Complex> circle_grid(std::size_t k) {
  std::vector<Complex> out;
  out.reserve(k);
  for (std::size_t m = 0; m < k; ++m) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(k);
    if (theta >= std::numbers::pi) theta -= 2.0 * std::numbers::pi;
    out.push_back(std::polar(1.0, theta));
  }
  return out;
}

void check_unit(double value) {
  if (value == 0.0) throw PreconditionError("no norming functional exists at x = 0");
  if (std::abs(value - 1.0) > kUnitTol)
    throw PreconditionError("norming functionals need ||x|| = 1 (got " + std::to_string(value) + ")");
}

// Grid of convex weights over m vertices at resolution k (all compositions of
// k into m parts), capped by `budget` with vertices always kept.
std::vector<std::vector<double>> simplex_grid(std::size_t m, std::size_t k, std::size_t budget,
                                              std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  // C(k + m - 1, m - 1), saturating.
  double count = 1.0;
  for (std::size_t i = 1; i < m; ++i) count *= static_cast<double>(k + i) / static_cast<double>(i);
  if (count <= static_cast<double>(budget)) {
    std::vector<std::size_t> parts(m, 0);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
      if (pos + 1 == m) {
        parts[pos] = left;
        std::vector<double> w(m);
        for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(parts[i]) / static_cast<double>(k);
        out.push_back(std::move(w));
        return;
      }
      for (std::size_t c = 0; c <= left; ++c) {
        parts[pos] = left - c;
        self(self, pos + 1, c);
      }
    };
    rec(rec, 0, k);
    return out;
  }
  for (std::size_t v = 0; v < m; ++v) {
    std::vector<double> w(m, 0.0);
    w[v] = 1.0;
    out.push_back(std::move(w));
  }
  auto rng = detail::rng_for(seed, 0, 0x51a9);
  while (out.size() < budget) {
    std::vector<double> w(m);
    double total = 0.0;
    for (auto& x : w) {
      double u = detail::uniform(rng);
      while (u <= 0.0) u = detail::uniform(rng);
      x = -std::log(u);
      total += x;
    }
    for (auto& x : w) x /= total;
    out.push_back(std::move(w));
  }
  return out;
}

// Unscaled family at y (||y||_unscaled = 1); the caller applies the scale.
FunctionalFamily base_family(const NormSpec& norm, std::span<const Complex> y,
                             const FamilyOptions& options) {
  const std::size_t n = y.size();
  const auto& w = norm.weights;

  if (norm.p.is_infinite()) {
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, w[i] * std::abs(y[i]));
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < n; ++i)
      if (w[i] * std::abs(y[i]) >= top * (1.0 - kTieTol)) ties.push_back(i);
    if (ties.size() == 1) {
      const std::size_t j = ties.front();
      return FunctionalFamily(FamilyKind::singleton, n, {{{{j, w[j] * conj_sign(y[j])}}}}, options);
    }
    FunctionalFamily::Factor options_list;
    for (const auto& weights : simplex_grid(ties.size(), options.resolution, options.budget, options.seed)) {
      FunctionalFamily::Sparse h;
      for (std::size_t t = 0; t < ties.size(); ++t) {
        if (weights[t] == 0.0) continue;
        const std::size_t j = ties[t];
        h.emplace_back(j, weights[t] * w[j] * conj_sign(y[j]));
      }
      options_list.push_back(std::move(h));
    }
    return FunctionalFamily(FamilyKind::simplex, n, {std::move(options_list)}, options);
  }

  if (norm.p.is_one()) {
    FunctionalFamily::Sparse base;
    std::vector<FunctionalFamily::Factor> factors;
    const auto grid = circle_grid(options.resolution);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] != Complex{}) {
        base.emplace_back(i, w[i] * conj_sign(y[i]));
      } else {
        free.push_back(i);
      }
    }
    factors.push_back({base});
    for (std::size_t i : free) {
      FunctionalFamily::Factor circle;
      for (const auto& e : grid) circle.push_back({{i, w[i] * e}});
      factors.push_back(std::move(circle));
    }
    const auto kind = free.empty() ? FamilyKind::singleton : FamilyKind::circle_product;
    return FunctionalFamily(kind, n, std::move(factors), options);
  }

  const double p = norm.p.value();
  FunctionalFamily::Sparse h;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] == Complex{}) continue;
    const double r = std::abs(y[i]);
    h.emplace_back(i, std::pow(w[i], p) * std::pow(r, p - 1.0) * conj_sign(y[i]));
  }
  return FunctionalFamily(FamilyKind::singleton, n, {{h}}, options);
}

// Extreme points of the dual unit ball of `norm` (scale included): every
// functional with dual norm <= 1 is a convex combination of these.
std::vector<FunctionalFamily::Factor> dual_ball_extremes(const NormSpec& norm, std::size_t offset,
                                                         const FamilyOptions& options) {
  const std::size_t n = norm.dim();
  const auto grid = circle_grid(options.resolution);
  const double c = norm.scale;
  std::vector<FunctionalFamily::Factor> factors;
  if (norm.p.is_one()) {
    // Polydisk |h_i| <= c w_i.
    for (std::size_t i = 0; i < n; ++i) {
      FunctionalFamily::Factor circle;
      for (const auto& e : grid) circle.push_back({{offset + i, c * norm.weights[i] * e}});
      factors.push_back(std::move(circle));
    }
    return factors;
  }
  FunctionalFamily::Factor single;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : grid) single.push_back({{offset + i, c * norm.weights[i] * e}});
  if (!norm.p.is_infinite()) {
    // The dual sphere is smooth: add norming functionals of random directions.
    auto rng = detail::rng_for(options.seed, offset, 0xd0a1);
    const NormSpec unscaled = norm.unscaled();
    for (std::size_t s = 0; s < options.resolution; ++s) {
      std::vector<Complex> v(n);
      for (auto& z : v) z = detail::complex_gaussian(rng);
      const double nv = unscaled(v);
      for (auto& z : v) z /= nv;
      const auto fam = base_family(unscaled, v, options);
      FunctionalFamily::Sparse h;
      const auto sample = fam.samples().front();
      for (std::size_t i = 0; i < n; ++i)
        if (sample.coords[i] != Complex{}) h.emplace_back(offset + i, c * sample.coords[i]);
      single.push_back(std::move(h));
    }
  }
  factors.push_back(std::move(single));
  return factors;
}

}  // namespace

Complex Functional::operator()(std::span<const Complex> x) const {
  if (x.size() != coords.size()) throw SpecError("functional: dimension mismatch");
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += coords[i] * x[i];
  return s;
}

const char* to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::singleton: return "singleton";
    case FamilyKind::circle_product: return "circle-product";
    case FamilyKind::simplex: return "simplex";
    case FamilyKind::block_product: return "block-product";
  }
  return "unknown";
}

FunctionalFamily::FunctionalFamily(FamilyKind kind, std::size_t dim, std::vector<Factor> factors,
                                   const FamilyOptions& options)
    : kind_(kind), dim_(dim), factors_(std::move(factors)) {
  double full = 1.0;
  for (const auto& f : factors_) {
    if (f.empty()) throw SpecError("functional family factor without options");
    full *= static_cast<double>(f.size());
  }
  if (full <= static_cast<double>(std::max<std::size_t>(options.budget, 1))) {
    full_size_ = static_cast<std::size_t>(full);
    return;
  }
  // Pseudorandom tuples; the all-zero tuple (theta = 0 everywhere) is kept.
  auto rng = detail::rng_for(options.seed, dim, 0xfa31);
  subsample_.emplace_back(factors_.size(), 0);
  while (subsample_.size() < options.budget) {
    std::vector<std::size_t> t(factors_.size());
    for (std::size_t f = 0; f < factors_.size(); ++f) t[f] = detail::uniform_index(rng, factors_[f].size());
    subsample_.push_back(std::move(t));
  }
}

std::size_t FunctionalFamily::size() const noexcept {
  return subsample_.empty() ? full_size_ : subsample_.size();
}

std::vector<std::size_t> FunctionalFamily::choice(std::size_t sample) const {
  if (!subsample_.empty()) return subsample_[sample];
  // Mixed radix, last factor fastest.
  std::vector<std::size_t> t(factors_.size());
  for (std::size_t f = factors_.size(); f-- > 0;) {
    t[f] = sample % factors_[f].size();
    sample /= factors_[f].size();
  }
  return t;
}

std::vector<Functional> FunctionalFamily::samples() const {
  std::vector<Functional> out;
  out.reserve(size());
  for (std::size_t s = 0; s < size(); ++s) {
    Functional h{std::vector<Complex>(dim_)};
    const auto t = choice(s);
    for (std::size_t f = 0; f < factors_.size(); ++f)
      for (const auto& [i, c] : factors_[f][t[f]]) h.coords[i] += c;
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<Complex> FunctionalFamily::values(std::span<const Complex> v) const {
  if (v.size() != dim_) throw SpecError("functional family: dimension mismatch");
  std::vector<std::vector<Complex>> option_values(factors_.size());
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    option_values[f].reserve(factors_[f].size());
    for (const auto& opt : factors_[f]) {
      Complex s{};
      for (const auto& [i, c] : opt) s += c * v[i];
      option_values[f].push_back(s);
    }
  }
  std::vector<Complex> out;
  out.reserve(size());
  for (std::size_t s = 0; s < size(); ++s) {
    const auto t = choice(s);
    Complex total{};
    for (std::size_t f = 0; f < factors_.size(); ++f) total += option_values[f][t[f]];
    out.push_back(total);
  }
  return out;
}

void FunctionalFamily::scale(Complex c) {
  for (auto& f : factors_)
    for (auto& opt : f)
      for (auto& entry : opt) entry.second *= c;
}

FunctionalFamily norming_functionals(const NormSpec& norm, std::span<const Complex> x,
                                     const FamilyOptions& options) {
  if (x.size() != norm.dim()) throw SpecError("norming_functionals: dimension mismatch");
  check_unit(norm(x));
  std::vector<Complex> y(x.begin(), x.end());
  for (auto& c : y) c *= norm.scale;
  auto family = base_family(norm.unscaled(), y, options);
  family.scale(norm.scale);
  return family;
}

FunctionalFamily norming_functionals(const SumNorm& norm, std::span<const Complex> x,
                                     const FamilyOptions& options) {
  if (x.size() != norm.dim()) throw SpecError("norming_functionals: dimension mismatch");
  check_unit(norm(x));
  std::vector<FunctionalFamily::Factor> factors;
  std::size_t offset = 0;
  for (const auto& block : norm.blocks) {
    const auto part = x.subspan(offset, block.dim());
    const double nb = block(part);
    if (nb == 0.0) {
      auto extremes = dual_ball_extremes(block, offset, options);
      factors.insert(factors.end(), std::make_move_iterator(extremes.begin()),
                     std::make_move_iterator(extremes.end()));
    } else {
      // phi_b(x_b) must equal ||x_b||_b, so phi_b norms x_b / ||x_b||.
      std::vector<Complex> unit(part.begin(), part.end());
      for (auto& c : unit) c /= nb;
      const auto fam = norming_functionals(block, unit, options);
      FunctionalFamily::Factor f;
      for (const auto& h : fam.samples()) {
        FunctionalFamily::Sparse sparse;
        for (std::size_t i = 0; i < h.dim(); ++i)
          if (h.coords[i] != Complex{}) sparse.emplace_back(offset + i, h.coords[i]);
        f.push_back(std::move(sparse));
      }
      factors.push_back(std::move(f));
    }
    offset += block.dim();
  }
  return FunctionalFamily(FamilyKind::block_product, norm.dim(), std::move(factors), options);
}

FunctionalFamily norming_functionals(const AlgebraNorm& norm, std::span<const Complex> x,
                                     const FamilyOptions& options) {
  return std::visit([&](const auto& n) { return norming_functionals(n, x, options); }, norm);
}

double dual_norm(const NormSpec& norm, std::span<const Complex> h) {
  if (h.size() != norm.dim()) throw SpecError("dual_norm: dimension mismatch");
  const auto& w = norm.weights;
  double base = 0.0;
  if (norm.p.is_infinite()) {
    for (std::size_t i = 0; i < h.size(); ++i) base += std::abs(h[i]) / w[i];
  } else if (norm.p.is_one()) {
    for (std::size_t i = 0; i < h.size(); ++i) base = std::max(base, std::abs(h[i]) / w[i]);
  } else {
    const double q = norm.p.conjugate().value();
    double m = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) m = std::max(m, std::abs(h[i]) / w[i]);
    if (m > 0.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) s += std::pow(std::abs(h[i]) / w[i] / m, q);
      base = m * std::pow(s, 1.0 / q);
    }
  }
  return base / norm.scale;
}

double dual_norm(const SumNorm& norm, std::span<const Complex> h) {
  if (h.size() != norm.dim()) throw SpecError("dual_norm: dimension mismatch");
  double out = 0.0;
  std::size_t offset = 0;
  for (const auto& block : norm.blocks) {
    out = std::max(out, dual_norm(block, h.subspan(offset, block.dim())));
    offset += block.dim();
  }
  return out;
}

double dual_norm(const AlgebraNorm& norm, std::span<const Complex> h) {
  return std::visit([&](const auto& n) { return dual_norm(n, h); }, norm);
}

bool verify_functional(const AlgebraNorm& norm, std::span<const Complex> x,
                       std::span<const Complex> h, double tol) {
  if (x.size() != h.size()) throw SpecError("verify_functional: dimension mismatch");
  Complex pairing{};
  for (std::size_t i = 0; i < x.size(); ++i) pairing += h[i] * x[i];
  return std::abs(pairing - 1.0) <= tol && std::abs(dual_norm(norm, h) - 1.0) <= tol;
}

}  // namespace snrlab
