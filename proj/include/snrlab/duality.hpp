#pragma once

// Norming functionals D(x) = { phi : ||phi|| = 1 = phi(x) } for weighted,
// scaled l^p norms and their l^1-sums.
//
// Functionals act by the bilinear pairing phi_h(x) = sum_i h_i x_i (no
// conjugation). D(x) is convex, so it is represented by (a finite sampling
// of) its extreme points; since h -> phi_h(v) is affine, the value set over
// D(x) is the convex hull of the values at extreme points.
//
//   1 < p < inf : h_i = w_i^p |x_i|^(p-1) conj(sgn x_i), a single point.
//   p = 1       : h_i = w_i conj(sgn x_i) on supp x; off the support each h_i
//                 ranges over the circle of radius w_i.
//   p = inf     : convex combinations of w_j conj(sgn x_j) e_j over the
//                 coordinates attaining max_i w_i |x_i|.
//   scale c     : D_{c||.||}(x) = c * D_{||.||}(c x).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "snrlab/algebra.hpp"

namespace snrlab {

struct Functional {
  std::vector<Complex> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  Complex operator()(std::span<const Complex> x) const;
};

enum class FamilyKind { singleton, circle_product, simplex, block_product };

const char* to_string(FamilyKind kind) noexcept;

struct FamilyOptions {
  // Angular grid size per free circle, and simplex grid resolution.
  std::size_t resolution = 64;
  // Cap on emitted samples; larger product grids are subsampled.
  std::size_t budget = 4096;
  std::uint64_t seed = 0;
};

// Finite enumeration of functionals h = sum_f option_f[choice_f], one option
// chosen from each independent factor.
class FunctionalFamily {
 public:
  using Sparse = std::vector<std::pair<std::size_t, Complex>>;
  using Factor = std::vector<Sparse>;

  FunctionalFamily(FamilyKind kind, std::size_t dim, std::vector<Factor> factors,
                   const FamilyOptions& options);

  FamilyKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept;
  std::vector<Functional> samples() const;
  // phi_h(v) for each sample h, in the same order as samples().
  std::vector<Complex> values(std::span<const Complex> v) const;
  // Multiplies every functional by c.
  void scale(Complex c);

 private:
  std::vector<std::size_t> choice(std::size_t sample) const;

  FamilyKind kind_;
  std::size_t dim_;
  std::vector<Factor> factors_;
  std::size_t full_size_ = 1;
  // Explicit tuples when the full product exceeded the budget.
  std::vector<std::vector<std::size_t>> subsample_;
};

// Precondition: ||x|| = 1 to 1e-10. x = 0 is rejected.
FunctionalFamily norming_functionals(const NormSpec& norm, std::span<const Complex> x,
                                     const FamilyOptions& options = {});
FunctionalFamily norming_functionals(const SumNorm& norm, std::span<const Complex> x,
                                     const FamilyOptions& options = {});
FunctionalFamily norming_functionals(const AlgebraNorm& norm, std::span<const Complex> x,
                                     const FamilyOptions& options = {});

double dual_norm(const NormSpec& norm, std::span<const Complex> h);
double dual_norm(const SumNorm& norm, std::span<const Complex> h);
double dual_norm(const AlgebraNorm& norm, std::span<const Complex> h);

// |phi_h(x) - 1| <= tol and |dual_norm(h) - 1| <= tol.
bool verify_functional(const AlgebraNorm& norm, std::span<const Complex> x,
                       std::span<const Complex> h, double tol = 1e-9);

}  // namespace snrlab
