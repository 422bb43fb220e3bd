#pragma once

// Test-side helpers. Everything here is computed independently of the
// library so it can serve as an oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "snrlab/algebra.hpp"

namespace testing {

using snrlab::Complex;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Complex gaussian() {
  std::normal_distribution<double> n;
  return {n(rng()), n(rng())};
}

inline snrlab::Element random_element(std::size_t n) {
  snrlab::Element e = snrlab::Element::zero(n);
  for (auto& c : e.coords) c = gaussian();
  return e;
}

// Plain triple loop over the structure constants.
inline std::vector<Complex> product(const snrlab::StructureTensor& t, const std::vector<Complex>& x,
                                    const std::vector<Complex>& y) {
  const std::size_t n = t.dim();
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[k] += t(i, j, k) * x[i] * y[j];
  return out;
}

// Norm straight from the definition.
inline double lp_norm(const std::vector<Complex>& x, double p, const std::vector<double>& w, double scale) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, w[i] * std::abs(x[i]));
    return scale * m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(w[i] * std::abs(x[i]), p);
  return scale * std::pow(s, 1.0 / p);
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Point-to-segment distance.
inline double seg_dist(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  if (std::norm(d) == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

}  // namespace testing
