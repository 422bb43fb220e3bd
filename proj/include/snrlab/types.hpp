#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace snrlab {

using Complex = std::complex<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed algebra/norm/region description or a dimension mismatch.
class SpecError : public Error {
 public:
  using Error::Error;
};

// The caller broke an operation's precondition (e.g. a non-unit vector).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A witness construction was asked to run outside its hypotheses.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Coordinates of an algebra element (or of a vector in C^n).
struct Element {
  std::vector<Complex> coords;

  Element() = default;
  explicit Element(std::vector<Complex> c) : coords(std::move(c)) {}
  Element(std::initializer_list<Complex> c) : coords(c) {}

  static Element zero(std::size_t n) { return Element(std::vector<Complex>(n)); }
  static Element basis(std::size_t n, std::size_t i) {
    Element e = zero(n);
    e.coords.at(i) = 1.0;
    return e;
  }

  std::size_t dim() const noexcept { return coords.size(); }
  std::span<const Complex> view() const noexcept { return coords; }
  Complex operator[](std::size_t i) const { return coords[i]; }
  Complex& operator[](std::size_t i) { return coords[i]; }

  bool is_finite() const noexcept {
    for (const auto& c : coords)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }

  Element scaled(Complex alpha) const {
    Element out = *this;
    for (auto& c : out.coords) c *= alpha;
    return out;
  }
};

inline bool operator==(const Element& a, const Element& b) { return a.coords == b.coords; }

}  // namespace snrlab
