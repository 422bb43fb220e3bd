#pragma once

// Explicit (g, h) constructions for convolution algebras: weighted l^1 over a
// semigroup, the discrete Volterra algebra l^1(G ∩ (0,1)), L^1(R), and
// L^1[0,1]. Each witness returns phi_h(f * g) together with the checks that
// g is a unit vector and h a norming functional for it.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "snrlab/algebra.hpp"

namespace snrlab {

// ---- Discrete semigroups -----------------------------------------------------

// A finite window of a semigroup. Products leaving the window are dropped
// (they contribute nothing to a convolution).
class DiscreteSemigroup {
 public:
  using Label = long long;
  using Op = std::function<std::optional<Label>(Label, Label)>;

  DiscreteSemigroup(std::string name, std::vector<Label> elements, Op op);

  // (N, +) on {1..n}.
  static DiscreteSemigroup naturals(Label n);
  // (Z+, +) on {0..n}; 0 is an identity.
  static DiscreteSemigroup nonnegative_integers(Label n);
  // N_r on {1..n} with m . n = n.
  static DiscreteSemigroup right_zero(Label n);
  // G_1 = (1/d)Z ∩ (0,1): label k stands for k/d, products k + l >= d vanish.
  static DiscreteSemigroup rational_volterra(Label d);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Label>& elements() const noexcept { return elements_; }
  bool contains(Label s) const;
  std::size_t index_of(Label s) const;
  // nullopt when the product is dropped or leaves the window.
  std::optional<Label> product(Label u, Label v) const;

  // Brute force over the window: s.t = s'.t (both kept) forces s = s'.
  bool right_cancellative() const;
  // Some e with s.e = s for every s in the window.
  bool has_right_identity() const;

 private:
  std::string name_;
  std::vector<Label> elements_;
  Op op_;
};

using Weight = std::function<double(DiscreteSemigroup::Label)>;

struct WeightedL1Element {
  std::map<DiscreteSemigroup::Label, Complex> coeffs;

  static WeightedL1Element delta(DiscreteSemigroup::Label s, Complex c = 1.0) { return {{{s, c}}}; }
  double norm(const Weight& weight) const;
};

// (f * g)(s) = sum over u.v = s of f(u) g(v).
WeightedL1Element discrete_convolve(const DiscreteSemigroup& s, const WeightedL1Element& f,
                                    const WeightedL1Element& g);

struct WitnessResult {
  Complex value;      // phi_h(f * g)
  Complex expected;   // z, or z ||f||_1 for the L^1 cases
  double dual_norm = 0.0;
  Complex pairing;    // phi_h(g)
  double element_norm = 0.0;  // ||g||
  // ||g|| = 1, ||h||_* = 1 and phi_h(g) = 1, to 1e-10.
  bool functional_ok = false;

  double error() const { return std::abs(value - expected); }
};

struct SemigroupWitnessOptions {
  // Run even when w(t) != 1 and report how the functional check fares.
  bool allow_heavy_t = false;
};

// Requires w(t) = 1, a right cancellative window without right identity,
// |z| <= ||f||, and every s.t inside the window.
WitnessResult semigroup_witness(const DiscreteSemigroup& s, const Weight& weight, const WeightedL1Element& f,
                                DiscreteSemigroup::Label t, Complex z,
                                const SemigroupWitnessOptions& options = {});

struct RationalAtom {
  long long num = 0, den = 1;  // the point num/den in (0,1)
  Complex value;
};

struct VolterraWitness {
  WitnessResult result;
  long long denominator = 0;  // the group (1/d)Z used
  long long t_num = 0;        // g = delta_{t_num/d}
  std::size_t n0 = 0;
};

// Needs |z| < ||f||_1.
VolterraWitness volterra_discrete_witness(const std::vector<RationalAtom>& f, Complex z);

// ---- Step functions ------------------------------------------------------------

// Piecewise constant: values[i] on [breaks[i], breaks[i+1]), zero outside.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breaks, std::vector<double> values);
  // c on [lo, hi).
  static StepFunction indicator(double lo, double hi, double c = 1.0);
  // Sum of disjoint pieces (lo, hi, value); overlaps are rejected.
  static StepFunction from_pieces(std::vector<std::tuple<double, double, double>> pieces);

  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator()(double x) const;
  double l1_norm() const;
  bool nonnegative() const;
  bool is_zero() const;
  // [lo, hi] spanned by the nonzero pieces; nullopt for the zero function.
  std::optional<std::pair<double, double>> support_hull() const;
  // inf |y - x| over y in the closed support.
  double distance_of_support_from(double x) const;
  // F(x) = int_{-inf}^x f and FF(x) = int_{-inf}^x F, exact.
  double antiderivative(double x) const;
  double second_antiderivative(double x) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

enum class QuadMode { exact, simpson };

struct QuadSpec {
  QuadMode mode = QuadMode::exact;
  // Simpson subintervals per smooth panel (even).
  std::size_t panels = 8;
};

// f >= 0 with supp f ∩ (-a, a) empty; a = 0 picks the largest such a.
WitnessResult l1_line_witness(const StepFunction& f, Complex z, double a = 0.0, const QuadSpec& quad = {});
// f >= 0 on [0,1] with supp f ⊆ [delta, 1 - delta]; delta = 0 picks the largest.
WitnessResult volterra_l1_witness(const StepFunction& f, Complex z, double delta = 0.0,
                                  const QuadSpec& quad = {});

// ---- Finite truncations as algebras ----------------------------------------------

// l^1(window, w) with the truncated convolution product.
AlgebraSpec semigroup_algebra(const DiscreteSemigroup& s, const Weight& weight);

// z values on a polar grid: `angles` directions times `radii` rings of
// radius. Closed grids end on the circle |z| = radius; open grids stay
// strictly inside.
std::vector<Complex> polar_grid(double radius, std::size_t angles, std::size_t radii, bool closed);

}  // namespace snrlab
