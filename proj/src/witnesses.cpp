#include "snrlab/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "snrlab/duality.hpp"

namespace snrlab {

using Label = DiscreteSemigroup::Label;

namespace {

constexpr double kFunctionalTol = 1e-10;

// Checks a discrete (g, h) pair against the weighted l^1 norm on the labels
// where g or h is nonzero; the dual norm only sees those labels anyway.
void check_discrete(WitnessResult& r, const WeightedL1Element& g, const std::map<Label, Complex>& h,
                    const Weight& weight) {
  std::set<Label> labels;
  for (const auto& [s, c] : g.coeffs) labels.insert(s);
  for (const auto& [s, c] : h) labels.insert(s);
  NormSpec norm{Exponent::finite(1.0), {}, 1.0};
  std::vector<Complex> gx, hx;
  for (Label s : labels) {
    norm.weights.push_back(weight(s));
    auto gi = g.coeffs.find(s);
    gx.push_back(gi == g.coeffs.end() ? Complex{} : gi->second);
    auto hi = h.find(s);
    hx.push_back(hi == h.end() ? Complex{} : hi->second);
  }
  r.element_norm = norm(gx);
  r.dual_norm = dual_norm(norm, hx);
  r.pairing = Functional{hx}(gx);
  r.functional_ok = std::abs(r.element_norm - 1.0) <= kFunctionalTol &&
                    verify_functional(norm, gx, hx, kFunctionalTol);
}

Complex pair(const WeightedL1Element& f, const std::map<Label, Complex>& h) {
  Complex s{};
  for (const auto& [u, c] : f.coeffs) {
    auto it = h.find(u);
    if (it != h.end()) s += c * it->second;
  }
  return s;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

// A step function with complex values, used for h.
struct ComplexStep {
  std::vector<double> breaks;
  std::vector<Complex> values;

  Complex at(double x) const {
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      if (x >= breaks[i] && x < breaks[i + 1]) return values[i];
    return {};
  }
};

// Inner integral int f(s - t) dt over t in [c, d] by Simpson, panels split
// where s - t crosses a break of f.
double inner_simpson(const StepFunction& f, double s, double c, double d, std::size_t m) {
  std::vector<double> cuts{c, d};
  for (double b : f.breaks())
    if (s - b > c && s - b < d) cuts.push_back(s - b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double u = cuts[p], v = cuts[p + 1], w = v - u;
    if (w <= 0.0) continue;
    // Nodes are nudged off the panel ends, where f jumps.
    auto eval = [&](double t) { return f(s - std::clamp(t, u + 1e-12 * w, v - 1e-12 * w)); };
    const double hstep = w / static_cast<double>(m);
    double acc = eval(u) + eval(v);
    for (std::size_t k = 1; k < m; ++k) acc += (k % 2 ? 4.0 : 2.0) * eval(u + hstep * static_cast<double>(k));
    total += acc * hstep / 3.0;
  }
  return total;
}

// int int f(s - t) g(t) h(s) dt ds with g and h step functions.
Complex double_integral(const StepFunction& f, const StepFunction& g, const ComplexStep& h,
                        const QuadSpec& quad) {
  Complex total{};
  const auto& gb = g.breaks();
  if (quad.mode == QuadMode::exact) {
    for (std::size_t i = 0; i + 1 < gb.size(); ++i) {
      const double gamma = g.values()[i];
      if (gamma == 0.0) continue;
      const double c = gb[i], d = gb[i + 1];
      for (std::size_t j = 0; j + 1 < h.breaks.size(); ++j) {
        const Complex eta = h.values[j];
        if (eta == Complex{}) continue;
        const double e0 = h.breaks[j], e1 = h.breaks[j + 1];
        // int_c^d int_e0^e1 f(s - t) ds dt via FF'' = f.
        const double area = f.second_antiderivative(e1 - c) - f.second_antiderivative(e1 - d) -
                            f.second_antiderivative(e0 - c) + f.second_antiderivative(e0 - d);
        total += gamma * eta * area;
      }
    }
    return total;
  }
  const std::size_t m = std::max<std::size_t>(2, quad.panels + quad.panels % 2);
  auto conv = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < gb.size(); ++i)
      if (g.values()[i] != 0.0) acc += g.values()[i] * inner_simpson(f, s, gb[i], gb[i + 1], m);
    return acc;
  };
  for (std::size_t j = 0; j + 1 < h.breaks.size(); ++j) {
    const Complex eta = h.values[j];
    if (eta == Complex{}) continue;
    const double e0 = h.breaks[j], e1 = h.breaks[j + 1];
    // f * g is piecewise linear with kinks at (break of f) + (break of g).
    std::vector<double> cuts{e0, e1};
    for (double b : f.breaks())
      for (double c : gb)
        if (b + c > e0 && b + c < e1) cuts.push_back(b + c);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double u = cuts[p], v = cuts[p + 1];
      if (v <= u) continue;
      const double hstep = (v - u) / static_cast<double>(m);
      double acc = conv(u) + conv(v);
      for (std::size_t k = 1; k < m; ++k) acc += (k % 2 ? 4.0 : 2.0) * conv(u + hstep * static_cast<double>(k));
      total += eta * (acc * hstep / 3.0);
    }
  }
  return total;
}

// Reduces the L^1 pairing of step functions to a weighted l^1 norm on the
// common refinement: weights len/min_len, scale min_len, h scaled by len.
void check_continuous(WitnessResult& r, const StepFunction& g, const ComplexStep& h) {
  std::vector<double> cuts(g.breaks());
  cuts.insert(cuts.end(), h.breaks.begin(), h.breaks.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> lengths, mids;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 0.0) continue;
    lengths.push_back(len);
    mids.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  }
  const double min_len = *std::min_element(lengths.begin(), lengths.end());
  NormSpec norm{Exponent::finite(1.0), {}, min_len};
  std::vector<Complex> gx, hx;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    norm.weights.push_back(lengths[i] / min_len);
    gx.emplace_back(g(mids[i]));
    hx.push_back(h.at(mids[i]) * lengths[i]);
  }
  r.element_norm = norm(gx);
  r.dual_norm = dual_norm(norm, hx);
  r.pairing = Functional{hx}(gx);
  r.functional_ok = std::abs(r.element_norm - 1.0) <= kFunctionalTol &&
                    verify_functional(norm, gx, hx, kFunctionalTol);
}

}  // namespace

// ---- Semigroups -----------------------------------------------------------------

DiscreteSemigroup::DiscreteSemigroup(std::string name, std::vector<Label> elements, Op op)
    : name_(std::move(name)), elements_(std::move(elements)), op_(std::move(op)) {
  if (elements_.empty()) throw SpecError("semigroup window must be nonempty");
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
    throw SpecError("semigroup window has repeated labels");
  if (!op_) throw SpecError("semigroup needs an operation");
}

DiscreteSemigroup DiscreteSemigroup::naturals(Label n) {
  if (n < 1) throw SpecError("window of N needs n >= 1");
  std::vector<Label> e;
  for (Label k = 1; k <= n; ++k) e.push_back(k);
  return DiscreteSemigroup("N", std::move(e), [](Label u, Label v) -> std::optional<Label> { return u + v; });
}

DiscreteSemigroup DiscreteSemigroup::nonnegative_integers(Label n) {
  if (n < 0) throw SpecError("window of Z+ needs n >= 0");
  std::vector<Label> e;
  for (Label k = 0; k <= n; ++k) e.push_back(k);
  return DiscreteSemigroup("Z+", std::move(e), [](Label u, Label v) -> std::optional<Label> { return u + v; });
}

DiscreteSemigroup DiscreteSemigroup::right_zero(Label n) {
  if (n < 1) throw SpecError("window of N_r needs n >= 1");
  std::vector<Label> e;
  for (Label k = 1; k <= n; ++k) e.push_back(k);
  return DiscreteSemigroup("N_r", std::move(e), [](Label, Label v) -> std::optional<Label> { return v; });
}

DiscreteSemigroup DiscreteSemigroup::rational_volterra(Label d) {
  if (d < 2) throw SpecError("discrete Volterra window needs d >= 2");
  std::vector<Label> e;
  for (Label k = 1; k < d; ++k) e.push_back(k);
  return DiscreteSemigroup("G1(1/" + std::to_string(d) + ")", std::move(e),
                           [d](Label u, Label v) -> std::optional<Label> {
                             if (u + v >= d) return std::nullopt;
                             return u + v;
                           });
}

bool DiscreteSemigroup::contains(Label s) const {
  return std::binary_search(elements_.begin(), elements_.end(), s);
}

std::size_t DiscreteSemigroup::index_of(Label s) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), s);
  if (it == elements_.end() || *it != s) throw PreconditionError("label outside the semigroup window");
  return static_cast<std::size_t>(it - elements_.begin());
}

std::optional<Label> DiscreteSemigroup::product(Label u, Label v) const {
  if (!contains(u) || !contains(v)) throw PreconditionError("label outside the semigroup window");
  auto w = op_(u, v);
  if (!w || !contains(*w)) return std::nullopt;
  return w;
}

bool DiscreteSemigroup::right_cancellative() const {
  for (Label t : elements_) {
    std::set<Label> seen;
    for (Label s : elements_) {
      auto w = product(s, t);
      if (w && !seen.insert(*w).second) return false;
    }
  }
  return true;
}

bool DiscreteSemigroup::has_right_identity() const {
  for (Label e : elements_) {
    bool ok = true;
    for (Label s : elements_) {
      auto w = product(s, e);
      if (!w || *w != s) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

double WeightedL1Element::norm(const Weight& weight) const {
  double s = 0.0;
  for (const auto& [u, c] : coeffs) s += std::abs(c) * weight(u);
  return s;
}

WeightedL1Element discrete_convolve(const DiscreteSemigroup& s, const WeightedL1Element& f,
                                    const WeightedL1Element& g) {
  WeightedL1Element out;
  for (const auto& [u, fu] : f.coeffs)
    for (const auto& [v, gv] : g.coeffs)
      if (auto w = s.product(u, v)) out.coeffs[*w] += fu * gv;
  return out;
}

WitnessResult semigroup_witness(const DiscreteSemigroup& s, const Weight& weight, const WeightedL1Element& f,
                                Label t, Complex z, const SemigroupWitnessOptions& options) {
  for (Label u : s.elements())
    if (!(weight(u) >= 1.0) || !std::isfinite(weight(u))) throw PreconditionError("weights must be >= 1");
  WeightedL1Element support;
  for (const auto& [u, c] : f.coeffs) {
    if (!s.contains(u)) throw PreconditionError("f has support outside the window");
    if (c != Complex{}) support.coeffs[u] = c;
  }
  if (support.coeffs.empty()) throw PreconditionError("semigroup witness needs f != 0");
  if (!s.contains(t)) throw PreconditionError("t outside the window");
  if (weight(t) != 1.0 && !options.allow_heavy_t) throw HypothesisError("the witness needs w(t) = 1");
  if (!s.right_cancellative()) throw HypothesisError("semigroup window is not right cancellative");
  if (s.has_right_identity()) throw HypothesisError("semigroup window has a right identity");

  const double fnorm = support.norm(weight);
  if (std::abs(z) > fnorm * (1.0 + 1e-12)) throw PreconditionError("need |z| <= ||f||");

  // g = delta_t, h = delta_t + sum h(s_n) delta_{s_n . t}.
  const auto g = WeightedL1Element::delta(t);
  std::map<Label, Complex> h{{t, 1.0}};
  for (const auto& [u, c] : support.coeffs) {
    const auto ut = s.product(u, t);
    if (!ut) throw PreconditionError("window too small: s.t leaves it");
    if (*ut == t) throw HypothesisError("s.t = t for some s in supp f");
    h[*ut] += z * std::conj(c) * weight(u) / (fnorm * std::abs(c));
  }

  WitnessResult r;
  r.expected = z;
  r.value = pair(discrete_convolve(s, support, g), h);
  check_discrete(r, g, h, weight);
  return r;
}

VolterraWitness volterra_discrete_witness(const std::vector<RationalAtom>& atoms, Complex z) {
  // Merge atoms at equal points, keeping first-appearance order.
  std::vector<std::pair<std::pair<long long, long long>, Complex>> merged;
  for (const auto& a : atoms) {
    if (a.den <= 0 || a.num <= 0 || a.num >= a.den) throw PreconditionError("support must lie in (0,1)");
    const long long g = gcd_ll(a.num, a.den);
    const std::pair<long long, long long> key{a.num / g, a.den / g};
    auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.first == key; });
    if (it == merged.end()) {
      merged.emplace_back(key, a.value);
    } else {
      it->second += a.value;
    }
  }
  std::erase_if(merged, [](const auto& m) { return m.second == Complex{}; });
  if (merged.empty()) throw PreconditionError("discrete Volterra witness needs f != 0");

  long long lcm = 1;
  for (const auto& m : merged) lcm = std::lcm(lcm, m.first.second);
  const long long d = 2 * lcm;

  double fnorm = 0.0;
  for (const auto& m : merged) fnorm += std::abs(m.second);
  if (std::abs(z) >= fnorm) throw PreconditionError("need |z| < ||f||_1");

  VolterraWitness out;
  out.denominator = d;
  double partial = 0.0;
  for (const auto& m : merged) {
    partial += std::abs(m.second);
    ++out.n0;
    if (std::abs(z) < partial) break;
  }
  const double ftilde = partial;

  WeightedL1Element f;
  long long kmax = 0;
  std::vector<long long> labels;
  for (std::size_t n = 0; n < merged.size(); ++n) {
    const long long k = merged[n].first.first * (d / merged[n].first.second);
    f.coeffs[k] = merged[n].second;
    labels.push_back(k);
    if (n < out.n0) kmax = std::max(kmax, k);
  }
  // Midpoint of the admissible range: s_n + t < 1 for n <= n0.
  out.t_num = (d - kmax) / 2;

  const auto s = DiscreteSemigroup::rational_volterra(d);
  const auto g = WeightedL1Element::delta(out.t_num);
  std::map<Label, Complex> h{{out.t_num, 1.0}};
  for (std::size_t n = 0; n < out.n0; ++n) {
    const Complex c = merged[n].second;
    h[labels[n] + out.t_num] += z * std::conj(c) / (ftilde * std::abs(c));
  }

  const Weight one = [](Label) { return 1.0; };
  out.result.expected = z;
  out.result.value = pair(discrete_convolve(s, f, g), h);
  check_discrete(out.result, g, h, one);
  return out;
}

// ---- Step functions -----------------------------------------------------------------

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  if (breaks_.empty() && values_.empty()) return;
  if (breaks_.size() != values_.size() + 1) throw SpecError("step function needs one more break than values");
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!std::isfinite(breaks_[i])) throw SpecError("step function breaks must be finite");
    if (i > 0 && !(breaks_[i] > breaks_[i - 1])) throw SpecError("step function breaks must increase");
  }
  for (double v : values_)
    if (!std::isfinite(v)) throw SpecError("step function values must be finite");
}

StepFunction StepFunction::indicator(double lo, double hi, double c) { return StepFunction({lo, hi}, {c}); }

StepFunction StepFunction::from_pieces(std::vector<std::tuple<double, double, double>> pieces) {
  std::sort(pieces.begin(), pieces.end());
  std::vector<double> breaks, values;
  for (const auto& [lo, hi, v] : pieces) {
    if (!(hi > lo)) throw SpecError("step piece needs lo < hi");
    if (!breaks.empty()) {
      if (lo < breaks.back()) throw SpecError("step pieces overlap");
      if (lo > breaks.back()) {
        values.push_back(0.0);
        breaks.push_back(lo);
      }
    } else {
      breaks.push_back(lo);
    }
    values.push_back(v);
    breaks.push_back(hi);
  }
  return StepFunction(std::move(breaks), std::move(values));
}

double StepFunction::operator()(double x) const {
  if (breaks_.empty() || x < breaks_.front() || x >= breaks_.back()) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepFunction::l1_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += std::abs(values_[i]) * (breaks_[i + 1] - breaks_[i]);
  return s;
}

bool StepFunction::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

bool StepFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::optional<std::pair<double, double>> StepFunction::support_hull() const {
  std::optional<std::pair<double, double>> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 0.0) continue;
    if (!out) out = std::pair{breaks_[i], breaks_[i + 1]};
    out->second = breaks_[i + 1];
  }
  return out;
}

double StepFunction::distance_of_support_from(double x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 0.0) continue;
    const double lo = breaks_[i], hi = breaks_[i + 1];
    best = std::min(best, x < lo ? lo - x : (x > hi ? x - hi : 0.0));
  }
  return best;
}

double StepFunction::antiderivative(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (x <= breaks_[i]) break;
    s += values_[i] * (std::min(x, breaks_[i + 1]) - breaks_[i]);
  }
  return s;
}

double StepFunction::second_antiderivative(double x) const {
  double s = 0.0, level = 0.0;  // level = F at the current break
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (x <= breaks_[i]) return s;
    const double len = std::min(x, breaks_[i + 1]) - breaks_[i];
    s += level * len + 0.5 * values_[i] * len * len;
    level += values_[i] * (breaks_[i + 1] - breaks_[i]);
  }
  if (!breaks_.empty() && x > breaks_.back()) s += level * (x - breaks_.back());
  return s;
}

WitnessResult l1_line_witness(const StepFunction& f, Complex z, double a, const QuadSpec& quad) {
  if (!f.nonnegative()) throw PreconditionError("the L^1(R) witness needs f >= 0");
  const auto hull = f.support_hull();
  if (!hull) throw PreconditionError("the L^1(R) witness needs f != 0");
  if (std::abs(z) > 1.0 + 1e-12) throw PreconditionError("need |z| <= 1");
  const double gap = f.distance_of_support_from(0.0);
  if (a == 0.0) a = gap;
  if (!(a > 0.0) || a > gap) throw PreconditionError("supp f must avoid (-a, a) with a > 0");

  const StepFunction g = StepFunction::indicator(0.0, a / 2.0, 2.0 / a);
  // h = chi_[0,a/2] + z chi_{R \ [-a/2,a/2]}, cut to a window holding supp(f * g).
  const double lo = std::min(hull->first, -a / 2.0) - 1.0;
  const double hi = std::max(hull->second + a / 2.0, a / 2.0) + 1.0;
  const ComplexStep h{{lo, -a / 2.0, 0.0, a / 2.0, hi}, {z, 0.0, 1.0, z}};

  WitnessResult r;
  r.expected = z * f.l1_norm();
  r.value = double_integral(f, g, h, quad);
  check_continuous(r, g, h);
  return r;
}

WitnessResult volterra_l1_witness(const StepFunction& f, Complex z, double delta, const QuadSpec& quad) {
  if (!f.nonnegative()) throw PreconditionError("the Volterra witness needs f >= 0");
  const auto hull = f.support_hull();
  if (!hull) throw PreconditionError("the Volterra witness needs f != 0");
  if (hull->first < 0.0 || hull->second > 1.0) throw PreconditionError("f must live on [0,1]");
  if (std::abs(z) > 1.0 + 1e-12) throw PreconditionError("need |z| <= 1");
  const double room = std::min(hull->first, 1.0 - hull->second);
  if (delta == 0.0) delta = room;
  if (!(delta > 0.0) || delta > room) throw PreconditionError("supp f must lie in [delta, 1 - delta], delta > 0");

  const StepFunction g = StepFunction::indicator(0.0, delta / 2.0, 2.0 / delta);
  const ComplexStep h{{0.0, delta / 2.0, 1.0}, {1.0, z}};

  WitnessResult r;
  r.expected = z * f.l1_norm();
  r.value = double_integral(f, g, h, quad);
  check_continuous(r, g, h);
  return r;
}

// ---- Truncations -------------------------------------------------------------------

AlgebraSpec semigroup_algebra(const DiscreteSemigroup& s, const Weight& weight) {
  const auto& e = s.elements();
  const std::size_t n = e.size();
  StructureTensor t(n);
  NormSpec norm{Exponent::finite(1.0), {}, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    norm.weights.push_back(weight(e[i]));
    for (std::size_t j = 0; j < n; ++j)
      if (auto w = s.product(e[i], e[j])) t.add(i, j, s.index_of(*w), 1.0);
  }
  AlgebraSpec a{std::move(t), norm, std::nullopt};
  if (auto id = solve_identity(a.tensor)) a.identity = Identity{*id, std::abs(snrlab::norm(a, *id) - 1.0) <= 1e-10};
  a.validate();
  return a;
}

std::vector<Complex> polar_grid(double radius, std::size_t angles, std::size_t radii, bool closed) {
  std::vector<Complex> out;
  for (std::size_t j = 1; j <= radii; ++j) {
    const double rho = radius * (closed ? static_cast<double>(j) : static_cast<double>(j) - 0.5) /
                       static_cast<double>(radii);
    for (std::size_t m = 0; m < angles; ++m)
      out.push_back(std::polar(rho, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(angles)));
  }
  return out;
}

}  // namespace snrlab
