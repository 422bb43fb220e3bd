#include <doctest.h>

#include <set>

#include "snrlab/geometry.hpp"
#include "snrlab/hunt.hpp"
#include "snrlab/oracles.hpp"
#include "snrlab/snr.hpp"
#include "support.hpp"

using namespace snrlab;
using testing::Complex;

namespace {

AlgebraSpec coordinatewise_inf() {
  StructureTensor t(2);
  t.set(0, 0, 0, 1.0);
  t.set(1, 1, 1, 1.0);
  AlgebraSpec a{t, NormSpec::lp(Exponent::infinity(), 2), std::nullopt};
  a.identity = Identity{Element{1.0, 1.0}, true};
  a.validate();
  return a;
}

EstimateOptions small(std::size_t n, std::uint64_t seed = 0) {
  EstimateOptions o;
  o.samples = n;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("snr_at examples") {
  const AlgebraSpec r14 = table_algebra(14, Exponent::finite(2.0));
  const Element a{2.0, Complex(0, 5)};
  for (int k = 0; k < 20; ++k) {
    auto x = testing::random_element(2);
    x = x.scaled(1.0 / norm(r14, x));
    for (auto v : snr_at(r14, a, x)) CHECK(std::abs(v - 2.0) <= 1e-12);
  }
  const Element x0{1.0 / std::sqrt(2.0), Complex(0, 1.0 / std::sqrt(2.0))};
  for (auto v : snr_at(r14, Element::zero(2), x0)) CHECK(v == Complex(0.0));

  const AlgebraSpec r16 = table_algebra(16, Exponent::finite(1.0));
  const auto vals = snr_at(r16, Element{0.0, 1.0}, Element{1.0, 0.0});
  REQUIRE(!vals.empty());
  for (auto v : vals) CHECK(std::abs(v) <= 1e-15);

  CHECK_THROWS_AS(snr_at(r16, Element{0.0, 1.0}, Element{2.0, 0.0}), PreconditionError);
}

TEST_CASE("estimate examples") {
  const AlgebraSpec r16 = table_algebra(16, Exponent::finite(2.0));
  const PointCloud c16 = estimate_snr(r16, Element{0.0, 1.0}, small(50000));
  const std::vector<Complex> seg{0.0, 1.0};
  CHECK(hull_hausdorff(convex_hull(c16.points), convex_hull(seg)) <= 0.05);

  const AlgebraSpec r25 = table_algebra(25, Exponent::finite(1.0));
  const PointCloud c25 = estimate_snr(r25, Element{1.0, 1.0}, small(50000));
  std::vector<Complex> disk;
  for (int k = 0; k < 720; ++k) disk.push_back(1.0 + std::polar(1.0, 2.0 * M_PI * k / 720.0));
  CHECK(hull_hausdorff(convex_hull(c25.points), convex_hull(disk)) <= 0.05);
  const double nu = numerical_radius(c25);
  CHECK(nu <= 2.0 + 1e-12);
  CHECK(nu >= 1.95);

  const PointCloud zero = estimate_snr(r25, Element::zero(2), small(2000));
  for (auto z : zero.points) CHECK(z == Complex(0.0));
  CHECK(numerical_radius(zero) == 0.0);
  CHECK_THROWS_AS(numerical_radius(std::vector<Complex>{}), PreconditionError);
}

TEST_CASE("clouds respect the radius bound") {
  HuntConfig cfg;
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 25 && seed < 400; ++seed) {
    const StructureTensor t = random_tensor(cfg, seed);
    if (t.is_zero() || !is_associative(t)) continue;
    const Exponent p = seed % 3 == 0 ? Exponent::finite(1.0) : seed % 3 == 1 ? Exponent::finite(2.0) : Exponent::infinity();
    AlgebraSpec a{t, NormSpec::lp(p, 2), std::nullopt};
    a.norm = NormSpec::lp(p, 2, submultiplicative_scale(a, 1000, seed));
    const Element e = testing::random_element(2);
    const PointCloud c = estimate_snr(a, e, small(3000, seed));
    CHECK(numerical_radius(c) <= norm(a, e) * (1.0 + 1e-8));
    ++checked;
  }
  CHECK(checked == 25);
}

TEST_CASE("sphere samples are unit vectors") {
  const std::vector<AlgebraNorm> norms{
      NormSpec::lp(Exponent::finite(1.0), 3), NormSpec{Exponent::finite(2.5), {1.0, 1.5, 2.0}, 1.7},
      NormSpec::lp(Exponent::infinity(), 2, 2.0),
      SumNorm{{NormSpec::lp(Exponent::finite(2.0), 2), NormSpec::lp(Exponent::finite(1.0), 2)}}};
  for (auto strategy : {SamplerStrategy::gaussian, SamplerStrategy::structured, SamplerStrategy::mixed}) {
    const SphereSampler s(strategy, 11);
    for (const auto& n : norms)
      for (std::size_t i = 0; i < 500; ++i) CHECK(std::abs(norm_value(n, s.sample(n, i).view()) - 1.0) <= 1e-12);
  }
}

TEST_CASE("estimates do not depend on the worker count") {
  const AlgebraSpec a = table_algebra(2, Exponent::finite(2.0));
  EstimateOptions o = small(6000, 5);
  o.threads = 1;
  const PointCloud one = estimate_snr(a, Element{Complex(1, 1), 2.0}, o);
  o.threads = 3;
  const PointCloud three = estimate_snr(a, Element{Complex(1, 1), 2.0}, o);
  CHECK(one.points == three.points);
}

TEST_CASE("clouds grow monotonically with N") {
  const AlgebraSpec a = table_algebra(32, Exponent::finite(1.0));
  const Element e{Complex(1, 1), 2.0};
  const PointCloud c1 = estimate_snr(a, e, small(1500, 9));
  const PointCloud c2 = estimate_snr(a, e, small(5000, 9));
  const std::set<std::pair<double, double>> big = [&] {
    std::set<std::pair<double, double>> s;
    for (auto z : c2.points) s.insert({z.real(), z.imag()});
    return s;
  }();
  std::size_t missing = 0;
  for (auto z : c1.points) missing += !big.contains({z.real(), z.imag()});
  CHECK(missing == 0);
}

TEST_CASE("scaling equivariance") {
  const AlgebraSpec a = table_algebra(25, Exponent::finite(1.0));
  const Element e{Complex(0.5, 1), -1.0};
  const Complex alpha(0.3, -2.0);
  EstimateOptions o = small(3000, 4);
  o.dedup_grid = 0.0;
  const PointCloud c = estimate_snr(a, e, o);
  const PointCloud ca = estimate_snr(a, e.scaled(alpha), o);
  REQUIRE(c.points.size() == ca.points.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < c.points.size(); ++i) worst = std::max(worst, std::abs(ca.points[i] - alpha * c.points[i]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("each V(a; x) is convex: midpoint functionals stay in its hull") {
  const AlgebraSpec a = table_algebra(29, Exponent::finite(1.0));
  const Element e{Complex(1, 1), 2.0};
  const SphereSampler s(SamplerStrategy::mixed, 3);
  for (std::size_t i = 0; i < 40; ++i) {
    const Element x = s.sample(a.norm, i);
    const FamilyOptions fo{32, 256, i};
    const auto fam = norming_functionals(a.norm, x.view(), fo);
    const auto hs = fam.samples();
    const Element ax = multiply(a, e, x);
    const HullPolygon hull = convex_hull(fam.values(ax.view()));
    for (std::size_t k = 0; k + 1 < hs.size(); k += 5) {
      Complex v = 0.0;
      const auto& u = hs[k].coords;
      const auto& w = hs[(k * 13 + 7) % hs.size()].coords;
      for (std::size_t j = 0; j < 2; ++j) v += 0.5 * (u[j] + w[j]) * ax[j];
      CHECK(hull.distance(v) <= 1e-12);
    }
  }
}

TEST_CASE("unital reduction examples") {
  const AlgebraSpec a = coordinatewise_inf();
  EstimateOptions o = small(20000, 2);
  const UnitalReport r = unital_reduction_check(a, Element{0.0, 1.0}, o);
  CHECK(r.pass);
  CHECK(r.max_distance <= 0.02);
  // V(a; 1) for a = (0, 1) is the segment [0, 1] from the p = inf simplex family.
  for (auto z : r.at_identity) CHECK(testing::seg_dist(z, 0.0, 1.0) <= 1e-12);
  CHECK(hull_hausdorff(convex_hull(r.at_identity), convex_hull(std::vector<Complex>{0.0, 1.0})) <= 1e-12);

  const PointCloud one = estimate_snr(a, Element{1.0, 1.0}, small(3000));
  for (auto z : one.points) CHECK(std::abs(z - 1.0) <= 1e-12);
  const Complex alpha(2.0, -1.0);
  const PointCloud scaled = estimate_snr(a, Element{alpha, alpha}, small(3000));
  for (auto z : scaled.points) CHECK(std::abs(z - alpha) <= 1e-12);

  CHECK_THROWS_AS(unital_reduction_check(table_algebra(1, Exponent::finite(2.0)), Element{1.0, 0.0}, o),
                  PreconditionError);
}
