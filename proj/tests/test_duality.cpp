#include <doctest.h>

#include "snrlab/duality.hpp"
#include "support.hpp"

using namespace snrlab;
using testing::Complex;

namespace {

// Dual norm straight from the conjugate exponent.
double dual_by_hand(const NormSpec& n, const std::vector<Complex>& h) {
  double base;
  if (n.p.is_infinite()) {
    base = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) base += std::abs(h[i]) / n.weights[i];
  } else if (n.p.is_one()) {
    base = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) base = std::max(base, std::abs(h[i]) / n.weights[i]);
  } else {
    const double q = n.p.value() / (n.p.value() - 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += std::pow(std::abs(h[i]) / n.weights[i], q);
    base = std::pow(s, 1.0 / q);
  }
  return base / n.scale;
}

Complex pair(const std::vector<Complex>& h, const std::vector<Complex>& x) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * x[i];
  return s;
}

NormSpec random_norm(std::size_t n, int kind) {
  std::vector<double> w(n);
  for (auto& v : w) v = testing::uniform(1.0, 2.0);
  const Exponent p = kind == 0 ? Exponent::finite(1.0)
                     : kind == 1 ? Exponent::infinity()
                                 : Exponent::finite(testing::uniform(1.2, 4.0));
  return NormSpec{p, w, testing::uniform(0.5, 3.0)};
}

// Random unit vector, sometimes sparse or with tied maxima.
std::vector<Complex> random_unit(const NormSpec& n, int variant) {
  std::vector<Complex> x = testing::random_element(n.dim()).coords;
  if (variant % 3 == 1 && n.dim() > 1) x[variant % n.dim()] = 0.0;
  if (variant % 3 == 2 && n.dim() > 1) x[1] = x[0] * (n.weights[0] / n.weights[1]) * Complex(0.0, 1.0);
  const double s = n(x);
  for (auto& c : x) c /= s;
  return x;
}

}  // namespace

TEST_CASE("norming functional examples") {
  const auto l2 = NormSpec::lp(Exponent::finite(2.0), 2);
  const auto f1 = norming_functionals(l2, Element{1.0, 0.0}.view());
  REQUIRE(f1.size() == 1);
  CHECK(f1.kind() == FamilyKind::singleton);
  CHECK(testing::max_abs_diff(f1.samples()[0].coords, {1.0, 0.0}) <= 1e-15);

  const auto l1 = NormSpec::lp(Exponent::finite(1.0), 2);
  // (0.6, 0.8i) has l1 norm 1.4; normalising leaves the functional unchanged.
  const auto f2 = norming_functionals(l1, Element{0.6 / 1.4, Complex(0, 0.8 / 1.4)}.view());
  REQUIRE(f2.size() == 1);
  CHECK(testing::max_abs_diff(f2.samples()[0].coords, {1.0, Complex(0, -1)}) <= 1e-15);

  const auto l1c = NormSpec::lp(Exponent::finite(1.0), 2, 3.0);
  const Element x{1.0 / 3.0, 0.0};
  const auto f3 = norming_functionals(l1c, x.view(), FamilyOptions{64, 4096, 0});
  CHECK(f3.kind() == FamilyKind::circle_product);
  CHECK(f3.size() == 64);
  bool saw_theta0 = false;
  for (const auto& h : f3.samples()) {
    CHECK(std::abs(h.coords[0] - 3.0) <= 1e-12);
    CHECK(std::abs(std::abs(h.coords[1]) - 3.0) <= 1e-12);
    CHECK(verify_functional(l1c, x.view(), h.coords));
    if (std::abs(h.coords[1] - 3.0) <= 1e-12) saw_theta0 = true;
  }
  CHECK(saw_theta0);

  CHECK_THROWS_AS(norming_functionals(l2, Element{0.0, 0.0}.view()), PreconditionError);
  CHECK_THROWS_AS(norming_functionals(l2, Element{2.0, 0.0}.view()), PreconditionError);
}

TEST_CASE("dual norm examples") {
  CHECK(dual_norm(NormSpec::lp(Exponent::finite(1.0), 2), std::vector<Complex>{1.0, Complex(0, -1)}) ==
        doctest::Approx(1.0));
  CHECK(dual_norm(NormSpec{Exponent::finite(2.0), {1.0, 2.0}, 1.0}, std::vector<Complex>{0.0, 2.0}) ==
        doctest::Approx(1.0));
  const double c = std::pow(2.0, -2.0 / 3.0);
  const std::vector<Complex> h{c, c};
  // q = 3/2: sum |h_i|^q = 2 * 2^-1 = 1.
  const double by_hand = std::pow(std::pow(c, 1.5) + std::pow(c, 1.5), 1.0 / 1.5);
  CHECK(by_hand == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dual_norm(NormSpec::lp(Exponent::finite(3.0), 2), h) == doctest::Approx(by_hand).epsilon(1e-14));
}

TEST_CASE("verify functional examples") {
  const AlgebraNorm l2 = NormSpec::lp(Exponent::finite(2.0), 2);
  CHECK(verify_functional(l2, Element{1.0, 0.0}.view(), std::vector<Complex>{1.0, 0.0}));
  CHECK_FALSE(verify_functional(l2, Element{1.0, 0.0}.view(), std::vector<Complex>{0.0, 1.0}));
}

TEST_CASE("every emitted functional norms its point") {
  for (int trial = 0; trial < 120; ++trial) {
    const NormSpec n = random_norm(1 + trial % 4, trial % 3);
    const auto x = random_unit(n, trial / 3);
    const auto fam = norming_functionals(n, x, FamilyOptions{16, 512, static_cast<std::uint64_t>(trial)});
    REQUIRE(fam.size() >= 1);
    const auto hs = fam.samples();
    const auto vals = fam.values(x);
    for (std::size_t s = 0; s < hs.size(); ++s) {
      CHECK(verify_functional(n, x, hs[s].coords, 1e-9));
      CHECK(dual_by_hand(n, hs[s].coords) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(std::abs(pair(hs[s].coords, x) - 1.0) <= 1e-10);
      CHECK(std::abs(vals[s] - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("dual norm matches the conjugate-exponent formula") {
  for (int trial = 0; trial < 200; ++trial) {
    const NormSpec n = random_norm(1 + trial % 5, trial % 3);
    const auto h = testing::random_element(n.dim()).coords;
    CHECK(dual_norm(n, h) == doctest::Approx(dual_by_hand(n, h)).epsilon(1e-12));
  }
}

TEST_CASE("Holder consistency") {
  for (int trial = 0; trial < 300; ++trial) {
    const NormSpec n = random_norm(1 + trial % 5, trial % 3);
    const auto x = random_unit(n, trial);
    const auto h = testing::random_element(n.dim()).coords;
    CHECK(std::abs(pair(h, x)) <= dual_norm(n, h) * (1.0 + 1e-10));
  }
}

TEST_CASE("smooth points have a unique norming functional") {
  // The dual norm is flat to second order along the face at h0, so passing
  // at tolerance tau only pins h down to O(sqrt(tau)).
  for (double tau : {1e-8, 1e-12}) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> w(3);
      for (auto& v : w) v = testing::uniform(1.0, 2.0);
      const NormSpec n{Exponent::finite(testing::uniform(1.3, 4.0)), w, 1.0};
      auto x = testing::random_element(3).coords;
      const double s = n(x);
      for (auto& c : x) c /= s;
      const auto h0 = norming_functionals(n, x).samples().at(0).coords;
      CHECK(verify_functional(n, x, h0, tau));
      for (int k = 0; k < 400; ++k) {
        const double eps = std::pow(10.0, -testing::uniform(1.0, 8.0));
        std::vector<Complex> h = h0;
        for (auto& c : h) c += eps * testing::gaussian();
        const Complex v = pair(h, x);
        for (auto& c : h) c /= v;
        if (verify_functional(n, x, h, tau)) worst = std::max(worst, testing::max_abs_diff(h, h0));
      }
    }
    MESSAGE("tau " << tau << ": farthest passing perturbation " << worst);
    CHECK(worst <= 50.0 * std::sqrt(tau));
  }
}

TEST_CASE("scaling rule is an index-wise bijection") {
  for (int trial = 0; trial < 60; ++trial) {
    NormSpec base = random_norm(1 + trial % 4, trial % 3);
    const double c = base.scale;
    base.scale = 1.0;
    NormSpec scaled = base;
    scaled.scale = c;
    const auto x = random_unit(scaled, trial);
    std::vector<Complex> cx = x;
    for (auto& v : cx) v *= c;
    const FamilyOptions fo{12, 256, static_cast<std::uint64_t>(trial)};
    const auto a = norming_functionals(scaled, x, fo).samples();
    const auto b = norming_functionals(base, cx, fo).samples();
    REQUIRE(a.size() == b.size());
    for (std::size_t s = 0; s < a.size(); ++s) {
      std::vector<Complex> cb = b[s].coords;
      for (auto& v : cb) v *= c;
      CHECK(testing::max_abs_diff(a[s].coords, cb) <= 1e-12 * c);
    }
  }
}

TEST_CASE("midpoints of norming functionals are norming") {
  for (int trial = 0; trial < 60; ++trial) {
    const NormSpec n = random_norm(2 + trial % 3, trial % 2);  // p = 1 or inf: genuine families
    const auto x = random_unit(n, trial);
    const auto hs = norming_functionals(n, x, FamilyOptions{8, 64, 0}).samples();
    for (std::size_t s = 0; s + 1 < hs.size(); s += 3) {
      const auto& u = hs[s].coords;
      const auto& v = hs[(s * 7 + 1) % hs.size()].coords;
      std::vector<Complex> m(u.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (u[i] + v[i]);
      CHECK(verify_functional(n, x, m, 1e-9));
    }
  }
}

TEST_CASE("p = inf with tied maxima gives a simplex family") {
  const NormSpec n = NormSpec::lp(Exponent::infinity(), 2);
  const std::vector<Complex> x{1.0, Complex(0.0, 1.0)};
  const auto fam = norming_functionals(n, x, FamilyOptions{4, 4096, 0});
  CHECK(fam.kind() == FamilyKind::simplex);
  CHECK(fam.size() == 5);
  for (const auto& h : fam.samples()) CHECK(verify_functional(n, x, h.coords));
}

TEST_CASE("sum norms: functionals split across blocks") {
  const SumNorm s{{NormSpec::lp(Exponent::finite(2.0), 2), NormSpec::lp(Exponent::finite(1.0), 2)}};
  for (int trial = 0; trial < 40; ++trial) {
    auto x = testing::random_element(4).coords;
    if (trial % 2) x[3] = 0.0;
    if (trial % 5 == 0) x[0] = x[1] = 0.0;
    const double v = s(x);
    for (auto& c : x) c /= v;
    const auto fam = norming_functionals(s, x, FamilyOptions{8, 256, 0});
    for (const auto& h : fam.samples()) CHECK(verify_functional(AlgebraNorm(s), x, h.coords));
  }
}
