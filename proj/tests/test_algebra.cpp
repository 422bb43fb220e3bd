#include <doctest.h>

#include "snrlab/algebra.hpp"
#include "snrlab/hunt.hpp"
#include "snrlab/oracles.hpp"
#include "support.hpp"

using namespace snrlab;
using testing::Complex;

namespace {

StructureTensor coordinatewise() {
  StructureTensor t(2);
  t.set(0, 0, 0, 1.0);
  t.set(1, 1, 1, 1.0);
  return t;
}

// Evaluates both sides of the associativity identity on every basis tuple.
bool brute_associative(const StructureTensor& t) {
  const std::size_t n = t.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Complex lhs = 0.0, rhs = 0.0;
          for (std::size_t m = 0; m < n; ++m) {
            lhs += t(i, j, m) * t(m, k, l);
            rhs += t(j, k, m) * t(i, m, l);
          }
          if (std::abs(lhs - rhs) > 1e-12) return false;
        }
  return true;
}

const std::vector<Exponent> kPs{Exponent::finite(1.0), Exponent::finite(2.0), Exponent::infinity()};

}  // namespace

TEST_CASE("exponent parsing and conjugates") {
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("2").value() == 2.0);
  CHECK(Exponent::finite(1.0).conjugate().is_infinite());
  CHECK(Exponent::infinity().conjugate().is_one());
  CHECK(Exponent::finite(3.0).conjugate().value() == doctest::Approx(1.5));
  CHECK_THROWS_AS(Exponent::parse("abc"), SpecError);
  CHECK_THROWS_AS(Exponent::finite(0.5), SpecError);
}

TEST_CASE("multiply examples") {
  const AlgebraSpec coord{coordinatewise(), NormSpec::lp(Exponent::finite(1.0), 2), std::nullopt};
  const Element p = multiply(coord, Element{1.0, 2.0}, Element{3.0, 4.0});
  CHECK(p == Element{3.0, 8.0});

  const AlgebraSpec cplx = table_algebra(33, Exponent::finite(1.0));
  const Element i2 = multiply(cplx, Element{0.0, 1.0}, Element{0.0, 1.0});
  CHECK(i2 == Element{-1.0, 0.0});

  const Element x = testing::random_element(2);
  CHECK(multiply(cplx, Element::zero(2), x) == Element::zero(2));
  CHECK_THROWS_AS(multiply(cplx, Element{1.0}, x), SpecError);
}

TEST_CASE("norm examples") {
  CHECK(NormSpec::lp(Exponent::finite(1.0), 2)(Element{3.0, Complex(0, 4)}.view()) == doctest::Approx(7.0));
  CHECK(NormSpec::lp(Exponent::finite(2.0), 2, 3.0)(Element{3.0, 4.0}.view()) == doctest::Approx(15.0));
  const NormSpec w{Exponent::infinity(), {1.0, 2.0}, 1.0};
  CHECK(w(Element{5.0, 3.0}.view()) == doctest::Approx(6.0));
  CHECK_THROWS_AS((NormSpec{Exponent::finite(2.0), {0.5, 1.0}, 1.0}.validate()), SpecError);
  CHECK_THROWS_AS((NormSpec{Exponent::finite(2.0), {1.0}, -1.0}.validate()), SpecError);
}

TEST_CASE("norm agrees with the definition on random inputs") {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const double p = trial % 4 == 3 ? INFINITY : testing::uniform(1.0, 4.0);
    std::vector<double> w(n);
    for (auto& v : w) v = testing::uniform(1.0, 2.0);
    const double c = testing::uniform(0.5, 3.0);
    const NormSpec norm{std::isinf(p) ? Exponent::infinity() : Exponent::finite(p), w, c};
    const Element x = testing::random_element(n);
    CHECK(norm(x.view()) == doctest::Approx(testing::lp_norm(x.coords, p, w, c)).epsilon(1e-12));
  }
}

TEST_CASE("associativity examples") {
  CHECK(is_associative(coordinatewise()));
  CHECK(is_associative(table_tensor(33)));
  StructureTensor t(2);
  t.set(0, 0, 0, 1.0);
  t.set(0, 0, 1, 1.0);
  t.set(1, 1, 0, 1.0);
  CHECK_FALSE(brute_associative(t));
  CHECK_FALSE(is_associative(t));
  CHECK(associativity_residual(t) > 0.5);
}

TEST_CASE("associativity agrees with random triples") {
  HuntConfig cfg;
  cfg.sparsity = 4;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    cfg.dim = 2 + seed % 2;
    cfg.pool = seed % 3 == 0 ? CoefficientPool::real : CoefficientPool::integer;
    const StructureTensor t = random_tensor(cfg, seed);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto x = testing::random_element(cfg.dim).coords, y = testing::random_element(cfg.dim).coords,
                 z = testing::random_element(cfg.dim).coords;
      worst = std::max(worst, testing::max_abs_diff(testing::product(t, testing::product(t, x, y), z),
                                                    testing::product(t, x, testing::product(t, y, z))));
    }
    CHECK(is_associative(t) == (worst <= 1e-9 * 100));
    CHECK(is_associative(t) == brute_associative(t));
  }
}

TEST_CASE("multiply is bilinear and matches the triple loop") {
  HuntConfig cfg;
  cfg.dim = 3;
  cfg.pool = CoefficientPool::real;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const StructureTensor t = random_tensor(cfg, seed);
    const Element x = testing::random_element(3), x2 = testing::random_element(3), y = testing::random_element(3);
    const Complex a = testing::gaussian(), b = testing::gaussian();
    Element comb = Element::zero(3);
    for (std::size_t i = 0; i < 3; ++i) comb[i] = a * x[i] + b * x2[i];
    const auto lhs = multiply(t, comb, y).coords;
    const auto m1 = multiply(t, x, y).coords, m2 = multiply(t, x2, y).coords;
    std::vector<Complex> rhs(3);
    double scale = 1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      rhs[i] = a * m1[i] + b * m2[i];
      scale = std::max(scale, std::abs(rhs[i]));
    }
    CHECK(testing::max_abs_diff(lhs, rhs) <= 1e-12 * scale * 10);
    CHECK(testing::max_abs_diff(m1, testing::product(t, x.coords, y.coords)) <= 1e-12 * scale * 10);
  }
}

TEST_CASE("identity metadata acts as the identity") {
  int with_identity = 0;
  for (int row = 1; row <= kTableRows; ++row)
    for (const auto& p : kPs) {
      if (!row_accepts(row, p)) continue;
      const AlgebraSpec a = table_algebra(row, p);
      if (!a.identity) continue;
      ++with_identity;
      for (int k = 0; k < 10; ++k) {
        const Element x = testing::random_element(2);
        CHECK(testing::max_abs_diff(multiply(a, a.identity->element, x).coords, x.coords) <= 1e-12);
        CHECK(testing::max_abs_diff(multiply(a, x, a.identity->element).coords, x.coords) <= 1e-12);
      }
    }
  CHECK(with_identity > 0);

  AlgebraSpec bad = table_algebra(1, Exponent::finite(2.0));
  bad.identity = Identity{Element{1.0, 1.0}, false};
  CHECK_THROWS_AS(bad.validate(), SpecError);
}

TEST_CASE("table norms are submultiplicative on sampled pairs") {
  for (int row = 1; row <= kTableRows; ++row)
    for (const auto& p : kPs) {
      if (!row_accepts(row, p)) continue;
      const AlgebraSpec a = table_algebra(row, p);
      double worst = 0.0;
      for (int k = 0; k < 400; ++k) {
        Element x = testing::random_element(2), y = testing::random_element(2);
        if (k % 4 == 1) x[k % 2] = 0.0;
        if (k % 4 == 2) y[(k / 4) % 2] = 0.0;
        const double ratio = norm(a, multiply(a, x, y)) / (norm(a, x) * norm(a, y));
        worst = std::max(worst, ratio);
      }
      INFO("row " << row << " p=" << p.to_string());
      CHECK(worst <= 1.0 + 1e-9);
    }
}

TEST_CASE("submultiplicative scale examples") {
  const AlgebraSpec coord{coordinatewise(), NormSpec::lp(Exponent::infinity(), 2), std::nullopt};
  const double m = submultiplicative_scale(coord, 2000, 1);
  CHECK(m >= 1.0);
  CHECK(m <= 1.03);

  for (const auto& p : {Exponent::finite(1.0), Exponent::finite(2.0), Exponent::finite(3.0)}) {
    const AlgebraSpec r13{table_tensor(13), NormSpec::lp(p, 2), std::nullopt};
    const double s = submultiplicative_scale(r13, 2000, 7);
    const double target = std::pow(2.0, p.reciprocal());
    CHECK(s >= target * (1.0 - 1e-6));
    CHECK(s <= target * 1.03);
  }

  const AlgebraSpec zero{StructureTensor(2), NormSpec::lp(Exponent::finite(2.0), 2), std::nullopt};
  CHECK(submultiplicative_scale(zero, 100, 3) == ScaleOptions{}.min_scale);
}

TEST_CASE("rescaled random algebras are submultiplicative on fresh pairs") {
  HuntConfig cfg;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const StructureTensor t = random_tensor(cfg, seed);
    const Exponent p = kPs[seed % 3];
    AlgebraSpec a{t, NormSpec::lp(p, 2), std::nullopt};
    a.norm = NormSpec::lp(p, 2, submultiplicative_scale(a, 2000, seed));
    double worst = 0.0;
    for (int k = 0; k < 300; ++k) {
      const Element x = testing::random_element(2), y = testing::random_element(2);
      worst = std::max(worst, norm(a, multiply(a, x, y)) / (norm(a, x) * norm(a, y)));
    }
    CHECK(worst <= 1.0 + 1e-9);
  }
}

TEST_CASE("identity detection") {
  const auto e = solve_identity(coordinatewise());
  REQUIRE(e);
  CHECK(*e == Element{1.0, 1.0});
  CHECK_FALSE(solve_identity(table_tensor(1)));
  const auto c = solve_identity(table_tensor(33));
  REQUIRE(c);
  CHECK(*c == Element{1.0, 0.0});
}

TEST_CASE("l1 product and fingerprints") {
  const AlgebraSpec a = table_algebra(1, Exponent::finite(2.0)), b = table_algebra(4, Exponent::finite(2.0));
  const AlgebraSpec ab = l1_product(a, b);
  CHECK(ab.dim() == 4);
  CHECK(std::holds_alternative<SumNorm>(ab.norm));
  const Element x{1.0, 2.0, 3.0, 4.0};
  CHECK(norm(ab, x) == doctest::Approx(std::sqrt(5.0) + 5.0));
  const Element y{1.0, 1.0, 2.0, 2.0};
  const Element xy = multiply(ab, x, y);
  CHECK(xy == Element{1.0, 0.0, 0.0, 8.0});
  CHECK(fingerprint(a) == fingerprint(table_algebra(1, Exponent::finite(2.0))));
  CHECK(fingerprint(a) != fingerprint(b));
  CHECK(fingerprint(a).size() == 16);
}
