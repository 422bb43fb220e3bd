#include <doctest.h>

#include "snrlab/geometry.hpp"
#include "snrlab/hunt.hpp"
#include "snrlab/oracles.hpp"
#include "support.hpp"

using namespace snrlab;
using testing::Complex;

namespace {

// Small enough to run in a second or two.
HuntConfig quick() {
  HuntConfig c;
  c.samples = 600;
  c.resolution = 16;
  c.probes = 1500;
  c.scale_samples = 300;
  c.elements_per_algebra = 1;
  c.budget = 40;
  c.seed = 17;
  c.threads = 1;
  return c;
}

bool same_reports(const HuntSummary& a, const HuntSummary& b) {
  if (a.survivors.size() != b.survivors.size()) return false;
  for (std::size_t i = 0; i < a.survivors.size(); ++i) {
    const auto &x = a.survivors[i], &y = b.survivors[i];
    if (x.candidate != y.candidate || x.defect != y.defect || x.element != y.element ||
        x.cloud.points != y.cloud.points)
      return false;
  }
  return a.histogram == b.histogram && a.associative == b.associative && a.max_defect == b.max_defect;
}

}  // namespace

TEST_CASE("random tensors are deterministic and respect sparsity") {
  HuntConfig c;
  c.sparsity = 2;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const StructureTensor t = random_tensor(c, s);
    CHECK(t == random_tensor(c, s));
    std::size_t nz = 0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) {
          const Complex v = t(i, j, k);
          nz += v != Complex(0.0);
          if (v != Complex(0.0)) {
            CHECK(v.imag() == 0.0);
            CHECK(v.real() == std::round(v.real()));
            CHECK(std::abs(v.real()) <= 3.0);
          }
        }
    CHECK(nz <= 2);
  }
  c.sparsity = 0;
  CHECK(random_tensor(c, 5).is_zero());
}

TEST_CASE("associativity census is strictly between 0 and 1") {
  HuntConfig c;
  std::size_t pass = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) pass += is_associative(random_tensor(c, s));
  MESSAGE("associative draws: " << pass << " / 1000");
  CHECK(pass > 0);
  CHECK(pass < 1000);
}

TEST_CASE("identity detection examples") {
  StructureTensor coord(2);
  coord.set(0, 0, 0, 1.0);
  coord.set(1, 1, 1, 1.0);
  const auto e = detect_identity(AlgebraSpec{coord, NormSpec::lp(Exponent::infinity(), 2), std::nullopt});
  REQUIRE(e);
  CHECK(e->element == Element{1.0, 1.0});
  CHECK(e->norm == doctest::Approx(1.0));
  CHECK_FALSE(detect_identity(table_algebra(1, Exponent::finite(2.0))));
  const auto c = detect_identity(table_algebra(33, Exponent::finite(1.0)));
  REQUIRE(c);
  CHECK(c->element == Element{1.0, 0.0});
  // Under l^1 the coordinatewise identity has norm 2.
  const auto e1 = detect_identity(AlgebraSpec{coord, NormSpec::lp(Exponent::finite(1.0), 2), std::nullopt});
  REQUIRE(e1);
  CHECK(e1->norm == doctest::Approx(2.0));
}

TEST_CASE("budget 0 gives an empty report") {
  HuntConfig c = quick();
  c.budget = 0;
  const HuntSummary s = hunt_nonconvex(c);
  CHECK(s.survivors.empty());
  CHECK(s.drawn == 0);
  CHECK(s.evaluated_elements == 0);
}

TEST_CASE("config validation") {
  HuntConfig c = quick();
  c.threshold = 0.0;
  CHECK_THROWS_AS(hunt_nonconvex(c), SpecError);
  c = quick();
  c.p_choices.clear();
  CHECK_THROWS_AS(hunt_nonconvex(c), SpecError);
  c = quick();
  c.dim = 0;
  CHECK_THROWS_AS(hunt_nonconvex(c), SpecError);
}

TEST_CASE("hunts are deterministic across reruns and worker counts") {
  HuntConfig c = quick();
  c.threshold = 0.01;
  const HuntSummary a = hunt_nonconvex(c);
  const HuntSummary b = hunt_nonconvex(c);
  c.threads = 3;
  const HuntSummary t = hunt_nonconvex(c);
  CHECK(same_reports(a, b));
  CHECK(same_reports(a, t));
}

TEST_CASE("survivors at a low threshold are reproducible and never unital of norm one") {
  HuntConfig c = quick();
  c.threshold = 0.01;
  c.budget = 60;
  const HuntSummary s = hunt_nonconvex(c);
  MESSAGE("survivors " << s.survivors.size() << ", artifacts " << s.artifacts_rejected << ", faded "
                       << s.faded_on_recheck);
  REQUIRE(!s.survivors.empty());
  double prev = INFINITY;
  for (const auto& r : s.survivors) {
    CHECK(r.defect <= prev);
    prev = r.defect;
    CHECK(r.defect > c.threshold / 2.0);
    CHECK(r.initial_defect > c.threshold);
    CHECK_FALSE(r.unital_norm_one);
    CHECK(std::abs(norm(r.algebra, r.element) - 1.0) <= 1e-9);
    const double again = convexity_defect(r.cloud.points, DefectOptions{c.probes, r.defect_seed});
    CHECK(std::abs(again - r.defect) <= 1e-6);

    // Independent identity check: a two-sided identity of norm one would
    // have forced rejection.
    if (r.identity) {
      for (std::size_t i = 0; i < r.algebra.dim(); ++i) {
        std::vector<Complex> ei(r.algebra.dim());
        ei[i] = 1.0;
        CHECK(testing::max_abs_diff(testing::product(r.algebra.tensor, r.identity->element.coords, ei), ei) <= 1e-8);
      }
      CHECK(std::abs(norm(r.algebra, r.identity->element) - 1.0) > 1e-6);
    }
  }
  std::size_t binned = 0;
  for (auto h : s.histogram) binned += h;
  CHECK(binned == s.evaluated_elements);
}

TEST_CASE("table-only hunt finds nothing above the default threshold") {
  HuntConfig c = quick();
  c.table_only = true;
  c.samples = 3000;
  c.probes = 3000;
  c.p_choices = {Exponent::finite(2.0)};
  c.budget = 1000;
  const HuntSummary s = hunt_nonconvex(c);
  CHECK(s.drawn == 24);  // the eleven l^1-only rows drop out at p = 2
  CHECK(s.survivors.empty());
  CHECK(s.max_defect <= 0.1);
}
