#include "snrlab/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace snrlab {

namespace {

// Slot k receives coef * x_i y_j (0-based).
struct Coef {
  int k, i, j, c;
};

struct RowData {
  TableRow info;
  std::vector<Coef> terms;
};

const std::array<RowData, kTableRows>& rows() {
  static const std::array<RowData, kTableRows> data{{
      {{1, "(x1y1, 0)", "||.||_p", "a1 I"}, {{0, 0, 0, 1}}},
      {{2, "(x2y2, 0)", "||.||_p", "a2 r^(1/q) (1-r)^(1/p) e^(it)"}, {{0, 1, 1, 1}}},
      {{3, "(0, x1y1)", "||.||_p", "a1 r^(1/p) (1-r)^(1/q) e^(it)"}, {{1, 0, 0, 1}}},
      {{4, "(0, x2y2)", "||.||_p", "a2 I"}, {{1, 1, 1, 1}}},
      {{5, "(2x1y1, 0)", "2||.||_p", "2a1 I"}, {{0, 0, 0, 2}}},
      {{6, "(2x2y2, 0)", "2||.||_p", "2a2 r^(1/q) (1-r)^(1/p) e^(it)"}, {{0, 1, 1, 2}}},
      {{7, "(0, 2x1y1)", "2||.||_p", "2a1 r^(1/p) (1-r)^(1/q) e^(it)"}, {{1, 0, 0, 2}}},
      {{8, "(0, 2x2y2)", "2||.||_p", "2a2 I"}, {{1, 1, 1, 2}}},
      {{9, "(3x1y1, 0)", "3||.||_p", "3a1 I"}, {{0, 0, 0, 3}}},
      {{10, "(3x2y2, 0)", "3||.||_p", "3a2 r^(1/q) (1-r)^(1/p) e^(it)"}, {{0, 1, 1, 3}}},
      {{11, "(0, 3x1y1)", "3||.||_p", "3a1 r^(1/p) (1-r)^(1/q) e^(it)"}, {{1, 0, 0, 3}}},
      {{12, "(0, 3x2y2)", "3||.||_p", "3a2 I"}, {{1, 1, 1, 3}}},
      {{13, "(x1y1, x1y1)", "2^(1/p)||.||_p", "a1 r + a1 r^(1/p) (1-r)^(1/q) e^(it)"},
       {{0, 0, 0, 1}, {1, 0, 0, 1}}},
      {{14, "(x1y1, x1y2)", "any", "{a1}", false, true}, {{0, 0, 0, 1}, {1, 0, 1, 1}}},
      {{15, "(x1y1, x2y1)", "||.||_p", "a1 r + a2 r^(1/p) (1-r)^(1/q) e^(it)"},
       {{0, 0, 0, 1}, {1, 1, 0, 1}}},
      {{16, "(x1y1, x2y2)", "||.||_p", "co{a1, a2}"}, {{0, 0, 0, 1}, {1, 1, 1, 1}}},
      {{17, "(x1y2, x2y2)", "||.||_p", "a1 r^(1/q) (1-r)^(1/p) e^(it) + a2 (1-r)"},
       {{0, 0, 1, 1}, {1, 1, 1, 1}}},
      {{18, "(x2y1, x2y2)", "any", "{a2}", false, true}, {{0, 1, 0, 1}, {1, 1, 1, 1}}},
      {{19, "(x2y2, x2y2)", "2^(1/p)||.||_p", "a2 r^(1/q) (1-r)^(1/p) e^(it) + a2 (1-r)"},
       {{0, 1, 1, 1}, {1, 1, 1, 1}}},
      {{20, "(2x1y1, x1y1)", "3||.||_p", "2a1 r + a1 r^(1/p) (1-r)^(1/q) e^(it)"},
       {{0, 0, 0, 2}, {1, 0, 0, 1}}},
      {{21, "(2x2y2, x2y2)", "3||.||_p", "2a2 r^(1/q) (1-r)^(1/p) e^(it) + a2 (1-r)"},
       {{0, 1, 1, 2}, {1, 1, 1, 1}}},
      {{22, "(x1y1, 2x1y1)", "3||.||_p", "a1 r + 2a1 r^(1/p) (1-r)^(1/q) e^(it)"},
       {{0, 0, 0, 1}, {1, 0, 0, 2}}},
      {{23, "(x1y1, 2x2y2)", "2||.||_p", "a1 r + 2a2 (1-r)"}, {{0, 0, 0, 1}, {1, 1, 1, 2}}},
      {{24, "(x2y2, 2x2y2)", "3||.||_p", "a2 r^(1/q) (1-r)^(1/p) e^(it) + 2a2 (1-r)"},
       {{0, 1, 1, 1}, {1, 1, 1, 2}}},
      {{25, "(x1y2 + x2y1, x2y2)", "||.||_1", "a2 + a1 D", true},
       {{0, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 1}}},
      {{26, "(x1y1, x1y2 + x2y1)", "||.||_1", "a1 + a2 D", true},
       {{0, 0, 0, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}}},
      {{27, "(x1y1 + x1y2 + x2y1 + x2y2, 0)", "||.||_1", "|a1 + a2| D", true},
       {{0, 0, 0, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 1}}},
      {{28, "(0, x1y1 + x1y2 + x2y1 + x2y2)", "||.||_1", "|a1 + a2| D", true},
       {{1, 0, 0, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 1}}},
      {{29, "(x1y1 + x1y2 + x2y1, x2y2)", "||.||_1", "a2 + a1 D", true},
       {{0, 0, 0, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 1}}},
      {{30, "(x1y2 + x2y1 + x2y2, x2y2)", "2||.||_1", "a2 + (a1 + a2) D", true},
       {{0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 1}, {1, 1, 1, 1}}},
      {{31, "(x1y1 + x2y2, x1y2 + x2y1)", "||.||_1", "a1 + a2 D", true},
       {{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}}},
      {{32, "(x1y1 + x1y2, x2y1 + x2y2)", "||.||_1",
        "r (a1 + a2 e^(it)) + (1-r) (a1 e^(it) + a2)", true},
       {{0, 0, 0, 1}, {0, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 1}}},
      {{33, "(x1y1 - x2y2, x1y2 + x2y1)", "||.||_1", "a1 + a2 D", true},
       {{0, 0, 0, 1}, {0, 1, 1, -1}, {1, 0, 1, 1}, {1, 1, 0, 1}}},
      {{34, "(x1y1 + x2y1, x1y2 + x2y2)", "||.||_1", "{a1 + a2}", true},
       {{0, 0, 0, 1}, {0, 1, 0, 1}, {1, 0, 1, 1}, {1, 1, 1, 1}}},
      {{35, "(x1y2 + x2y1, x1y1 + x2y2)", "||.||_1", "a2 + a1 D", true},
       {{0, 0, 1, 1}, {0, 1, 0, 1}, {1, 0, 0, 1}, {1, 1, 1, 1}}},
  }};
  return data;
}

const RowData& row_data(int row) {
  if (row < 1 || row > kTableRows) throw SpecError("table row must be in 1..35 (got " + std::to_string(row) + ")");
  return rows()[static_cast<std::size_t>(row - 1)];
}

// r^(1/q) (1-r)^(1/p): alpha = 1/q, beta = 1/p.
Param w12(std::string name, Complex center0, Complex center1, Complex spin, const Exponent& p) {
  return Param{std::move(name), center0, center1, spin, 0.0, p.conjugate().reciprocal(), p.reciprocal()};
}

// r^(1/p) (1-r)^(1/q).
Param w21(std::string name, Complex center0, Complex center1, Complex spin, const Exponent& p) {
  return Param{std::move(name), center0, center1, spin, 0.0, p.reciprocal(), p.conjugate().reciprocal()};
}

void thin(std::span<const Complex> points, std::size_t max_side, std::vector<Complex>& out) {
  if (points.empty()) throw PreconditionError("product rule needs nonempty inputs");
  const HullPolygon hull = convex_hull(points);
  auto stride_pick = [&](std::span<const Complex> src, std::size_t want) {
    if (want == 0) return;
    if (src.size() <= want) {
      out.insert(out.end(), src.begin(), src.end());
      return;
    }
    for (std::size_t s = 0; s < want; ++s) out.push_back(src[s * src.size() / want]);
  };
  const std::size_t cap = std::max<std::size_t>(max_side, 1);
  stride_pick(hull.vertices(), cap);
  if (out.size() < cap) stride_pick(points, cap - out.size());
}

}  // namespace

const TableRow& table_row(int row) { return row_data(row).info; }

bool row_accepts(int row, const Exponent& p) { return !table_row(row).l1_only || p.is_one(); }

double table_scale(int row, const Exponent& p) {
  table_row(row);
  switch (row) {
    case 5: case 6: case 7: case 8: case 23: case 30:
      return 2.0;
    case 9: case 10: case 11: case 12: case 20: case 21: case 22: case 24:
      return 3.0;
    case 13: case 19:
      return std::pow(2.0, p.reciprocal());
    default:
      return 1.0;
  }
}

StructureTensor table_tensor(int row) {
  StructureTensor t(2);
  for (const auto& c : row_data(row).terms)
    t.add(static_cast<std::size_t>(c.i), static_cast<std::size_t>(c.j), static_cast<std::size_t>(c.k), c.c);
  return t;
}

AlgebraSpec table_algebra(int row, const Exponent& p) {
  if (!row_accepts(row, p))
    throw SpecError("table row " + std::to_string(row) + " is defined for the l^1 norm only (got p = " +
                    p.to_string() + ")");
  AlgebraSpec a{table_tensor(row), NormSpec::lp(p, 2, table_scale(row, p)), std::nullopt};
  if (auto e = solve_identity(a.tensor)) {
    const double n = norm(a, *e);
    a.identity = Identity{*e, std::abs(n - 1.0) <= 1e-10};
  }
  a.validate();
  return a;
}

Region table_oracle(int row, const Exponent& p, Complex a1, Complex a2) {
  if (!row_accepts(row, p))
    throw SpecError("table row " + std::to_string(row) + " is defined for the l^1 norm only (got p = " +
                    p.to_string() + ")");
  const std::string name = "row" + std::to_string(row);
  switch (row) {
    case 1: return Segment{0.0, a1};
    case 4: return Segment{0.0, a2};
    case 5: return Segment{0.0, 2.0 * a1};
    case 8: return Segment{0.0, 2.0 * a2};
    case 9: return Segment{0.0, 3.0 * a1};
    case 12: return Segment{0.0, 3.0 * a2};
    case 2: return w12(name, 0.0, 0.0, a2, p);
    case 3: return w21(name, 0.0, 0.0, a1, p);
    case 6: return w12(name, 0.0, 0.0, 2.0 * a2, p);
    case 7: return w21(name, 0.0, 0.0, 2.0 * a1, p);
    case 10: return w12(name, 0.0, 0.0, 3.0 * a2, p);
    case 11: return w21(name, 0.0, 0.0, 3.0 * a1, p);
    case 13: return w21(name, 0.0, a1, a1, p);
    case 14: return PointRegion{a1};
    case 15: return w21(name, 0.0, a1, a2, p);
    case 16: return FiniteHull{{a1, a2}};
    case 17: return w12(name, a2, -a2, a1, p);
    case 18: return PointRegion{a2};
    case 19: return w12(name, a2, -a2, a2, p);
    case 20: return w21(name, 0.0, 2.0 * a1, a1, p);
    case 21: return w12(name, a2, -a2, 2.0 * a2, p);
    case 22: return w21(name, 0.0, a1, 2.0 * a1, p);
    case 23: return Segment{2.0 * a2, a1};
    case 24: return w12(name, 2.0 * a2, -2.0 * a2, a2, p);
    case 25: case 29: case 35: return Minkowski{a2, a1};
    case 26: case 31: case 33: return Minkowski{a1, a2};
    case 27: case 28: return Disk{0.0, std::abs(a1 + a2)};
    case 30: return Minkowski{a2, a1 + a2};
    case 32: return Param{name, a2, a1 - a2, a1, a2 - a1, 0.0, 0.0};
    case 34: return PointRegion{a1 + a2};
    default: break;
  }
  throw SpecError("table row out of range");
}

StructureTensor pointwise_tensor(std::size_t n) {
  StructureTensor t(n);
  for (std::size_t i = 0; i < n; ++i) t.set(i, i, i, 1.0);
  return t;
}

std::vector<Complex> product_rule(std::span<const Complex> va, std::span<const Complex> vb,
                                  const ProductRuleOptions& options) {
  std::vector<Complex> za, zb;
  thin(va, options.max_side, za);
  thin(vb, options.max_side, zb);
  const std::size_t steps = std::max<std::size_t>(options.density, 1);
  std::vector<Complex> out;
  out.reserve(za.size() * zb.size() * (steps + 1));
  for (std::size_t s = 0; s <= steps; ++s) {
    const double r = static_cast<double>(s) / static_cast<double>(steps);
    for (const auto& z : za)
      for (const auto& w : zb) out.push_back(r * z + (1.0 - r) * w);
  }
  return out;
}

std::vector<Complex> product_rule(const Region& va, const Region& vb, const ProductRuleOptions& options) {
  const auto sa = region_sample(va);
  const auto sb = region_sample(vb);
  return product_rule(sa, sb, options);
}

Region lp_pointwise_oracle(const Element& f, const NormSpec& norm) {
  norm.validate();
  if (norm.scale != 1.0) throw PreconditionError("pointwise oracle needs an unscaled norm");
  if (f.dim() != norm.dim()) throw SpecError("pointwise oracle: dimension mismatch");
  if (f.dim() == 0) throw SpecError("pointwise oracle needs at least one coordinate");
  if (!f.is_finite()) throw SpecError("pointwise oracle: element must be finite");
  const auto hull = convex_hull(f.coords);
  const auto& v = hull.vertices();
  if (v.size() == 1) return PointRegion{v[0]};
  if (v.size() == 2) return Segment{v[0], v[1]};
  return FiniteHull{v};
}

Region lp_pointwise_oracle(const AlgebraSpec& algebra, const Element& f) {
  if (!algebra.tensor.is_diagonal()) throw SpecError("pointwise oracle needs a pointwise (diagonal) product");
  for (std::size_t i = 0; i < algebra.dim(); ++i)
    if (algebra.tensor(i, i, i) != Complex{1.0})
      throw SpecError("pointwise oracle needs the plain pointwise product");
  const auto* n = std::get_if<NormSpec>(&algebra.norm);
  if (!n) throw SpecError("pointwise oracle needs a single weighted l^p norm");
  return lp_pointwise_oracle(f, *n);
}

}  // namespace snrlab
