#pragma once

// Exact SNR regions: the 35 products on C^2, the product-algebra rule
// V_{AxB}(a, b) = { r z + (1 - r) w }, and co(f(X)) for the pointwise product
// on weighted l^p.

#include <span>
#include <vector>

#include "snrlab/algebra.hpp"
#include "snrlab/geometry.hpp"

namespace snrlab {

constexpr int kTableRows = 35;

struct TableRow {
  int index = 0;
  const char* product = "";  // e.g. "(x1y1, x2y2)"
  const char* norm = "";     // e.g. "2^(1/p)||.||_p"
  const char* region = "";   // e.g. "co{a1, a2}"
  bool l1_only = false;
  // Rows whose norm column reads "Any".
  bool any_norm = false;
};

// Throws SpecError for rows outside 1..35.
const TableRow& table_row(int row);
bool row_accepts(int row, const Exponent& p);
// Norm scale c of the row at exponent p.
double table_scale(int row, const Exponent& p);
StructureTensor table_tensor(int row);
// Tensor, prescribed norm, and the identity when one exists. Throws SpecError
// when the row does not admit p.
AlgebraSpec table_algebra(int row, const Exponent& p);
Region table_oracle(int row, const Exponent& p, Complex a1, Complex a2);

// Pointwise product on C^n: x o y = (x_i y_i)_i.
StructureTensor pointwise_tensor(std::size_t n);

struct ProductRuleOptions {
  std::size_t density = 64;  // steps in r
  // Each input is thinned to at most this many points (hull vertices first).
  std::size_t max_side = 64;
};

std::vector<Complex> product_rule(std::span<const Complex> va, std::span<const Complex> vb,
                                  const ProductRuleOptions& options = {});
std::vector<Complex> product_rule(const Region& va, const Region& vb,
                                  const ProductRuleOptions& options = {});

// co(f(X)) as a Point, Segment or FiniteHull. The norm must have scale 1.
Region lp_pointwise_oracle(const Element& f, const NormSpec& norm);
// Same, after checking that the algebra's product is pointwise.
Region lp_pointwise_oracle(const AlgebraSpec& algebra, const Element& f);

}  // namespace snrlab
