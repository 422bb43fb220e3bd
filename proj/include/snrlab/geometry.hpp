#pragma once

// Planar geometry over C = R^2: convex hulls, Hausdorff distances, convexity
// defect, and the exact region shapes used as oracles.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "snrlab/types.hpp"

namespace snrlab {

// Convex polygon with counterclockwise vertices and no collinear triples.
// One vertex is a point, two a segment.
class HullPolygon {
 public:
  HullPolygon() = default;
  explicit HullPolygon(std::vector<Complex> ccw_vertices) : vertices_(std::move(ccw_vertices)) {}

  const std::vector<Complex>& vertices() const noexcept { return vertices_; }
  bool empty() const noexcept { return vertices_.empty(); }
  // 0 for points inside or on the boundary.
  double distance(Complex z) const;
  bool contains(Complex z, double tol) const { return distance(z) <= tol; }
  double area() const;

 private:
  std::vector<Complex> vertices_;
};

// Andrew's monotone chain. Collinear boundary points are dropped.
HullPolygon convex_hull(std::span<const Complex> points);

// Nearest-neighbour queries against a fixed point set (R-tree backed).
class NearestIndex {
 public:
  explicit NearestIndex(std::span<const Complex> points);
  ~NearestIndex();
  NearestIndex(NearestIndex&&) noexcept;
  NearestIndex& operator=(NearestIndex&&) noexcept;

  double distance(Complex z) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double directed_hausdorff(std::span<const Complex> from, std::span<const Complex> to);
double hausdorff(std::span<const Complex> a, std::span<const Complex> b);
// Hausdorff distance between the filled convex polygons.
double hull_hausdorff(const HullPolygon& a, const HullPolygon& b);

struct DefectOptions {
  std::size_t probes = 20000;
  std::uint64_t seed = 0;
};

// Approximates sup_{z in hull(points)} dist(z, points) with random and
// lattice probes inside the hull.
double convexity_defect(std::span<const Complex> points, const DefectOptions& options = {});

// ---- Regions ---------------------------------------------------------------

struct PointRegion {
  Complex z;
};

struct Segment {
  Complex from, to;
};

struct Disk {
  Complex center;
  double radius = 0.0;
};

// translate + scale * D, where D is the closed unit disk.
struct Minkowski {
  Complex translate;
  Complex scale;
};

struct FiniteHull {
  std::vector<Complex> generators;
};

// Union of circles { center(r) + spin(r) e^{i theta} : r in [0,1], theta in
// [-pi, pi) } with
//   center(r) = center0 + center1 r,
//   spin(r)   = (spin0 + spin1 r) r^alpha (1 - r)^beta,
// where 0^0 = 1 (so alpha = 0 or beta = 0 drops that factor entirely).
struct Param {
  std::string name;
  Complex center0, center1;
  Complex spin0, spin1;
  double alpha = 0.0, beta = 0.0;

  Complex center(double r) const { return center0 + center1 * r; }
  Complex spin(double r) const;
  Complex map(double r, double theta) const;
};

using Region = std::variant<PointRegion, Segment, Disk, Minkowski, FiniteHull, Param>;

const char* region_kind(const Region& region) noexcept;
// Throws SpecError for negative radii, empty generator lists, non-finite
// data, or negative exponents.
void validate_region(const Region& region);

bool region_contains(const Region& region, Complex z, double tol);
// For Param this is min over r of the distance to the circle at r, found by a
// scan plus golden-section refinement.
double region_distance(const Region& region, Complex z);
// Points of the region with spacing at most 4/density (0.02 at the default
// density 200); every point passes region_contains at 1e-9.
std::vector<Complex> region_sample(const Region& region, std::size_t density = 200);

}  // namespace snrlab
