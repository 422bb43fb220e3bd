#include "snrlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "snrlab/detail/random.hpp"

namespace snrlab {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  double t = ((z - a) * std::conj(d)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

// ---- Hull ------------------------------------------------------------------

double HullPolygon::distance(Complex z) const {
  const auto& v = vertices_;
  if (v.empty()) throw PreconditionError("distance to an empty hull");
  if (v.size() == 1) return std::abs(z - v[0]);
  if (v.size() == 2) return segment_distance(z, v[0], v[1]);
  bool inside = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex a = v[i], b = v[(i + 1) % v.size()];
    if (cross(a, b, z) < 0.0) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    best = std::min(best, segment_distance(z, v[i], v[(i + 1) % v.size()]));
  return best;
}

double HullPolygon::area() const {
  const auto& v = vertices_;
  if (v.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex a = v[i], b = v[(i + 1) % v.size()];
    s += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * s;
}

HullPolygon convex_hull(std::span<const Complex> points) {
  if (points.empty()) throw PreconditionError("convex hull of an empty point set");
  std::vector<Complex> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() == 1) return HullPolygon({p[0]});

  double extent = 1.0;
  for (const auto& z : p) extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
  const double eps = 1e-12 * extent * extent;

  std::vector<Complex> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= eps) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], p[i]) <= eps) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && std::abs(h[0] - h[1]) == 0.0) h.resize(1);
  return HullPolygon(std::move(h));
}

// ---- Nearest neighbours ----------------------------------------------------

using BPoint = bg::model::point<double, 2, bg::cs::cartesian>;

struct NearestIndex::Impl {
  bgi::rtree<BPoint, bgi::rstar<16>> tree;
};

NearestIndex::NearestIndex(std::span<const Complex> points) : impl_(std::make_unique<Impl>()) {
  if (points.empty()) throw PreconditionError("nearest-neighbour index over an empty set");
  std::vector<BPoint> pts;
  pts.reserve(points.size());
  for (const auto& z : points) pts.emplace_back(z.real(), z.imag());
  impl_->tree = bgi::rtree<BPoint, bgi::rstar<16>>(pts);  // bulk-loaded
}

NearestIndex::~NearestIndex() = default;
NearestIndex::NearestIndex(NearestIndex&&) noexcept = default;
NearestIndex& NearestIndex::operator=(NearestIndex&&) noexcept = default;

double NearestIndex::distance(Complex z) const {
  const BPoint q(z.real(), z.imag());
  BPoint hit(z.real(), z.imag());
  for (auto it = impl_->tree.qbegin(bgi::nearest(q, 1)); it != impl_->tree.qend(); ++it) hit = *it;
  return std::hypot(hit.get<0>() - z.real(), hit.get<1>() - z.imag());
}

double directed_hausdorff(std::span<const Complex> from, std::span<const Complex> to) {
  if (from.empty() || to.empty()) throw PreconditionError("Hausdorff distance of an empty set");
  const NearestIndex index(to);
  double worst = 0.0;
  for (const auto& z : from) worst = std::max(worst, index.distance(z));
  return worst;
}

double hausdorff(std::span<const Complex> a, std::span<const Complex> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hull_hausdorff(const HullPolygon& a, const HullPolygon& b) {
  if (a.empty() || b.empty()) throw PreconditionError("Hausdorff distance of an empty hull");
  // Distance to a convex set is convex, so both sups sit at vertices.
  double worst = 0.0;
  for (const auto& v : a.vertices()) worst = std::max(worst, b.distance(v));
  for (const auto& v : b.vertices()) worst = std::max(worst, a.distance(v));
  return worst;
}

// ---- Convexity defect --------------------------------------------------------

double convexity_defect(std::span<const Complex> points, const DefectOptions& options) {
  if (points.empty()) throw PreconditionError("convexity defect of an empty set");
  const HullPolygon hull = convex_hull(points);
  const auto& v = hull.vertices();
  if (v.size() == 1) return 0.0;

  const NearestIndex index(points);
  const std::size_t probes = std::max<std::size_t>(options.probes, 16);
  auto rng = detail::rng_for(options.seed, 0, 0xdefec7);
  double worst = 0.0;
  auto probe = [&](Complex z) { worst = std::max(worst, index.distance(z)); };

  if (v.size() == 2) {
    for (std::size_t i = 0; i <= probes; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(probes);
      probe(v[0] + t * (v[1] - v[0]));
    }
    return worst;
  }

  // Fan triangulation from v[0]; random probes uniform in the hull.
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    total += 0.5 * std::abs(cross(v[0], v[i], v[i + 1]));
    cumulative.push_back(total);
  }
  const std::size_t random_probes = probes / 2;
  for (std::size_t s = 0; s < random_probes; ++s) {
    const double pick = detail::uniform(rng, 0.0, total);
    const std::size_t t = std::min<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin(),
        cumulative.size() - 1);
    double r1 = detail::uniform(rng), r2 = detail::uniform(rng);
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    probe(v[0] + r1 * (v[t + 1] - v[0]) + r2 * (v[t + 2] - v[0]));
  }

  // Lattice probes inside the hull plus points along its boundary.
  const double spacing = std::sqrt(total / static_cast<double>(probes - random_probes));
  double lo_x = v[0].real(), hi_x = lo_x, lo_y = v[0].imag(), hi_y = lo_y;
  for (const auto& z : v) {
    lo_x = std::min(lo_x, z.real());
    hi_x = std::max(hi_x, z.real());
    lo_y = std::min(lo_y, z.imag());
    hi_y = std::max(hi_y, z.imag());
  }
  if (spacing > 0.0) {
    for (double x = lo_x + 0.5 * spacing; x < hi_x; x += spacing)
      for (double y = lo_y + 0.5 * spacing; y < hi_y; y += spacing)
        if (hull.distance({x, y}) == 0.0) probe({x, y});
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Complex a = v[i], b = v[(i + 1) % v.size()];
      const auto steps = static_cast<std::size_t>(std::ceil(std::abs(b - a) / spacing));
      for (std::size_t s = 0; s <= steps; ++s)
        probe(a + (b - a) * (static_cast<double>(s) / static_cast<double>(std::max<std::size_t>(steps, 1))));
    }
  }
  return worst;
}

// ---- Regions -----------------------------------------------------------------

namespace {

// r^e with 0^0 = 1.
double pow0(double r, double e) { return e == 0.0 ? 1.0 : std::pow(std::max(r, 0.0), e); }

// min over r of the distance from z to the circle at parameter r, which is
// the distance from z to the union of circles. Returns 0 on a sign change of
// |z - c(r)| - |s(r)|, since the region then contains z.
double param_distance(const Param& p, Complex z) {
  auto f = [&](double r) { return std::abs(z - p.center(r)) - std::abs(p.spin(r)); };
  std::vector<double> rs;
  constexpr int kScan = 256;
  for (int j = 0; j <= kScan; ++j) rs.push_back(static_cast<double>(j) / kScan);
  for (int e = 3; e <= 14; ++e) {
    rs.push_back(std::pow(10.0, -e));
    rs.push_back(1.0 - std::pow(10.0, -e));
  }
  std::sort(rs.begin(), rs.end());
  std::vector<double> fs(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    fs[i] = f(rs[i]);
    if (fs[i] == 0.0) return 0.0;
    if (i > 0 && std::signbit(fs[i]) != std::signbit(fs[i - 1])) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (double x : fs) best = std::min(best, std::abs(x));
  // Golden-section refinement around each local minimum of |f|.
  const double sign = fs[0];
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double here = std::abs(fs[i]);
    const bool left_ok = i == 0 || here <= std::abs(fs[i - 1]);
    const bool right_ok = i + 1 == rs.size() || here <= std::abs(fs[i + 1]);
    if (!left_ok || !right_ok) continue;
    double a = rs[i > 0 ? i - 1 : 0], b = rs[i + 1 < rs.size() ? i + 1 : i];
    constexpr double g = 0.6180339887498949;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
      if (std::signbit(fc) != std::signbit(sign) || std::signbit(fd) != std::signbit(sign)) return 0.0;
      best = std::min({best, std::abs(fc), std::abs(fd)});
      if (std::abs(fc) < std::abs(fd)) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    best = std::min({best, std::abs(fc), std::abs(fd)});
  }
  return best;
}

std::size_t steps_for(double length, double spacing) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / spacing)));
}

void sample_circle(std::vector<Complex>& out, Complex center, Complex spin, double spacing) {
  const double radius = std::abs(spin);
  if (radius == 0.0) {
    out.push_back(center);
    return;
  }
  const std::size_t count = std::max<std::size_t>(8, steps_for(2.0 * std::numbers::pi * radius, spacing));
  for (std::size_t m = 0; m < count; ++m) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(count);
    if (theta >= std::numbers::pi) theta -= 2.0 * std::numbers::pi;
    out.push_back(center + spin * std::polar(1.0, theta));
  }
}

void sample_disk(std::vector<Complex>& out, Complex center, double radius, double spacing) {
  out.push_back(center);
  if (radius == 0.0) return;
  const std::size_t rings = steps_for(radius, spacing);
  for (std::size_t j = 1; j <= rings; ++j)
    sample_circle(out, center, radius * static_cast<double>(j) / static_cast<double>(rings), spacing);
}

void sample_segment(std::vector<Complex>& out, Complex a, Complex b, double spacing) {
  const std::size_t steps = steps_for(std::abs(b - a), spacing);
  for (std::size_t s = 0; s <= steps; ++s)
    out.push_back(a + (b - a) * (static_cast<double>(s) / static_cast<double>(steps)));
}

void sample_param(std::vector<Complex>& out, const Param& p, std::size_t density, double spacing) {
  // Uniform r grid refined until consecutive circles move by at most `spacing`.
  auto gap = [&](double r0, double r1) {
    return std::abs(p.center(r1) - p.center(r0)) + std::abs(std::abs(p.spin(r1)) - std::abs(p.spin(r0)));
  };
  std::vector<double> rs;
  auto refine = [&](auto&& self, double r0, double r1, int depth) -> void {
    if (depth < 48 && r1 - r0 > 1e-14 && gap(r0, r1) > spacing) {
      const double mid = 0.5 * (r0 + r1);
      self(self, r0, mid, depth + 1);
      self(self, mid, r1, depth + 1);
      return;
    }
    rs.push_back(r1);
  };
  rs.push_back(0.0);
  for (std::size_t j = 0; j < density; ++j)
    refine(refine, static_cast<double>(j) / static_cast<double>(density),
           static_cast<double>(j + 1) / static_cast<double>(density), 0);
  for (double r : rs) sample_circle(out, p.center(r), p.spin(r), spacing);
}

}  // namespace

Complex Param::spin(double r) const {
  return (spin0 + spin1 * r) * pow0(r, alpha) * pow0(1.0 - r, beta);
}

Complex Param::map(double r, double theta) const { return center(r) + spin(r) * std::polar(1.0, theta); }

const char* region_kind(const Region& region) noexcept {
  struct {
    const char* operator()(const PointRegion&) const { return "point"; }
    const char* operator()(const Segment&) const { return "segment"; }
    const char* operator()(const Disk&) const { return "disk"; }
    const char* operator()(const Minkowski&) const { return "minkowski"; }
    const char* operator()(const FiniteHull&) const { return "finite-hull"; }
    const char* operator()(const Param&) const { return "param"; }
  } visitor;
  return std::visit(visitor, region);
}

void validate_region(const Region& region) {
  struct {
    void operator()(const PointRegion& r) const {
      if (!finite(r.z)) throw SpecError("point region must be finite");
    }
    void operator()(const Segment& r) const {
      if (!finite(r.from) || !finite(r.to)) throw SpecError("segment endpoints must be finite");
    }
    void operator()(const Disk& r) const {
      if (!finite(r.center) || !(r.radius >= 0.0) || !std::isfinite(r.radius))
        throw SpecError("disk needs a finite center and a finite radius >= 0");
    }
    void operator()(const Minkowski& r) const {
      if (!finite(r.translate) || !finite(r.scale)) throw SpecError("minkowski region must be finite");
    }
    void operator()(const FiniteHull& r) const {
      if (r.generators.empty()) throw SpecError("finite hull needs at least one generator");
      for (const auto& z : r.generators)
        if (!finite(z)) throw SpecError("finite hull generators must be finite");
    }
    void operator()(const Param& r) const {
      if (!finite(r.center0) || !finite(r.center1) || !finite(r.spin0) || !finite(r.spin1))
        throw SpecError("param region coefficients must be finite");
      if (!(r.alpha >= 0.0) || !(r.beta >= 0.0) || !std::isfinite(r.alpha) || !std::isfinite(r.beta))
        throw SpecError("param region exponents must be finite and >= 0");
    }
  } visitor;
  std::visit(visitor, region);
}

double region_distance(const Region& region, Complex z) {
  validate_region(region);
  struct {
    Complex z;
    double operator()(const PointRegion& r) const { return std::abs(z - r.z); }
    double operator()(const Segment& r) const { return segment_distance(z, r.from, r.to); }
    double operator()(const Disk& r) const { return std::max(0.0, std::abs(z - r.center) - r.radius); }
    double operator()(const Minkowski& r) const {
      return std::max(0.0, std::abs(z - r.translate) - std::abs(r.scale));
    }
    double operator()(const FiniteHull& r) const { return convex_hull(r.generators).distance(z); }
    double operator()(const Param& r) const { return param_distance(r, z); }
  } visitor{z};
  return std::visit(visitor, region);
}

bool region_contains(const Region& region, Complex z, double tol) {
  return region_distance(region, z) <= tol;
}

std::vector<Complex> region_sample(const Region& region, std::size_t density) {
  if (density == 0) throw PreconditionError("region_sample needs density >= 1");
  validate_region(region);
  const double spacing = 4.0 / static_cast<double>(density);
  std::vector<Complex> out;
  struct {
    std::vector<Complex>& out;
    std::size_t density;
    double spacing;
    void operator()(const PointRegion& r) const { out.push_back(r.z); }
    void operator()(const Segment& r) const { sample_segment(out, r.from, r.to, spacing); }
    void operator()(const Disk& r) const { sample_disk(out, r.center, r.radius, spacing); }
    void operator()(const Minkowski& r) const { sample_disk(out, r.translate, std::abs(r.scale), spacing); }
    void operator()(const Param& r) const { sample_param(out, r, density, spacing); }
    void operator()(const FiniteHull& r) const {
      const HullPolygon hull = convex_hull(r.generators);
      const auto& v = hull.vertices();
      if (v.size() == 1) {
        out.push_back(v[0]);
        return;
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.size() == 2 && i == 1) break;
        sample_segment(out, v[i], v[(i + 1) % v.size()], spacing);
      }
      if (v.size() < 3) return;
      double lo_x = v[0].real(), hi_x = lo_x, lo_y = v[0].imag(), hi_y = lo_y;
      for (const auto& z : v) {
        lo_x = std::min(lo_x, z.real());
        hi_x = std::max(hi_x, z.real());
        lo_y = std::min(lo_y, z.imag());
        hi_y = std::max(hi_y, z.imag());
      }
      for (double x = lo_x + 0.5 * spacing; x < hi_x; x += spacing)
        for (double y = lo_y + 0.5 * spacing; y < hi_y; y += spacing)
          if (hull.distance({x, y}) == 0.0) out.emplace_back(x, y);
    }
  } visitor{out, density, spacing};
  std::visit(visitor, region);
  return out;
}

}  // namespace snrlab
