#include "snrlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "digest.hpp"
#include "snrlab/detail/random.hpp"

namespace snrlab {

Exponent Exponent::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw SpecError("norm exponent must be a finite number >= 1");
  return Exponent(p, false);
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw SpecError("cannot parse norm exponent '" + text + "'");
  }
  if (used != text.size()) throw SpecError("cannot parse norm exponent '" + text + "'");
  if (std::isinf(p)) return infinity();
  return finite(p);
}

double Exponent::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : p_;
}

Exponent Exponent::conjugate() const {
  if (infinite_) return finite(1.0);
  if (p_ == 1.0) return infinity();
  return finite(p_ / (p_ - 1.0));
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p_;
  return os.str();
}

void NormSpec::validate() const {
  if (weights.empty()) throw SpecError("norm needs at least one weight");
  for (double w : weights)
    if (!(w >= 1.0) || !std::isfinite(w)) throw SpecError("norm weights must be finite and >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw SpecError("norm scale must be positive");
}

double NormSpec::operator()(std::span<const Complex> x) const {
  if (x.size() != weights.size()) throw SpecError("norm: dimension mismatch");
  if (p.is_infinite()) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, weights[i] * std::abs(x[i]));
    return scale * m;
  }
  const double pv = p.value();
  if (pv == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * std::abs(x[i]);
    return scale * s;
  }
  // Factor out the largest term so |x|^p cannot overflow or underflow.
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, weights[i] * std::abs(x[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(weights[i] * std::abs(x[i]) / m, pv);
  return scale * m * std::pow(s, 1.0 / pv);
}

std::size_t SumNorm::dim() const noexcept {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.dim();
  return n;
}

void SumNorm::validate() const {
  if (blocks.empty()) throw SpecError("sum norm needs at least one block");
  for (const auto& b : blocks) b.validate();
}

std::size_t SumNorm::offset(std::size_t b) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < b; ++i) off += blocks.at(i).dim();
  return off;
}

double SumNorm::operator()(std::span<const Complex> x) const {
  if (x.size() != dim()) throw SpecError("norm: dimension mismatch");
  double s = 0.0;
  std::size_t off = 0;
  for (const auto& b : blocks) {
    s += b(x.subspan(off, b.dim()));
    off += b.dim();
  }
  return s;
}

std::size_t norm_dim(const AlgebraNorm& norm) {
  return std::visit([](const auto& n) { return n.dim(); }, norm);
}

double norm_value(const AlgebraNorm& norm, std::span<const Complex> x) {
  return std::visit([&](const auto& n) { return n(x); }, norm);
}

AlgebraNorm rescaled(const AlgebraNorm& norm, double factor) {
  if (const auto* n = std::get_if<NormSpec>(&norm)) {
    NormSpec out = *n;
    out.scale *= factor;
    return out;
  }
  SumNorm out = std::get<SumNorm>(norm);
  for (auto& b : out.blocks) b.scale *= factor;
  return out;
}

StructureTensor::StructureTensor(std::size_t n) : n_(n), coeffs_(n * n * n) {
  if (n == 0) throw SpecError("structure tensor dimension must be positive");
}

StructureTensor::StructureTensor(std::size_t n, std::vector<Complex> coeffs)
    : n_(n), coeffs_(std::move(coeffs)) {
  if (n == 0) throw SpecError("structure tensor dimension must be positive");
  if (coeffs_.size() != n * n * n) throw SpecError("structure tensor needs exactly n^3 coefficients");
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw SpecError("structure tensor coefficients must be finite");
}

std::vector<StructureTensor::Term> StructureTensor::nonzeros() const {
  std::vector<Term> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k) {
        const Complex c = (*this)(i, j, k);
        if (c != Complex{}) out.push_back({i, j, k, c});
      }
  return out;
}

bool StructureTensor::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{}; });
}

bool StructureTensor::has_integer_coefficients() const {
  constexpr double kBound = 1 << 20;
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) {
    return std::trunc(c.real()) == c.real() && std::trunc(c.imag()) == c.imag() &&
           std::abs(c.real()) <= kBound && std::abs(c.imag()) <= kBound;
  });
}

bool StructureTensor::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k)
        if ((i != j || j != k) && (*this)(i, j, k) != Complex{}) return false;
  return true;
}

std::vector<Complex> StructureTensor::left_multiplication(std::span<const Complex> a) const {
  if (a.size() != n_) throw SpecError("multiply: dimension mismatch");
  std::vector<Complex> m(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (a[i] == Complex{}) continue;
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k) m[k * n_ + j] += (*this)(i, j, k) * a[i];
  }
  return m;
}

StructureTensor StructureTensor::direct_sum(const StructureTensor& a, const StructureTensor& b) {
  const std::size_t n = a.dim(), m = b.dim();
  StructureTensor out(n + m);
  for (const auto& t : a.nonzeros()) out.set(t.i, t.j, t.k, t.c);
  for (const auto& t : b.nonzeros()) out.set(n + t.i, n + t.j, n + t.k, t.c);
  return out;
}

Element multiply(const StructureTensor& t, const Element& x, const Element& y) {
  const std::size_t n = t.dim();
  if (x.dim() != n || y.dim() != n) throw SpecError("multiply: dimension mismatch");
  Element out = Element::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == Complex{}) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex xy = x[i] * y[j];
      if (xy == Complex{}) continue;
      for (std::size_t k = 0; k < n; ++k) out[k] += t(i, j, k) * xy;
    }
  }
  return out;
}

Element multiply(const AlgebraSpec& a, const Element& x, const Element& y) {
  return multiply(a.tensor, x, y);
}

double norm(const AlgebraSpec& a, const Element& x) {
  if (x.dim() != a.dim()) throw SpecError("norm: dimension mismatch");
  return norm_value(a.norm, x.view());
}

void AlgebraSpec::validate() const {
  std::visit([](const auto& n) { n.validate(); }, norm);
  if (norm_dim(norm) != tensor.dim()) throw SpecError("norm and tensor dimensions differ");
  if (!identity) return;
  const std::size_t n = dim();
  if (identity->element.dim() != n) throw SpecError("identity has the wrong dimension");
  for (std::size_t b = 0; b < n; ++b) {
    const Element e = Element::basis(n, b);
    const Element l = multiply(tensor, identity->element, e);
    const Element r = multiply(tensor, e, identity->element);
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(l[k] - e[k]) > 1e-12 || std::abs(r[k] - e[k]) > 1e-12)
        throw SpecError("declared identity does not act as a two-sided identity");
  }
}

namespace {

struct GaussInt {
  long long re = 0, im = 0;
};

GaussInt to_gauss(Complex c) {
  return {static_cast<long long>(c.real()), static_cast<long long>(c.imag())};
}

bool associative_exact(const StructureTensor& t) {
  const std::size_t n = t.dim();
  std::vector<GaussInt> c(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[(i * n + j) * n + k] = to_gauss(t(i, j, k));
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> const GaussInt& {
    return c[(i * n + j) * n + k];
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          long long lre = 0, lim = 0, rre = 0, rim = 0;
          for (std::size_t m = 0; m < n; ++m) {
            const GaussInt& a = at(i, j, m);
            const GaussInt& b = at(m, k, l);
            lre += a.re * b.re - a.im * b.im;
            lim += a.re * b.im + a.im * b.re;
            const GaussInt& x = at(j, k, m);
            const GaussInt& y = at(i, m, l);
            rre += x.re * y.re - x.im * y.im;
            rim += x.re * y.im + x.im * y.re;
          }
          if (lre != rre || lim != rim) return false;
        }
  return true;
}

}  // namespace

double associativity_residual(const StructureTensor& t) {
  const std::size_t n = t.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Complex lhs{}, rhs{};
          for (std::size_t m = 0; m < n; ++m) {
            lhs += t(i, j, m) * t(m, k, l);
            rhs += t(j, k, m) * t(i, m, l);
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

bool is_associative(const StructureTensor& t, double tol) {
  if (t.has_integer_coefficients()) return associative_exact(t);
  return associativity_residual(t) <= tol;
}

namespace {

// Unit vector (in `norm`) drawn from a mix of dense Gaussian directions and
// sparse/saturated ones, where operator norms of products tend to peak.
Element random_unit(const AlgebraNorm& norm, std::size_t n, detail::Rng& rng) {
  Element x = Element::zero(n);
  const auto kind = detail::uniform_index(rng, 3);
  if (kind == 0) {
    x[detail::uniform_index(rng, n)] = detail::unit_phase(rng);
  } else if (kind == 1) {
    for (auto& c : x.coords) c = detail::unit_phase(rng) * (detail::uniform(rng) < 0.5 ? 1.0 : detail::uniform(rng));
  } else {
    for (auto& c : x.coords) c = detail::complex_gaussian(rng);
  }
  double nv = norm_value(norm, x.view());
  if (nv == 0.0) {
    x = Element::basis(n, 0);
    nv = norm_value(norm, x.view());
  }
  return x.scaled(1.0 / nv);
}

double product_ratio(const AlgebraSpec& a, const Element& x, const Element& y) {
  const double nx = norm(a, x), ny = norm(a, y);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return norm(a, multiply(a, x, y)) / (nx * ny);
}

}  // namespace

double submultiplicative_scale(const AlgebraSpec& a, std::size_t samples, std::uint64_t seed,
                               const ScaleOptions& options) {
  if (samples == 0) throw PreconditionError("submultiplicative_scale needs at least one sample");
  if (a.tensor.is_zero()) return options.min_scale;
  const std::size_t n = a.dim();

  double best = 0.0;
  Element bx, by;
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = detail::rng_for(seed, s, 0x5c41e);
    Element x = random_unit(a.norm, n, rng);
    Element y = random_unit(a.norm, n, rng);
    const double r = product_ratio(a, x, y);
    if (r > best) {
      best = r;
      bx = std::move(x);
      by = std::move(y);
    }
  }
  if (best == 0.0) return options.min_scale;

  // Coordinate-wise polish of the best pair with shrinking steps.
  double step = 0.25;
  for (int round = 0; round < options.polish_rounds; ++round) {
    bool improved = false;
    for (int which = 0; which < 2; ++which) {
      for (std::size_t i = 0; i < n; ++i) {
        for (const Complex dir : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}}) {
          Element x = bx, y = by;
          Element& v = which == 0 ? x : y;
          v[i] += step * dir;
          const double r = product_ratio(a, x, y);
          if (r > best) {
            best = r;
            bx = std::move(x);
            by = std::move(y);
            improved = true;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return std::max(best * options.safety, std::numeric_limits<double>::min());
}

std::optional<Element> solve_identity(const StructureTensor& t, double tol) {
  const std::size_t n = t.dim();
  if (n == 0) return std::nullopt;
  // Rows (j, k, side): sum_i c[i][j][k] e_i = delta_jk and sum_i c[j][i][k] e_i = delta_jk.
  Eigen::MatrixXcd m(2 * n * n, n);
  Eigen::VectorXcd rhs(2 * n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const auto row = static_cast<Eigen::Index>(j * n + k);
      const auto row2 = static_cast<Eigen::Index>(n * n + j * n + k);
      for (std::size_t i = 0; i < n; ++i) {
        m(row, static_cast<Eigen::Index>(i)) = t(i, j, k);
        m(row2, static_cast<Eigen::Index>(i)) = t(j, i, k);
      }
      rhs(row) = rhs(row2) = (j == k) ? 1.0 : 0.0;
    }
  const Eigen::VectorXcd e = m.completeOrthogonalDecomposition().solve(rhs);
  if (!e.allFinite() || (m * e - rhs).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  Element out = Element::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex c = e(static_cast<Eigen::Index>(i));
    // Snap round-off so exact identities serialize cleanly.
    if (std::abs(c.real() - std::round(c.real())) < 1e-12) c.real(std::round(c.real()));
    if (std::abs(c.imag() - std::round(c.imag())) < 1e-12) c.imag(std::round(c.imag()));
    out[i] = c;
  }
  return out;
}

AlgebraSpec l1_product(const AlgebraSpec& a, const AlgebraSpec& b) {
  SumNorm sum;
  for (const AlgebraSpec* part : {&a, &b}) {
    if (const auto* n = std::get_if<NormSpec>(&part->norm)) {
      sum.blocks.push_back(*n);
    } else {
      const auto& s = std::get<SumNorm>(part->norm);
      sum.blocks.insert(sum.blocks.end(), s.blocks.begin(), s.blocks.end());
    }
  }
  AlgebraSpec out{StructureTensor::direct_sum(a.tensor, b.tensor), sum, std::nullopt};
  out.validate();
  return out;
}

std::string fingerprint(const AlgebraSpec& a) {
  std::ostringstream os;
  os.precision(17);
  os << "n=" << a.dim() << ";";
  for (const auto& c : a.tensor.coeffs()) os << c.real() << "," << c.imag() << ";";
  auto dump = [&](const NormSpec& n) {
    os << "p=" << n.p.to_string() << ";c=" << n.scale << ";w=";
    for (double w : n.weights) os << w << ",";
    os << ";";
  };
  if (const auto* n = std::get_if<NormSpec>(&a.norm)) {
    dump(*n);
  } else {
    for (const auto& b : std::get<SumNorm>(a.norm).blocks) dump(b);
  }
  return detail::sha256_hex(os.str()).substr(0, 16);
}

}  // namespace snrlab
