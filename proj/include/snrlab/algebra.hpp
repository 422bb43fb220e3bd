#pragma once

// Finite-dimensional complex algebras: a structure tensor for the product and
// a (weighted, scaled) l^p norm, or an l^1-sum of such norms over blocks.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "snrlab/types.hpp"

namespace snrlab {

// Norm exponent p in [1, inf]. Infinity is a distinguished state, never a
// large float.
class Exponent {
 public:
  Exponent() = default;
  static Exponent finite(double p);
  static Exponent infinity() noexcept { return Exponent(1.0, true); }
  // Accepts "inf", "infinity", or a number >= 1.
  static Exponent parse(const std::string& text);

  bool is_infinite() const noexcept { return infinite_; }
  bool is_one() const noexcept { return !infinite_ && p_ == 1.0; }
  // +inf when infinite.
  double value() const noexcept;
  // 1/p with 1/inf = 0.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / p_; }
  // Hoelder conjugate q with 1/p + 1/q = 1.
  Exponent conjugate() const;
  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent(double p, bool inf) : p_(p), infinite_(inf) {}
  double p_ = 1.0;
  bool infinite_ = false;
};

// ||x|| = c * (sum_i |x_i|^p w_i^p)^(1/p), or c * max_i w_i |x_i| for p = inf.
struct NormSpec {
  Exponent p;
  std::vector<double> weights;
  double scale = 1.0;

  static NormSpec lp(Exponent p, std::size_t n, double scale = 1.0) {
    return NormSpec{p, std::vector<double>(n, 1.0), scale};
  }

  std::size_t dim() const noexcept { return weights.size(); }
  void validate() const;
  double operator()(std::span<const Complex> x) const;
  // Same norm without the scale factor.
  NormSpec unscaled() const {
    NormSpec n = *this;
    n.scale = 1.0;
    return n;
  }
};

// ||(x_1, ..., x_m)|| = sum_b ||x_b||_b over consecutive coordinate blocks.
// This is the norm of a product algebra A_1 x ... x A_m.
struct SumNorm {
  std::vector<NormSpec> blocks;

  std::size_t dim() const noexcept;
  void validate() const;
  double operator()(std::span<const Complex> x) const;
  // Offset of block b inside the concatenated coordinates.
  std::size_t offset(std::size_t b) const;
};

using AlgebraNorm = std::variant<NormSpec, SumNorm>;

std::size_t norm_dim(const AlgebraNorm& norm);
double norm_value(const AlgebraNorm& norm, std::span<const Complex> x);
// Multiplies every scale factor by `factor`.
AlgebraNorm rescaled(const AlgebraNorm& norm, double factor);

// c[i][j][k] with (x o y)_k = sum_{i,j} c[i][j][k] x_i y_j; the first index
// belongs to the left factor.
class StructureTensor {
 public:
  struct Term {
    std::size_t i, j, k;
    Complex c;
  };

  StructureTensor() = default;
  explicit StructureTensor(std::size_t n);
  StructureTensor(std::size_t n, std::vector<Complex> coeffs);

  std::size_t dim() const noexcept { return n_; }
  Complex operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return coeffs_[index(i, j, k)];
  }
  void set(std::size_t i, std::size_t j, std::size_t k, Complex c) { coeffs_.at(index(i, j, k)) = c; }
  void add(std::size_t i, std::size_t j, std::size_t k, Complex c) { coeffs_.at(index(i, j, k)) += c; }

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::vector<Term> nonzeros() const;
  bool is_zero() const;
  // True when every coefficient is a Gaussian integer of modest size, so
  // identities can be checked in exact integer arithmetic.
  bool has_integer_coefficients() const;
  // Diagonal means x o y = (c_k x_k y_k)_k, the pointwise product.
  bool is_diagonal() const;

  // Row-major n x n matrix of y -> a o y: entry [k * n + j].
  std::vector<Complex> left_multiplication(std::span<const Complex> a) const;

  // Block-diagonal product on C^(n+m).
  static StructureTensor direct_sum(const StructureTensor& a, const StructureTensor& b);

  friend bool operator==(const StructureTensor&, const StructureTensor&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * n_ + j) * n_ + k;
  }
  std::size_t n_ = 0;
  std::vector<Complex> coeffs_;
};

struct Identity {
  Element element;
  // Whether ||1_A|| = 1 (to 1e-10).
  bool unit_norm = false;
};

struct AlgebraSpec {
  StructureTensor tensor;
  AlgebraNorm norm;
  std::optional<Identity> identity;

  std::size_t dim() const noexcept { return tensor.dim(); }
  // Dimensions agree, the norm is valid, and a declared identity really acts
  // as a two-sided identity on every basis vector.
  void validate() const;
};

Element multiply(const StructureTensor& t, const Element& x, const Element& y);
Element multiply(const AlgebraSpec& a, const Element& x, const Element& y);
double norm(const AlgebraSpec& a, const Element& x);

// Max over basis tuples of |(e_i e_j) e_k - e_i (e_j e_k)| coefficients.
double associativity_residual(const StructureTensor& t);
// Exact for integer tensors, otherwise residual <= tol.
bool is_associative(const StructureTensor& t, double tol = 1e-10);

struct ScaleOptions {
  double safety = 1.02;
  // Returned when the tensor (or every sampled product) vanishes.
  double min_scale = 1.0;
  int polish_rounds = 60;
};

// Smallest M (sampled, then inflated by the safety factor) such that
// ||x o y|| <= M ||x|| ||y|| on every tested pair, i.e. M * ||.|| is an
// algebra norm on the tested pairs.
double submultiplicative_scale(const AlgebraSpec& a, std::size_t samples, std::uint64_t seed,
                               const ScaleOptions& options = {});

// Solves e o x = x = x o e over the basis in the least-squares sense; returns e
// when the max residual is <= tol.
std::optional<Element> solve_identity(const StructureTensor& t, double tol = 1e-8);

// Product algebra A x B with coordinatewise product and ||(a, b)|| =
// ||a||_A + ||b||_B.
AlgebraSpec l1_product(const AlgebraSpec& a, const AlgebraSpec& b);

// Short stable digest of the tensor and norm (hex).
std::string fingerprint(const AlgebraSpec& a);

}  // namespace snrlab
