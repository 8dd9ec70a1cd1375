#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace folia {

using Complex = std::complex<double>;

/// Lattice point in Z^m indexing one Fourier mode of a function on the
/// m-torus.  std::map over Mode iterates in lexicographic order, which is
/// the deterministic iteration order used everywhere in this library.
using Mode = std::vector<int>;

std::size_t mode_hash(const Mode& k) noexcept;
Mode mode_negate(const Mode& k);
Mode mode_add(const Mode& a, const Mode& b);
int mode_sup_norm(const Mode& k);

inline constexpr double kTwoPi = 6.28318530717958647692528677;

/// Coefficients with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-14;

/// Default floor below which a Fourier-mode divisor counts as numerically
/// resonant and is never inverted.
inline constexpr double kDefaultDivisorFloor = 1e-9;

/// Finite Fourier series on the m-torus, stored as an exact map from modes
/// to complex coefficients.  Values are immutable after construction; all
/// operations are pure functions and safe to use concurrently.
///
/// Real-valued functions are stored with their full spectrum and satisfy
/// c(-k) == conj(c(k)), testable via is_real_valued().
class TrigPolynomial {
 public:
  explicit TrigPolynomial(int dim);

  static TrigPolynomial zero(int dim);
  static TrigPolynomial constant(int dim, Complex value);
  /// The character e_k(x) = exp(2*pi*i k.x), scaled by coeff.
  static TrigPolynomial harmonic(Mode k, Complex coeff = Complex(1.0, 0.0));
  static TrigPolynomial cosine(const Mode& k);
  static TrigPolynomial sine(const Mode& k);
  static TrigPolynomial from_coefficients(
      int dim, const std::vector<std::pair<Mode, Complex>>& terms);

  int dim() const { return dim_; }
  const std::map<Mode, Complex>& coefficients() const { return coeffs_; }
  std::size_t term_count() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  /// Largest sup-norm of a supported mode; 0 for the zero polynomial.
  int degree() const;

  Complex coefficient(const Mode& k) const;

  /// Coefficient of the zero mode, i.e. the average over the torus.
  Complex mean() const;

  bool is_real_valued(double tol = 1e-12) const;

  /// Upper bound sum(|c_k|) for the sup norm.
  double sup_norm_estimate() const;
  /// Sobolev norm (sum (1+|k|^2)^s |c_k|^2)^(1/2).
  double sobolev_norm(double s) const;

  Complex evaluate(std::span<const double> x) const;

  friend TrigPolynomial operator+(const TrigPolynomial& f, const TrigPolynomial& g);
  friend TrigPolynomial operator-(const TrigPolynomial& f, const TrigPolynomial& g);
  friend TrigPolynomial operator-(const TrigPolynomial& f);
  friend TrigPolynomial operator*(const TrigPolynomial& f, const TrigPolynomial& g);
  friend TrigPolynomial operator*(Complex s, const TrigPolynomial& f);
  friend TrigPolynomial operator*(double s, const TrigPolynomial& f);

  friend TrigPolynomial partial_derivative(const TrigPolynomial& f, int axis);
  friend TrigPolynomial directional_derivative(const TrigPolynomial& f,
                                               std::span<const double> direction);
  friend TrigPolynomial conjugate(const TrigPolynomial& f);

 private:
  void set_term(const Mode& k, Complex c);
  void prune();

  int dim_;
  std::map<Mode, Complex> coeffs_;
};

TrigPolynomial directional_derivative(const TrigPolynomial& f,
                                      const std::vector<double>& direction);

/// Seeded generator of real trig polynomials, used for property tests and
/// for reproducible certificate inputs.  Draws `terms` modes with sup norm
/// at most max_degree and mirrors them so the result is real valued.
TrigPolynomial random_real_trig_polynomial(int dim, int max_degree,
                                           std::mt19937_64& rng, int terms = 8,
                                           bool zero_mean = false,
                                           double amplitude = 1.0);

/// Uniform double in [-1, 1] from the engine's raw bits; identical across
/// standard libraries, unlike std::uniform_real_distribution.
double unit_interval_sample(std::mt19937_64& rng);

}  // namespace folia
