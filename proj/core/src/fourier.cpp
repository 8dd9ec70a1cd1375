#include "folia/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace folia {

namespace {

void require_same_dim(const TrigPolynomial& f, const TrigPolynomial& g) {
  if (f.dim() != g.dim()) {
    throw std::invalid_argument("trig polynomial dimension mismatch");
  }
}

}  // namespace

std::size_t mode_hash(const Mode& k) noexcept {
  // FNV-1a over the component bytes.
  std::size_t h = 1469598103934665603ull;
  for (int v : k) {
    auto u = static_cast<std::uint32_t>(v);
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (u >> (8 * byte)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

Mode mode_negate(const Mode& k) {
  Mode out(k.size());
  std::transform(k.begin(), k.end(), out.begin(), std::negate<int>());
  return out;
}

Mode mode_add(const Mode& a, const Mode& b) {
  Mode out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

int mode_sup_norm(const Mode& k) {
  int m = 0;
  for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

TrigPolynomial::TrigPolynomial(int dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("torus dimension must be positive");
}

TrigPolynomial TrigPolynomial::zero(int dim) { return TrigPolynomial(dim); }

TrigPolynomial TrigPolynomial::constant(int dim, Complex value) {
  TrigPolynomial f(dim);
  f.set_term(Mode(dim, 0), value);
  return f;
}

TrigPolynomial TrigPolynomial::harmonic(Mode k, Complex coeff) {
  TrigPolynomial f(static_cast<int>(k.size()));
  f.set_term(k, coeff);
  return f;
}

TrigPolynomial TrigPolynomial::cosine(const Mode& k) {
  TrigPolynomial f(static_cast<int>(k.size()));
  f.set_term(k, Complex(0.5, 0.0));
  f.set_term(mode_negate(k), Complex(0.5, 0.0));
  return f;
}

TrigPolynomial TrigPolynomial::sine(const Mode& k) {
  TrigPolynomial f(static_cast<int>(k.size()));
  f.set_term(k, Complex(0.0, -0.5));
  f.set_term(mode_negate(k), Complex(0.0, 0.5));
  return f;
}

TrigPolynomial TrigPolynomial::from_coefficients(
    int dim, const std::vector<std::pair<Mode, Complex>>& terms) {
  TrigPolynomial f(dim);
  for (const auto& [k, c] : terms) {
    if (static_cast<int>(k.size()) != dim) {
      throw std::invalid_argument("mode length does not match dimension");
    }
    f.coeffs_[k] += c;
  }
  f.prune();
  return f;
}

int TrigPolynomial::degree() const {
  int d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, mode_sup_norm(k));
  return d;
}

Complex TrigPolynomial::coefficient(const Mode& k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

Complex TrigPolynomial::mean() const { return coefficient(Mode(dim_, 0)); }

bool TrigPolynomial::is_real_valued(double tol) const {
  for (const auto& [k, c] : coeffs_) {
    if (std::abs(coefficient(mode_negate(k)) - std::conj(c)) > tol) return false;
  }
  return true;
}

double TrigPolynomial::sup_norm_estimate() const {
  double s = 0.0;
  for (const auto& [k, c] : coeffs_) s += std::abs(c);
  return s;
}

double TrigPolynomial::sobolev_norm(double s) const {
  double acc = 0.0;
  for (const auto& [k, c] : coeffs_) {
    double k2 = 0.0;
    for (int v : k) k2 += static_cast<double>(v) * v;
    acc += std::pow(1.0 + k2, s) * std::norm(c);
  }
  return std::sqrt(acc);
}

Complex TrigPolynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("evaluation point dimension mismatch");
  }
  Complex acc(0.0, 0.0);
  for (const auto& [k, c] : coeffs_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += k[i] * x[i];
    acc += c * std::exp(Complex(0.0, kTwoPi * phase));
  }
  return acc;
}

void TrigPolynomial::set_term(const Mode& k, Complex c) {
  if (std::abs(c) < kPruneThreshold) return;
  coeffs_[k] = c;
}

void TrigPolynomial::prune() {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) < kPruneThreshold) {
      it = coeffs_.erase(it);
    } else {
      ++it;
    }
  }
}

TrigPolynomial operator+(const TrigPolynomial& f, const TrigPolynomial& g) {
  require_same_dim(f, g);
  TrigPolynomial out = f;
  for (const auto& [k, c] : g.coeffs_) out.coeffs_[k] += c;
  out.prune();
  return out;
}

TrigPolynomial operator-(const TrigPolynomial& f, const TrigPolynomial& g) {
  require_same_dim(f, g);
  TrigPolynomial out = f;
  for (const auto& [k, c] : g.coeffs_) out.coeffs_[k] -= c;
  out.prune();
  return out;
}

TrigPolynomial operator-(const TrigPolynomial& f) {
  TrigPolynomial out = f;
  for (auto& [k, c] : out.coeffs_) c = -c;
  return out;
}

TrigPolynomial operator*(const TrigPolynomial& f, const TrigPolynomial& g) {
  require_same_dim(f, g);
  TrigPolynomial out(f.dim());
  for (const auto& [a, ca] : f.coeffs_) {
    for (const auto& [b, cb] : g.coeffs_) {
      out.coeffs_[mode_add(a, b)] += ca * cb;
    }
  }
  out.prune();
  return out;
}

TrigPolynomial operator*(Complex s, const TrigPolynomial& f) {
  TrigPolynomial out = f;
  for (auto& [k, c] : out.coeffs_) c *= s;
  out.prune();
  return out;
}

TrigPolynomial operator*(double s, const TrigPolynomial& f) {
  return Complex(s, 0.0) * f;
}

TrigPolynomial partial_derivative(const TrigPolynomial& f, int axis) {
  if (axis < 0 || axis >= f.dim()) {
    throw std::out_of_range("derivative axis out of range");
  }
  TrigPolynomial out(f.dim());
  for (const auto& [k, c] : f.coeffs_) {
    out.coeffs_[k] = Complex(0.0, kTwoPi * k[axis]) * c;
  }
  out.prune();
  return out;
}

TrigPolynomial directional_derivative(const TrigPolynomial& f,
                                      std::span<const double> direction) {
  if (static_cast<int>(direction.size()) != f.dim()) {
    throw std::invalid_argument("direction dimension mismatch");
  }
  TrigPolynomial out(f.dim());
  for (const auto& [k, c] : f.coeffs_) {
    double dot = 0.0;
    for (int i = 0; i < f.dim(); ++i) dot += k[i] * direction[i];
    out.coeffs_[k] = Complex(0.0, kTwoPi * dot) * c;
  }
  out.prune();
  return out;
}

TrigPolynomial directional_derivative(const TrigPolynomial& f,
                                      const std::vector<double>& direction) {
  return directional_derivative(f, std::span<const double>(direction));
}

TrigPolynomial conjugate(const TrigPolynomial& f) {
  TrigPolynomial out(f.dim());
  for (const auto& [k, c] : f.coeffs_) {
    out.coeffs_[mode_negate(k)] = std::conj(c);
  }
  return out;
}

double unit_interval_sample(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

TrigPolynomial random_real_trig_polynomial(int dim, int max_degree,
                                           std::mt19937_64& rng, int terms,
                                           bool zero_mean, double amplitude) {
  std::vector<std::pair<Mode, Complex>> entries;
  const auto span = static_cast<std::uint64_t>(2 * max_degree + 1);
  for (int t = 0; t < terms; ++t) {
    Mode k(dim);
    for (int i = 0; i < dim; ++i) {
      k[i] = static_cast<int>(rng() % span) - max_degree;
    }
    Complex c(unit_interval_sample(rng), unit_interval_sample(rng));
    if (mode_sup_norm(k) == 0) {
      if (zero_mean) continue;
      c = Complex(c.real(), 0.0);
      entries.emplace_back(k, c);
      continue;
    }
    entries.emplace_back(k, 0.5 * c);
    entries.emplace_back(mode_negate(k), 0.5 * std::conj(c));
  }
  TrigPolynomial f = TrigPolynomial::from_coefficients(dim, entries);
  const double scale = f.sup_norm_estimate();
  if (scale > 0.0) f = (amplitude / scale) * f;
  return f;
}

}  // namespace folia
