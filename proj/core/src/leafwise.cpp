#include "folia/leafwise.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace folia {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void require_rank_two(const std::vector<Eigen::VectorXd>& frame) {
  if (frame.size() != 2) {
    throw std::invalid_argument("leafwise forms require a rank-2 foliation");
  }
}

double symbol(const Mode& k, const Eigen::VectorXd& direction) {
  double dot = 0.0;
  for (int i = 0; i < direction.size(); ++i) dot += k[i] * direction[i];
  return kTwoPi * dot;
}

int log10_bucket(double value) {
  return static_cast<int>(std::floor(std::log10(value)));
}

/// All lattice modes with |k|_inf <= N in lexicographic order.
void for_each_mode(int dim, int truncation, const std::function<void(const Mode&)>& fn) {
  Mode k(dim, -truncation);
  while (true) {
    fn(k);
    int axis = dim - 1;
    while (axis >= 0) {
      if (++k[axis] <= truncation) break;
      k[axis] = -truncation;
      --axis;
    }
    if (axis < 0) break;
  }
}

}  // namespace

LeafwiseForm LeafwiseForm::zero(int dim, int degree) {
  if (degree < 0 || degree > 2) throw std::invalid_argument("degree must be 0, 1 or 2");
  LeafwiseForm form;
  form.degree = degree;
  form.components.assign(degree == 1 ? 2 : 1, TrigPolynomial::zero(dim));
  return form;
}

LeafwiseForm d_F(const PoissonModel& model, const LeafwiseForm& form) {
  const auto frame = leafwise_frame(model);
  require_rank_two(frame);
  const auto e1 = to_std(frame[0]);
  const auto e2 = to_std(frame[1]);
  if (form.degree == 0) {
    LeafwiseForm out;
    out.degree = 1;
    out.components = {directional_derivative(form.components[0], e1),
                      directional_derivative(form.components[0], e2)};
    return out;
  }
  if (form.degree == 1) {
    LeafwiseForm out;
    out.degree = 2;
    out.components = {directional_derivative(form.components[1], e1) -
                      directional_derivative(form.components[0], e2)};
    return out;
  }
  throw std::invalid_argument("no differential in top degree");
}

LeafwiseForm phi(const PoissonModel& model, const TrigPolynomial& f) {
  if (f.dim() != ambient_dim(model)) {
    throw std::invalid_argument("function dimension does not match the model");
  }
  if (leaf_rank(model) != 2) {
    throw std::invalid_argument("leafwise forms require a rank-2 foliation");
  }
  LeafwiseForm out;
  out.degree = 2;
  out.components = {f};
  return out;
}

LeafwiseForm leafwise_volume(const PoissonModel& model) {
  return phi(model, TrigPolynomial::constant(ambient_dim(model), Complex(1.0, 0.0)));
}

TopPrimitiveResult solve_top_primitive(const PoissonModel& model, const LeafwiseForm& top,
                                       double divisor_floor) {
  if (top.degree != 2) throw std::invalid_argument("input must be a top-degree form");
  const auto frame = leafwise_frame(model);
  require_rank_two(frame);

  TopPrimitiveResult result{LeafwiseForm::zero(top.dim(), 1), {}};
  std::vector<std::pair<Mode, Complex>> a_terms;
  std::vector<std::pair<Mode, Complex>> b_terms;
  for (const auto& [k, c] : top.components[0].coefficients()) {
    const double d1 = symbol(k, frame[0]);
    const double d2 = symbol(k, frame[1]);
    const double best = std::max(std::abs(d1), std::abs(d2));
    if (best < divisor_floor) {
      result.report.obstructed.emplace_back(k, c);
      if (best > 0.0) result.report.resonant.push_back(k);
      continue;
    }
    // d_F(a, b) contributes D1 b - D2 a at this mode; invert along the
    // larger symbol to minimize amplification.
    if (std::abs(d1) >= std::abs(d2)) {
      b_terms.emplace_back(k, c / Complex(0.0, d1));
    } else {
      a_terms.emplace_back(k, -c / Complex(0.0, d2));
    }
    result.report.smallest_divisor = std::min(result.report.smallest_divisor, best);
    ++result.report.divisor_log10_histogram[log10_bucket(best)];
  }
  result.primitive.components[0] = TrigPolynomial::from_coefficients(top.dim(), a_terms);
  result.primitive.components[1] = TrigPolynomial::from_coefficients(top.dim(), b_terms);
  return result;
}

CohomologicalSolveResult solve_cohomological_equation(const std::vector<double>& direction,
                                                      const TrigPolynomial& f,
                                                      double divisor_floor) {
  Eigen::VectorXd w(direction.size());
  for (std::size_t i = 0; i < direction.size(); ++i) w[static_cast<int>(i)] = direction[i];

  CohomologicalSolveResult result{TrigPolynomial::zero(f.dim()), {}};
  std::vector<std::pair<Mode, Complex>> terms;
  for (const auto& [k, c] : f.coefficients()) {
    const double d = symbol(k, w);
    if (std::abs(d) < divisor_floor) {
      result.report.obstructed.emplace_back(k, c);
      if (std::abs(d) > 0.0) result.report.resonant.push_back(k);
      continue;
    }
    terms.emplace_back(k, c / Complex(0.0, d));
    result.report.smallest_divisor = std::min(result.report.smallest_divisor, std::abs(d));
    ++result.report.divisor_log10_histogram[log10_bucket(std::abs(d))];
  }
  result.solution = TrigPolynomial::from_coefficients(f.dim(), terms);
  return result;
}

namespace {

TopDimEstimate count_jointly_resonant_modes(const PoissonModel& model, int truncation,
                                            double divisor_floor) {
  const auto frame = leafwise_frame(model);
  const int dim = ambient_dim(model);
  TopDimEstimate est;
  est.truncation = truncation;
  for_each_mode(dim, truncation, [&](const Mode& k) {
    double best = 0.0;
    for (const auto& e : frame) best = std::max(best, std::abs(symbol(k, e)));
    if (best < divisor_floor) {
      ++est.dim;
      est.obstructed_modes.push_back(k);
      if (best > 0.0) ++est.resonant_count;
    } else {
      est.smallest_divisor = std::min(est.smallest_divisor, best);
    }
  });
  est.reliable = est.resonant_count == 0;
  return est;
}

}  // namespace

TopDimEstimate estimate_h_top_dim(const PoissonModel& model, int truncation,
                                  double divisor_floor) {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  TopDimEstimate est = count_jointly_resonant_modes(model, truncation, divisor_floor);
  const int half = (truncation + 1) / 2;
  TopDimEstimate coarse = count_jointly_resonant_modes(model, half, divisor_floor);
  est.stable = (est.dim == coarse.dim);
  est.reliable = est.reliable && coarse.reliable;
  return est;
}

TopDimEstimate casimir_dim(const PoissonModel& model, int truncation, double divisor_floor) {
  // d_F f = 0 at mode k iff every frame symbol vanishes there, the same
  // joint-resonance condition as in top degree.
  return estimate_h_top_dim(model, truncation, divisor_floor);
}

}  // namespace folia
