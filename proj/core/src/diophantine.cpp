#include "folia/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace folia {

ContinuedFraction continued_fraction(double alpha, int depth) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("slope must lie in (0,1)");
  }
  if (depth < 1 || depth > 40) {
    throw std::invalid_argument("expansion depth must be in [1,40]");
  }

  ContinuedFraction cf;
  std::int64_t p_prev = 1, p_curr = 0;  // p_{-1}, p_0 for alpha = [0; a1, a2, ...]
  std::int64_t q_prev = 0, q_curr = 1;
  double x = alpha;
  for (int n = 0; n < depth; ++n) {
    if (x < 1e-15) {
      cf.terminated_rational = true;
      break;
    }
    const double inv = 1.0 / x;
    if (inv > kQuotientPrecisionLimit) {
      cf.precision_exhausted = true;
      break;
    }
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    cf.quotients.push_back(a);
    const std::int64_t p_next = a * p_curr + p_prev;
    const std::int64_t q_next = a * q_curr + q_prev;
    cf.numerators.push_back(p_next);
    cf.denominators.push_back(q_next);
    p_prev = p_curr;
    p_curr = p_next;
    q_prev = q_curr;
    q_curr = q_next;
    x = inv - static_cast<double>(a);
  }
  return cf;
}

double min_divisor(double alpha, int truncation) {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (int k1 = -truncation; k1 <= truncation; ++k1) {
    for (int k2 = -truncation; k2 <= truncation; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      best = std::min(best, std::abs(k1 + alpha * k2));
    }
  }
  return best;
}

SlopeClassification classify(const ContinuedFraction& cf) {
  SlopeClassification out;
  if (cf.terminated_rational) {
    out.regime = SlopeRegime::Rational;
    out.exponent_estimate = 1.0;
    out.caveat = "terminating expansion at working precision";
    return out;
  }

  const auto& q = cf.denominators;
  if (q.size() < 6) {
    out.insufficient_depth = true;
    out.caveat = "expansion too short to classify";
    return out;
  }

  // Denominator growth over the tail of the expansion; early terms are
  // dominated by small-integer noise.
  const std::size_t start = q.size() / 2;
  double max_ratio = 1.0;
  for (std::size_t n = start; n + 1 < q.size(); ++n) {
    const double ratio =
        std::log(static_cast<double>(q[n + 1])) / std::log(static_cast<double>(q[n]));
    max_ratio = std::max(max_ratio, ratio);
  }
  out.exponent_estimate = 1.0 + max_ratio;

  std::int64_t max_quotient = 0;
  for (std::size_t n = 1; n < cf.quotients.size(); ++n) {
    max_quotient = std::max(max_quotient, cf.quotients[n]);
  }

  if (out.exponent_estimate >= 2.5 || max_quotient >= 50) {
    out.regime = SlopeRegime::LiouvilleLike;
  } else {
    out.regime = SlopeRegime::DiophantineLike;
  }
  out.caveat = "classification to working precision at stated depth";
  if (cf.precision_exhausted) out.caveat += "; expansion stopped on precision loss";
  return out;
}

DiophantineProfile build_profile(double alpha, int depth,
                                 const std::vector<int>& divisor_truncations) {
  DiophantineProfile profile;
  profile.alpha = alpha;
  profile.depth = depth;
  profile.expansion = continued_fraction(alpha, depth);
  for (int n : divisor_truncations) {
    profile.min_divisor_table[n] = min_divisor(alpha, n);
  }
  profile.classification = classify(profile.expansion);
  return profile;
}

}  // namespace folia
