#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace folia {

/// Continued fraction expansion of a slope in (0,1), with the stopping
/// reason.  A quotient above kQuotientPrecisionLimit means double precision
/// is exhausted and the tail is meaningless; expansion stops there.
struct ContinuedFraction {
  std::vector<std::int64_t> quotients;
  std::vector<std::int64_t> denominators;  // q_n, same length as quotients
  std::vector<std::int64_t> numerators;    // p_n
  bool terminated_rational = false;
  bool precision_exhausted = false;
};

inline constexpr double kQuotientPrecisionLimit = 1e12;

ContinuedFraction continued_fraction(double alpha, int depth);

enum class SlopeRegime { DiophantineLike, LiouvilleLike, Rational };

struct SlopeClassification {
  SlopeRegime regime = SlopeRegime::DiophantineLike;
  /// 1 + max of log q_{n+1} / log q_n over the tail of the expansion.
  double exponent_estimate = 2.0;
  bool insufficient_depth = false;
  std::string caveat;
};

/// Conditioning profile of a slope: expansion, convergents and the table of
/// minimal divisors min_{0 < |k|_inf <= N} |k_1 + alpha k_2|.  Everything is
/// a statement at working precision and stated depth; the caveat says so.
struct DiophantineProfile {
  double alpha = 0.0;
  int depth = 0;
  ContinuedFraction expansion;
  std::map<int, double> min_divisor_table;
  SlopeClassification classification;
};

/// Brute-force minimum of |k_1 + alpha k_2| over 0 < |k|_inf <= N.  Doubles
/// as the oracle for the divisor diagnostics.
double min_divisor(double alpha, int truncation);

SlopeClassification classify(const ContinuedFraction& cf);

DiophantineProfile build_profile(double alpha, int depth,
                                 const std::vector<int>& divisor_truncations);

}  // namespace folia
