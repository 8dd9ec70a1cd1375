#pragma once

#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "folia/models.hpp"

namespace folia {

/// Leafwise differential form of degree 0, 1 or 2 with trig-polynomial
/// coefficients relative to the model's leafwise coframe (eps1, eps2).
/// Degree 0 and 2 store one coefficient, degree 1 stores the pair (a, b)
/// with the form a eps1 + b eps2.
struct LeafwiseForm {
  int degree = 0;
  std::vector<TrigPolynomial> components;

  static LeafwiseForm zero(int dim, int degree);
  int dim() const { return components.front().dim(); }
};

/// Modes the top-degree solver could not remove, plus conditioning data.
/// Obstructions are mathematical output, never an error.  Modes whose
/// divisors are nonzero but below the floor land in the resonant bucket and
/// make the report unreliable.
struct ObstructionReport {
  std::vector<std::pair<Mode, Complex>> obstructed;
  std::vector<Mode> resonant;
  double smallest_divisor = std::numeric_limits<double>::infinity();
  std::map<int, int> divisor_log10_histogram;

  bool reliable() const { return resonant.empty(); }
};

/// Leafwise de Rham differential for rank-2 constant-frame models.
/// Degree 0: f -> (E1 f) eps1 + (E2 f) eps2.
/// Degree 1: (a, b) -> (E1 b - E2 a) eps1 ^ eps2.
/// Throws on degree-2 input; there is no differential in top degree.
LeafwiseForm d_F(const PoissonModel& model, const LeafwiseForm& form);

/// f times the coframe-normalized leafwise volume, as a degree-2 form.
LeafwiseForm phi(const PoissonModel& model, const TrigPolynomial& f);

/// The leafwise volume itself, coefficient one in the stored coframe.
LeafwiseForm leafwise_volume(const PoissonModel& model);

struct TopPrimitiveResult {
  LeafwiseForm primitive;
  ObstructionReport report;
};

/// Mode-by-mode inversion of d_F in top degree for rank-2 torus models.
/// Each mode with a leafwise symbol of magnitude >= divisor_floor is solved
/// along the larger-divisor axis; the rest are reported as obstructions.
TopPrimitiveResult solve_top_primitive(const PoissonModel& model, const LeafwiseForm& top,
                                       double divisor_floor = kDefaultDivisorFloor);

struct CohomologicalSolveResult {
  TrigPolynomial solution;
  ObstructionReport report;
};

/// Solves directional_derivative(u, direction) = f mode by mode.  Modes with
/// |2 pi k.direction| below divisor_floor are reported, not inverted.
CohomologicalSolveResult solve_cohomological_equation(const std::vector<double>& direction,
                                                      const TrigPolynomial& f,
                                                      double divisor_floor = kDefaultDivisorFloor);

/// Truncation-level dimension estimate for the top leafwise cohomology.
struct TopDimEstimate {
  int truncation = 0;
  int dim = 0;
  /// True when the counts at N and ceil(N/2) agree.
  bool stable = false;
  /// False when near-resonant divisors were skipped.
  bool reliable = true;
  double smallest_divisor = std::numeric_limits<double>::infinity();
  std::vector<Mode> obstructed_modes;
  int resonant_count = 0;
};

/// Counts the modes within |k|_inf <= N on which every leafwise symbol
/// vanishes (below divisor_floor).  Works for any even rank.
TopDimEstimate estimate_h_top_dim(const PoissonModel& model, int truncation,
                                  double divisor_floor = kDefaultDivisorFloor);

/// Kernel of d_F on functions at truncation.  For the diagonal models here
/// the kernel modes coincide with the top-degree obstructed modes.
TopDimEstimate casimir_dim(const PoissonModel& model, int truncation,
                           double divisor_floor = kDefaultDivisorFloor);

}  // namespace folia
