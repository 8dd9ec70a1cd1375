#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "folia/leafwise.hpp"
#include "folia/mapping_torus.hpp"
#include "folia/models.hpp"

namespace folia {

/// Shared knobs for the pipeline analyses.  Mapping-torus runs use the grid,
/// trial count and seed; torus runs only the truncation and floors.
struct AnalysisParams {
  int truncation = 8;
  int t_grid = 64;
  double divisor_floor = kDefaultDivisorFloor;
  double residual_tol = 1e-8;
  double seam_tol = 1e-8;
  int trials = 20;
  std::uint64_t seed = 12345;
};

/// Executable witness that f equals obstruction * 1 plus a sum of Poisson
/// brackets.  The residual is recomputable from the fields alone by an
/// independent bracket evaluation.
struct CommutatorCertificate {
  std::string model_id;
  int truncation = 0;
  TrigPolynomial input{1};
  std::vector<std::pair<TrigPolynomial, TrigPolynomial>> pairs;
  Complex obstruction{0.0, 0.0};
  double residual = 0.0;
  std::uint64_t seed = 0;
};

struct HomologyReport {
  std::string model_id;
  int truncation = 0;
  double divisor_floor = kDefaultDivisorFloor;
  int dim = 0;
  bool stable = false;
  bool reliable = true;
  std::vector<std::string> basis_functionals;
  std::vector<Mode> obstructed_modes;
  double smallest_divisor = 0.0;
  std::string method;
  std::string normalization_note;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

struct ModularReport {
  std::string model_id;
  std::string volume;
  std::string field;
  bool is_hamiltonian = true;
  double obstruction = 0.0;
};

enum class Perfectness { Perfect, NotPerfect, Inconclusive };

std::string to_string(Perfectness p);

/// Pure function of (dim, stability, unimodularity); the justification names
/// the rule that fired.
struct PerfectnessVerdict {
  Perfectness status = Perfectness::Inconclusive;
  std::string justification;
  int dim = 0;
  bool unimodular = false;
  bool stable = false;
};

/// Foliated cohomology dimensions by degree, with explicit bookkeeping for
/// degrees this workbench does not compute (degree 1 of each factor).
struct DegreeDimTable {
  int top_degree = 0;
  std::map<int, int> dims;
  std::set<int> missing;

  bool has(int degree) const { return dims.count(degree) > 0; }
};

/// Zeroth Poisson homology at truncation, through the identification of
/// f with f times the leafwise volume.  Torus families count the modes on
/// which the top-degree solve obstructs; the mapping torus consumes the
/// vanishing certificate.
HomologyReport zeroth_homology(const PoissonModel& model, const AnalysisParams& params);

/// Writes f as obstruction * 1 + sum {g_i, h_i} on the rank-2 torus models
/// whose only obstructed mode is the mean (symplectic T^2 and Kronecker-type
/// cosymplectic T^3).  Pair selection walks candidate auxiliary unit modes
/// in lexicographic order.
CommutatorCertificate decompose_commutators(const PoissonModel& model, const TrigPolynomial& f,
                                            int truncation);

/// Independent soundness check: reevaluates sum {g_i, h_i} + obstruction
/// against the certificate's input and returns the recomputed residual.
double recompute_certificate_residual(const PoissonModel& model,
                                      const CommutatorCertificate& cert);

/// Modular vector field against the given volume ("standard" is the unit
/// constant-coefficient volume, which on the mapping torus is the invariant
/// dx dy dt).  Constant-bivector models are unimodular; the mapping torus
/// obstructs at log(lambda).
ModularReport modular_class(const PoissonModel& model, const std::string& volume = "standard");

PerfectnessVerdict perfectness_verdict(const HomologyReport& homology,
                                       const ModularReport& modular);

/// Degree table with degree 0 (Casimir count), the top degree, and middle
/// degrees marked missing.
DegreeDimTable degree_dim_table(const PoissonModel& model, const AnalysisParams& params);

/// Convolution of degree tables: dim_n = sum_{p+q=n} dim_p dim_q, with
/// degrees touching a missing factor entry marked missing in the product.
DegreeDimTable kunneth_compose(const DegreeDimTable& left, const DegreeDimTable& right);

struct PoissonTopReport {
  int truncation = 0;
  int dim = 0;
  std::vector<Mode> kernel_modes;
};

/// Top-degree cokernel of the Lichnerowicz differential on multivector
/// fields at truncation.  Constant bivectors act block-diagonally over
/// modes: the block at mode k is exterior multiplication by the Hamiltonian
/// direction of e_k, so the cokernel counts modes annihilated by P^T.
PoissonTopReport top_poisson_cohomology_dim(const PoissonModel& model, int truncation,
                                            double divisor_floor = kDefaultDivisorFloor);

}  // namespace folia
