#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "folia/models.hpp"

namespace folia {

using Mode2 = std::array<int, 2>;

/// Function data on the mapping torus, as Fourier coefficients over the T^2
/// directions with a sampled coefficient curve c_k(t) on the uniform grid
/// t_j = j/G, j = 0..G (both endpoints stored).
///
/// Seam convention: data of weight w satisfies c_{A'k}(0) = lambda^w c_k(1),
/// where A' is the transposed gluing matrix transporting modes under
/// pullback.  Plain functions on the quotient have weight 0.  The leafwise
/// coframe component dual to the eigendirection carries weight -1, the dt
/// component weight 0; multiplying by lambda^t lowers the weight by one and
/// applying the eigendirection derivative raises it by one.
struct EquivariantFunction {
  int grid = 0;
  int weight = 0;
  std::map<Mode2, std::vector<Complex>> curves;

  static EquivariantFunction zero(int grid, int weight = 0);
  int arena() const;
  double sup_estimate() const;
  bool is_real_valued(double tol = 1e-12) const;
};

std::vector<double> time_grid(int grid);

Mode2 mode_apply(const Eigen::Matrix2i& m, const Mode2& k);

/// Largest seam mismatch max_k |c_{A'k}(0) - lambda^w c_k(1)| over the
/// stored modes and their transported partners.
double seam_mismatch(const MappingTorusModel& model, const EquivariantFunction& f);

EquivariantFunction ef_add(const EquivariantFunction& f, const EquivariantFunction& g);
EquivariantFunction ef_scale(Complex s, const EquivariantFunction& f);
/// Pointwise product; modes convolve per grid sample and weights add.
EquivariantFunction ef_multiply(const EquivariantFunction& f, const EquivariantFunction& g);

/// One A'-orbit segment inside the extended mode box.  k = 0 is the unique
/// finite orbit; every other orbit is a bi-infinite line truncated here.
struct LatticeOrbit {
  Mode2 base{0, 0};
  std::vector<Mode2> segment;
  bool fixed_point = false;
};

/// Partition of the modes with |k|_inf <= truncation into A'-orbits,
/// extended through |k|_inf <= extended (default (|A'|_inf + 1) * N).
std::vector<LatticeOrbit> orbit_decomposition(const MappingTorusModel& model, int truncation,
                                              int extended = 0);

/// Poisson bracket {f,g} = lambda^t (Vf d_t g - d_t f Vg), where V scales
/// mode k by 2 pi i (k . v).  The time derivative is a 6th-order finite
/// difference with boundary-shifted stencils, so curves that are polynomials
/// of degree <= 6 in t differentiate exactly.
EquivariantFunction mt_bracket(const MappingTorusModel& model, const EquivariantFunction& f,
                               const EquivariantFunction& g);

/// Top-degree leafwise differential V b - d_t a of the pair (a, b), the
/// coefficient against the unit coframe volume.
EquivariantFunction d_mt_top(const MappingTorusModel& model, const EquivariantFunction& a,
                             const EquivariantFunction& b);

struct MtSolveOptions {
  double tolerance = 1e-8;
  double divisor_floor = kDefaultDivisorFloor;
  int orbit_budget = 64;
};

struct MtSolveReport {
  Complex seam_constant{0.0, 0.0};
  double min_divisor = std::numeric_limits<double>::infinity();
  double input_seam_mismatch = 0.0;
  int orbit_count = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct MtSolveResult {
  EquivariantFunction a;  // coframe component dual to the eigendirection, weight -1
  EquivariantFunction b;  // dt component, weight 0
  double residual = 0.0;
  MtSolveReport report;
};

/// Solves d_F(a, b) = f for a top coefficient f of weight 0.
///
/// The k = 0 mode is the affine seam fixed point: a_0(t) = a_0(0) - int_0^t f_0
/// with a_0(1) = lambda a_0(0), so a_0(0) = -(int_0^1 f_0) / (lambda - 1).
/// Nonzero modes are solved along A'-orbits: the a component transports seam
/// values through t(1-t)^2 caps and the b component absorbs the rest through
/// division by 2 pi i (k . v), whose magnitude scales geometrically along the
/// orbit.  The construction terminates one step past the support of f.
MtSolveResult solve_mt_top_primitive(const MappingTorusModel& model,
                                     const EquivariantFunction& f,
                                     const MtSolveOptions& options = {});

struct H2CertificateParams {
  int truncation = 8;
  int grid = 64;
  int trials = 20;
  double tolerance = 1e-8;
  std::uint64_t seed = 12345;
};

/// Certificate that every sampled top coefficient admits a primitive at the
/// stated truncation and tolerance.  Includes the unit-input seam constant
/// -(1)/(lambda - 1) realized by the solver on f = 1.
struct H2Certificate {
  bool passed = false;
  H2CertificateParams params;
  double max_residual = 0.0;
  double max_seam_mismatch = 0.0;
  Complex unit_input_constant{0.0, 0.0};
  std::vector<std::string> failures;
};

H2Certificate h2_vanishing_certificate(const MappingTorusModel& model,
                                       const H2CertificateParams& params);

/// Reproducible random real function on the mapping torus: a periodic cubic
/// k = 0 profile plus orbit chains of degree <= 4 polynomial curves whose
/// endpoint values and derivatives match across the seam.
EquivariantFunction random_equivariant_function(const MappingTorusModel& model, int truncation,
                                                int grid, std::mt19937_64& rng,
                                                double amplitude = 1.0);

}  // namespace folia
