#include "folia/homology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace folia {

namespace {

std::string mode_to_string(const Mode& k) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) os << ",";
    os << k[i];
  }
  os << ")";
  return os.str();
}

std::string functional_name(const Mode& k) {
  if (mode_sup_norm(k) == 0) return "mean";
  return "fourier coefficient at " + mode_to_string(k);
}

const std::string kNormalizationNote =
    "leafwise volume normalized to coefficient one in the stored coframe; "
    "mapping-torus bivector normalized as lambda^t (v ^ d/dt); all dimensions "
    "are truncation statements at the reported N and floors";

HomologyReport torus_homology(const PoissonModel& model, const AnalysisParams& params,
                              const std::string& method) {
  TopDimEstimate est = estimate_h_top_dim(model, params.truncation, params.divisor_floor);
  HomologyReport report;
  report.model_id = family_name(model);
  report.truncation = params.truncation;
  report.divisor_floor = params.divisor_floor;
  report.dim = est.dim;
  report.stable = est.stable;
  report.reliable = est.reliable;
  report.obstructed_modes = est.obstructed_modes;
  for (const auto& k : est.obstructed_modes) {
    report.basis_functionals.push_back(functional_name(k));
  }
  report.smallest_divisor = est.smallest_divisor;
  report.method = method;
  report.normalization_note = kNormalizationNote;
  return report;
}

}  // namespace

std::string to_string(Perfectness p) {
  switch (p) {
    case Perfectness::Perfect:
      return "Perfect";
    case Perfectness::NotPerfect:
      return "NotPerfect";
    case Perfectness::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

HomologyReport zeroth_homology(const PoissonModel& model, const AnalysisParams& params) {
  if (const auto* mt = model.get_if<MappingTorusModel>()) {
    H2CertificateParams cert_params;
    cert_params.truncation = params.truncation;
    cert_params.grid = params.t_grid;
    cert_params.trials = params.trials;
    cert_params.tolerance = params.residual_tol;
    cert_params.seed = params.seed;
    H2Certificate cert = h2_vanishing_certificate(*mt, cert_params);

    HomologyReport report;
    report.model_id = family_name(model);
    report.truncation = params.truncation;
    report.divisor_floor = params.divisor_floor;
    report.dim = cert.passed ? 0 : -1;
    report.stable = cert.passed;
    report.reliable = cert.passed;
    report.smallest_divisor = 0.0;
    report.method = "top-primitive vanishing certificate";
    report.normalization_note = kNormalizationNote;
    if (!cert.passed) {
      report.failures = cert.failures;
      if (report.failures.empty()) report.failures.push_back("certificate failed tolerance");
    }
    return report;
  }

  if (const auto* product = model.get_if<ProductModel>()) {
    if (!flatten_to_constant(model)) {
      // Mapping-torus factor: compose the factor dimensions degreewise.
      HomologyReport left = zeroth_homology(*product->left, params);
      HomologyReport right = zeroth_homology(*product->right, params);
      HomologyReport report;
      report.model_id = "product";
      report.truncation = params.truncation;
      report.divisor_floor = params.divisor_floor;
      report.dim = (left.dim < 0 || right.dim < 0) ? -1 : left.dim * right.dim;
      report.stable = left.stable && right.stable;
      report.reliable = left.reliable && right.reliable;
      report.smallest_divisor = std::min(left.smallest_divisor, right.smallest_divisor);
      report.method = "kunneth composition of factor reports";
      report.normalization_note = kNormalizationNote;
      for (const auto& f : left.failures) report.failures.push_back("left: " + f);
      for (const auto& f : right.failures) report.failures.push_back("right: " + f);
      return report;
    }
    PoissonModel flat(*flatten_to_constant(model));
    HomologyReport report = torus_homology(flat, params, "leafwise top solve on flattened product");
    report.model_id = "product";
    return report;
  }

  return torus_homology(model, params, "leafwise top solve");
}

CommutatorCertificate decompose_commutators(const PoissonModel& model, const TrigPolynomial& f,
                                            int truncation) {
  const bool constant_ok =
      model.get_if<ConstantTorusModel>() && model.get_if<ConstantTorusModel>()->dim() == 2 &&
      model.get_if<ConstantTorusModel>()->rank() == 2;
  const bool cosymplectic_ok =
      model.get_if<CosymplecticTorusModel>() && model.get_if<CosymplecticTorusModel>()->dim() == 3;
  if (!constant_ok && !cosymplectic_ok) {
    throw std::invalid_argument("unsupported model variant for commutator decomposition");
  }
  if (f.dim() != ambient_dim(model)) {
    throw std::invalid_argument("function dimension does not match the model");
  }
  if (f.degree() > truncation) {
    throw std::invalid_argument("function degree exceeds the stated truncation");
  }

  const Eigen::MatrixXd p = *bivector_matrix(model);
  const int m = f.dim();

  // Candidate auxiliary unit modes in lexicographic order.
  std::vector<Mode> candidates;
  for (int axis = 0; axis < m; ++axis) {
    for (int sign : {-1, 1}) {
      Mode e(m, 0);
      e[axis] = sign;
      candidates.push_back(std::move(e));
    }
  }
  std::sort(candidates.begin(), candidates.end());

  CommutatorCertificate cert;
  cert.model_id = family_name(model);
  cert.truncation = truncation;
  cert.input = f;
  cert.obstruction = f.mean();

  for (const auto& [c, coeff] : f.coefficients()) {
    if (mode_sup_norm(c) == 0) continue;
    Eigen::VectorXd pc = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) pc[i] += p(i, j) * c[j];
    }
    double pairing = 0.0;
    const Mode* chosen = nullptr;
    for (const auto& e : candidates) {
      double value = 0.0;
      for (int i = 0; i < m; ++i) value += e[i] * pc[i];
      if (std::abs(value) > 1e-9) {
        pairing = value;
        chosen = &e;
        break;
      }
    }
    if (!chosen) {
      throw std::invalid_argument("mode " + mode_to_string(c) +
                                  " pairs to zero with every auxiliary direction");
    }
    // {e, c - e} = -4 pi^2 (e^T P c) e_c, so scale the second slot.
    Mode rest(m);
    for (int i = 0; i < m; ++i) rest[i] = c[i] - (*chosen)[i];
    const Complex scale = coeff / (-kTwoPi * kTwoPi * pairing);
    cert.pairs.emplace_back(TrigPolynomial::harmonic(*chosen),
                            TrigPolynomial::harmonic(rest, scale));
  }

  cert.residual = recompute_certificate_residual(model, cert);
  return cert;
}

double recompute_certificate_residual(const PoissonModel& model,
                                      const CommutatorCertificate& cert) {
  TrigPolynomial sum = TrigPolynomial::constant(cert.input.dim(), cert.obstruction);
  for (const auto& [g, h] : cert.pairs) {
    sum = sum + bracket(model, g, h);
  }
  return (cert.input - sum).sup_norm_estimate();
}

ModularReport modular_class(const PoissonModel& model, const std::string& volume) {
  if (volume != "standard") {
    throw std::invalid_argument("only the standard constant-coefficient volume is supported");
  }
  ModularReport report;
  report.model_id = family_name(model);
  report.volume = "standard unit volume";

  if (const auto* mt = model.get_if<MappingTorusModel>()) {
    const double log_lambda = std::log(mt->lambda());
    std::ostringstream field;
    field << "log(lambda) lambda^t V with log(lambda) = " << log_lambda;
    report.field = field.str();
    // Matching a Hamiltonian field forces d_t g = -log(lambda) on the zero
    // mode with a periodic seam; the mean of the forced derivative is the
    // obstruction.
    const int grid = 64;
    const auto w = [&] {
      std::vector<double> weights(grid + 1, 0.0);
      const double h = 1.0 / grid;
      for (int block = 0; block < grid; block += 4) {
        weights[block] += 14.0 * h / 45.0;
        weights[block + 1] += 64.0 * h / 45.0;
        weights[block + 2] += 24.0 * h / 45.0;
        weights[block + 3] += 64.0 * h / 45.0;
        weights[block + 4] += 14.0 * h / 45.0;
      }
      return weights;
    }();
    double obstruction = 0.0;
    for (int j = 0; j <= grid; ++j) obstruction += w[j] * log_lambda;
    report.obstruction = std::abs(obstruction);
    report.is_hamiltonian = report.obstruction <= 1e-12;
    return report;
  }

  if (const auto* product = model.get_if<ProductModel>()) {
    ModularReport left = modular_class(*product->left, volume);
    ModularReport right = modular_class(*product->right, volume);
    report.model_id = "product";
    report.field = "sum of factor modular fields";
    report.is_hamiltonian = left.is_hamiltonian && right.is_hamiltonian;
    report.obstruction = std::max(left.obstruction, right.obstruction);
    return report;
  }

  // Constant bivector against a constant volume: the divergence of every
  // Hamiltonian field contracts an antisymmetric matrix with a Hessian.
  report.field = "0";
  report.obstruction = 0.0;
  report.is_hamiltonian = true;
  return report;
}

PerfectnessVerdict perfectness_verdict(const HomologyReport& homology,
                                       const ModularReport& modular) {
  if (homology.model_id != modular.model_id) {
    throw std::invalid_argument("homology and modular reports describe different models");
  }
  PerfectnessVerdict verdict;
  verdict.dim = homology.dim;
  verdict.unimodular = modular.is_hamiltonian;
  verdict.stable = homology.stable;

  if (!homology.ok() || homology.dim < 0) {
    verdict.status = Perfectness::Inconclusive;
    verdict.justification = "homology computation failed; no verdict";
    return verdict;
  }
  if (homology.dim == 0) {
    verdict.status = Perfectness::Perfect;
    verdict.justification =
        "zeroth homology vanishes at truncation, so every function is a sum of commutators";
    return verdict;
  }
  if (homology.dim >= 2 && homology.reliable) {
    verdict.status = Perfectness::NotPerfect;
    verdict.justification =
        "commutator span has codimension >= 2, so commutators plus constants stay proper "
        "(codimension argument)";
    return verdict;
  }
  if (!homology.stable || !homology.reliable) {
    verdict.status = Perfectness::Inconclusive;
    verdict.justification = "truncation-unstable dimension estimate";
    return verdict;
  }
  if (homology.dim == 1 && verdict.unimodular) {
    verdict.status = Perfectness::Perfect;
    verdict.justification =
        "unimodular with one-dimensional zeroth homology spanned by the mean functional";
    return verdict;
  }
  verdict.status = Perfectness::Inconclusive;
  verdict.justification =
      "one-dimensional homology without an invariant volume matches no decision rule";
  return verdict;
}

DegreeDimTable degree_dim_table(const PoissonModel& model, const AnalysisParams& params) {
  DegreeDimTable table;
  table.top_degree = leaf_rank(model);

  if (model.get_if<MappingTorusModel>()) {
    const auto* mt = model.get_if<MappingTorusModel>();
    // Casimirs: t-independent functions killed by the leafwise derivative.
    int casimirs = 0;
    for (int k0 = -params.truncation; k0 <= params.truncation; ++k0) {
      for (int k1 = -params.truncation; k1 <= params.truncation; ++k1) {
        const double divisor =
            kTwoPi * std::abs(k0 * mt->eigenvector()[0] + k1 * mt->eigenvector()[1]);
        if (divisor < params.divisor_floor) ++casimirs;
      }
    }
    table.dims[0] = casimirs;
    HomologyReport top = zeroth_homology(model, params);
    table.dims[table.top_degree] = std::max(top.dim, 0);
    for (int d = 1; d < table.top_degree; ++d) table.missing.insert(d);
    return table;
  }

  if (const auto* product = model.get_if<ProductModel>()) {
    return kunneth_compose(degree_dim_table(*product->left, params),
                           degree_dim_table(*product->right, params));
  }

  TopDimEstimate casimirs = casimir_dim(model, params.truncation, params.divisor_floor);
  TopDimEstimate top = estimate_h_top_dim(model, params.truncation, params.divisor_floor);
  table.dims[0] = casimirs.dim;
  table.dims[table.top_degree] = top.dim;
  for (int d = 1; d < table.top_degree; ++d) table.missing.insert(d);
  return table;
}

DegreeDimTable kunneth_compose(const DegreeDimTable& left, const DegreeDimTable& right) {
  DegreeDimTable out;
  out.top_degree = left.top_degree + right.top_degree;
  for (int n = 0; n <= out.top_degree; ++n) {
    int dim = 0;
    bool complete = true;
    for (int p = 0; p <= left.top_degree; ++p) {
      const int q = n - p;
      if (q < 0 || q > right.top_degree) continue;
      const bool left_known = left.has(p) && !left.missing.count(p);
      const bool right_known = right.has(q) && !right.missing.count(q);
      if (!left_known || !right_known) {
        // A missing factor entry only matters if the paired entry could
        // contribute; treat unknown as unknown, not zero.
        complete = false;
        continue;
      }
      dim += left.dims.at(p) * right.dims.at(q);
    }
    if (complete) {
      out.dims[n] = dim;
    } else {
      out.missing.insert(n);
    }
  }
  return out;
}

PoissonTopReport top_poisson_cohomology_dim(const PoissonModel& model, int truncation,
                                            double divisor_floor) {
  auto p = bivector_matrix(model);
  if (!p) {
    throw std::invalid_argument("top Poisson cohomology blocks need a constant bivector");
  }
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  const int m = static_cast<int>(p->rows());

  PoissonTopReport report;
  report.truncation = truncation;

  Mode k(m, -truncation);
  while (true) {
    // The block at mode k maps (m-1)-vectors to m-vectors by wedging with
    // the Hamiltonian direction 2 pi i P^T k; its rank is 0 or 1.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) w[i] += (*p)(j, i) * k[j];
    }
    Eigen::RowVectorXd block(m);
    for (int i = 0; i < m; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      block[i] = kTwoPi * sign * w[i];
    }
    const int rank = (block.lpNorm<Eigen::Infinity>() >= divisor_floor) ? 1 : 0;
    if (rank == 0) {
      ++report.dim;
      report.kernel_modes.push_back(k);
    }

    int axis = m - 1;
    while (axis >= 0) {
      if (++k[axis] <= truncation) break;
      k[axis] = -truncation;
      --axis;
    }
    if (axis < 0) break;
  }
  return report;
}

}  // namespace folia
