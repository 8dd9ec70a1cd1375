#include "folia/workbench.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "folia/diophantine.hpp"

namespace folia {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

json finite_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

Eigen::MatrixXd parse_matrix(const json& rows) {
  const auto r = static_cast<int>(rows.size());
  if (r == 0) throw std::invalid_argument("matrix payload is empty");
  const auto c = static_cast<int>(rows.at(0).size());
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows.at(i).size()) != c) {
      throw std::invalid_argument("matrix rows have unequal lengths");
    }
    for (int j = 0; j < c; ++j) m(i, j) = parse_rational(rows.at(i).at(j));
  }
  return m;
}

Eigen::VectorXd parse_vector(const json& entries) {
  Eigen::VectorXd v(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    v[static_cast<int>(i)] = parse_rational(entries.at(i));
  }
  return v;
}

json mode_to_json(const Mode& k) { return json(k); }

json report_to_json(const HomologyReport& report) {
  json j;
  j["model"] = report.model_id;
  j["truncation"] = report.truncation;
  j["divisor_floor"] = report.divisor_floor;
  j["dim"] = report.dim;
  j["stable"] = report.stable;
  j["reliable"] = report.reliable;
  j["basis_functionals"] = report.basis_functionals;
  json modes = json::array();
  for (const auto& k : report.obstructed_modes) modes.push_back(mode_to_json(k));
  j["obstructed_modes"] = modes;
  j["smallest_divisor"] = finite_or_null(report.smallest_divisor);
  j["method"] = report.method;
  j["normalization_note"] = report.normalization_note;
  j["failures"] = report.failures;
  j["status"] = report.ok() ? "ok" : "numerical-failure";
  return j;
}

json report_to_json(const ModularReport& report) {
  json j;
  j["model"] = report.model_id;
  j["volume"] = report.volume;
  j["field"] = report.field;
  j["is_hamiltonian"] = report.is_hamiltonian;
  j["unimodular"] = report.is_hamiltonian;
  j["obstruction"] = report.obstruction;
  j["status"] = "ok";
  return j;
}

json report_to_json(const PerfectnessVerdict& verdict) {
  json j;
  j["status"] = "ok";
  j["verdict"] = to_string(verdict.status);
  j["justification"] = verdict.justification;
  j["dim"] = verdict.dim;
  j["unimodular"] = verdict.unimodular;
  j["stable"] = verdict.stable;
  return j;
}

json table_to_json(const DegreeDimTable& table) {
  json j;
  j["top_degree"] = table.top_degree;
  json dims = json::object();
  for (const auto& [degree, dim] : table.dims) dims[std::to_string(degree)] = dim;
  j["dims"] = dims;
  j["missing_degrees"] = std::vector<int>(table.missing.begin(), table.missing.end());
  j["partial"] = !table.missing.empty();
  return j;
}

json certificate_summary_to_json(const H2Certificate& cert) {
  json j;
  j["passed"] = cert.passed;
  j["truncation"] = cert.params.truncation;
  j["t_grid"] = cert.params.grid;
  j["trials"] = cert.params.trials;
  j["tolerance"] = cert.params.tolerance;
  j["seed"] = cert.params.seed;
  j["max_residual"] = cert.max_residual;
  j["max_seam_mismatch"] = cert.max_seam_mismatch;
  j["unit_input_seam_constant"] = complex_to_json(cert.unit_input_constant);
  j["failures"] = cert.failures;
  return j;
}

}  // namespace

const std::vector<std::string> kKnownAnalyses = {
    "homology", "decompose", "modular", "perfectness", "kunneth", "poisson-cohomology",
    "diophantine"};

double parse_rational(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    const double num = std::stod(s.substr(0, slash));
    const double den = std::stod(s.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("rational with zero denominator: " + s);
    return num / den;
  }
  throw std::invalid_argument("expected a number or \"p/q\" string");
}

AnalysisParams RunConfig::params() const {
  AnalysisParams p;
  p.truncation = truncation;
  p.t_grid = t_grid;
  p.divisor_floor = divisor_floor;
  p.residual_tol = residual_tol;
  p.seam_tol = seam_tol;
  p.trials = trials;
  p.seed = seed;
  return p;
}

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig config;
  config.name = j.value("name", "unnamed");
  if (!j.contains("model")) throw std::invalid_argument("config is missing the model spec");
  config.model_spec = j.at("model");
  config.truncation = j.value("truncation", config.truncation);
  config.t_grid = j.value("t_grid", config.t_grid);
  config.divisor_floor = j.value("divisor_floor", config.divisor_floor);
  config.residual_tol = j.value("residual_tol", config.residual_tol);
  config.seam_tol = j.value("seam_tol", config.seam_tol);
  config.trials = j.value("trials", config.trials);
  config.decompose_trials = j.value("decompose_trials", config.decompose_trials);
  config.seed = j.value("seed", config.seed);
  if (j.contains("analyses")) {
    config.analyses = j.at("analyses").get<std::vector<std::string>>();
  }

  if (config.truncation < 1 || config.t_grid < 8 || config.trials < 0 ||
      config.decompose_trials < 0 || config.divisor_floor <= 0.0 ||
      config.residual_tol <= 0.0 || config.seam_tol <= 0.0) {
    throw std::invalid_argument("config numeric fields must be positive");
  }
  for (const auto& analysis : config.analyses) {
    if (std::find(kKnownAnalyses.begin(), kKnownAnalyses.end(), analysis) ==
        kKnownAnalyses.end()) {
      throw std::invalid_argument("unknown analysis: " + analysis);
    }
  }
  return config;
}

nlohmann::json to_json(const RunConfig& config) {
  json j;
  j["name"] = config.name;
  j["model"] = config.model_spec;
  j["truncation"] = config.truncation;
  j["t_grid"] = config.t_grid;
  j["divisor_floor"] = config.divisor_floor;
  j["residual_tol"] = config.residual_tol;
  j["seam_tol"] = config.seam_tol;
  j["trials"] = config.trials;
  j["decompose_trials"] = config.decompose_trials;
  j["seed"] = config.seed;
  j["analyses"] = config.analyses;
  return j;
}

PoissonModel build_model(const nlohmann::json& spec) {
  const std::string family = spec.at("family").get<std::string>();
  if (family == "constant-torus") {
    return PoissonModel(ConstantTorusModel(parse_matrix(spec.at("bivector"))));
  }
  if (family == "cosymplectic-torus") {
    return PoissonModel(
        CosymplecticTorusModel(parse_vector(spec.at("theta")), parse_matrix(spec.at("eta"))));
  }
  if (family == "mapping-torus") {
    const json& rows = spec.contains("gluing") ? spec.at("gluing") : spec.at("A");
    Eigen::Matrix2i a;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) a(i, j) = rows.at(i).at(j).get<int>();
    }
    return PoissonModel(MappingTorusModel(a));
  }
  if (family == "product") {
    return make_product(build_model(spec.at("left")), build_model(spec.at("right")));
  }
  throw std::invalid_argument("unknown model family: " + family);
}

nlohmann::json trig_polynomial_to_json(const TrigPolynomial& f) {
  json terms = json::array();
  for (const auto& [k, c] : f.coefficients()) {
    json term;
    term["k"] = mode_to_json(k);
    term["c"] = complex_to_json(c);
    terms.push_back(term);
  }
  json j;
  j["dim"] = f.dim();
  j["terms"] = terms;
  return j;
}

TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<std::pair<Mode, Complex>> terms;
  for (const auto& term : j.at("terms")) {
    terms.emplace_back(term.at("k").get<Mode>(), complex_from_json(term.at("c")));
  }
  return TrigPolynomial::from_coefficients(dim, terms);
}

nlohmann::json certificate_to_json(const CommutatorCertificate& cert,
                                   const nlohmann::json& model_spec) {
  json j;
  j["schema"] = kCertificateSchema;
  j["model"] = model_spec;
  j["model_id"] = cert.model_id;
  j["truncation"] = cert.truncation;
  j["input"] = trig_polynomial_to_json(cert.input);
  j["obstruction"] = complex_to_json(cert.obstruction);
  json pairs = json::array();
  for (const auto& [g, h] : cert.pairs) {
    pairs.push_back(json::array({trig_polynomial_to_json(g), trig_polynomial_to_json(h)}));
  }
  j["pairs"] = pairs;
  j["residual"] = cert.residual;
  j["seed"] = cert.seed;
  return j;
}

CommutatorCertificate certificate_from_json(const nlohmann::json& j) {
  CommutatorCertificate cert;
  cert.model_id = j.value("model_id", "");
  cert.truncation = j.value("truncation", 0);
  cert.input = trig_polynomial_from_json(j.at("input"));
  cert.obstruction = complex_from_json(j.at("obstruction"));
  for (const auto& pair : j.at("pairs")) {
    cert.pairs.emplace_back(trig_polynomial_from_json(pair.at(0)),
                            trig_polynomial_from_json(pair.at(1)));
  }
  cert.residual = j.at("residual").get<double>();
  cert.seed = j.value("seed", std::uint64_t{0});
  return cert;
}

namespace {

/// Requested analyses plus their dependencies, in dependency order.
std::vector<std::string> schedule_analyses(const std::vector<std::string>& requested,
                                           std::vector<std::string>& notes) {
  std::set<std::string> wanted(requested.begin(), requested.end());
  if (wanted.count("perfectness")) {
    if (!wanted.count("homology") || !wanted.count("modular")) {
      notes.push_back("perfectness requires homology and modular; added automatically");
    }
    wanted.insert("homology");
    wanted.insert("modular");
  }
  std::vector<std::string> ordered;
  for (const auto& name : kKnownAnalyses) {
    if (wanted.count(name)) ordered.push_back(name);
  }
  return ordered;
}

json run_diophantine(const PoissonModel& model, const RunConfig& config) {
  auto slope = model_slope(model);
  if (!slope) {
    return json{{"status", "not-applicable"},
                {"reason", "model has no characteristic slope"}};
  }
  json j;
  j["status"] = "ok";
  j["slope"] = *slope;
  if (*slope <= 0.0 || *slope >= 1.0) {
    j["regime"] = "rational";
    j["caveat"] = "slope reduces to an axis direction";
    return j;
  }
  std::vector<int> truncations;
  for (int n = 1; n <= config.truncation; n *= 2) truncations.push_back(n);
  DiophantineProfile profile = build_profile(*slope, 20, truncations);
  j["quotients"] = profile.expansion.quotients;
  j["convergent_denominators"] = profile.expansion.denominators;
  j["terminated_rational"] = profile.expansion.terminated_rational;
  j["precision_exhausted"] = profile.expansion.precision_exhausted;
  json table = json::object();
  for (const auto& [n, value] : profile.min_divisor_table) table[std::to_string(n)] = value;
  j["min_divisor_table"] = table;
  switch (profile.classification.regime) {
    case SlopeRegime::DiophantineLike:
      j["regime"] = "diophantine-like";
      break;
    case SlopeRegime::LiouvilleLike:
      j["regime"] = "liouville-like";
      break;
    case SlopeRegime::Rational:
      j["regime"] = "rational";
      break;
  }
  j["exponent_estimate"] = profile.classification.exponent_estimate;
  j["caveat"] = profile.classification.caveat;
  return j;
}

json run_decompose(const PoissonModel& model, const RunConfig& config) {
  const bool supported =
      (model.get_if<ConstantTorusModel>() && model.get_if<ConstantTorusModel>()->dim() == 2 &&
       model.get_if<ConstantTorusModel>()->rank() == 2) ||
      (model.get_if<CosymplecticTorusModel>() &&
       model.get_if<CosymplecticTorusModel>()->dim() == 3);
  if (!supported) {
    return json{{"status", "unsupported"},
                {"reason", "commutator decomposition covers the rank-2 torus models"}};
  }
  json certificates = json::array();
  std::mt19937_64 rng(config.seed);
  double max_residual = 0.0;
  for (int trial = 0; trial < config.decompose_trials; ++trial) {
    TrigPolynomial f = random_real_trig_polynomial(ambient_dim(model),
                                                   std::min(config.truncation, 6), rng, 8,
                                                   /*zero_mean=*/false);
    CommutatorCertificate cert = decompose_commutators(model, f, config.truncation);
    cert.seed = config.seed;
    max_residual = std::max(max_residual, cert.residual);
    json entry = certificate_to_json(cert, config.model_spec);
    entry["trial"] = trial;
    certificates.push_back(entry);
  }
  json j;
  j["status"] = max_residual <= config.residual_tol ? "ok" : "numerical-failure";
  j["max_residual"] = max_residual;
  j["certificates"] = certificates;
  return j;
}

json run_kunneth(const PoissonModel& model, const RunConfig& config) {
  const auto* product = model.get_if<ProductModel>();
  if (!product) {
    return json{{"status", "not-applicable"}, {"reason", "model is not a product"}};
  }
  const AnalysisParams params = config.params();
  DegreeDimTable left = degree_dim_table(*product->left, params);
  DegreeDimTable right = degree_dim_table(*product->right, params);
  DegreeDimTable composed = kunneth_compose(left, right);
  json j;
  j["status"] = "ok";
  j["left"] = table_to_json(left);
  j["right"] = table_to_json(right);
  j["composed"] = table_to_json(composed);
  if (auto flat = flatten_to_constant(model)) {
    TopDimEstimate direct =
        estimate_h_top_dim(PoissonModel(*flat), params.truncation, params.divisor_floor);
    j["direct_top_dim"] = direct.dim;
    j["matches_direct"] =
        composed.has(composed.top_degree) && composed.dims.at(composed.top_degree) == direct.dim;
  }
  return j;
}

json run_poisson_cohomology(const PoissonModel& model, const RunConfig& config) {
  if (!bivector_matrix(model)) {
    return json{{"status", "not-applicable"},
                {"reason", "needs a constant bivector (not a mapping torus)"}};
  }
  PoissonTopReport report =
      top_poisson_cohomology_dim(model, config.truncation, config.divisor_floor);
  json j;
  j["status"] = "ok";
  j["truncation"] = report.truncation;
  j["dim"] = report.dim;
  json modes = json::array();
  for (const auto& k : report.kernel_modes) modes.push_back(mode_to_json(k));
  j["kernel_modes"] = modes;
  return j;
}

}  // namespace

nlohmann::json run(const RunConfig& config) {
  using clock = std::chrono::steady_clock;

  json report;
  report["schema"] = kReportSchema;
  report["version"] = kToolVersion;
  report["config"] = to_json(config);

  std::vector<std::string> notes;
  notes.push_back(
      "leafwise volume normalized to coefficient one in the stored coframe; mapping-torus "
      "bivector normalized as lambda^t (v ^ d/dt)");
  notes.push_back("all dimensions and verdicts are truncation statements at the stated N, grid "
                  "and floors");

  PoissonModel model = build_model(config.model_spec);
  json validation = json::array();
  bool valid = true;
  for (const auto& check : validate(model)) {
    validation.push_back(
        json{{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
    valid = valid && check.passed;
  }
  report["validation"] = validation;
  report["valid"] = valid;
  report["results"] = json::object();
  report["timings_ms"] = json::object();

  if (!valid) {
    notes.push_back("model validation failed; analyses skipped");
    report["notes"] = notes;
    return report;
  }

  const std::vector<std::string> ordered = schedule_analyses(config.analyses, notes);
  const AnalysisParams params = config.params();

  HomologyReport homology;
  ModularReport modular;
  bool have_homology = false;
  bool have_modular = false;

  for (const auto& analysis : ordered) {
    const auto start = clock::now();
    json result;
    if (analysis == "homology") {
      homology = zeroth_homology(model, params);
      have_homology = true;
      result = report_to_json(homology);
      if (const auto* mt = model.get_if<MappingTorusModel>()) {
        H2CertificateParams cp;
        cp.truncation = params.truncation;
        cp.grid = params.t_grid;
        cp.trials = params.trials;
        cp.tolerance = params.residual_tol;
        cp.seed = params.seed;
        result["certificate"] = certificate_summary_to_json(h2_vanishing_certificate(*mt, cp));
      }
    } else if (analysis == "modular") {
      modular = modular_class(model);
      have_modular = true;
      result = report_to_json(modular);
    } else if (analysis == "perfectness") {
      if (!have_homology || !have_modular) {
        result = json{{"status", "numerical-failure"},
                      {"reason", "missing homology or modular input"}};
      } else {
        result = report_to_json(perfectness_verdict(homology, modular));
      }
    } else if (analysis == "decompose") {
      result = run_decompose(model, config);
    } else if (analysis == "kunneth") {
      result = run_kunneth(model, config);
    } else if (analysis == "poisson-cohomology") {
      result = run_poisson_cohomology(model, config);
      if (result.value("status", "") == "ok" && have_homology && homology.ok()) {
        result["matches_zeroth_homology"] = (result.at("dim").get<int>() == homology.dim);
      }
    } else if (analysis == "diophantine") {
      result = run_diophantine(model, config);
    }
    const auto stop = clock::now();
    report["results"][analysis] = result;
    report["timings_ms"][analysis] =
        std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count() / 1000.0;
  }

  report["notes"] = notes;
  return report;
}

int report_exit_code(const nlohmann::json& report) {
  if (!report.value("valid", false)) return 2;
  if (report.contains("results")) {
    for (const auto& [name, result] : report.at("results").items()) {
      if (result.is_object() && result.value("status", "") == "numerical-failure") return 3;
    }
  }
  return 0;
}

nlohmann::json report_without_timings(nlohmann::json report) {
  report.erase("timings_ms");
  return report;
}

CertificateVerification verify_certificate_json(const nlohmann::json& j, double agreement_tol) {
  CertificateVerification out;
  if (j.value("schema", "") != kCertificateSchema) {
    out.message = "not a commutator certificate file";
    return out;
  }
  PoissonModel model = build_model(j.at("model"));
  CommutatorCertificate cert = certificate_from_json(j);
  out.stated_residual = cert.residual;
  out.recomputed_residual = recompute_certificate_residual(model, cert);
  out.ok = std::abs(out.recomputed_residual - out.stated_residual) <= agreement_tol;
  out.message = out.ok ? "certificate residual reproduced" : "residual mismatch";
  return out;
}

}  // namespace folia
