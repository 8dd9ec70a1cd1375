#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "folia/homology.hpp"
#include "folia/models.hpp"

namespace folia {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "folia-report/1";
inline constexpr const char* kCertificateSchema = "folia-certificate/1";

/// One run: a model descriptor plus numeric parameters and the requested
/// analyses.  Matrices arrive as row-major nested arrays whose entries are
/// numbers or "p/q" strings.
struct RunConfig {
  std::string name;
  nlohmann::json model_spec;
  int truncation = 8;
  int t_grid = 64;
  double divisor_floor = kDefaultDivisorFloor;
  double residual_tol = 1e-8;
  double seam_tol = 1e-8;
  int trials = 20;
  int decompose_trials = 3;
  std::uint64_t seed = 20240101;
  std::vector<std::string> analyses;

  AnalysisParams params() const;
};

extern const std::vector<std::string> kKnownAnalyses;

double parse_rational(const nlohmann::json& value);

RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

PoissonModel build_model(const nlohmann::json& spec);

nlohmann::json trig_polynomial_to_json(const TrigPolynomial& f);
TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const CommutatorCertificate& cert,
                                   const nlohmann::json& model_spec);
CommutatorCertificate certificate_from_json(const nlohmann::json& j);

/// Executes the requested analyses in dependency order and assembles the
/// report.  Deterministic given the seed; wall-clock timings live in the
/// separate "timings_ms" object so reports compare byte-identically.
nlohmann::json run(const RunConfig& config);

/// 0 on success (obstructions included), 3 when any analysis reports a
/// numerical failure.
int report_exit_code(const nlohmann::json& report);

/// Report stripped of timing fields, for byte-level comparisons.
nlohmann::json report_without_timings(nlohmann::json report);

/// Built-in model configurations covering the supported families and the
/// product examples.
std::vector<RunConfig> gallery();
std::optional<RunConfig> gallery_entry(const std::string& name);

struct CertificateVerification {
  bool ok = false;
  double stated_residual = 0.0;
  double recomputed_residual = 0.0;
  std::string message;
};

/// Rebuilds the model and certificate from the file contents alone and
/// reevaluates the bracket sum.
CertificateVerification verify_certificate_json(const nlohmann::json& j,
                                                double agreement_tol = 1e-12);

}  // namespace folia
