#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "folia/workbench.hpp"

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << j.dump(2) << "\n";
}

int run_command(const std::string& config_path, const std::string& gallery_name,
                const std::string& out_path, const CLI::App& cmd) {
  folia::RunConfig config;
  if (!gallery_name.empty()) {
    auto entry = folia::gallery_entry(gallery_name);
    if (!entry) {
      std::cerr << "unknown gallery entry: " << gallery_name << "\n";
      return 2;
    }
    config = *entry;
  } else if (!config_path.empty()) {
    config = folia::parse_run_config(load_json(config_path));
  } else {
    std::cerr << "run needs --config or --gallery\n";
    return 2;
  }

  // Flags override whatever the config file set.
  if (cmd.count("--truncation")) config.truncation = cmd.get_option("--truncation")->as<int>();
  if (cmd.count("--t-grid")) config.t_grid = cmd.get_option("--t-grid")->as<int>();
  if (cmd.count("--tol")) {
    config.residual_tol = cmd.get_option("--tol")->as<double>();
    config.seam_tol = config.residual_tol;
  }
  if (cmd.count("--divisor-floor")) {
    config.divisor_floor = cmd.get_option("--divisor-floor")->as<double>();
  }
  if (cmd.count("--seed")) config.seed = cmd.get_option("--seed")->as<std::uint64_t>();

  const json report = folia::run(config);
  emit(report, out_path);
  const int code = folia::report_exit_code(report);
  if (code != 0) std::cerr << "run finished with exit code " << code << "\n";
  return code;
}

int gallery_command(const std::string& emit_name, const std::string& out_dir) {
  if (!emit_name.empty()) {
    auto entry = folia::gallery_entry(emit_name);
    if (!entry) {
      std::cerr << "unknown gallery entry: " << emit_name << "\n";
      return 2;
    }
    std::cout << folia::to_json(*entry).dump(2) << "\n";
    return 0;
  }
  for (const auto& entry : folia::gallery()) {
    if (!out_dir.empty()) {
      std::ofstream out(out_dir + "/" + entry.name + ".json");
      out << folia::to_json(entry).dump(2) << "\n";
    }
    std::cout << entry.name << "\n";
  }
  return 0;
}

int verify_command(const std::string& in_path) {
  const json j = load_json(in_path);

  // Accept a bare certificate, a list, or a full run report with embedded
  // decomposition certificates.
  std::vector<json> certificates;
  if (j.is_array()) {
    certificates.assign(j.begin(), j.end());
  } else if (j.value("schema", "") == folia::kCertificateSchema) {
    certificates.push_back(j);
  } else if (j.contains("results") && j.at("results").contains("decompose") &&
             j.at("results").at("decompose").contains("certificates")) {
    const auto& list = j.at("results").at("decompose").at("certificates");
    certificates.assign(list.begin(), list.end());
  }
  if (certificates.empty()) {
    std::cerr << "no certificates found in " << in_path << "\n";
    return 2;
  }

  bool all_ok = true;
  for (std::size_t i = 0; i < certificates.size(); ++i) {
    const auto v = folia::verify_certificate_json(certificates[i]);
    std::cout << "certificate " << i << ": " << (v.ok ? "OK" : "MISMATCH") << " stated "
              << v.stated_residual << " recomputed " << v.recomputed_residual << "\n";
    all_ok = all_ok && v.ok;
  }
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral workbench for Poisson homology and foliated cohomology on torus models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string gallery_name;
  std::string out_path;
  auto* run_cmd = app.add_subcommand("run", "run the configured analyses and emit a report");
  run_cmd->add_option("--config", config_path, "JSON config file");
  run_cmd->add_option("--gallery", gallery_name, "name of a built-in gallery entry");
  run_cmd->add_option("--out", out_path, "write the report here instead of stdout");
  run_cmd->add_option("--truncation", "Fourier truncation N")->check(CLI::PositiveNumber);
  run_cmd->add_option("--t-grid", "time grid size for the mapping torus")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--tol", "residual and seam tolerance")->check(CLI::PositiveNumber);
  run_cmd->add_option("--divisor-floor", "small-divisor floor")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", "RNG seed recorded in the report");

  std::string emit_name;
  std::string out_dir;
  auto* gallery_cmd = app.add_subcommand("gallery", "list or emit the built-in configurations");
  gallery_cmd->add_option("--emit", emit_name, "print one entry's config as JSON");
  gallery_cmd->add_option("--out-dir", out_dir, "also write each config to this directory");

  std::string verify_path;
  auto* verify_cmd =
      app.add_subcommand("verify-certificate", "recheck commutator certificates from a file");
  verify_cmd->add_option("--in", verify_path, "certificate or report file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_command(config_path, gallery_name, out_path, *run_cmd);
    if (gallery_cmd->parsed()) return gallery_command(emit_name, out_dir);
    if (verify_cmd->parsed()) return verify_command(verify_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
