#include "folia/workbench.hpp"

namespace folia {

namespace {

using nlohmann::json;

// (sqrt(5) - 1) / 2, the golden Kronecker slope.
constexpr double kGoldenSlope = 0.6180339887498948482;

json symplectic_t2_spec() {
  return json{{"family", "constant-torus"}, {"bivector", {{0, 1}, {-1, 0}}}};
}

json fibration_t3_spec() {
  return json{{"family", "cosymplectic-torus"},
              {"theta", {0, 0, 1}},
              {"eta", {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}}};
}

json kronecker_t3_spec() {
  return json{{"family", "cosymplectic-torus"},
              {"theta", {-kGoldenSlope, 0, 1}},
              {"eta", {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}}};
}

json cat_map_spec() {
  return json{{"family", "mapping-torus"}, {"gluing", {{2, 1}, {1, 1}}}};
}

json product_spec(json left, json right) {
  return json{{"family", "product"}, {"left", std::move(left)}, {"right", std::move(right)}};
}

RunConfig make_entry(std::string name, json spec, std::vector<std::string> analyses) {
  RunConfig config;
  config.name = std::move(name);
  config.model_spec = std::move(spec);
  config.analyses = std::move(analyses);
  return config;
}

}  // namespace

std::vector<RunConfig> gallery() {
  std::vector<RunConfig> entries;
  entries.push_back(make_entry(
      "symplectic-t2", symplectic_t2_spec(),
      {"homology", "decompose", "modular", "perfectness", "poisson-cohomology"}));
  entries.push_back(make_entry("cosymplectic-t3-fibration", fibration_t3_spec(),
                               {"homology", "modular", "perfectness", "poisson-cohomology"}));
  entries.push_back(make_entry("cosymplectic-t3-kronecker", kronecker_t3_spec(),
                               {"homology", "decompose", "modular", "perfectness",
                                "poisson-cohomology", "diophantine"}));
  entries.push_back(make_entry("mapping-torus-cat", cat_map_spec(),
                               {"homology", "modular", "perfectness", "diophantine"}));
  entries.push_back(make_entry("product-cat-x-t2",
                               product_spec(cat_map_spec(), symplectic_t2_spec()),
                               {"homology", "modular", "perfectness", "kunneth"}));
  entries.push_back(make_entry(
      "product-kronecker-x-t2", product_spec(kronecker_t3_spec(), symplectic_t2_spec()),
      {"homology", "modular", "perfectness", "kunneth", "poisson-cohomology"}));
  entries.push_back(make_entry("product-kronecker-x-cat",
                               product_spec(kronecker_t3_spec(), cat_map_spec()),
                               {"homology", "modular", "perfectness", "kunneth"}));
  return entries;
}

std::optional<RunConfig> gallery_entry(const std::string& name) {
  for (auto& entry : gallery()) {
    if (entry.name == name) return entry;
  }
  return std::nullopt;
}

}  // namespace folia
