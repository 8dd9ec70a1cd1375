#include <doctest.h>

#include <random>
#include <set>

#include "folia/workbench.hpp"

using namespace folia;
using nlohmann::json;

TEST_SUITE_BEGIN("workbench");

TEST_CASE("rational payload entries") {
  CHECK(parse_rational(json(0.25)) == 0.25);
  CHECK(parse_rational(json("3/5")) == doctest::Approx(0.6));
  CHECK(parse_rational(json("-1/2")) == doctest::Approx(-0.5));
  CHECK(parse_rational(json("0.125")) == 0.125);
  CHECK_THROWS_AS(parse_rational(json("1/0")), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(json(nullptr)), std::invalid_argument);
}

TEST_CASE("config parsing and validation") {
  json j;
  j["name"] = "demo";
  j["model"] = {{"family", "constant-torus"}, {"bivector", {{0, 1}, {-1, 0}}}};
  j["truncation"] = 6;
  j["analyses"] = {"homology", "perfectness"};
  const auto config = parse_run_config(j);
  CHECK(config.name == "demo");
  CHECK(config.truncation == 6);

  json no_model = j;
  no_model.erase("model");
  CHECK_THROWS_AS(parse_run_config(no_model), std::invalid_argument);

  json bad_floor = j;
  bad_floor["divisor_floor"] = 0.0;
  CHECK_THROWS_AS(parse_run_config(bad_floor), std::invalid_argument);

  json bad_analysis = j;
  bad_analysis["analyses"] = {"spectral-sequence"};
  CHECK_THROWS_AS(parse_run_config(bad_analysis), std::invalid_argument);
}

TEST_CASE("model construction from specs") {
  const auto t2 = build_model(json{{"family", "constant-torus"},
                                   {"bivector", {{0, 1}, {-1, 0}}}});
  CHECK(family_name(t2) == "constant-torus");
  CHECK(is_valid(t2));

  const auto cosym = build_model(json{{"family", "cosymplectic-torus"},
                                      {"theta", {0, 0, 1}},
                                      {"eta", {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}}});
  CHECK(family_name(cosym) == "cosymplectic-torus");

  const auto cat = build_model(json{{"family", "mapping-torus"}, {"A", {{2, 1}, {1, 1}}}});
  CHECK(family_name(cat) == "mapping-torus");

  const auto product = build_model(json{
      {"family", "product"},
      {"left", {{"family", "constant-torus"}, {"bivector", {{0, 1}, {-1, 0}}}}},
      {"right", {{"family", "mapping-torus"}, {"gluing", {{2, 1}, {1, 1}}}}}});
  CHECK(family_name(product) == "product");
  CHECK(ambient_dim(product) == 5);

  CHECK_THROWS_AS(build_model(json{{"family", "b-symplectic"}}), std::invalid_argument);
}

TEST_CASE("trig polynomial serialization round trip") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_real_trig_polynomial(3, 4, rng, 7);
    const auto back = trig_polynomial_from_json(trig_polynomial_to_json(f));
    CHECK((f - back).sup_norm_estimate() == 0.0);
  }
}

TEST_CASE("certificates verify from their file contents alone") {
  auto config = *gallery_entry("symplectic-t2");
  config.decompose_trials = 2;
  const json report = run(config);
  REQUIRE(report.at("results").contains("decompose"));
  const auto& certs = report.at("results").at("decompose").at("certificates");
  REQUIRE(certs.size() == 2);

  for (const auto& cert : certs) {
    const auto verified = verify_certificate_json(cert);
    CHECK(verified.ok);
    CHECK(std::abs(verified.recomputed_residual - verified.stated_residual) <= 1e-12);
  }

  json tampered = certs.at(0);
  tampered["pairs"][0][1]["terms"][0]["c"][0] =
      tampered["pairs"][0][1]["terms"][0]["c"][0].get<double>() * 3.0;
  CHECK(!verify_certificate_json(tampered).ok);

  CHECK(!verify_certificate_json(json{{"schema", "other"}}).ok);
}

TEST_CASE("gallery entries are valid and complete") {
  const auto entries = gallery();
  CHECK(entries.size() >= 6);
  std::set<std::string> names;
  for (const auto& entry : entries) {
    names.insert(entry.name);
    CHECK(is_valid(build_model(entry.model_spec)));
  }
  CHECK(names.size() == entries.size());
  CHECK(gallery_entry("symplectic-t2").has_value());
  CHECK(!gallery_entry("missing-model").has_value());
}

TEST_CASE("gallery verdicts match the expected table") {
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"symplectic-t2", "Perfect"},
      {"cosymplectic-t3-fibration", "NotPerfect"},
      {"cosymplectic-t3-kronecker", "Perfect"},
      {"mapping-torus-cat", "Perfect"},
      {"product-cat-x-t2", "Perfect"},
      {"product-kronecker-x-t2", "Perfect"},
      {"product-kronecker-x-cat", "Perfect"},
  };
  for (const auto& [name, verdict] : expected) {
    auto config = *gallery_entry(name);
    config.trials = 5;
    config.decompose_trials = 1;
    const json report = run(config);
    CHECK(report.at("valid").get<bool>());
    CHECK(report.at("results").at("perfectness").at("verdict").get<std::string>() == verdict);
    CHECK(report_exit_code(report) == 0);
  }
}

TEST_CASE("reports are deterministic given the seed") {
  auto config = *gallery_entry("mapping-torus-cat");
  config.trials = 4;
  const json a = report_without_timings(run(config));
  const json b = report_without_timings(run(config));
  CHECK(a.dump() == b.dump());

  auto reseeded = config;
  reseeded.seed = config.seed + 1;
  const json c = report_without_timings(run(reseeded));
  CHECK(a.dump() != c.dump());
}

TEST_CASE("reports round trip through serialization") {
  auto config = *gallery_entry("cosymplectic-t3-kronecker");
  config.decompose_trials = 1;
  const json report = run(config);
  const json reparsed = json::parse(report.dump());
  CHECK(reparsed == report);
}

TEST_CASE("an empty analysis list echoes the config only") {
  RunConfig config;
  config.name = "echo";
  config.model_spec = json{{"family", "constant-torus"}, {"bivector", {{0, 1}, {-1, 0}}}};
  const json report = run(config);
  CHECK(report.at("results").empty());
  CHECK(report.at("config").at("name") == "echo");
  CHECK(report_exit_code(report) == 0);
}

TEST_CASE("perfectness pulls in its dependencies") {
  RunConfig config;
  config.name = "deps";
  config.model_spec = json{{"family", "constant-torus"}, {"bivector", {{0, 1}, {-1, 0}}}};
  config.analyses = {"perfectness"};
  const json report = run(config);
  CHECK(report.at("results").contains("homology"));
  CHECK(report.at("results").contains("modular"));
  CHECK(report.at("results").at("perfectness").at("verdict") == "Perfect");
  bool noted = false;
  for (const auto& note : report.at("notes")) {
    if (note.get<std::string>().find("added automatically") != std::string::npos) noted = true;
  }
  CHECK(noted);
}

TEST_CASE("exit codes distinguish obstruction data from failures") {
  // Obstructions are ordinary output.
  auto fib = *gallery_entry("cosymplectic-t3-fibration");
  const json ok_report = run(fib);
  CHECK(report_exit_code(ok_report) == 0);

  json failing = ok_report;
  failing["results"]["homology"]["status"] = "numerical-failure";
  CHECK(report_exit_code(failing) == 3);

  json invalid = ok_report;
  invalid["valid"] = false;
  CHECK(report_exit_code(invalid) == 2);
}

TEST_CASE("invalid models produce diagnostics, not analyses") {
  RunConfig config;
  config.name = "broken";
  config.model_spec = json{{"family", "mapping-torus"}, {"gluing", {{1, 1}, {0, 1}}}};
  config.analyses = {"homology"};
  const json report = run(config);
  CHECK(!report.at("valid").get<bool>());
  CHECK(report.at("results").empty());
  CHECK(report_exit_code(report) == 2);
  bool named = false;
  for (const auto& check : report.at("validation")) {
    if (check.at("name") == "hyperbolic" && !check.at("passed").get<bool>()) named = true;
  }
  CHECK(named);
}

TEST_CASE("diophantine analysis reports the golden regime") {
  auto config = *gallery_entry("cosymplectic-t3-kronecker");
  config.analyses = {"diophantine"};
  const json report = run(config);
  const auto& dio = report.at("results").at("diophantine");
  CHECK(dio.at("status") == "ok");
  CHECK(dio.at("regime") == "diophantine-like");
  CHECK(dio.at("slope").get<double>() == doctest::Approx(0.6180339887).epsilon(1e-9));

  auto t2 = *gallery_entry("symplectic-t2");
  t2.analyses = {"diophantine"};
  const json none = run(t2);
  CHECK(none.at("results").at("diophantine").at("status") == "not-applicable");
}

TEST_SUITE_END();
