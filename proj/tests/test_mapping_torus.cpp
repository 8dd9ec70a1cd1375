#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "folia/mapping_torus.hpp"
#include "test_support.hpp"

using namespace folia;

namespace {

MappingTorusModel cat_map() {
  Eigen::Matrix2i a;
  a << 2, 1, 1, 1;
  return MappingTorusModel(a);
}

MappingTorusModel skew_map() {
  Eigen::Matrix2i a;
  a << 2, 1, 3, 2;  // asymmetric, trace 4
  return MappingTorusModel(a);
}

EquivariantFunction constant_one(int grid) {
  EquivariantFunction f = EquivariantFunction::zero(grid, 0);
  f.curves[Mode2{0, 0}] = std::vector<Complex>(grid + 1, Complex(1.0, 0.0));
  return f;
}

double ef_distance(const EquivariantFunction& f, const EquivariantFunction& g) {
  return ef_add(f, ef_scale(Complex(-1.0, 0.0), g)).sup_estimate();
}

}  // namespace

TEST_SUITE_BEGIN("mapping-torus");

TEST_CASE("mode transport is the transposed action") {
  const auto model = skew_map();
  const Eigen::Matrix2i a = model.gluing();
  const Eigen::Matrix2i at = model.mode_action();
  CHECK(at == a.transpose());

  // Pullback of e_k under m -> Am equals e_{A^T k} pointwise.
  const Mode2 k{2, -1};
  const Mode2 tk = mode_apply(at, k);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double x = i / 12.0;
      const double y = j / 12.0;
      const double ax = a(0, 0) * x + a(0, 1) * y;
      const double ay = a(1, 0) * x + a(1, 1) * y;
      const Complex pullback = std::exp(Complex(0.0, kTwoPi * (k[0] * ax + k[1] * ay)));
      const Complex transported = std::exp(Complex(0.0, kTwoPi * (tk[0] * x + tk[1] * y)));
      CHECK(std::abs(pullback - transported) <= 1e-12);
    }
  }

  const Eigen::Matrix2i id = model.mode_action() * model.mode_action_inverse();
  CHECK(id == Eigen::Matrix2i::Identity());
}

TEST_CASE("orbit decomposition partitions the mode box") {
  const auto model = cat_map();
  const int truncation = 5;
  const auto orbits = orbit_decomposition(model, truncation);

  std::set<Mode2> seen;
  bool found_fixed = false;
  for (const auto& orbit : orbits) {
    if (orbit.fixed_point) {
      found_fixed = true;
      CHECK(orbit.segment.size() == 1);
      CHECK(orbit.segment[0] == Mode2{0, 0});
    }
    for (const auto& k : orbit.segment) {
      CHECK(!seen.count(k));
      seen.insert(k);
    }
  }
  CHECK(found_fixed);
  for (int k0 = -truncation; k0 <= truncation; ++k0) {
    for (int k1 = -truncation; k1 <= truncation; ++k1) {
      CHECK(seen.count(Mode2{k0, k1}) == 1);
    }
  }
}

TEST_CASE("the cat-map orbit of (1,0) and its growth rate") {
  const auto model = cat_map();
  const auto orbits = orbit_decomposition(model, 8);
  const LatticeOrbit* orbit = nullptr;
  for (const auto& candidate : orbits) {
    for (const auto& k : candidate.segment) {
      if (k == Mode2{1, 0}) orbit = &candidate;
    }
  }
  REQUIRE(orbit);

  std::size_t at = 0;
  while (at < orbit->segment.size() && !(orbit->segment[at] == Mode2{1, 0})) ++at;
  REQUIRE(at + 2 < orbit->segment.size());
  CHECK(orbit->segment[at + 1] == Mode2{2, 1});
  CHECK(orbit->segment[at + 2] == Mode2{5, 3});

  // Sup norms grow geometrically at rate lambda.
  const auto& tail = orbit->segment;
  const double ratio =
      static_cast<double>(std::max(std::abs(tail.back()[0]), std::abs(tail.back()[1]))) /
      std::max(std::abs(tail[tail.size() - 2][0]), std::abs(tail[tail.size() - 2][1]));
  CHECK(ratio == doctest::Approx(model.lambda()).epsilon(0.05));

  // Divisors k.v scale exactly by lambda along the orbit.
  const Eigen::Vector2d v = model.eigenvector();
  for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
    const double d0 = tail[i][0] * v[0] + tail[i][1] * v[1];
    const double d1 = tail[i + 1][0] * v[0] + tail[i + 1][1] * v[1];
    CHECK(d1 == doctest::Approx(model.lambda() * d0).epsilon(1e-10));
  }
}

TEST_CASE("generated random functions satisfy the seam and are real") {
  const auto model = cat_map();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const auto f = random_equivariant_function(model, 8, 32, rng);
    CHECK(f.sup_estimate() > 0.0);
    CHECK(seam_mismatch(model, f) <= 1e-12);
    CHECK(f.is_real_valued(1e-12));
    CHECK(f.weight == 0);
  }
}

TEST_CASE("seam mismatch detects the declared weight") {
  const auto model = cat_map();
  const int grid = 16;
  const Mode2 k{1, 0};
  const Mode2 tk = mode_apply(model.mode_action(), k);

  for (int weight : {-1, 0, 1}) {
    EquivariantFunction f = EquivariantFunction::zero(grid, weight);
    std::vector<Complex> base(grid + 1, Complex(0.0, 0.0));
    for (int j = 0; j <= grid; ++j) base[j] = Complex(j / double(grid), 0.0);
    std::vector<Complex> image(grid + 1, Complex(0.0, 0.0));
    image[0] = std::pow(model.lambda(), weight) * base[grid];
    f.curves[k] = base;
    f.curves[tk] = image;
    CHECK(seam_mismatch(model, f) <= 1e-12);

    f.weight = weight + 1;
    CHECK(seam_mismatch(model, f) > 1e-3);
  }
}

TEST_CASE("bracket basics") {
  const auto model = cat_map();
  const int grid = 32;
  std::mt19937_64 rng(9);
  const auto f = random_equivariant_function(model, 6, grid, rng);

  CHECK(mt_bracket(model, f, constant_one(grid)).sup_estimate() <= 1e-12);

  // Functions of t alone commute: the eigendirection derivative kills both.
  EquivariantFunction g = EquivariantFunction::zero(grid, 0);
  EquivariantFunction h = EquivariantFunction::zero(grid, 0);
  const auto t = time_grid(grid);
  std::vector<Complex> gc(grid + 1), hc(grid + 1);
  for (int j = 0; j <= grid; ++j) {
    const double u = t[j];
    gc[j] = Complex(u * u * (1 - u), 0.0);
    hc[j] = Complex(1.0 + 0.5 * u, 0.0);
  }
  g.curves[Mode2{0, 0}] = gc;
  h.curves[Mode2{0, 0}] = hc;
  CHECK(mt_bracket(model, g, h).sup_estimate() <= 1e-12);
}

TEST_CASE("bracket against the direct formula") {
  const auto model = cat_map();
  const int grid = 64;
  const auto t = time_grid(grid);

  // f = e_{(1,0)} independent of t, g a k = 0 profile with known derivative.
  EquivariantFunction f = EquivariantFunction::zero(grid, 0);
  f.curves[Mode2{1, 0}] = std::vector<Complex>(grid + 1, Complex(1.0, 0.0));
  EquivariantFunction g = EquivariantFunction::zero(grid, 0);
  std::vector<Complex> profile(grid + 1);
  for (int j = 0; j <= grid; ++j) {
    const double u = t[j];
    profile[j] = Complex(u * u * u - 1.5 * u * u + 0.5 * u, 0.0);
  }
  g.curves[Mode2{0, 0}] = profile;

  const auto result = mt_bracket(model, f, g);
  REQUIRE(result.curves.count(Mode2{1, 0}) == 1);
  const auto& curve = result.curves.at(Mode2{1, 0});
  const double v1 = model.eigenvector()[0];
  for (int j = 0; j <= grid; ++j) {
    const double u = t[j];
    const double derivative = 3 * u * u - 3 * u + 0.5;
    const Complex expected =
        std::pow(model.lambda(), u) * Complex(0.0, kTwoPi * v1) * derivative;
    CHECK(std::abs(curve[j] - expected) <= 1e-6);
  }
}

TEST_CASE("bracket preserves equivariance and is antisymmetric") {
  const auto model = cat_map();
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_equivariant_function(model, 8, 32, rng);
    const auto g = random_equivariant_function(model, 8, 32, rng);
    const auto fg = mt_bracket(model, f, g);
    CHECK(fg.weight == 0);
    CHECK(seam_mismatch(model, fg) <= 1e-8);
    CHECK(ef_distance(fg, ef_scale(Complex(-1.0, 0.0), mt_bracket(model, g, f))) <= 1e-10);
    CHECK(fg.is_real_valued(1e-10));
  }
}

TEST_CASE("bracket satisfies Leibniz and Jacobi at grid resolution") {
  const auto model = cat_map();
  std::mt19937_64 rng(17);
  const int coarse = 32;
  const int fine = 64;

  double residual_coarse = 0.0;
  double residual_fine = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const int grid = pass == 0 ? coarse : fine;
    std::mt19937_64 local(17);
    const auto f = random_equivariant_function(model, 6, grid, local, 0.12);
    const auto g = random_equivariant_function(model, 6, grid, local, 0.12);
    const auto h = random_equivariant_function(model, 6, grid, local, 0.12);

    const auto leibniz = ef_add(
        mt_bracket(model, f, ef_multiply(g, h)),
        ef_scale(Complex(-1.0, 0.0),
                 ef_add(ef_multiply(mt_bracket(model, f, g), h),
                        ef_multiply(g, mt_bracket(model, f, h)))));
    const double residual = leibniz.sup_estimate();
    if (pass == 0) {
      residual_coarse = residual;
    } else {
      residual_fine = residual;
    }

    const auto jacobi =
        ef_add(mt_bracket(model, f, mt_bracket(model, g, h)),
               ef_add(mt_bracket(model, g, mt_bracket(model, h, f)),
                      mt_bracket(model, h, mt_bracket(model, f, g))));
    if (grid == fine) CHECK(jacobi.sup_estimate() <= 1e-6);
  }
  CHECK(residual_fine <= 1e-6);
  // 4th-order differences: refining the grid improves the defect.
  if (residual_coarse > 1e-12) {
    CHECK(residual_fine <= residual_coarse);
  }
}

TEST_CASE("unit input solve realizes the affine seam fixed point") {
  const auto model = cat_map();
  const int grid = 64;
  const auto result = solve_mt_top_primitive(model, constant_one(grid));
  CHECK(result.report.ok());
  CHECK(result.residual <= 1e-11);

  const double expected = -(std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(result.report.seam_constant.real() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(result.report.seam_constant.imag()) <= 1e-14);

  CHECK(result.a.weight == -1);
  CHECK(result.b.weight == 0);
  CHECK(result.b.sup_estimate() <= 1e-12);
  CHECK(seam_mismatch(model, result.a) <= 1e-12);

  const auto zero = solve_mt_top_primitive(model, EquivariantFunction::zero(grid, 0));
  CHECK(zero.residual == 0.0);
  CHECK(zero.a.sup_estimate() == 0.0);
}

TEST_CASE("the seam constant tracks lambda as the affine formula") {
  // Different hyperbolic matrix, non-constant profile, quadrature oracle.
  const auto model = skew_map();
  const int grid = 64;
  const auto t = time_grid(grid);
  EquivariantFunction f = EquivariantFunction::zero(grid, 0);
  std::vector<Complex> profile(grid + 1);
  for (int j = 0; j <= grid; ++j) {
    const double u = t[j];
    profile[j] = Complex(1.0 + 0.4 * (u * u * u - 1.5 * u * u + 0.5 * u), 0.0);
  }
  f.curves[Mode2{0, 0}] = profile;

  const auto result = solve_mt_top_primitive(model, f);
  CHECK(result.report.ok());

  // Oracle: fine trapezoid quadrature of the known cubic.
  double integral = 0.0;
  const int fine = 200000;
  for (int j = 0; j < fine; ++j) {
    const double u0 = static_cast<double>(j) / fine;
    const double u1 = static_cast<double>(j + 1) / fine;
    auto value = [](double u) { return 1.0 + 0.4 * (u * u * u - 1.5 * u * u + 0.5 * u); };
    integral += 0.5 * (value(u0) + value(u1)) / fine;
  }
  const double expected = -integral / (model.lambda() - 1.0);
  CHECK(result.report.seam_constant.real() == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("random solves certify with tiny residuals") {
  const auto model = cat_map();
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_equivariant_function(model, 8, 64, rng);
    const auto result = solve_mt_top_primitive(model, f);
    CHECK(result.report.ok());
    CHECK(result.residual <= 1e-8);
    CHECK(seam_mismatch(model, result.a) <= 1e-8);
    CHECK(seam_mismatch(model, result.b) <= 1e-8);
    CHECK(result.report.input_seam_mismatch <= 1e-10);
  }
}

TEST_CASE("vanishing certificates") {
  const auto model = cat_map();

  H2CertificateParams smoke;
  smoke.truncation = 2;
  smoke.grid = 16;
  smoke.trials = 3;
  smoke.seed = 7;
  const auto small = h2_vanishing_certificate(model, smoke);
  CHECK(small.passed);

  H2CertificateParams full;
  full.truncation = 8;
  full.grid = 64;
  full.trials = 20;
  full.seed = 20240101;
  const auto cert = h2_vanishing_certificate(model, full);
  CHECK(cert.passed);
  CHECK(cert.max_residual <= 1e-8);
  CHECK(cert.max_seam_mismatch <= 1e-8);
  CHECK(cert.unit_input_constant.real() ==
        doctest::Approx(-(std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(EquivariantFunction::zero(7, 0), std::invalid_argument);
  CHECK_THROWS_AS(time_grid(3), std::invalid_argument);
  const auto model = cat_map();
  const auto f = constant_one(16);
  const auto g = constant_one(32);
  CHECK_THROWS_AS(mt_bracket(model, f, g), std::invalid_argument);
  CHECK_THROWS_AS(ef_multiply(f, g), std::invalid_argument);

  EquivariantFunction ragged = EquivariantFunction::zero(16, 0);
  ragged.curves[Mode2{1, 0}] = std::vector<Complex>(4, Complex(1.0, 0.0));
  CHECK_THROWS_AS(mt_bracket(model, ragged, constant_one(16)), std::invalid_argument);

  EquivariantFunction weighted = constant_one(16);
  weighted.weight = -1;
  CHECK_THROWS_AS(solve_mt_top_primitive(model, weighted), std::invalid_argument);
}

TEST_SUITE_END();
