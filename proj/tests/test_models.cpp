#include <doctest.h>

#include <random>

#include "folia/models.hpp"
#include "test_support.hpp"

using namespace folia;
using testsupport::coefficient_distance;

namespace {

PoissonModel symplectic_t2() {
  Eigen::MatrixXd p(2, 2);
  p << 0, 1, -1, 0;
  return PoissonModel(ConstantTorusModel(p));
}

Eigen::MatrixXd area_eta() {
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(3, 3);
  eta(0, 1) = 1;
  eta(1, 0) = -1;
  return eta;
}

PoissonModel fibration_t3() {
  Eigen::VectorXd theta(3);
  theta << 0, 0, 1;
  return PoissonModel(CosymplecticTorusModel(theta, area_eta()));
}

constexpr double kGolden = 0.6180339887498948482;

PoissonModel kronecker_t3() {
  Eigen::VectorXd theta(3);
  theta << -kGolden, 0, 1;
  return PoissonModel(CosymplecticTorusModel(theta, area_eta()));
}

MappingTorusModel cat_map() {
  Eigen::Matrix2i a;
  a << 2, 1, 1, 1;
  return MappingTorusModel(a);
}

/// Independent route: assemble sum_ij P_ij d_i f d_j g from first-order
/// derivatives and products.
TrigPolynomial bracket_oracle(const Eigen::MatrixXd& p, const TrigPolynomial& f,
                              const TrigPolynomial& g) {
  TrigPolynomial out = TrigPolynomial::zero(f.dim());
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = 0; j < p.cols(); ++j) {
      if (p(i, j) == 0.0) continue;
      out = out + Complex(p(i, j), 0.0) * (partial_derivative(f, i) * partial_derivative(g, j));
    }
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("models");

TEST_CASE("validation of the gallery families") {
  CHECK(is_valid(symplectic_t2()));
  CHECK(leaf_rank(symplectic_t2()) == 2);

  const auto cat = cat_map();
  CHECK(cat.validate().size() >= 4);
  for (const auto& check : cat.validate()) CHECK(check.passed);
  CHECK(cat.lambda() == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
  Eigen::Vector2d image = cat.gluing().cast<double>() * cat.eigenvector();
  CHECK((image - cat.lambda() * cat.eigenvector()).norm() <= 1e-12);

  CHECK(is_valid(fibration_t3()));
  CHECK(is_valid(kronecker_t3()));
}

TEST_CASE("validation failures are diagnostics") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 1, 1, 0;  // symmetric, not a bivector
  ConstantTorusModel model(bad);
  bool antisym_failed = false;
  for (const auto& check : model.validate()) {
    if (check.name == "bivector-antisymmetric") antisym_failed = !check.passed;
  }
  CHECK(antisym_failed);

  Eigen::Matrix2i shear;
  shear << 1, 1, 0, 1;  // trace 2, not hyperbolic
  MappingTorusModel parabolic(shear);
  bool hyperbolic_failed = false;
  for (const auto& check : parabolic.validate()) {
    if (check.name == "hyperbolic") hyperbolic_failed = !check.passed;
  }
  CHECK(hyperbolic_failed);

  Eigen::VectorXd theta(3);
  theta << 0, 0, 1;
  CosymplecticTorusModel degenerate(theta, Eigen::MatrixXd::Zero(3, 3));
  bool volume_failed = false;
  for (const auto& check : degenerate.validate()) {
    if (check.name == "volume-form") volume_failed = !check.passed;
  }
  CHECK(volume_failed);
}

TEST_CASE("leafwise frames are deterministic and axis aligned") {
  const auto frame2 = leafwise_frame(symplectic_t2());
  REQUIRE(frame2.size() == 2);
  CHECK((frame2[0] - Eigen::Vector2d(1, 0)).norm() <= 1e-14);
  CHECK((frame2[1] - Eigen::Vector2d(0, 1)).norm() <= 1e-14);

  const auto kron = leafwise_frame(kronecker_t3());
  REQUIRE(kron.size() == 2);
  CHECK((kron[0] - Eigen::Vector3d(1, 0, kGolden)).norm() <= 1e-14);
  CHECK((kron[1] - Eigen::Vector3d(0, 1, 0)).norm() <= 1e-14);

  const auto fib = leafwise_frame(fibration_t3());
  REQUIRE(fib.size() == 2);
  CHECK((fib[0] - Eigen::Vector3d(1, 0, 0)).norm() <= 1e-14);
  CHECK((fib[1] - Eigen::Vector3d(0, 1, 0)).norm() <= 1e-14);
}

TEST_CASE("cosymplectic bivector inverts eta on the kernel") {
  const auto model = kronecker_t3();
  const auto* cs = model.get_if<CosymplecticTorusModel>();
  REQUIRE(cs);
  CHECK(cs->volume_pairing() == doctest::Approx(1.0));
  CHECK((cs->theta().transpose() * cs->bivector()).norm() <= 1e-13);

  Eigen::MatrixXd expected(3, 3);
  expected << 0, 1, 0, -1, 0, -kGolden, 0, kGolden, 0;
  CHECK((cs->bivector() - expected).norm() <= 1e-13);
}

TEST_CASE("bracket matches the symbolic differentiation oracle") {
  const auto model = symplectic_t2();
  const Eigen::MatrixXd p = *bivector_matrix(model);

  const Mode a{2, -1};
  const Mode b{1, 3};
  const auto lhs = bracket(model, TrigPolynomial::harmonic(a), TrigPolynomial::harmonic(b));
  const double pairing = a[0] * b[1] - a[1] * b[0];
  CHECK(std::abs(lhs.coefficient(mode_add(a, b)) -
                 Complex(-kTwoPi * kTwoPi * pairing, 0.0)) <= 1e-10);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_real_trig_polynomial(2, 4, rng, 6);
    const auto g = random_real_trig_polynomial(2, 4, rng, 6);
    CHECK(coefficient_distance(bracket(model, f, g), bracket_oracle(p, f, g)) <= 1e-10);
  }
}

TEST_CASE("constants are Casimirs and the fibration has a z Casimir") {
  const auto model = symplectic_t2();
  std::mt19937_64 rng(37);
  const auto f = random_real_trig_polynomial(2, 4, rng);
  CHECK(bracket(model, f, TrigPolynomial::constant(2, Complex(1.0, 0.0))).is_zero());

  const auto fib = fibration_t3();
  const auto z_mode = TrigPolynomial::harmonic({0, 0, 1});
  for (int trial = 0; trial < 4; ++trial) {
    const auto g = random_real_trig_polynomial(3, 3, rng);
    CHECK(bracket(fib, z_mode, g).is_zero());
  }

  // On the Kronecker model leaves are dense, so z modes are not Casimir.
  const auto kron = kronecker_t3();
  const auto probe = TrigPolynomial::harmonic({0, 1, 0});
  CHECK(!bracket(kron, z_mode, probe).is_zero());
}

TEST_CASE("bracket properties") {
  std::mt19937_64 rng(41);
  for (const auto& model : {symplectic_t2(), fibration_t3(), kronecker_t3()}) {
    const int dim = ambient_dim(model);
    const auto f = random_real_trig_polynomial(dim, 3, rng, 5, false, 0.5);
    const auto g = random_real_trig_polynomial(dim, 3, rng, 5, false, 0.5);
    const auto h = random_real_trig_polynomial(dim, 3, rng, 5, false, 0.5);

    CHECK(coefficient_distance(bracket(model, f, g), -bracket(model, g, f)) <= 1e-12);

    const auto jacobi = bracket(model, f, bracket(model, g, h)) +
                        bracket(model, g, bracket(model, h, f)) +
                        bracket(model, h, bracket(model, f, g));
    CHECK(jacobi.sup_norm_estimate() <= 1e-10);

    const auto leibniz = bracket(model, f, g * h) - bracket(model, f, g) * h -
                         g * bracket(model, f, h);
    CHECK(leibniz.sup_norm_estimate() <= 1e-10);

    CHECK(coefficient_distance(hamiltonian_field_apply(model, f, g),
                               -hamiltonian_field_apply(model, g, f)) <= 1e-12);
  }
}

TEST_CASE("products add dimensions and ranks") {
  const auto product = make_product(kronecker_t3(), symplectic_t2());
  CHECK(ambient_dim(product) == 5);
  CHECK(leaf_rank(product) == 4);
  CHECK(is_valid(product));

  auto flat = flatten_to_constant(product);
  REQUIRE(flat.has_value());
  CHECK(flat->dim() == 5);
  CHECK(flat->rank() == 4);

  const auto with_cat = make_product(PoissonModel(cat_map()), symplectic_t2());
  CHECK(ambient_dim(with_cat) == 5);
  CHECK(!flatten_to_constant(with_cat).has_value());
}

TEST_CASE("characteristic slopes") {
  auto kron_slope = model_slope(kronecker_t3());
  REQUIRE(kron_slope.has_value());
  CHECK(*kron_slope == doctest::Approx(kGolden).epsilon(1e-13));

  auto cat_slope = model_slope(PoissonModel(cat_map()));
  REQUIRE(cat_slope.has_value());
  CHECK(*cat_slope == doctest::Approx(kGolden).epsilon(1e-10));

  CHECK(!model_slope(symplectic_t2()).has_value());
}

TEST_CASE("bracket rejects mapping-torus and mismatched input") {
  const PoissonModel cat(cat_map());
  const auto f = TrigPolynomial::harmonic({1, 0, 0});
  CHECK_THROWS_AS(bracket(cat, f, f), std::invalid_argument);

  const auto model = symplectic_t2();
  CHECK_THROWS_AS(bracket(model, f, f), std::invalid_argument);
}

TEST_SUITE_END();
