#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "fixtures.hpp"
#include "lieflow/spectral.hpp"

using namespace lieflow;

namespace {

// The fixture corpus used for the projection and grading properties.
std::vector<std::pair<LieAlgebraPtr, Derivation>> corpus() {
  auto heis = fixtures::heisenberg();
  auto fili = fixtures::filiform4();
  auto ab2 = fixtures::abelian(2);
  Eigen::MatrixXd rotation(2, 2), jordan_stable(2, 2);
  rotation << 0, 1, -1, 0;
  jordan_stable << -1, 1, 0, -1;
  std::vector<std::pair<LieAlgebraPtr, Derivation>> out;
  out.emplace_back(heis, fixtures::heis_diag(heis, 1.0, -2.0));
  out.emplace_back(heis, fixtures::heis_diag(heis, -1.0, -2.0));
  out.emplace_back(fili, fixtures::fili_diag(fili, 1.0, -3.0));
  out.emplace_back(ab2, fixtures::make_derivation(ab2, rotation));
  out.emplace_back(ab2, fixtures::make_derivation(ab2, jordan_stable));
  auto sl2 = fixtures::sl2();
  out.emplace_back(sl2, fixtures::sl2_ad_e(sl2));
  // Complex pair at -1 +- 2i next to a Jordan block at 3.
  auto ab4 = fixtures::abelian(4);
  Eigen::MatrixXd mixed(4, 4);
  mixed << -1, 2, 0, 0, -2, -1, 0, 0, 0, 0, 3, 1, 0, 0, 0, 3;
  out.emplace_back(ab4, fixtures::make_derivation(ab4, mixed));
  // Non-diagonal derivation of the Heisenberg algebra: a complex pair on the
  // generator plane and its trace on the center.
  auto heis2 = fixtures::heisenberg();
  Eigen::MatrixXd spiral(3, 3);
  spiral << -1, 2, 0, -2, -1, 0, 0, 0, -2;
  out.emplace_back(heis2, fixtures::make_derivation(heis2, spiral));
  return out;
}

}  // namespace

TEST_CASE("validate_leibniz accepts a derivation of the Heisenberg algebra") {
  auto alg = fixtures::heisenberg();
  auto d = fixtures::heis_diag(alg, 1.0, -2.0);
  CHECK(d.leibniz_residual() == 0.0);
}

TEST_CASE("any matrix is a derivation of an abelian algebra") {
  auto alg = fixtures::abelian(3);
  std::mt19937_64 rng(5);
  Eigen::MatrixXd m(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = fixtures::normal(rng);
  CHECK_NOTHROW(validate_leibniz(m, alg));
}

TEST_CASE("validate_leibniz rejects diag(1,-2,0) on the Heisenberg algebra") {
  auto alg = fixtures::heisenberg();
  Eigen::Vector3d diag(1.0, -2.0, 0.0);
  Eigen::MatrixXd d = diag.asDiagonal();
  CHECK_THROWS_AS(validate_leibniz(d, alg), LeibnizViolation);
  try {
    validate_leibniz(d, alg);
  } catch (const LeibnizViolation& e) {
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(e.residual == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("spectral decomposition of diag(1,-2,-1) on the Heisenberg algebra") {
  auto alg = fixtures::heisenberg();
  auto sd = spectral_decompose(fixtures::heis_diag(alg, 1.0, -2.0));
  CHECK(sd.dim_plus() == 1);
  CHECK(sd.dim_zero() == 0);
  CHECK(sd.dim_minus() == 2);
  REQUIRE(sd.layers.size() == 3);
  CHECK(sd.layers[0].real_part == doctest::Approx(1.0));
  CHECK(sd.layers[1].real_part == doctest::Approx(-1.0));
  CHECK(sd.layers[2].real_part == doctest::Approx(-2.0));
  // The unstable span is the first coordinate axis.
  CHECK(std::abs(sd.plus_basis(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(is_hyperbolic(sd));
}

TEST_CASE("rotation on the abelian plane is purely central") {
  auto alg = fixtures::abelian(2);
  Eigen::MatrixXd rotation(2, 2);
  rotation << 0, 1, -1, 0;
  auto sd = spectral_decompose(fixtures::make_derivation(alg, rotation));
  CHECK(sd.dim_plus() == 0);
  CHECK(sd.dim_zero() == 2);
  CHECK(sd.dim_minus() == 0);
  REQUIRE(sd.layers.size() == 1);
  CHECK(sd.layers[0].real_part == doctest::Approx(0.0));
  CHECK_FALSE(is_hyperbolic(sd));
  // Eigenvalues are the conjugate pair +-i.
  REQUIRE(sd.eigenvalues.size() == 2);
  CHECK(std::abs(sd.eigenvalues[0].imag()) == doctest::Approx(1.0));
}

TEST_CASE("the zero derivation is purely central with identity projection") {
  auto alg = fixtures::heisenberg();
  auto sd = spectral_decompose(fixtures::make_derivation(alg, Eigen::MatrixXd::Zero(3, 3)));
  CHECK(sd.dim_zero() == 3);
  CHECK((sd.proj_zero - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  CHECK_FALSE(is_hyperbolic(sd));
}

TEST_CASE("projections resolve the identity and respect the flow") {
  std::mt19937_64 rng(7);
  for (const auto& [alg, d] : corpus()) {
    auto sd = spectral_decompose(d);
    const int n = sd.dim();
    Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);

    // Exact resolution by construction.
    CHECK((sd.proj_plus + sd.proj_zero + sd.proj_minus - identity).norm() == 0.0);

    const Eigen::MatrixXd* projections[3] = {&sd.proj_plus, &sd.proj_zero, &sd.proj_minus};
    for (int a = 0; a < 3; ++a) {
      const Eigen::MatrixXd& pa = *projections[a];
      CHECK((pa * pa - pa).norm() <= 1e-8);
      CHECK((d.matrix() * pa - pa * d.matrix()).norm() <= 1e-8);
      for (int b = 0; b < 3; ++b)
        if (a != b) CHECK((pa * *projections[b]).norm() <= 1e-8);
    }

    // exp(tD) commutes with every projection.
    for (double t : {-5.0, -1.0, 0.5, 5.0}) {
      Eigen::MatrixXd flow = (t * d.matrix()).exp();
      for (const auto* p : projections)
        CHECK((flow * *p - *p * flow).norm() <= 1e-8 * flow.norm());
    }

    // Bases span invariant subspaces.
    for (const Eigen::MatrixXd* basis : {&sd.plus_basis, &sd.zero_basis, &sd.minus_basis}) {
      if (basis->cols() == 0) continue;
      Eigen::MatrixXd db = d.matrix() * *basis;
      CHECK(((identity - *basis * basis->transpose()) * db).colwise().norm().maxCoeff() <=
            1e-8);
    }
    for (const auto& layer : sd.layers) {
      Eigen::MatrixXd db = d.matrix() * layer.basis;
      CHECK(((identity - layer.basis * layer.basis.transpose()) * db)
                .colwise()
                .norm()
                .maxCoeff() <= 1e-8);
    }

    // v = P+ v + P0 v + P- v exactly.
    AlgebraVector v = fixtures::random_vector(rng, n);
    CHECK((sd.proj_plus * v + sd.proj_zero * v + sd.proj_minus * v - v).norm() == 0.0);
  }
}

TEST_CASE("layers straddling the classification band raise ClusterAmbiguity") {
  auto alg = fixtures::abelian(2);
  Eigen::Vector2d diag(5e-9, 2e-8);  // gap 1.5e-8 <= 2 tol, classes differ
  Eigen::MatrixXd d = diag.asDiagonal();
  CHECK_THROWS_AS(spectral_decompose(fixtures::make_derivation(alg, d), 1e-8),
                  ClusterAmbiguity);
  // Clearly separated values classify fine.
  Eigen::Vector2d ok(1e-9, 5e-8);
  Eigen::MatrixXd d2 = ok.asDiagonal();
  auto sd = spectral_decompose(fixtures::make_derivation(alg, d2), 1e-8);
  CHECK(sd.dim_zero() == 1);
  CHECK(sd.dim_plus() == 1);
}

TEST_CASE("grading check on the hyperbolic Heisenberg system") {
  auto alg = fixtures::heisenberg();
  auto sd = spectral_decompose(fixtures::heis_diag(alg, 1.0, -2.0));
  auto report = grading_check(sd, *alg);
  CHECK(report.pass);
  CHECK(report.max_residual <= 1e-10);
  // [g_1, g_-2] lands in g_-1, and [g_1, g_1] must vanish since 2 is not a
  // layer real part.
  bool saw_product = false, saw_vanishing = false;
  for (const auto& p : report.pairs) {
    if (p.lambda_a == doctest::Approx(1.0) && p.lambda_b == doctest::Approx(-2.0)) {
      CHECK(p.target_exists);
      CHECK(p.residual <= 1e-12);
      saw_product = true;
    }
    if (p.lambda_a == doctest::Approx(1.0) && p.lambda_b == doctest::Approx(1.0)) {
      CHECK_FALSE(p.target_exists);
      CHECK(p.residual <= 1e-12);
      saw_vanishing = true;
    }
  }
  CHECK(saw_product);
  CHECK(saw_vanishing);
}

TEST_CASE("grading check passes on the whole corpus") {
  for (const auto& [alg, d] : corpus()) {
    auto sd = spectral_decompose(d);
    CHECK(grading_check(sd, *alg).pass);
  }
}

TEST_CASE("hyperbolicity forces nilpotency on the corpus") {
  for (const auto& [alg, d] : corpus()) {
    auto sd = spectral_decompose(d);
    if (is_hyperbolic(sd)) CHECK(is_nilpotent(*alg));
  }
}

TEST_CASE("complex pairs and Jordan coupling land in the right layers") {
  auto ab4 = fixtures::abelian(4);
  Eigen::MatrixXd mixed(4, 4);
  mixed << -1, 2, 0, 0, -2, -1, 0, 0, 0, 0, 3, 1, 0, 0, 0, 3;
  auto sd = spectral_decompose(fixtures::make_derivation(ab4, mixed));
  CHECK(sd.dim_plus() == 2);
  CHECK(sd.dim_zero() == 0);
  CHECK(sd.dim_minus() == 2);
  REQUIRE(sd.layers.size() == 2);
  CHECK(sd.layers[0].real_part == doctest::Approx(3.0));
  CHECK(sd.layers[1].real_part == doctest::Approx(-1.0));
  // The minus layer carries the conjugate pair -1 +- 2i.
  REQUIRE(sd.layers[1].eigenvalues.size() == 2);
  CHECK(std::abs(sd.layers[1].eigenvalues[0].imag()) == doctest::Approx(2.0));
}

TEST_CASE("is_semisimple_on distinguishes rotations from Jordan blocks") {
  auto alg = fixtures::abelian(2);
  Eigen::MatrixXd rotation(2, 2), jordan(2, 2);
  rotation << 0, 1, -1, 0;
  jordan << 0, 1, 0, 0;
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(2, 2);
  CHECK(is_semisimple_on(fixtures::make_derivation(alg, rotation), full));
  CHECK_FALSE(is_semisimple_on(fixtures::make_derivation(alg, jordan), full));
}

TEST_CASE("a diagonal matrix is semisimple on any coordinate subspace") {
  auto alg = fixtures::abelian(3);
  Eigen::Vector3d diag(2.0, 2.0, -1.0);
  Eigen::MatrixXd d = diag.asDiagonal();
  Eigen::MatrixXd sub(3, 2);
  sub << 1, 0, 0, 1, 0, 0;
  CHECK(is_semisimple_on(fixtures::make_derivation(alg, d), sub));
}

TEST_CASE("is_semisimple_on rejects non-invariant subspaces") {
  auto alg = fixtures::heisenberg();
  auto d = fixtures::heis_diag(alg, 1.0, -2.0);
  Eigen::MatrixXd sub(3, 1);
  sub << std::sqrt(0.5), std::sqrt(0.5), 0.0;
  CHECK_THROWS_AS(is_semisimple_on(d, sub), InvariantSubspaceViolation);
}
