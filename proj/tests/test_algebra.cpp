#include "contilearn/algebra.hpp"
#include "contilearn/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <vector>

using namespace contilearn;

namespace {

Eigen::VectorXd basis(Index n, Index i) { return Eigen::VectorXd::Unit(n, i); }

Eigen::VectorXd monomial(const Eigen::VectorXd& a, int p, const ReferenceAlgebra& alg) {
  Eigen::VectorXd acc = basis(alg.constants.dim(), alg.identity);
  for (int i = 0; i < p; ++i) acc = multiply(acc, a, alg.constants);
  return acc;
}

// Associativity defect computed from element products rather than constants.
double product_defect(const ReferenceAlgebra& alg) {
  const Index n = alg.constants.dim();
  double worst = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index g = 0; g < n; ++g) {
        const auto& c = alg.constants;
        const Eigen::VectorXd left = multiply(multiply(basis(n, a), basis(n, b), c), basis(n, g), c);
        const Eigen::VectorXd right = multiply(basis(n, a), multiply(basis(n, b), basis(n, g), c), c);
        worst = std::max(worst, (left - right).cwiseAbs().maxCoeff());
      }
  return worst;
}

}  // namespace

TEST_CASE("reference algebras are associative") {
  CHECK(associativity_residual(complex_algebra().constants) == 0.0);
  CHECK(associativity_residual(quaternion_algebra().constants) == 0.0);
  CHECK(product_defect(quaternion_algebra()) == 0.0);
  CHECK(reference_algebra("complex").name == "complex");
  CHECK_THROWS_AS(reference_algebra("octonion"), std::invalid_argument);
}

TEST_CASE("perturbed complex constants") {
  // i*i = -1.1 is still the complex numbers with a rescaled i: associative.
  ReferenceAlgebra rescaled = complex_algebra();
  rescaled.constants(1, 1, 0) = -1.1;
  CHECK(associativity_residual(rescaled.constants) == 0.0);

  // 1*i = 1.1 i but i*1 = i. Worst quadruple: (1 1) i = 1.1 i, 1 (1 i) = 1.21 i.
  ReferenceAlgebra broken = complex_algebra();
  broken.constants(0, 1, 1) = 1.1;
  CHECK(associativity_residual(broken.constants) >= 0.05);
  CHECK(associativity_residual(broken.constants) == doctest::Approx(0.11));
}

TEST_CASE("multiplication tables") {
  const auto cx = complex_algebra();
  CHECK(multiply(Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1), cx.constants) == Eigen::Vector2d(-1, 0));
  const auto q = quaternion_algebra();
  const Eigen::Vector4d i(0, 1, 0, 0), j(0, 0, 1, 0), k(0, 0, 0, 1);
  CHECK(multiply(i, j, q.constants) == k);
  CHECK(multiply(j, k, q.constants) == i);
  CHECK(multiply(k, i, q.constants) == j);
  CHECK(multiply(j, i, q.constants) == -k);
  CHECK(multiply(k, k, q.constants) == Eigen::Vector4d(-1, 0, 0, 0));
  CHECK_THROWS_AS(multiply(i, Eigen::Vector2d(1, 0), q.constants), DimensionError);

  std::mt19937_64 rng(53);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd a = testutil::random_vector(rng, 4);
    const Eigen::VectorXd b = testutil::random_vector(rng, 4);
    const double lam = testutil::random_vector(rng, 1)[0];
    CHECK((multiply(basis(4, 0), a, q.constants) - a).norm() == 0.0);
    CHECK((multiply(a, basis(4, 0), q.constants) - a).norm() == 0.0);
    CHECK((multiply(lam * a, b, q.constants) - lam * multiply(a, b, q.constants)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("power series evaluation") {
  const auto cx = complex_algebra();
  const std::vector<double> square{0, 0, 1};
  CHECK(power_series(square, Eigen::Vector2d(0, 1), cx.constants, cx.identity) == Eigen::Vector2d(-1, 0));
  const std::vector<double> one{1};
  CHECK(power_series(one, Eigen::Vector2d(3, 4), cx.constants, cx.identity) == Eigen::Vector2d(1, 0));
  const auto q = quaternion_algebra();
  const std::vector<double> cube{0, 0, 0, 1};
  CHECK(power_series(cube, Eigen::Vector4d(0, 1, 0, 0), q.constants, q.identity) == Eigen::Vector4d(0, -1, 0, 0));
  CHECK_THROWS_AS(power_series(one, Eigen::Vector2d(3, 4), cx.constants, 5), std::invalid_argument);

  std::mt19937_64 rng(59);
  for (const auto& alg : {cx, q}) {
    const Eigen::VectorXd a = testutil::random_vector(rng, alg.constants.dim(), 0.8);
    for (int p = 0; p <= 5; ++p) {
      std::vector<double> coeffs(static_cast<std::size_t>(p + 1), 0.0);
      coeffs.back() = 1.0;
      const Eigen::VectorXd expected = monomial(a, p, alg);
      CHECK((power_series(coeffs, a, alg.constants, alg.identity) - expected).cwiseAbs().maxCoeff() <= 1e-10);
    }
    // exp(a) truncated: Horner must agree with the explicit sum of monomials.
    std::vector<double> coeffs{1, 1, 0.5, 1.0 / 6, 1.0 / 24, 1.0 / 120};
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(alg.constants.dim());
    for (std::size_t p = 0; p < coeffs.size(); ++p) sum += coeffs[p] * monomial(a, static_cast<int>(p), alg);
    CHECK((power_series(coeffs, a, alg.constants, alg.identity) - sum).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("fit recovers one-hot structure constants") {
  const Index cells = 4;
  Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(40, cells);
  for (Index t = 0; t < 40; ++t) samples(t, t % cells) = 1.0;
  const AlgebraFitReport fit = fit_structure_constants(samples);
  double worst = 0.0;
  for (Index a = 0; a < cells; ++a)
    for (Index b = 0; b < cells; ++b)
      for (Index g = 0; g < cells; ++g) {
        const double expected = (a == b && a == g) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(fit.constants(a, b, g) - expected));
      }
  CHECK(worst <= 1e-8);
  CHECK(fit.closure_residual <= 1e-10);
  CHECK_FALSE(fit.ill_conditioned);
  CHECK(fit.associativity_residual <= 1e-8);
}

TEST_CASE("constant feature is its own identity") {
  const AlgebraFitReport fit = fit_structure_constants(Eigen::MatrixXd::Ones(6, 1));
  CHECK(fit.constants(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.closure_residual <= 1e-10);
}

TEST_CASE("(1, x) does not close under multiplication") {
  Eigen::MatrixXd samples(5, 2);
  samples << 1, -2, 1, -1, 1, 0, 1, 1, 1, 2;
  const AlgebraFitReport fit = fit_structure_constants(samples);
  // x^2 projects onto the constant 2 over these points; defect (2,-1,-2,-1,2).
  CHECK(fit.constants(1, 1, 0) == doctest::Approx(2.0));
  CHECK(std::abs(fit.constants(1, 1, 1)) < 1e-9);
  CHECK(fit.closure_residual == doctest::Approx(std::sqrt(14.0 / 49.0)));
  CHECK(fit.closure_residual > 0.5);
}

TEST_CASE("rank deficient samples are flagged but still fitted") {
  Eigen::MatrixXd samples(6, 3);
  for (Index t = 0; t < 6; ++t) samples.row(t) << 1, t, 2.0 * t;
  const AlgebraFitReport fit = fit_structure_constants(samples);
  CHECK(fit.ill_conditioned);
  CHECK(std::isfinite(fit.closure_residual));
  CHECK_THROWS_AS(fit_structure_constants(Eigen::MatrixXd::Ones(1, 3)), std::invalid_argument);
}
