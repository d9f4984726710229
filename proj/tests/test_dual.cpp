#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "candual/dual.hpp"
#include "candual/oracle.hpp"
#include "test_support.hpp"

using namespace candual;
using namespace candual::testsupport;

namespace {

DualPoint zeta1(double tau, double sigma) {
  DualPoint z;
  z.tau = Vector::Constant(1, tau);
  z.sigma = Vector::Constant(1, sigma);
  return z;
}

// Draws a dual point with tau log-uniform in [0.1, 10] and sigma uniform in
// [-5, 5], rejecting draws too close to the singular set for stable finite
// differences.
DualPoint sample_interior(const PrimalProblem& prob, std::mt19937_64& rng) {
  for (;;) {
    DualPoint z;
    z.tau.resize(prob.p());
    z.sigma.resize(prob.r());
    for (int i = 0; i < prob.p(); ++i) z.tau[i] = std::pow(10.0, -1.0 + 2.0 * uniform01(rng));
    for (int j = 0; j < prob.r(); ++j) z.sigma[j] = -5.0 + 10.0 * uniform01(rng);
    GFactor factor(assemble_G(prob, z));
    if (factor.min_abs_eigenvalue() > 5e-2 * factor.scale()) return z;
  }
}

// Step for second differences of Pi^d: capped by the distance to the
// singular set, where higher derivatives blow up.
double hess_step(const PrimalProblem& prob, const DualPoint& zeta) {
  const GFactor factor(assemble_G(prob, zeta));
  const Vector z = zeta.stacked();
  return 1e-4 * std::min(1.0 + z.norm(), factor.min_abs_eigenvalue());
}

}  // namespace

TEST_CASE("assemble_G reference values") {
  const PrimalProblem ex1 = example1();
  const Matrix G = assemble_G(ex1, zeta1(2.01147, -0.223104));
  CHECK(std::abs(G(0, 0) - 1.40562) <= 1e-4);
  CHECK(std::abs(G(1, 1) - 2.35363) <= 1e-4);
  CHECK(G(0, 1) == 0.0);

  const Matrix G0 = assemble_G(ex1, zeta1(1.0, 0.0));
  CHECK(G0(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(G0(1, 1) == doctest::Approx(1.0));
  CHECK(classify_domain(ex1, zeta1(1.0, 0.0)) == DomainClass::Singular);

  // Dominant positive-definite A term forces G > 0.
  CHECK(classify_domain(ex1, zeta1(1e6, 0.0)) == DomainClass::SaPlus);
}

TEST_CASE("total_complementary at critical pairs and degenerate points") {
  const PrimalProblem ex1 = example1();
  const double xi1 = total_complementary(ex1, vec2(1.42283, 0.424878), zeta1(2.01147, -0.223104));
  CHECK(std::abs(xi1 - (-2.8428)) <= 1e-3);

  // x = 0 and V*(zeta) = 0 (tau = 1, sigma = 0 with alpha = 1) gives 0.
  CHECK(total_complementary(ex1, vec2(0.0, 0.0), zeta1(1.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-15));

  const PrimalProblem ex2 = example2();
  const double xi2 = total_complementary(ex2, vec2(0.315066, 3.3177), zeta1(0.142222, 3.60283));
  CHECK(std::abs(xi2 - (-17.1934)) <= 1e-3);
}

TEST_CASE("eval_dual reference values") {
  CHECK(std::abs(eval_dual(example1(), zeta1(2.01147, -0.223104)) - (-2.8428)) <= 1e-3);
  CHECK(std::abs(eval_dual(example4(), zeta1(0.0612941, 4.67004)) - (-22.6111)) <= 1e-3);
  CHECK(std::abs(eval_dual(example3(), zeta1(54.3685, -0.492123)) - 54.9641) <= 1e-3);
  CHECK_THROWS_AS(eval_dual(example1(), zeta1(1.0, 0.0)), SingularGError);
  CHECK_THROWS_AS(eval_dual(example1(), zeta1(-1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("grad_dual vanishes at published critical points") {
  CHECK(grad_dual(example1(), zeta1(2.01147, -0.223104)).cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(grad_dual(example2(), zeta1(0.142222, 3.60283)).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("grad_dual and hess_dual agree with central differences") {
  std::mt19937_64 rng(21);
  for (const PrimalProblem& prob : {example1(), example2(), example3(), example4()}) {
    const auto fn = [&](const Vector& z) {
      return eval_dual(prob, DualPoint::from_stacked(prob.p(), z));
    };
    for (int t = 0; t < 20; ++t) {
      const DualPoint zeta = sample_interior(prob, rng);
      const Vector z = zeta.stacked();
      const Vector g = grad_dual(prob, zeta);
      const Vector fd = finite_diff_gradient(fn, z, 1e-6 * (1.0 + z.norm()));
      CHECK((g - fd).cwiseAbs().maxCoeff() <= 1e-6 * (1.0 + g.cwiseAbs().maxCoeff()));

      const Matrix H = hess_dual(prob, zeta);
      CHECK((H - Matrix(H.transpose())).cwiseAbs().maxCoeff() == 0.0);
      const Matrix fdH = finite_diff_hessian(fn, z, hess_step(prob, zeta));
      CHECK((H - fdH).cwiseAbs().maxCoeff() <= 1e-4 * (1.0 + H.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("hess_dual definiteness at published points") {
  // Strictly concave at the Sa+ critical point of example 1.
  Eigen::SelfAdjointEigenSolver<Matrix> es1(hess_dual(example1(), zeta1(2.01147, -0.223104)));
  CHECK(es1.eigenvalues().maxCoeff() < 0.0);

  // Positive semi-definite at the Sa- local minimum of example 4.
  Eigen::SelfAdjointEigenSolver<Matrix> es4(hess_dual(example4(), zeta1(0.149286, 3.90584)));
  CHECK(es4.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("classify_domain at published points") {
  CHECK(classify_domain(example1(), zeta1(2.01147, -0.223104)) == DomainClass::SaPlus);
  CHECK(classify_domain(example2(), zeta1(0.151452, -1.68381)) == DomainClass::SaMinus);
  // Example 4 has a stationary point with indefinite G near (0.319, 4.405).
  CHECK(classify_domain(example4(), zeta1(0.3191357, 4.4046946)) == DomainClass::Indefinite);
}

TEST_CASE("delta_bound reference values and the eigenvalue guarantee") {
  const PrimalProblem ex1 = example1();
  const SpectralBounds bounds1 = spectral_bounds(ex1);
  CHECK(std::abs(delta_bound(ex1, bounds1, zeta1(2.01147, -0.223104)) - 0.8479) <= 1e-3);

  const PrimalProblem ex4 = example4();
  const SpectralBounds bounds4 = spectral_bounds(ex4);
  CHECK(std::abs(delta_bound(ex4, bounds4, zeta1(0.0612941, 4.67004)) - 0.0862) <= 1e-3);

  // lambda_min(G) >= Delta over random instances and dual points.
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(3.0 * uniform01(rng));
    const int p = static_cast<int>(3.0 * uniform01(rng));
    const int r = (p == 0) ? 1 + static_cast<int>(2.0 * uniform01(rng))
                           : static_cast<int>(3.0 * uniform01(rng));
    const PrimalProblem prob = random_problem(rng, std::min(n, 3), p, r);
    const SpectralBounds bounds = spectral_bounds(prob);
    DualPoint z;
    z.tau.resize(prob.p());
    z.sigma.resize(prob.r());
    for (int i = 0; i < prob.p(); ++i) z.tau[i] = std::pow(10.0, -2.0 + 4.0 * uniform01(rng));
    for (int j = 0; j < prob.r(); ++j) z.sigma[j] = -5.0 + 10.0 * uniform01(rng);
    const double lmin = GFactor(assemble_G(prob, z)).lambda_min();
    CHECK(lmin >= delta_bound(prob, bounds, z) - 1e-10);
  }
}

TEST_CASE("spectral_bounds invariants") {
  for (const PrimalProblem& prob : {example1(), example2(), example3(), example4()}) {
    const SpectralBounds bounds = spectral_bounds(prob);
    for (int j = 0; j < prob.r(); ++j) {
      CHECK(bounds.lambda_min_B[j] > 0.0);
      CHECK(bounds.lambda_min_B[j] <= bounds.lambda_max_B[j]);
    }
    CHECK(bounds.lambda_max_C > 0.0);
  }
}

TEST_CASE("GFactor solves match dense solves and flag singularity") {
  std::mt19937_64 rng(23);
  const PrimalProblem prob = example3();
  for (int t = 0; t < 10; ++t) {
    const DualPoint zeta = sample_interior(prob, rng);
    const Matrix G = assemble_G(prob, zeta);
    GFactor factor(G);
    const Vector u = factor.solve(prob.f());
    CHECK((G * u - prob.f()).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + prob.f().norm()));
  }
  GFactor singular(assemble_G(example1(), zeta1(1.0, 0.0)));
  CHECK(singular.near_singular(1e-10));
}
