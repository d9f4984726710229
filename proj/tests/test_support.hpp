#ifndef CANDUAL_TEST_SUPPORT_HPP
#define CANDUAL_TEST_SUPPORT_HPP

#include <random>
#include <string>

#include "candual/problem.hpp"

namespace candual::testsupport {

inline Matrix diag2(double a, double b) {
  Matrix M = Matrix::Zero(2, 2);
  M(0, 0) = a;
  M(1, 1) = b;
  return M;
}

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// A_1 positive definite.
inline PrimalProblem example1() {
  return PrimalProblem({diag2(1.5, 2.0)}, {1.0}, {diag2(0.5, 3.0)}, {1.0},
                       diag2(1.5, 1.0), vec2(2.0, 1.0));
}

// A_1 positive semi-definite.
inline PrimalProblem example2() {
  return PrimalProblem({diag2(1.0, 0.0)}, {2.0}, {diag2(2.0, 1.0)}, {2.0},
                       diag2(1.0, 3.0), vec2(2.0, 2.0));
}

// A_1 negative definite.
inline PrimalProblem example3() {
  return PrimalProblem({diag2(-1.0, -1.5)}, {-4.0}, {diag2(2.0, 1.0)}, {0.5},
                       diag2(2.0, 3.0), vec2(5.0, 2.0));
}

// A_1 indefinite; the instance exhibiting all three triality cases.
inline PrimalProblem example4() {
  return PrimalProblem({diag2(-3.0, 1.0)}, {1.0}, {diag2(1.0, 1.0)}, {2.0},
                       diag2(4.0, 4.4), vec2(1.0, 1.0));
}

inline std::string fixture_path(const std::string& name) {
  return std::string(CANDUAL_DATA_DIR) + "/" + name;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Matrix random_symmetric(std::mt19937_64& rng, int n, double scale) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = scale * (2.0 * uniform01(rng) - 1.0);
  return Matrix(0.5 * (M + Matrix(M.transpose())));
}

inline Matrix random_spd(std::mt19937_64& rng, int n) {
  Matrix R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = 2.0 * uniform01(rng) - 1.0;
  return Matrix(R.transpose() * R + 0.3 * Matrix::Identity(n, n));
}

inline PrimalProblem random_problem(std::mt19937_64& rng, int n, int p, int r) {
  std::vector<Matrix> A, B;
  std::vector<double> alpha, beta;
  for (int i = 0; i < p; ++i) {
    A.push_back(random_symmetric(rng, n, 2.0));
    alpha.push_back(4.0 * uniform01(rng) - 2.0);
  }
  for (int j = 0; j < r; ++j) {
    B.push_back(random_spd(rng, n));
    beta.push_back(4.0 * uniform01(rng) - 2.0);
  }
  Matrix C = random_spd(rng, n);
  Vector f(n);
  for (int k = 0; k < n; ++k) f[k] = 6.0 * uniform01(rng) - 3.0;
  return PrimalProblem(std::move(A), std::move(alpha), std::move(B), std::move(beta),
                       std::move(C), std::move(f));
}

}  // namespace candual::testsupport

#endif
