#ifndef CANDUAL_ORACLE_HPP
#define CANDUAL_ORACLE_HPP

#include <functional>
#include <vector>

#include "candual/problem.hpp"
#include "candual/solver.hpp"

namespace candual {

struct GridSpec {
  Vector lower;             // per-coordinate bounds, lower < upper
  Vector upper;
  int points_per_axis = 201;
  int refine_steps = 500;   // descent iterations after the grid sweep

  static GridSpec box(int n, double lo, double hi, int points = 201);
};

/// Central differences (f(x + h e_k) - f(x - h e_k)) / 2h. Throws
/// NonFiniteError if any sampled value is non-finite.
Vector finite_diff_gradient(const std::function<double(const Vector&)>& func,
                            const Vector& x, double h);

/// Second-order central differences on the same stencil spacing.
Matrix finite_diff_hessian(const std::function<double(const Vector&)>& func,
                           const Vector& x, double h);

struct LocalMinimum {
  Vector x;
  double value = 0.0;
};

struct BruteForceResult {
  Vector x_best;
  double value = 0.0;
  std::vector<LocalMinimum> minima;   // deduplicated descent limit points, best first
};

/// Exhaustive grid sweep of Pi followed by Armijo-backtracking gradient
/// descent from the best 25 cells. Requires n <= 3.
BruteForceResult brute_force_min(const PrimalProblem& prob, const GridSpec& grid);

struct CrossCheckVerdict {
  bool pass = false;
  double dual_value = 0.0;
  double oracle_value = 0.0;
  Vector dual_x;
  Vector oracle_x;
  double value_residual = 0.0;
  double x_residual = 0.0;
  bool value_only = false;   // several grid minima tied: locations not compared
  BruteForceResult oracle;
};

/// Runs maximize_dual_on_sa_plus against brute_force_min. PASS iff the values
/// agree within 1e-3 * (1 + |value|) and the minimizers within 1e-2 in the
/// max norm; when several grid minima tie in value, only values are compared.
CrossCheckVerdict cross_check(const PrimalProblem& prob, const SolveConfig& cfg,
                              const GridSpec& grid);

}  // namespace candual

#endif
