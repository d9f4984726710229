#ifndef CANDUAL_SOLVER_HPP
#define CANDUAL_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "candual/dual.hpp"
#include "candual/problem.hpp"

namespace candual {

struct SolveConfig {
  double grad_tol = 1e-10;        // stationarity threshold on ||grad Pi^d||_inf
  int max_iter = 200;             // Newton iteration cap
  double cone_margin = 0.95;      // fraction-to-boundary factor for staying in Sa+
  int multistart_count = 64;
  std::uint64_t seed = 5;
  double tau_floor = 1e-12;       // lower clamp keeping tau > 0
  double singular_tol = 1e-10;
  double gap_tol = 1e-6;

  /// Throws std::invalid_argument if any tolerance is out of range.
  void validate() const;
};

enum class Triality { MinMax, DoubleMax, DoubleMin, Unclassified };

const char* to_string(Triality t);

struct CriticalPointReport {
  DualPoint zeta;
  Vector x;                       // recovered primal point G(zeta)^{-1} f
  DomainClass domain = DomainClass::Indefinite;
  Triality triality = Triality::Unclassified;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap_residual = 0.0;      // |primal_value - dual_value|
  double delta = 0.0;             // spectral bound at zeta
  double grad_norm_dual = 0.0;
  double grad_norm_primal = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct MultistartStats {
  int started = 0;
  int converged = 0;
  int dropped = 0;                // non-converged starts (singular G, stalled, max iter)
  int duplicates = 0;
};

/// x = G(zeta)^{-1} f via one symmetric factorization; throws SingularGError.
Vector recover_primal(const PrimalProblem& prob, const DualPoint& zeta,
                      double singular_tol = kDefaultSingularTol);

/// Concave maximization of Pi^d over Sa+. Locates an interior starting point
/// by scaling tau (and sigma, when no A_i can dominate) along a doubling ray,
/// then runs damped Newton with a fraction-to-boundary step limit. The result
/// is stationary to cfg.grad_tol, lies in Sa+, and carries triality MinMax.
/// Throws NoInteriorStartError, MaxIterError, or SingularGError.
CriticalPointReport maximize_dual_on_sa_plus(const PrimalProblem& prob, const SolveConfig& cfg);

/// Multistart Newton search for stationary points of Pi^d over all of Sa.
/// Starts are drawn deterministically from cfg.seed (tau log-uniform in
/// [1e-3, 1e3], sigma uniform in [-10, 10]); non-converged runs are dropped.
/// Results are deduplicated by relative zeta-distance and ordered by start
/// index, so parallel and serial execution return identical lists.
std::vector<CriticalPointReport> find_stationary_points(const PrimalProblem& prob,
                                                        const SolveConfig& cfg,
                                                        MultistartStats* stats = nullptr);

/// Triality tag for a converged stationary pair: MinMax on Sa+; on Sa-,
/// DoubleMax when hess Pi^d <= 0, DoubleMin when hess Pi^d >= 0 and m == n;
/// Unclassified otherwise (indefinite Hessian, or the double-min pattern
/// with m != n, about which no claim is made).
Triality classify_triality(const PrimalProblem& prob, const CriticalPointReport& report);

/// Max pairwise difference among {Pi(x), Xi(x, zeta), Pi^d(zeta)};
/// zero at any exact critical pair.
double verify_gap(const PrimalProblem& prob, const CriticalPointReport& report);

}  // namespace candual

#endif
