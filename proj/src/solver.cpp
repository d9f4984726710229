#include "candual/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "candual/parallel.hpp"

namespace candual {

namespace {

constexpr int kRayDoublings = 60;
constexpr int kMaxHalvings = 60;

// Deterministic uniform double in [0, 1); identical on every platform,
// unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double lambda_min_G(const PrimalProblem& prob, const DualPoint& zeta) {
  return GFactor(assemble_G(prob, zeta)).lambda_min();
}

bool tau_feasible(const DualPoint& zeta, double tau_floor) {
  for (int i = 0; i < zeta.tau.size(); ++i)
    if (!(zeta.tau[i] >= tau_floor)) return false;
  return true;
}

DualPoint step(const DualPoint& zeta, const Vector& direction, double t, int p) {
  return DualPoint::from_stacked(p, Vector(zeta.stacked() + t * direction));
}

// Interior-point search: walk doubling rays until lambda_min(G) > 0.
// A-dominated ray first when some A_i is positive definite, then the
// sigma ray (B_j > 0 always dominates eventually), then a mixed ray that
// grows the definite tau components while shrinking the rest.
DualPoint find_interior_start(const PrimalProblem& prob, const SpectralBounds& bounds) {
  const int p = prob.p();
  const int r = prob.r();
  const bool a_can_dominate =
      p > 0 && bounds.lambda_min_A.size() > 0 && bounds.lambda_min_A.maxCoeff() > 0.0;

  // Demand a margin, not bare positivity: the Newton loop needs room under
  // its fraction-to-boundary floor.
  auto try_ray = [&](const std::function<DualPoint(int)>& at) -> std::optional<DualPoint> {
    for (int k = 0; k <= kRayDoublings; ++k) {
      DualPoint zeta = at(k);
      const GFactor factor(assemble_G(prob, zeta));
      if (factor.lambda_min() > 1e-8 * factor.scale()) return zeta;
    }
    return std::nullopt;
  };

  if (a_can_dominate) {
    auto hit = try_ray([&](int k) {
      DualPoint z{Vector::Constant(p, std::ldexp(1.0, k)), Vector::Zero(r)};
      return z;
    });
    if (hit) return *hit;
  }
  if (r > 0) {
    auto hit = try_ray([&](int k) {
      DualPoint z{Vector::Ones(p), Vector::Constant(r, std::ldexp(1.0, k))};
      return z;
    });
    if (hit) return *hit;
  }
  if (a_can_dominate) {
    auto hit = try_ray([&](int k) {
      DualPoint z{Vector::Ones(p), Vector::Zero(r)};
      for (int i = 0; i < p; ++i)
        z.tau[i] = std::ldexp(1.0, bounds.lambda_min_A[i] > 0.0 ? k : -k);
      return z;
    });
    if (hit) return *hit;
  }
  throw NoInteriorStartError(
      "no positive-definite G(zeta) found within the ray-search budget");
}

CriticalPointReport make_report(const PrimalProblem& prob, const SpectralBounds& bounds,
                                const SolveConfig& cfg, const DualPoint& zeta,
                                int iterations, bool converged) {
  CriticalPointReport report;
  report.zeta = zeta;
  report.x = recover_primal(prob, zeta, cfg.singular_tol);
  report.domain = classify_domain(prob, zeta, cfg.singular_tol);
  report.delta = delta_bound(prob, bounds, zeta);
  report.dual_value = eval_dual(prob, zeta, cfg.singular_tol);
  report.primal_value = eval_primal(prob, report.x);
  report.gap_residual = std::abs(report.primal_value - report.dual_value);
  report.grad_norm_dual =
      grad_dual(prob, zeta, cfg.singular_tol).cwiseAbs().maxCoeff();
  report.grad_norm_primal = grad_primal(prob, report.x).cwiseAbs().maxCoeff();
  report.converged = converged;
  report.iterations = iterations;
  report.triality = classify_triality(prob, report);
  return report;
}

struct NewtonOutcome {
  DualPoint zeta;
  int iterations = 0;
};

// Full-step root-finding Newton on grad Pi^d, backtracking only to keep
// tau above the floor. Unlike a residual-monotone method this can jump
// across the singular surfaces of G, which is what lets a multistart sweep
// land in every basin. Runs that hit a singular iterate, diverge, or
// exhaust the budget are reported as failures.
std::optional<NewtonOutcome> newton_to_stationary(const PrimalProblem& prob,
                                                  const SolveConfig& cfg,
                                                  DualPoint zeta) {
  const int p = prob.p();
  try {
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
      const Vector g = grad_dual(prob, zeta, cfg.singular_tol);
      if (!g.allFinite()) return std::nullopt;
      if (g.cwiseAbs().maxCoeff() <= cfg.grad_tol) return NewtonOutcome{zeta, iter - 1};

      const Matrix H = hess_dual(prob, zeta, cfg.singular_tol);
      Eigen::FullPivLU<Matrix> lu(H);
      if (!lu.isInvertible()) return std::nullopt;
      const Vector direction = lu.solve(Vector(-g));
      if (!direction.allFinite()) return std::nullopt;

      bool moved = false;
      double t = 1.0;
      for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
        DualPoint trial = step(zeta, direction, t, p);
        if (!tau_feasible(trial, cfg.tau_floor)) continue;
        zeta = trial;
        moved = true;
        break;
      }
      if (!moved || zeta.stacked().norm() > 1e10) return std::nullopt;
    }
  } catch (const SingularGError&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  if (!(cone_margin > 0.0 && cone_margin < 1.0))
    throw std::invalid_argument("cone_margin must lie in (0, 1)");
  if (multistart_count < 1) throw std::invalid_argument("multistart_count must be positive");
  if (!(tau_floor > 0.0)) throw std::invalid_argument("tau_floor must be positive");
  if (!(singular_tol > 0.0)) throw std::invalid_argument("singular_tol must be positive");
  if (!(gap_tol > 0.0)) throw std::invalid_argument("gap_tol must be positive");
}

const char* to_string(Triality t) {
  switch (t) {
    case Triality::MinMax: return "MIN_MAX";
    case Triality::DoubleMax: return "DOUBLE_MAX";
    case Triality::DoubleMin: return "DOUBLE_MIN";
    case Triality::Unclassified: return "UNCLASSIFIED";
  }
  return "?";
}

Vector recover_primal(const PrimalProblem& prob, const DualPoint& zeta, double singular_tol) {
  const GFactor factor(assemble_G(prob, zeta));
  if (factor.near_singular(singular_tol)) {
    std::ostringstream os;
    os << "cannot recover primal point: G is singular (min |eigenvalue| = "
       << factor.min_abs_eigenvalue() << ")";
    throw SingularGError(os.str());
  }
  return factor.solve(prob.f());
}

CriticalPointReport maximize_dual_on_sa_plus(const PrimalProblem& prob, const SolveConfig& cfg) {
  cfg.validate();
  const SpectralBounds bounds = spectral_bounds(prob);
  DualPoint zeta = find_interior_start(prob, bounds);
  double value = eval_dual(prob, zeta, cfg.singular_tol);
  int pinned_steps = 0;

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const Vector g = grad_dual(prob, zeta, cfg.singular_tol);
    if (g.cwiseAbs().maxCoeff() <= cfg.grad_tol)
      return make_report(prob, bounds, cfg, zeta, iter - 1, true);

    // Pi^d is strictly concave here, so -hess is positive definite and the
    // Newton direction ascends.
    const Matrix H = hess_dual(prob, zeta, cfg.singular_tol);
    Eigen::LDLT<Matrix> ldlt(Matrix(-H));
    Vector direction = ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !direction.allFinite()) {
      Eigen::FullPivLU<Matrix> lu(H);
      if (!lu.isInvertible())
        throw SingularGError("dual Hessian is singular inside Sa+");
      direction = lu.solve(Vector(-g));
    }

    // Fraction-to-boundary, plus an absolute floor keeping iterates clear of
    // the singularity test even when the dual stays finite at the boundary
    // (degenerate f directions).
    const GFactor current(assemble_G(prob, zeta));
    const double lambda_floor = std::max((1.0 - cfg.cone_margin) * current.lambda_min(),
                                         10.0 * cfg.singular_tol * current.scale());
    double accepted_t = -1.0;
    double t = 1.0;
    for (int h = 0; h <= kMaxHalvings && accepted_t < 0.0; ++h, t *= 0.5) {
      DualPoint trial = step(zeta, direction, t, prob.p());
      if (!tau_feasible(trial, cfg.tau_floor)) continue;
      if (lambda_min_G(prob, trial) < lambda_floor) continue;
      const double trial_value = eval_dual(prob, trial, cfg.singular_tol);
      if (trial_value >= value - 1e-12 * (1.0 + std::abs(value))) {
        zeta = trial;
        value = trial_value;
        accepted_t = t;
      }
    }
    if (accepted_t < 0.0)
      throw MaxIterError("line search stalled before reaching stationarity");

    // A run of microscopic steps against the cone boundary means the value
    // no longer resists the boundary in some direction (f orthogonal to the
    // vanishing eigenvector); better to fail loudly than spin to max_iter.
    pinned_steps = accepted_t > 1e-9 ? 0 : pinned_steps + 1;
    if (pinned_steps >= 8)
      throw MaxIterError("iterates pinned at the Sa+ boundary with a large gradient; "
                         "the dual is degenerate along a boundary null direction");
  }
  throw MaxIterError("Newton did not reach grad_tol within max_iter iterations");
}

std::vector<CriticalPointReport> find_stationary_points(const PrimalProblem& prob,
                                                        const SolveConfig& cfg,
                                                        MultistartStats* stats) {
  cfg.validate();
  const SpectralBounds bounds = spectral_bounds(prob);
  const int p = prob.p();
  const int r = prob.r();

  // All starts are drawn up front from a single stream so that start k does
  // not depend on how many runs executed before it.
  std::mt19937_64 rng(cfg.seed);
  std::vector<DualPoint> starts(cfg.multistart_count);
  for (auto& s : starts) {
    s.tau.resize(p);
    s.sigma.resize(r);
    for (int i = 0; i < p; ++i) s.tau[i] = std::pow(10.0, -3.0 + 6.0 * uniform01(rng));
    for (int j = 0; j < r; ++j) s.sigma[j] = -10.0 + 20.0 * uniform01(rng);
  }

  std::vector<std::optional<NewtonOutcome>> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    outcomes[k] = newton_to_stationary(prob, cfg, starts[k]);
  });

  MultistartStats local;
  local.started = cfg.multistart_count;

  // Deduplicate in start order; keep the representative with the smaller
  // gradient norm.
  std::vector<CriticalPointReport> reports;
  for (const auto& outcome : outcomes) {
    if (!outcome) {
      ++local.dropped;
      continue;
    }
    ++local.converged;
    CriticalPointReport report;
    try {
      report = make_report(prob, bounds, cfg, outcome->zeta, outcome->iterations, true);
    } catch (const SingularGError&) {
      ++local.dropped;
      --local.converged;
      continue;
    }
    bool duplicate = false;
    for (auto& kept : reports) {
      const Vector diff = kept.zeta.stacked() - report.zeta.stacked();
      if (diff.norm() <= 1e-6 * (1.0 + kept.zeta.stacked().norm())) {
        duplicate = true;
        ++local.duplicates;
        if (report.grad_norm_dual < kept.grad_norm_dual) kept = report;
        break;
      }
    }
    if (!duplicate) reports.push_back(std::move(report));
  }
  if (stats) *stats = local;
  return reports;
}

Triality classify_triality(const PrimalProblem& prob, const CriticalPointReport& report) {
  if (report.domain == DomainClass::SaPlus) return Triality::MinMax;
  if (report.domain != DomainClass::SaMinus) return Triality::Unclassified;

  const Matrix H = hess_dual(prob, report.zeta);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double margin = 1e-8 * scale;
  if (es.eigenvalues().maxCoeff() <= margin) return Triality::DoubleMax;
  if (es.eigenvalues().minCoeff() >= -margin && prob.m() == prob.n())
    return Triality::DoubleMin;
  return Triality::Unclassified;
}

double verify_gap(const PrimalProblem& prob, const CriticalPointReport& report) {
  const double primal = eval_primal(prob, report.x);
  const double xi = total_complementary(prob, report.x, report.zeta);
  const double dual = eval_dual(prob, report.zeta);
  return std::max({std::abs(primal - xi), std::abs(primal - dual), std::abs(xi - dual)});
}

}  // namespace candual
