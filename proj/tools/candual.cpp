// Command-line front end: solve, check, and contour subcommands over JSON
// problem files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "candual/io.hpp"
#include "candual/oracle.hpp"
#include "candual/solver.hpp"

namespace {

using namespace candual;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitNumerical = 2;

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_vector(const Vector& v) {
  std::string out = "(";
  for (int k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += fmt6(v[k]);
  }
  return out + ")";
}

std::string fmt_zeta(const DualPoint& zeta) { return fmt_vector(zeta.stacked()); }

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void print_report_table(const std::vector<CriticalPointReport>& reports) {
  std::printf("%-3s %-10s %-12s %-28s %-26s %-12s %-12s %-10s %-10s\n",
              "#", "domain", "triality", "zeta", "x", "Pi", "Pi^d", "gap", "Delta");
  int row = 1;
  for (const auto& rep : reports) {
    std::printf("%-3d %-10s %-12s %-28s %-26s %-12s %-12s %-10s %-10s\n",
                row++, to_string(rep.domain), to_string(rep.triality),
                fmt_zeta(rep.zeta).c_str(), fmt_vector(rep.x).c_str(),
                fmt6(rep.primal_value).c_str(), fmt6(rep.dual_value).c_str(),
                fmt6(rep.gap_residual).c_str(), fmt6(rep.delta).c_str());
  }
}

// Merge multistart results into the list, skipping near-duplicates of rows
// already present (keeping the representative with the smaller grad norm).
void merge_reports(std::vector<CriticalPointReport>& into,
                   const std::vector<CriticalPointReport>& extra) {
  for (const auto& rep : extra) {
    bool duplicate = false;
    for (auto& kept : into) {
      const Vector diff = kept.zeta.stacked() - rep.zeta.stacked();
      if (diff.norm() <= 1e-6 * (1.0 + kept.zeta.stacked().norm())) {
        duplicate = true;
        if (rep.grad_norm_dual < kept.grad_norm_dual) kept = rep;
        break;
      }
    }
    if (!duplicate) into.push_back(rep);
  }
}

void sort_reports(std::vector<CriticalPointReport>& reports) {
  std::sort(reports.begin(), reports.end(),
            [](const CriticalPointReport& a, const CriticalPointReport& b) {
              const bool am = a.triality == Triality::MinMax;
              const bool bm = b.triality == Triality::MinMax;
              if (am != bm) return am;
              if (a.dual_value != b.dual_value) return a.dual_value > b.dual_value;
              const Vector za = a.zeta.stacked(), zb = b.zeta.stacked();
              return std::lexicographical_compare(za.data(), za.data() + za.size(),
                                                  zb.data(), zb.data() + zb.size());
            });
}

int cmd_solve(const std::string& path, const std::string& out_path,
              std::optional<std::uint64_t> seed, std::optional<int> starts) {
  std::optional<LoadedProblem> loaded;
  try {
    loaded = read_problem_file(path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  }
  const PrimalProblem& prob = loaded->problem;
  SolveConfig cfg = loaded->config;
  if (seed) cfg.seed = *seed;
  if (starts) cfg.multistart_count = *starts;

  std::vector<CriticalPointReport> reports;
  bool minmax_ok = false;
  try {
    reports.push_back(maximize_dual_on_sa_plus(prob, cfg));
    minmax_ok = true;
  } catch (const NoInteriorStartError& e) {
    std::fprintf(stderr, "note: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: concave maximization failed: %s\n", e.what());
  }

  MultistartStats stats;
  merge_reports(reports, find_stationary_points(prob, cfg, &stats));
  sort_reports(reports);

  print_report_table(reports);
  std::printf("multistart: %d starts, %d converged, %d dropped, %d duplicates\n",
              stats.started, stats.converged, stats.dropped, stats.duplicates);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
      return kExitInvalidInput;
    }
    out << reports_to_json(reports);
  }
  return minmax_ok ? kExitOk : kExitNumerical;
}

struct CheckOutcome {
  bool all_pass = true;
  void line(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s %s (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    all_pass = all_pass && pass;
  }
};

int cmd_check(const std::string& path, double grid_lo, double grid_hi, int grid_n) {
  std::optional<LoadedProblem> loaded;
  try {
    loaded = read_problem_file(path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  }
  const PrimalProblem& prob = loaded->problem;
  if (prob.n() > 3) {
    std::fprintf(stderr, "error: oracle limited to n <= 3 (instance has n = %d)\n", prob.n());
    return kExitNumerical;
  }

  CheckOutcome outcome;
  std::mt19937_64 rng(20240511u);
  const int trials = 20;

  auto rel_err = [](const Vector& a, const Vector& b) {
    return (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
  };
  auto rel_err_mat = [](const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
  };

  const auto primal_fn = [&](const Vector& x) { return eval_primal(prob, x); };
  double worst_gp = 0.0, worst_hp = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vector x(prob.n());
    for (int k = 0; k < prob.n(); ++k) x[k] = -2.0 + 4.0 * uniform01(rng);
    const double hg = 1e-6 * (1.0 + x.norm());
    worst_gp = std::max(worst_gp, rel_err(grad_primal(prob, x),
                                          finite_diff_gradient(primal_fn, x, hg)));
    const double hh = 1e-4 * (1.0 + x.norm());
    worst_hp = std::max(worst_hp, rel_err_mat(hess_primal(prob, x),
                                              finite_diff_hessian(primal_fn, x, hh)));
  }
  outcome.line("grad_primal vs central differences", worst_gp <= 1e-6,
               "max rel err " + fmt6(worst_gp));
  outcome.line("hess_primal vs central differences", worst_hp <= 1e-4,
               "max rel err " + fmt6(worst_hp));

  const auto dual_fn = [&](const Vector& z) {
    return eval_dual(prob, DualPoint::from_stacked(prob.p(), z));
  };
  double worst_gd = 0.0, worst_hd = 0.0;
  int accepted = 0;
  while (accepted < trials) {
    DualPoint zeta;
    zeta.tau.resize(prob.p());
    zeta.sigma.resize(prob.r());
    for (int i = 0; i < prob.p(); ++i) zeta.tau[i] = std::pow(10.0, -1.0 + 2.0 * uniform01(rng));
    for (int j = 0; j < prob.r(); ++j) zeta.sigma[j] = -5.0 + 10.0 * uniform01(rng);
    GFactor factor(assemble_G(prob, zeta));
    if (factor.min_abs_eigenvalue() <= 5e-2 * factor.scale()) continue;
    ++accepted;
    const Vector z = zeta.stacked();
    worst_gd = std::max(worst_gd, rel_err(grad_dual(prob, zeta),
                                          finite_diff_gradient(dual_fn, z, 1e-6 * (1.0 + z.norm()))));
    const double hh = 1e-4 * std::min(1.0 + z.norm(), factor.min_abs_eigenvalue());
    worst_hd = std::max(worst_hd, rel_err_mat(hess_dual(prob, zeta),
                                              finite_diff_hessian(dual_fn, z, hh)));
  }
  outcome.line("grad_dual vs central differences", worst_gd <= 1e-6,
               "max rel err " + fmt6(worst_gd));
  outcome.line("hess_dual vs central differences", worst_hd <= 1e-4,
               "max rel err " + fmt6(worst_hd));

  GridSpec grid = GridSpec::box(prob.n(), grid_lo, grid_hi, grid_n);
  try {
    const CrossCheckVerdict verdict = cross_check(prob, loaded->config, grid);
    std::string detail = "dual " + fmt6(verdict.dual_value) + " at " + fmt_vector(verdict.dual_x) +
                         ", oracle " + fmt6(verdict.oracle_value) + " at " +
                         fmt_vector(verdict.oracle_x);
    if (verdict.value_only) detail += ", tied minima: values compared only";
    outcome.line("oracle cross-check", verdict.pass, detail);
    for (std::size_t k = 1; k < verdict.oracle.minima.size(); ++k) {
      const auto& lm = verdict.oracle.minima[k];
      std::printf("     local minimum at %s value %s (not global; correctly skipped)\n",
                  fmt_vector(lm.x).c_str(), fmt6(lm.value).c_str());
    }
  } catch (const std::exception& e) {
    outcome.line("oracle cross-check", false, e.what());
  }

  return outcome.all_pass ? kExitOk : kExitInvalidInput;
}

int cmd_contour(const std::string& path, bool primal, bool dual,
                std::vector<double> window, int res, const std::string& out_path) {
  std::optional<LoadedProblem> loaded;
  try {
    loaded = read_problem_file(path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  }
  const PrimalProblem& prob = loaded->problem;
  if (primal == dual) {
    std::fprintf(stderr, "error: exactly one of --primal or --dual is required\n");
    return kExitInvalidInput;
  }
  if (primal && prob.n() != 2) {
    std::fprintf(stderr, "error: primal contour requires n = 2 (instance has n = %d)\n", prob.n());
    return kExitNumerical;
  }
  if (dual && prob.m() != 2) {
    std::fprintf(stderr, "error: dual contour requires p + r = 2 (instance has m = %d)\n", prob.m());
    return kExitNumerical;
  }

  if (window.empty()) {
    try {
      const CriticalPointReport rep = maximize_dual_on_sa_plus(prob, loaded->config);
      const Vector center = primal ? rep.x : rep.zeta.stacked();
      window = {center[0] - 3.0, center[0] + 3.0, center[1] - 3.0, center[1] + 3.0};
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: cannot derive default window (%s); pass --window\n", e.what());
      return kExitNumerical;
    }
  }
  if (window.size() != 4 || !(window[0] < window[1]) || !(window[2] < window[3])) {
    std::fprintf(stderr, "error: --window expects lo1,hi1,lo2,hi2 with lo < hi\n");
    return kExitInvalidInput;
  }

  std::ofstream out(out_path);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return kExitInvalidInput;
  }
  if (primal)
    write_primal_contour(out, prob, window[0], window[1], window[2], window[3], res);
  else
    write_dual_contour(out, prob, window[0], window[1], window[2], window[3], res,
                       loaded->config.singular_tol);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical dual solver for quadratic-exponential d.c. minimization"};
  app.require_subcommand(1);

  std::string path, out_path;
  std::uint64_t seed_value = 0;
  int starts_value = 0;

  auto* solve = app.add_subcommand("solve", "maximize the canonical dual and classify all stationary points");
  solve->add_option("file", path, "problem JSON file")->required();
  auto* solve_out = solve->add_option("--out", out_path, "write reports as JSON");
  auto* solve_seed = solve->add_option("--seed", seed_value, "multistart seed");
  auto* solve_starts = solve->add_option("--starts", starts_value, "multistart count");

  double grid_lo = -5.0, grid_hi = 5.0;
  int grid_n = 201;
  auto* check = app.add_subcommand("check", "verify derivatives and cross-check against the brute-force oracle");
  check->add_option("file", path, "problem JSON file")->required();
  check->add_option("--grid-lo", grid_lo, "oracle grid lower bound");
  check->add_option("--grid-hi", grid_hi, "oracle grid upper bound");
  check->add_option("--grid-n", grid_n, "oracle grid points per axis");

  bool primal = false, dual = false;
  std::vector<double> window;
  int res = 201;
  auto* contour = app.add_subcommand("contour", "write a rectangular-grid CSV of Pi or Pi^d");
  contour->add_option("file", path, "problem JSON file")->required();
  contour->add_flag("--primal", primal, "grid over the primal variables");
  contour->add_flag("--dual", dual, "grid over the dual variables");
  contour->add_option("--window", window, "lo1,hi1,lo2,hi2")->delimiter(',');
  contour->add_option("--res", res, "points per axis");
  contour->add_option("--out", out_path, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed())
    return cmd_solve(path, solve_out->count() ? out_path : "",
                     solve_seed->count() ? std::optional<std::uint64_t>(seed_value) : std::nullopt,
                     solve_starts->count() ? std::optional<int>(starts_value) : std::nullopt);
  if (check->parsed()) return cmd_check(path, grid_lo, grid_hi, grid_n);
  if (contour->parsed()) return cmd_contour(path, primal, dual, window, res, out_path);
  return kExitInvalidInput;
}
