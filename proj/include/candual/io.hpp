#ifndef CANDUAL_IO_HPP
#define CANDUAL_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "candual/problem.hpp"
#include "candual/solver.hpp"

namespace candual {

/// A problem instance plus any solve-config overrides found in the file.
struct LoadedProblem {
  PrimalProblem problem;
  SolveConfig config;
};

/// Reads a JSON problem file. Matrices are flat row-major arrays of n*n
/// numbers. Schema violations throw std::runtime_error naming the offending
/// field; construction errors (asymmetry, non-SPD B or C) propagate from
/// PrimalProblem.
LoadedProblem read_problem_file(const std::string& path);
LoadedProblem read_problem_json(const std::string& text);

/// Inverse of read_problem_file; doubles are serialized as shortest
/// round-trip decimals, so read-back reproduces the instance bit for bit.
std::string problem_to_json(const PrimalProblem& prob);
void write_problem_file(const std::string& path, const PrimalProblem& prob);

/// JSON array of report objects, deterministic key order and float text.
std::string reports_to_json(const std::vector<CriticalPointReport>& reports);

/// Rectangular-grid CSV "x1,x2,value" of Pi over [lo1,hi1] x [lo2,hi2].
/// Requires n == 2.
void write_primal_contour(std::ostream& out, const PrimalProblem& prob,
                          double lo1, double hi1, double lo2, double hi2, int res);

/// CSV "tau,sigma,value" of Pi^d on a (tau, sigma) grid; rows where tau <= 0
/// or G is singular carry NA in the value column. Requires m == 2.
void write_dual_contour(std::ostream& out, const PrimalProblem& prob,
                        double lo1, double hi1, double lo2, double hi2, int res,
                        double singular_tol = kDefaultSingularTol);

}  // namespace candual

#endif
