#ifndef CANDUAL_PROBLEM_HPP
#define CANDUAL_PROBLEM_HPP

#include <vector>

#include "candual/types.hpp"

namespace candual {

/// One minimization instance
///
///   Pi(x) = sum_i exp(x'A_i x/2 - alpha_i)
///         + sum_j (x'B_j x/2 - beta_j)^2 / 2
///         - x'C x/2 - f'x,
///
/// with A_i symmetric, B_j and C symmetric positive definite.
///
/// The constructor symmetrizes each matrix as (M + M')/2 and rejects inputs
/// whose asymmetry exceeds 1e-8 relative to the largest entry. B_j and C are
/// checked for positive definiteness by full eigendecomposition.
class PrimalProblem {
public:
  PrimalProblem(std::vector<Matrix> A, std::vector<double> alpha,
                std::vector<Matrix> B, std::vector<double> beta,
                Matrix C, Vector f);

  int n() const { return static_cast<int>(f_.size()); }
  int p() const { return static_cast<int>(A_.size()); }
  int r() const { return static_cast<int>(B_.size()); }
  int m() const { return p() + r(); }

  const std::vector<Matrix>& A() const { return A_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<Matrix>& B() const { return B_; }
  const std::vector<double>& beta() const { return beta_; }
  const Matrix& C() const { return C_; }
  const Vector& f() const { return f_; }

  /// Worst relative asymmetry removed from any input matrix on ingestion.
  double symmetry_defect() const { return symmetry_defect_; }

private:
  std::vector<Matrix> A_;
  std::vector<double> alpha_;
  std::vector<Matrix> B_;
  std::vector<double> beta_;
  Matrix C_;
  Vector f_;
  double symmetry_defect_ = 0.0;
};

/// Quadratic-form image xi = (theta, eta) of a primal point:
/// theta_i = x'A_i x/2, eta_j = x'B_j x/2 (eta >= 0 since B_j > 0).
struct CanonicalMeasure {
  Vector theta;
  Vector eta;
};

/// Dual variable zeta = (tau, sigma); tau > 0 componentwise.
struct DualPoint {
  Vector tau;
  Vector sigma;

  int m() const { return static_cast<int>(tau.size() + sigma.size()); }

  Vector stacked() const;
  static DualPoint from_stacked(int p, const Vector& z);
};

double eval_primal(const PrimalProblem& prob, const Vector& x);

CanonicalMeasure canonical_measure(const PrimalProblem& prob, const Vector& x);

/// Constitutive image of a primal point: tau_i = exp(theta_i - alpha_i),
/// sigma_j = eta_j - beta_j. Throws NonFiniteError if exp overflows.
DualPoint dual_of_primal_point(const PrimalProblem& prob, const Vector& x);

/// V(xi) = sum_i exp(theta_i - alpha_i) + sum_j (eta_j - beta_j)^2 / 2.
double eval_V(const PrimalProblem& prob, const CanonicalMeasure& xi);

/// V*(zeta) = sum_i (alpha_i + ln tau_i - 1) tau_i + sigma'sigma/2 + beta'sigma.
/// Requires tau > 0.
double eval_V_star(const PrimalProblem& prob, const DualPoint& zeta);

/// grad Pi(x) = G(zeta(x)) x - f with zeta(x) = dual_of_primal_point(x).
Vector grad_primal(const PrimalProblem& prob, const Vector& x);

/// hess Pi(x) = G(zeta(x)) + sum_i tau_i (A_i x)(A_i x)' + sum_j (B_j x)(B_j x)'.
/// Exactly symmetric by construction.
Matrix hess_primal(const PrimalProblem& prob, const Vector& x);

}  // namespace candual

#endif
