#ifndef CANDUAL_DUAL_HPP
#define CANDUAL_DUAL_HPP

#include "candual/problem.hpp"
#include "candual/types.hpp"

namespace candual {

inline constexpr double kDefaultSingularTol = 1e-10;

/// Extreme eigenvalues feeding the spectral lower bound on G(zeta).
struct SpectralBounds {
  Vector lambda_min_A;                 // smallest eigenvalue of each A_i
  Vector lambda_min_B, lambda_max_B;   // extreme eigenvalues of each B_j
  double lambda_max_C = 0.0;
};

SpectralBounds spectral_bounds(const PrimalProblem& prob);

enum class DomainClass { SaPlus, SaMinus, Indefinite, Singular };

const char* to_string(DomainClass d);

/// G(zeta) = sum_i tau_i A_i + sum_j sigma_j B_j - C.
Matrix assemble_G(const PrimalProblem& prob, const DualPoint& zeta);

/// One-shot symmetric eigendecomposition of G(zeta). Definiteness queries,
/// the scale-invariant singularity test, and all linear solves against G go
/// through this factorization; G^{-1} is never formed.
class GFactor {
public:
  explicit GFactor(const Matrix& G);

  double lambda_min() const { return eigenvalues_.minCoeff(); }
  double lambda_max() const { return eigenvalues_.maxCoeff(); }
  double min_abs_eigenvalue() const { return eigenvalues_.cwiseAbs().minCoeff(); }
  /// max(1, ||G||_2); the scale used by the relative singularity test.
  double scale() const;
  bool near_singular(double rel_tol) const { return min_abs_eigenvalue() <= rel_tol * scale(); }

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& B) const;

  const Vector& eigenvalues() const { return eigenvalues_; }

private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

/// Xi(x, zeta) = x'G(zeta)x/2 - f'x - V*(zeta).
double total_complementary(const PrimalProblem& prob, const Vector& x, const DualPoint& zeta);

/// Pi^d(zeta) = -f'G(zeta)^{-1}f/2 - V*(zeta). Throws SingularGError when
/// min |eig(G)| <= singular_tol * max(1, ||G||_2).
double eval_dual(const PrimalProblem& prob, const DualPoint& zeta,
                 double singular_tol = kDefaultSingularTol);

/// Components, with u = G^{-1}f:
///   d/dtau_i   =  u'A_i u/2 - alpha_i - ln tau_i
///   d/dsigma_j =  u'B_j u/2 - sigma_j - beta_j
Vector grad_dual(const PrimalProblem& prob, const DualPoint& zeta,
                 double singular_tol = kDefaultSingularTol);

/// -Z'G^{-1}Z - H^{-1} with Z = [A_1 u, ..., B_r u] and
/// H^{-1} = blockdiag(diag(1/tau), I_r). Negative definite on Sa+.
Matrix hess_dual(const PrimalProblem& prob, const DualPoint& zeta,
                 double singular_tol = kDefaultSingularTol);

/// Eigenvalue classification of G(zeta); `tol` is relative to max(1, ||G||_2).
DomainClass classify_domain(const PrimalProblem& prob, const DualPoint& zeta,
                            double tol = kDefaultSingularTol);

/// Delta = sum_i tau_i lmin(A_i) + sum_j sigma_j lbar(B_j) - lmax(C), where
/// lbar(B_j) is lmin(B_j) for sigma_j > 0 and lmax(B_j) otherwise. Every
/// eigenvalue of G(zeta) is >= Delta; Delta > 0 certifies zeta in Sa+.
double delta_bound(const PrimalProblem& prob, const SpectralBounds& bounds,
                   const DualPoint& zeta);

}  // namespace candual

#endif
