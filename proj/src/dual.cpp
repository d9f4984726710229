#include "candual/dual.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace candual {

namespace {

// tau below this is treated as outside the dual domain: 1/tau and ln(tau)
// are no longer meaningful.
constexpr double kTauDomainFloor = 1e-300;

void check_dual_point(const PrimalProblem& prob, const DualPoint& zeta) {
  if (zeta.tau.size() != prob.p() || zeta.sigma.size() != prob.r())
    throw std::invalid_argument("dual point has wrong dimensions");
  for (int i = 0; i < prob.p(); ++i) {
    if (!(zeta.tau[i] > 0.0)) {
      std::ostringstream os;
      os << "tau[" << i << "] = " << zeta.tau[i] << " must be positive";
      throw std::invalid_argument(os.str());
    }
  }
}

std::string describe(const DualPoint& zeta) {
  std::ostringstream os;
  os << "zeta = (";
  for (int i = 0; i < zeta.tau.size(); ++i) os << (i ? ", " : "") << zeta.tau[i];
  for (int j = 0; j < zeta.sigma.size(); ++j)
    os << (zeta.tau.size() + j ? ", " : "") << zeta.sigma[j];
  os << ")";
  return os.str();
}

GFactor factor_or_throw(const PrimalProblem& prob, const DualPoint& zeta,
                        double singular_tol) {
  GFactor factor(assemble_G(prob, zeta));
  if (factor.near_singular(singular_tol))
    throw SingularGError("G is singular at " + describe(zeta) +
                         " (min |eigenvalue| = " + std::to_string(factor.min_abs_eigenvalue()) + ")");
  return factor;
}

// Columns A_1 u, ..., A_p u, B_1 u, ..., B_r u.
Matrix sensitivity_columns(const PrimalProblem& prob, const Vector& u) {
  Matrix Z(prob.n(), prob.m());
  for (int i = 0; i < prob.p(); ++i) Z.col(i) = prob.A()[i] * u;
  for (int j = 0; j < prob.r(); ++j) Z.col(prob.p() + j) = prob.B()[j] * u;
  return Z;
}

}  // namespace

SpectralBounds spectral_bounds(const PrimalProblem& prob) {
  SpectralBounds bounds;
  bounds.lambda_min_A.resize(prob.p());
  bounds.lambda_min_B.resize(prob.r());
  bounds.lambda_max_B.resize(prob.r());
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  for (int i = 0; i < prob.p(); ++i) {
    es.compute(prob.A()[i], Eigen::EigenvaluesOnly);
    bounds.lambda_min_A[i] = es.eigenvalues().minCoeff();
  }
  for (int j = 0; j < prob.r(); ++j) {
    es.compute(prob.B()[j], Eigen::EigenvaluesOnly);
    bounds.lambda_min_B[j] = es.eigenvalues().minCoeff();
    bounds.lambda_max_B[j] = es.eigenvalues().maxCoeff();
  }
  es.compute(prob.C(), Eigen::EigenvaluesOnly);
  bounds.lambda_max_C = es.eigenvalues().maxCoeff();
  return bounds;
}

const char* to_string(DomainClass d) {
  switch (d) {
    case DomainClass::SaPlus: return "SA_PLUS";
    case DomainClass::SaMinus: return "SA_MINUS";
    case DomainClass::Indefinite: return "INDEFINITE";
    case DomainClass::Singular: return "SINGULAR";
  }
  return "?";
}

Matrix assemble_G(const PrimalProblem& prob, const DualPoint& zeta) {
  check_dual_point(prob, zeta);
  Matrix G = -prob.C();
  for (int i = 0; i < prob.p(); ++i) G += zeta.tau[i] * prob.A()[i];
  for (int j = 0; j < prob.r(); ++j) G += zeta.sigma[j] * prob.B()[j];
  return G;
}

GFactor::GFactor(const Matrix& G) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

double GFactor::scale() const {
  return std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
}

Vector GFactor::solve(const Vector& b) const {
  return eigenvectors_ *
         (eigenvectors_.transpose() * b).cwiseQuotient(eigenvalues_);
}

Matrix GFactor::solve(const Matrix& B) const {
  Matrix W = eigenvectors_.transpose() * B;
  W.array().colwise() /= eigenvalues_.array();
  return eigenvectors_ * W;
}

double total_complementary(const PrimalProblem& prob, const Vector& x, const DualPoint& zeta) {
  const Matrix G = assemble_G(prob, zeta);
  return 0.5 * x.dot(G * x) - prob.f().dot(x) - eval_V_star(prob, zeta);
}

double eval_dual(const PrimalProblem& prob, const DualPoint& zeta, double singular_tol) {
  check_dual_point(prob, zeta);
  const GFactor factor = factor_or_throw(prob, zeta, singular_tol);
  const Vector u = factor.solve(prob.f());
  return -0.5 * prob.f().dot(u) - eval_V_star(prob, zeta);
}

Vector grad_dual(const PrimalProblem& prob, const DualPoint& zeta, double singular_tol) {
  check_dual_point(prob, zeta);
  const GFactor factor = factor_or_throw(prob, zeta, singular_tol);
  const Vector u = factor.solve(prob.f());
  Vector g(prob.m());
  for (int i = 0; i < prob.p(); ++i)
    g[i] = 0.5 * u.dot(prob.A()[i] * u) - prob.alpha()[i] - std::log(zeta.tau[i]);
  for (int j = 0; j < prob.r(); ++j)
    g[prob.p() + j] = 0.5 * u.dot(prob.B()[j] * u) - zeta.sigma[j] - prob.beta()[j];
  return g;
}

Matrix hess_dual(const PrimalProblem& prob, const DualPoint& zeta, double singular_tol) {
  check_dual_point(prob, zeta);
  for (int i = 0; i < prob.p(); ++i) {
    if (zeta.tau[i] < kTauDomainFloor) {
      std::ostringstream os;
      os << "tau[" << i << "] = " << zeta.tau[i] << " is below the dual domain floor";
      throw std::invalid_argument(os.str());
    }
  }
  const GFactor factor = factor_or_throw(prob, zeta, singular_tol);
  const Vector u = factor.solve(prob.f());
  const Matrix Z = sensitivity_columns(prob, u);
  Matrix H = -Z.transpose() * factor.solve(Z);
  for (int i = 0; i < prob.p(); ++i) H(i, i) -= 1.0 / zeta.tau[i];
  for (int j = 0; j < prob.r(); ++j) H(prob.p() + j, prob.p() + j) -= 1.0;
  H = 0.5 * (H + Matrix(H.transpose()));
  return H;
}

DomainClass classify_domain(const PrimalProblem& prob, const DualPoint& zeta, double tol) {
  check_dual_point(prob, zeta);
  const GFactor factor(assemble_G(prob, zeta));
  const double t = tol * factor.scale();
  if (factor.lambda_min() > t) return DomainClass::SaPlus;
  if (factor.lambda_max() < -t) return DomainClass::SaMinus;
  if (factor.min_abs_eigenvalue() <= t) return DomainClass::Singular;
  return DomainClass::Indefinite;
}

double delta_bound(const PrimalProblem& prob, const SpectralBounds& bounds,
                   const DualPoint& zeta) {
  check_dual_point(prob, zeta);
  double delta = -bounds.lambda_max_C;
  for (int i = 0; i < prob.p(); ++i) delta += zeta.tau[i] * bounds.lambda_min_A[i];
  for (int j = 0; j < prob.r(); ++j) {
    const double sigma = zeta.sigma[j];
    delta += sigma * (sigma > 0.0 ? bounds.lambda_min_B[j] : bounds.lambda_max_B[j]);
  }
  return delta;
}

}  // namespace candual
