#include "candual/problem.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <utility>

namespace candual {

namespace {

// exp(t) overflows double well before t = 710; flag anything past 700.
constexpr double kExpOverflow = 700.0;

double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

// Symmetrize M in place; returns the relative asymmetry that was removed.
double symmetrize(Matrix& M, const std::string& name) {
  if (M.rows() != M.cols()) {
    std::ostringstream os;
    os << name << " must be square, got " << M.rows() << "x" << M.cols();
    throw std::invalid_argument(os.str());
  }
  const double scale = std::max(1.0, max_abs(M));
  const double defect = max_abs(Matrix(M - M.transpose())) / scale;
  if (defect > 1e-8) {
    std::ostringstream os;
    os << name << " is not symmetric (relative asymmetry " << defect << ")";
    throw std::invalid_argument(os.str());
  }
  M = 0.5 * (M + Matrix(M.transpose()));
  return defect;
}

void require_spd(const Matrix& M, const std::string& name) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive definite; smallest eigenvalue is " << lmin;
    throw std::invalid_argument(os.str());
  }
}

void check_dim(const PrimalProblem& prob, const Vector& x) {
  if (x.size() != prob.n()) {
    std::ostringstream os;
    os << "x has dimension " << x.size() << ", expected " << prob.n();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

PrimalProblem::PrimalProblem(std::vector<Matrix> A, std::vector<double> alpha,
                             std::vector<Matrix> B, std::vector<double> beta,
                             Matrix C, Vector f)
    : A_(std::move(A)), alpha_(std::move(alpha)),
      B_(std::move(B)), beta_(std::move(beta)),
      C_(std::move(C)), f_(std::move(f)) {
  const auto n = f_.size();
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (A_.size() != alpha_.size())
    throw std::invalid_argument("A and alpha must have the same length");
  if (B_.size() != beta_.size())
    throw std::invalid_argument("B and beta must have the same length");
  if (A_.empty() && B_.empty())
    throw std::invalid_argument("p + r must be at least 1");

  for (std::size_t i = 0; i < A_.size(); ++i) {
    std::ostringstream name;
    name << "A[" << i << "]";
    if (A_[i].rows() != n) throw std::invalid_argument(name.str() + " has wrong dimension");
    symmetry_defect_ = std::max(symmetry_defect_, symmetrize(A_[i], name.str()));
  }
  for (std::size_t j = 0; j < B_.size(); ++j) {
    std::ostringstream name;
    name << "B[" << j << "]";
    if (B_[j].rows() != n) throw std::invalid_argument(name.str() + " has wrong dimension");
    symmetry_defect_ = std::max(symmetry_defect_, symmetrize(B_[j], name.str()));
    require_spd(B_[j], name.str());
  }
  if (C_.rows() != n) throw std::invalid_argument("C has wrong dimension");
  symmetry_defect_ = std::max(symmetry_defect_, symmetrize(C_, "C"));
  require_spd(C_, "C");
}

Vector DualPoint::stacked() const {
  Vector z(tau.size() + sigma.size());
  z << tau, sigma;
  return z;
}

DualPoint DualPoint::from_stacked(int p, const Vector& z) {
  DualPoint zeta;
  zeta.tau = z.head(p);
  zeta.sigma = z.tail(z.size() - p);
  return zeta;
}

double eval_primal(const PrimalProblem& prob, const Vector& x) {
  check_dim(prob, x);
  double value = -0.5 * x.dot(prob.C() * x) - prob.f().dot(x);
  for (int i = 0; i < prob.p(); ++i)
    value += std::exp(0.5 * x.dot(prob.A()[i] * x) - prob.alpha()[i]);
  for (int j = 0; j < prob.r(); ++j) {
    const double d = 0.5 * x.dot(prob.B()[j] * x) - prob.beta()[j];
    value += 0.5 * d * d;
  }
  return value;
}

CanonicalMeasure canonical_measure(const PrimalProblem& prob, const Vector& x) {
  check_dim(prob, x);
  CanonicalMeasure xi;
  xi.theta.resize(prob.p());
  xi.eta.resize(prob.r());
  for (int i = 0; i < prob.p(); ++i) xi.theta[i] = 0.5 * x.dot(prob.A()[i] * x);
  for (int j = 0; j < prob.r(); ++j) xi.eta[j] = 0.5 * x.dot(prob.B()[j] * x);
  return xi;
}

DualPoint dual_of_primal_point(const PrimalProblem& prob, const Vector& x) {
  const CanonicalMeasure xi = canonical_measure(prob, x);
  DualPoint zeta;
  zeta.tau.resize(prob.p());
  zeta.sigma.resize(prob.r());
  for (int i = 0; i < prob.p(); ++i) {
    const double e = xi.theta[i] - prob.alpha()[i];
    if (e > kExpOverflow || !std::isfinite(e)) {
      std::ostringstream os;
      os << "exp(theta - alpha) overflows for term " << i << " (exponent " << e << ")";
      throw NonFiniteError(os.str());
    }
    zeta.tau[i] = std::exp(e);
  }
  for (int j = 0; j < prob.r(); ++j) zeta.sigma[j] = xi.eta[j] - prob.beta()[j];
  return zeta;
}

double eval_V(const PrimalProblem& prob, const CanonicalMeasure& xi) {
  if (xi.theta.size() != prob.p() || xi.eta.size() != prob.r())
    throw std::invalid_argument("canonical measure has wrong dimensions");
  double value = 0.0;
  for (int i = 0; i < prob.p(); ++i) value += std::exp(xi.theta[i] - prob.alpha()[i]);
  for (int j = 0; j < prob.r(); ++j) {
    const double d = xi.eta[j] - prob.beta()[j];
    value += 0.5 * d * d;
  }
  return value;
}

double eval_V_star(const PrimalProblem& prob, const DualPoint& zeta) {
  if (zeta.tau.size() != prob.p() || zeta.sigma.size() != prob.r())
    throw std::invalid_argument("dual point has wrong dimensions");
  double value = 0.0;
  for (int i = 0; i < prob.p(); ++i) {
    const double tau = zeta.tau[i];
    if (!(tau > 0.0)) {
      std::ostringstream os;
      os << "tau[" << i << "] = " << tau << " must be positive";
      throw std::invalid_argument(os.str());
    }
    value += (prob.alpha()[i] + std::log(tau) - 1.0) * tau;
  }
  for (int j = 0; j < prob.r(); ++j) {
    const double sigma = zeta.sigma[j];
    value += 0.5 * sigma * sigma + prob.beta()[j] * sigma;
  }
  return value;
}

Vector grad_primal(const PrimalProblem& prob, const Vector& x) {
  const DualPoint zeta = dual_of_primal_point(prob, x);
  Vector g = -(prob.C() * x) - prob.f();
  for (int i = 0; i < prob.p(); ++i) g += zeta.tau[i] * (prob.A()[i] * x);
  for (int j = 0; j < prob.r(); ++j) g += zeta.sigma[j] * (prob.B()[j] * x);
  return g;
}

namespace {

// Rank-one update H += scale * v v' filled triangle-symmetrically so the
// result stays bitwise symmetric (Eigen's row-major outer-product path
// rounds (s*v_i)*v_j and (s*v_j)*v_i differently).
void add_scaled_outer(Matrix& H, double scale, const Vector& v) {
  for (int a = 0; a < v.size(); ++a) {
    H(a, a) += scale * (v[a] * v[a]);
    for (int b = a + 1; b < v.size(); ++b) {
      const double t = scale * (v[a] * v[b]);
      H(a, b) += t;
      H(b, a) += t;
    }
  }
}

}  // namespace

Matrix hess_primal(const PrimalProblem& prob, const Vector& x) {
  const DualPoint zeta = dual_of_primal_point(prob, x);
  Matrix H = -prob.C();
  for (int i = 0; i < prob.p(); ++i) {
    H += zeta.tau[i] * prob.A()[i];
    add_scaled_outer(H, zeta.tau[i], prob.A()[i] * x);
  }
  for (int j = 0; j < prob.r(); ++j) {
    H += zeta.sigma[j] * prob.B()[j];
    add_scaled_outer(H, 1.0, prob.B()[j] * x);
  }
  return H;
}

}  // namespace candual
