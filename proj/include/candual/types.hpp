#ifndef CANDUAL_TYPES_HPP
#define CANDUAL_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace candual {

// Dense row-major storage throughout; problem sizes are desk-scale.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// G(zeta) is singular (or numerically indistinguishable from singular),
/// so the dual function and the primal recovery map are undefined there.
class SingularGError : public std::runtime_error {
public:
  explicit SingularGError(const std::string& what) : std::runtime_error(what) {}
};

/// No positive-definite G(zeta) could be located within the search budget.
class NoInteriorStartError : public std::runtime_error {
public:
  explicit NoInteriorStartError(const std::string& what) : std::runtime_error(what) {}
};

class MaxIterError : public std::runtime_error {
public:
  explicit MaxIterError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation left the numerically valid region (exp overflow or a
/// non-finite intermediate); callers must not treat the result as a value.
class NonFiniteError : public std::runtime_error {
public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace candual

#endif
