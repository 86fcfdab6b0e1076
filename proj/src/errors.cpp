#include "fishpc/errors.hpp"

#include <sstream>

namespace fishpc {

namespace {

std::string describe_eigen(const char* prefix, int index, double value, double largest) {
  std::ostringstream os;
  os.precision(6);
  os << prefix << ": eigenvalue #" << index << " = " << value << " (largest " << largest << ")";
  return os.str();
}

} // namespace

MissingClusterError::MissingClusterError(int label)
    : ConfigError("cluster " + std::to_string(label) + " has no observations"), label_(label) {}

SymmetryError::SymmetryError(double asymmetry)
    : NumericalError("matrix is not symmetric (max |a_ij - a_ji| = " + std::to_string(asymmetry) + ")"),
      asymmetry_(asymmetry) {}

DefinitenessError::DefinitenessError(int index, double eigenvalue, double largest)
    : NumericalError(describe_eigen("metric matrix is not positive definite", index, eigenvalue, largest)),
      index_(index), eigenvalue_(eigenvalue) {}

RankError::RankError(int index, double eigenvalue, double largest)
    : NumericalError(describe_eigen("total scatter is rank deficient", index, eigenvalue, largest)),
      index_(index) {}

CholeskyError::CholeskyError(int component)
    : NumericalError("covariance of component " + std::to_string(component) +
                     " is not positive definite (Cholesky failed)") {}

} // namespace fishpc
