#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wnpi {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. The CLI maps InputError to exit code 2, MathError to 3
// and InvariantError to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (bad grid sizes, windows, schemas).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition does not hold (singular operator, violated
/// hypothesis, caustic, branch cut).
class MathError : public Error {
 public:
  using Error::Error;
};

class SingularError : public MathError {
 public:
  SingularError(const std::string& what, double rcond)
      : MathError(what + " (reciprocal condition estimate " + std::to_string(rcond) + ")"),
        rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

class CausticError : public MathError {
 public:
  explicit CausticError(double phase)
      : MathError("caustic: sqrt(k)*t = " + std::to_string(phase) +
                  " is a multiple of pi; the propagator is singular"),
        phase_(phase) {}
  double phase() const { return phase_; }

 private:
  double phase_;
};

/// Two routes that must agree did not.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace wnpi
