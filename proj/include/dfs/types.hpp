#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dfs {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Raised when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy result
/// (aliased matrix logarithm, rank-deficient tomography, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Axis { X, Y, Z };

/// max_ij |a_ij|
inline double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

inline double hermiticity_error(const Mat& a) {
  return a.rows() == 0 ? 0.0 : max_abs(a - a.adjoint());
}

inline double unitarity_error(const Mat& u) {
  return max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols()));
}

inline bool is_hermitian(const Mat& a, double rel_tol = 1e-12) {
  const double scale = a.size() == 0 ? 0.0 : std::max(1.0, max_abs(a));
  return a.rows() == a.cols() && hermiticity_error(a) <= rel_tol * scale;
}

inline bool is_unitary(const Mat& u, double tol = 1e-10) {
  return u.rows() == u.cols() && unitarity_error(u) <= tol;
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

}  // namespace dfs
