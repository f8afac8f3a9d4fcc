#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace rabi2q {

using ComplexVector = Eigen::VectorXcd;

/// Full spectrum of a real symmetric matrix: values ascending, vectors as
/// orthonormal columns in the same order.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

/// Householder tridiagonalization followed by implicitly shifted QR.
/// Throws ConvergenceFailure when the iteration budget runs out.
EigenDecomposition eigh(const Eigen::MatrixXd& h);
Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& h);

/// Columns whose weight on the last `tail_rows` rows is below `tol`. For a
/// parity chain the top two photon levels are the last 4 rows; for the
/// product basis the last 8.
std::vector<bool> converged_mask(const EigenDecomposition& d, std::size_t tail_rows,
                                 double tol = 1e-8);

/// Generalized Laguerre polynomial L_n^{(k)}(z) by the three-term recurrence
/// in n.
double laguerre_assoc(int n, int k, double z);

/// <m| D(2x) |n> for real x, D(a) = exp(a a^dag - a a). The factorial ratio
/// is evaluated through log-gamma so large m, n do not overflow.
double displacement_element(int m, int n, double x);

/// V exp(-i L t) V^T c0.
ComplexVector propagate_spectral(const EigenDecomposition& d, const ComplexVector& c0, double t);

}  // namespace rabi2q
