#include "rabi2q/numerics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rabi2q/errors.hpp"

namespace rabi2q {

EigenDecomposition eigh(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigh: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigh: QR iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigvalsh: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigvalsh: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

std::vector<bool> converged_mask(const EigenDecomposition& d, std::size_t tail_rows, double tol) {
  const auto rows = d.vectors.rows();
  const auto tail = std::min<Eigen::Index>(static_cast<Eigen::Index>(tail_rows), rows);
  std::vector<bool> mask(d.size());
  for (std::size_t c = 0; c < mask.size(); ++c) {
    const double w = d.vectors.col(static_cast<Eigen::Index>(c)).tail(tail).squaredNorm();
    mask[c] = w < tol;
  }
  return mask;
}

double laguerre_assoc(int n, int k, double z) {
  if (n < 0) throw std::invalid_argument("laguerre_assoc: degree must be non-negative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + k - z;
  for (int i = 1; i < n; ++i) {
    const double next = ((2.0 * i + 1.0 + k - z) * cur - (i + k) * prev) / (i + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double displacement_element(int m, int n, double x) {
  if (m < 0 || n < 0) throw std::invalid_argument("displacement_element: negative Fock index");
  if (m < n) {
    // <m|D(a)|n> = (-1)^(n-m) <n|D(a)|m> for real a
    const double v = displacement_element(n, m, x);
    return (n - m) % 2 == 0 ? v : -v;
  }
  const int diff = m - n;
  const double a = 2.0 * x;
  if (a == 0.0) return diff == 0 ? 1.0 : 0.0;
  const double lag = laguerre_assoc(n, diff, a * a);
  if (lag == 0.0) return 0.0;
  const double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) +
                         diff * std::log(std::abs(a)) - 0.5 * a * a +
                         std::log(std::abs(lag));
  double sgn = lag < 0.0 ? -1.0 : 1.0;
  if (a < 0.0 && diff % 2 == 1) sgn = -sgn;
  return sgn * std::exp(log_mag);
}

ComplexVector propagate_spectral(const EigenDecomposition& d, const ComplexVector& c0, double t) {
  if (c0.size() != d.vectors.rows()) {
    throw std::invalid_argument("propagate_spectral: dimension mismatch");
  }
  if (t == 0.0) return c0;
  // V is real: rotate real and imaginary parts separately.
  const Eigen::VectorXd re = d.vectors.transpose() * c0.real();
  const Eigen::VectorXd im = d.vectors.transpose() * c0.imag();
  Eigen::VectorXd out_re(re.size());
  Eigen::VectorXd out_im(re.size());
  for (Eigen::Index i = 0; i < re.size(); ++i) {
    const std::complex<double> c =
        std::complex<double>(re(i), im(i)) * std::polar(1.0, -d.values(i) * t);
    out_re(i) = c.real();
    out_im(i) = c.imag();
  }
  ComplexVector out(re.size());
  out.real() = d.vectors * out_re;
  out.imag() = d.vectors * out_im;
  return out;
}

}  // namespace rabi2q
