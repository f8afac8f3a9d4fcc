#pragma once

// Brute-force reference constructions used only by the tests. They build
// operators from Kronecker products and matrix exponentials so they share
// no indexing code with the library.

#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "rabi2q/model.hpp"

namespace oracle {

inline Eigen::MatrixXd annihilation(int n_max) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Qubit basis (e, g): sz = diag(1, -1), s+ = |e><g|.
inline Eigen::Matrix2d sz() { return (Eigen::Matrix2d() << 1, 0, 0, -1).finished(); }
inline Eigen::Matrix2d sx() { return (Eigen::Matrix2d() << 0, 1, 1, 0).finished(); }
inline Eigen::Matrix2d splus() { return (Eigen::Matrix2d() << 0, 1, 0, 0).finished(); }

inline Eigen::MatrixXd kron3(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& c) {
  Eigen::MatrixXd bc = Eigen::kroneckerProduct(b, c);
  return Eigen::kroneckerProduct(a, bc);
}

inline Eigen::MatrixXd hamiltonian(const rabi2q::ModelParams& p, int n_max, bool rwa = false) {
  const Eigen::MatrixXd a = annihilation(n_max);
  const Eigen::MatrixXd id_f = Eigen::MatrixXd::Identity(n_max + 1, n_max + 1);
  const Eigen::MatrixXd id_q = Eigen::Matrix2d::Identity();
  Eigen::MatrixXd h = kron3(a.transpose() * a, id_q, id_q) +
                      0.5 * p.omega_1 * kron3(id_f, sz(), id_q) +
                      0.5 * p.omega_2 * kron3(id_f, id_q, sz());
  if (rwa) {
    const Eigen::Matrix2d sp = splus();
    const Eigen::Matrix2d sm = sp.transpose();
    h += p.g_1 * (kron3(a, sp, id_q) + kron3(a.transpose(), sm, id_q));
    h += p.g_2 * (kron3(a, id_q, sp) + kron3(a.transpose(), id_q, sm));
  } else {
    const Eigen::MatrixXd x = a + a.transpose();
    h += p.g_1 * kron3(x, sx(), id_q) + p.g_2 * kron3(x, id_q, sx());
  }
  return h;
}

// <m| exp(2x (a^dag - a)) |n> from a truncated operator exponential.
inline Eigen::MatrixXd displacement(double x, int n_max) {
  const Eigen::MatrixXd a = annihilation(n_max);
  const Eigen::MatrixXd gen = 2.0 * x * (a.transpose() - a);
  return gen.exp();
}

// Tr_field |psi><psi| for psi in the |n> (x) |q1> (x) |q2> basis.
inline Eigen::Matrix4cd partial_trace(const Eigen::VectorXcd& psi) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const Eigen::Index photons = psi.size() / 4;
  for (Eigen::Index n = 0; n < photons; ++n) {
    const Eigen::Vector4cd block = psi.segment<4>(4 * n);
    rho += block * block.adjoint();
  }
  return rho;
}

inline Eigen::VectorXcd coherent(std::complex<double> alpha, int n_max) {
  Eigen::VectorXcd c(n_max + 1);
  std::complex<double> term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= n_max; ++n) {
    c(n) = term;
    term *= alpha / std::sqrt(n + 1.0);
  }
  return c;
}

}  // namespace oracle
