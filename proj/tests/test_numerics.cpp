#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "rabi2q/hamiltonian.hpp"
#include "rabi2q/numerics.hpp"

using namespace rabi2q;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(rng);
  return 0.5 * (a + a.transpose());
}

double binom(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double laguerre_sum(int n, int k, double z) {
  double s = 0.0;
  for (int i = 0; i <= n; ++i) s += (i % 2 ? -1.0 : 1.0) * binom(n + k, n - i) * std::pow(z, i) /
                                   std::exp(std::lgamma(i + 1.0));
  return s;
}

}  // namespace

TEST_CASE("eigh small cases") {
  Eigen::MatrixXd d = Eigen::Vector3d(3, 1, 2).asDiagonal();
  auto e = eigh(d);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(2) == doctest::Approx(3.0));

  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  e = eigh(x);
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(std::abs(e.vectors(0, 0) + e.vectors(1, 0)) < 1e-14);
  CHECK(std::abs(std::abs(e.vectors(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-14);

  const ModelParams free{1.0, 1.3, 0.7, 0.0, 0.0};
  const auto ev = eigvalsh(expand_dense(build_parity_blocks(free, Parity::Even, Truncation{2})));
  CHECK(ev(0) == doctest::Approx(-1.0));
}

TEST_CASE("eigh reconstruction and orthonormality") {
  std::mt19937 rng(3);
  for (int n : {5, 60, 400}) {
    const Eigen::MatrixXd h = random_symmetric(n, rng);
    const auto e = eigh(h);
    const double hmax = h.cwiseAbs().maxCoeff();
    CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - h).cwiseAbs().maxCoeff() <=
          1e-10 * hmax);
    CHECK((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    for (int i = 1; i < n; ++i) CHECK(e.values(i) >= e.values(i - 1));
  }
}

TEST_CASE("converged_mask flags vectors living on the top rows") {
  EigenDecomposition d;
  d.values = Eigen::Vector3d(0, 1, 2);
  d.vectors = Eigen::MatrixXd::Identity(3, 3);
  const auto mask = converged_mask(d, 1);
  CHECK(mask[0]);
  CHECK(mask[1]);
  CHECK_FALSE(mask[2]);
}

TEST_CASE("laguerre polynomials") {
  CHECK(laguerre_assoc(0, 3, 1.7) == 1.0);
  CHECK(laguerre_assoc(1, 0, 0.4) == doctest::Approx(0.6));
  CHECK(laguerre_assoc(2, 1, 0.5) == doctest::Approx(laguerre_sum(2, 1, 0.5)));
  for (int n = 0; n <= 30; ++n)
    for (int k : {0, 1, 4, 11})
      for (double z : {0.1, 1.3, 4.0, 9.0}) {
        const double ref = std::assoc_laguerre(n, k, z);
        CHECK(std::abs(laguerre_assoc(n, k, z) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
      }
}

TEST_CASE("displacement matrix elements") {
  CHECK(displacement_element(0, 0, 0.7) == doctest::Approx(std::exp(-2 * 0.49)));
  CHECK(displacement_element(1, 0, 0.5) == doctest::Approx(std::exp(-0.5)));
  CHECK(displacement_element(3, 1, 0.0) == 0.0);
  CHECK(displacement_element(2, 2, 0.0) == 1.0);

  for (double x : {-1.5, 0.3, 2.0}) {
    const auto u = oracle::displacement(x, 140);
    for (int m = 0; m <= 20; ++m)
      for (int n = 0; n <= 20; ++n) CHECK(std::abs(displacement_element(m, n, x) - u(m, n)) < 1e-10);
  }

  for (double x : {0.4, 1.0, 2.0})
    for (int n : {0, 3, 10}) {
      double s = 0.0;
      for (int m = 0; m <= n + 200; ++m) s += std::pow(displacement_element(m, n, x), 2);
      CHECK(std::abs(s - 1.0) < 1e-6);
    }

  // large indices stay finite
  CHECK(std::isfinite(displacement_element(400, 380, 2.0)));
}

TEST_CASE("spectral propagation") {
  std::mt19937 rng(11);
  const Eigen::MatrixXd h = random_symmetric(30, rng);
  const auto d = eigh(h);
  std::normal_distribution<double> g;
  ComplexVector c0(30);
  for (int i = 0; i < 30; ++i) c0(i) = {g(rng), g(rng)};

  CHECK((propagate_spectral(d, c0, 0.0) - c0).norm() == 0.0);
  for (double t : {0.3, 7.0, 120.0}) {
    CHECK(std::abs(propagate_spectral(d, c0, t).norm() - c0.norm()) < 1e-10 * c0.norm());
  }
  const ComplexVector a = propagate_spectral(d, propagate_spectral(d, c0, 1.7), 2.4);
  CHECK((a - propagate_spectral(d, c0, 4.1)).norm() < 1e-9 * c0.norm());

  // against the matrix exponential
  const Eigen::MatrixXcd u = (std::complex<double>(0, -0.9) * h.cast<std::complex<double>>()).exp();
  CHECK((u * c0 - propagate_spectral(d, c0, 0.9)).norm() < 1e-10 * c0.norm());

  EigenDecomposition diag;
  diag.values = Eigen::Vector3d(0.5, -1.0, 2.0);
  diag.vectors = Eigen::Matrix3d::Identity();
  ComplexVector e1 = ComplexVector::Zero(3);
  e1(1) = 1.0;
  const ComplexVector out = propagate_spectral(diag, e1, 2.0);
  CHECK(std::abs(out(1) - std::polar(1.0, 2.0)) < 1e-15);
}
