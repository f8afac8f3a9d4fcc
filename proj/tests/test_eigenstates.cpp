#include "doctest.h"

#include <cmath>

#include "rabi2q/eigenstates.hpp"
#include "rabi2q/errors.hpp"
#include "rabi2q/hamiltonian.hpp"
#include "rabi2q/numerics.hpp"

using namespace rabi2q;

namespace {

const ModelParams kBase{1.0, 1.3, 0.7, 0.3, 0.4};

Eigen::Vector2d first_block(const Eigen::VectorXd& v) { return v.head<2>(); }

double aligned_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace

TEST_CASE("recurrence reproduces the lowest eigenstates") {
  const int n_max = 200;
  const ModelParams wide{1.0, 1.3, 0.7, 0.9, 0.1};
  for (const ModelParams& p : {kBase, wide}) {
    for (Parity par : {Parity::Even, Parity::Odd}) {
      const auto ed = eigh(expand_dense(build_parity_blocks(p, par, {n_max})));
      for (int i = 0; i < 10; ++i) {
        const Eigen::VectorXd u = ed.vectors.col(i);
        const auto st = recurrence_eigenstate_la(p, par, ed.values(i), first_block(u), n_max);
        const Eigen::VectorXd v = st.chain_vector();
        CHECK(st.v.size() == static_cast<std::size_t>(n_max + 1));
        CHECK(v.norm() == doctest::Approx(1.0));
        CHECK(st.boundary_residual == doctest::Approx(residual(p, par, st)).epsilon(1e-6));
        // leading blocks follow the eigenvector until the growing solution takes over
        const double s = v(0) / u(0);
        for (int j = 0; j < 6; ++j) CHECK((v.segment<2>(2 * j) - s * u.segment<2>(2 * j)).norm() < 1e-6);
        if (&p == &wide) CHECK(residual(p, par, st) <= 1e-4);
        else CHECK(residual(p, par, st) <= 5e-2);
      }
    }
  }
}

TEST_CASE("seed mixtures select the decaying solution") {
  const ModelParams wide{1.0, 1.3, 0.7, 0.9, 0.1};
  for (Parity par : {Parity::Even, Parity::Odd}) {
    const auto ed = eigh(expand_dense(build_parity_blocks(wide, par, {200})));
    for (int i = 0; i < 6; ++i) {
      const auto dec = decaying_solution(wide, par, ed.values(i), 200);
      CHECK(residual(wide, par, dec) <= 1e-3);
      CHECK(aligned_distance(dec.chain_vector(), ed.vectors.col(i)) < 1e-3);
    }
  }
}

TEST_CASE("recurrence away from the spectrum") {
  const int n_max = 200;
  const auto ed = eigh(expand_dense(build_parity_blocks(kBase, Parity::Even, {n_max})));
  const double mid = 0.5 * (ed.values(2) + ed.values(3));
  CHECK(residual(kBase, Parity::Even, decaying_solution(kBase, Parity::Even, mid, n_max)) > 1e-2);

  const Eigen::Vector2d seed = first_block(ed.vectors.col(2));
  double prev = 1e300;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    const double r = residual(kBase, Parity::Even,
                              recurrence_eigenstate_la(kBase, Parity::Even, ed.values(2) + d, seed, n_max));
    CHECK(r < prev);
    prev = r;
  }

  CHECK_THROWS_AS(recurrence_eigenstate_la(kBase, Parity::Even, 1e200, seed, n_max),
                  OverflowDetected);
}

TEST_CASE("recurrence rejects equal couplings") {
  const ModelParams eq{1.0, 1.3, 0.7, 0.3, 0.3};
  CHECK_THROWS_AS(recurrence_eigenstate_la(eq, Parity::Even, 0.0, {1.0, 0.0}, 50), SingularCoupling);
  const ModelParams opp{1.0, 1.3, 0.7, 0.3, -0.3};
  CHECK_THROWS_AS(decaying_solution(opp, Parity::Odd, 0.0, 50), SingularCoupling);
}

TEST_CASE("residual of exact and arbitrary vectors") {
  const auto ed = eigh(expand_dense(build_parity_blocks(kBase, Parity::Odd, {60})));
  CHECK(residual(kBase, Parity::Odd, ed.values(0), ed.vectors.col(0)) < 1e-12);
  Eigen::VectorXd flat = Eigen::VectorXd::Ones(ed.vectors.rows()).normalized();
  CHECK(residual(kBase, Parity::Odd, 0.0, flat) > 0.1);
}

TEST_CASE("Bargmann series startup and seed") {
  const ModelParams p{1.0, 1.3, 0.7, 0.6, 0.2};
  const int n_max = 100;
  for (Parity par : {Parity::Even, Parity::Odd}) {
    const auto ed = eigh(expand_dense(build_parity_blocks(p, par, {n_max})));
    for (int i = 0; i < 4; ++i) {
      const Eigen::VectorXd u = ed.vectors.col(i);
      const double c1 = bargmann_seed_from_chain(par, u);
      const auto b = bargmann_coefficients(p, par, ed.values(i), 120, c1);
      CHECK(b.sigma == -sign(par));
      CHECK(b.coefficient(0) == doctest::Approx(1.0));
      CHECK(b.coefficient(1) == doctest::Approx(c1));
      CHECK(recurrence_defect(b) <= 1e-12);

      CHECK(aligned_distance(bargmann_to_chain(b, 6), u.head(14).normalized()) < 1e-8);

      const auto m = bargmann_minimal_coefficients(p, par, ed.values(i), 120);
      CHECK(m.coefficient(1) == doctest::Approx(c1).epsilon(1e-8));
      Eigen::VectorXd chain = Eigen::VectorXd::Zero(u.size());
      chain.head(2 * 101) = bargmann_to_chain(m, 100);
      CHECK(residual(p, par, ed.values(i), chain) <= 1e-4);
      CHECK(aligned_distance(chain, u) < 1e-6);
    }
  }
}

TEST_CASE("Bargmann step singularities") {
  const ModelParams same{1.0, 0.8, 0.8, 0.4, 0.2};
  CHECK_THROWS_AS(bargmann_coefficients(same, Parity::Even, 0.1, 20, 0.0), StepSingular);
  const ModelParams equal_g{1.0, 1.3, 0.7, 0.4, 0.4};
  CHECK_THROWS_AS(bargmann_coefficients(equal_g, Parity::Even, 0.1, 20, 0.0), StepSingular);
  CHECK_THROWS_AS(bargmann_coefficients(equal_g, Parity::Even, 0.1, 1, 0.0), std::invalid_argument);
}

TEST_CASE("identical-qubit three-term series") {
  const double g_plus = 0.5;
  const auto zero = bargmann_identical_coefficients(0.0, g_plus, Parity::Even, 0.37, 30);
  for (int j = 1; j <= 30; ++j)
    CHECK(zero.alpha[j] == doctest::Approx((0.37 - (j - 1)) / g_plus));

  const auto b = bargmann_identical_coefficients(0.9, g_plus, Parity::Odd, 0.37, 200);
  CHECK(recurrence_defect(b) <= 1e-12);
  CHECK(b.coefficient(0) == doctest::Approx(1.0));
  CHECK(std::abs(b.ratio[199] - 1.0) < 1e-2);

  CHECK_THROWS_AS(bargmann_identical_coefficients(0.9, g_plus, Parity::Odd, 3.0, 10), StepSingular);
  CHECK_THROWS_AS(bargmann_identical_coefficients(0.9, 0.0, Parity::Odd, 0.37, 10), StepSingular);
}
