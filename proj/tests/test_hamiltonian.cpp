#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "rabi2q/hamiltonian.hpp"

using namespace rabi2q;

namespace {

std::size_t idx(int n, Qubit a, Qubit b) { return product_index({n, a, b}); }

}  // namespace

TEST_CASE("parity blocks") {
  const ModelParams p{1.0, 1.3, 0.7, 0.3, 0.4};
  const auto even = build_parity_blocks(p, Parity::Even, Truncation{3});
  CHECK(even.diagonal[0](0) == doctest::Approx(-1.0));
  CHECK(even.diagonal[0](1) == doctest::Approx(1.0));
  const auto odd = build_parity_blocks(p, Parity::Odd, Truncation{3});
  CHECK(odd.diagonal[0](0) == doctest::Approx(0.3));
  CHECK(odd.diagonal[0](1) == doctest::Approx(-0.3));
  CHECK(even.off_diagonal[0](0, 0) == doctest::Approx(0.3));
  CHECK(even.off_diagonal[0](0, 1) == doctest::Approx(0.4));
  CHECK(even.off_diagonal[0](1, 0) == doctest::Approx(0.4));
  CHECK(even.off_diagonal[2](1, 1) == doctest::Approx(0.3 * std::sqrt(3.0)));
}

TEST_CASE("expand_dense") {
  BlockTridiagonal one;
  one.diagonal.push_back(Eigen::Vector2d(-1.0, 1.0));
  const auto h0 = expand_dense(one);
  CHECK(h0.rows() == 2);
  CHECK(h0(0, 1) == 0.0);
  CHECK(h0(1, 1) == 1.0);

  const ModelParams p{1.0, 0.9, 1.7, -0.45, 0.2};
  const auto b = build_parity_blocks(p, Parity::Odd, Truncation{1});
  const auto h = expand_dense(b);
  CHECK(h.rows() == 4);
  CHECK((h.block<2, 2>(0, 2) - b.off_diagonal[0]).norm() == 0.0);
  CHECK(h(0, 1) == 0.0);
  CHECK((h - h.transpose()).norm() == 0.0);
}

TEST_CASE("full Hamiltonian matches the Kronecker-product construction") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> w(0.0, 2.0), g(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const ModelParams p{1.0, w(rng), w(rng), g(rng), g(rng)};
    const Truncation t{9};
    CHECK((build_full(p, t) - oracle::hamiltonian(p, t.n_max)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((build_rwa_full(p, t) - oracle::hamiltonian(p, t.n_max, true)).cwiseAbs().maxCoeff() <
          1e-14);
  }
}

TEST_CASE("single-photon matrix elements") {
  const ModelParams p{1.0, 1.1, 0.3, 0.25, 0.4};
  const Truncation t{4};
  const auto h = build_full(p, t);
  const auto r = build_rwa_full(p, t);
  // flipping qubit 2 with one photon
  CHECK(h(idx(0, Qubit::e, Qubit::g), idx(1, Qubit::e, Qubit::e)) == doctest::Approx(0.4));
  CHECK(h(idx(0, Qubit::e, Qubit::g), idx(1, Qubit::e, Qubit::g)) == 0.0);
  // rotating term survives, counter-rotating term does not
  CHECK(r(idx(0, Qubit::e, Qubit::g), idx(1, Qubit::g, Qubit::g)) == doctest::Approx(0.25));
  CHECK(r(idx(0, Qubit::e, Qubit::e), idx(1, Qubit::e, Qubit::g)) == doctest::Approx(0.4));
  CHECK(r(idx(1, Qubit::e, Qubit::e), idx(0, Qubit::e, Qubit::g)) == 0.0);
  CHECK(h(idx(1, Qubit::e, Qubit::e), idx(0, Qubit::e, Qubit::g)) == doctest::Approx(0.4));

  const ModelParams free{1.0, 1.1, 0.3, 0.0, 0.0};
  const auto h0 = build_full(free, t);
  CHECK((h0 - build_rwa_full(free, t)).norm() == 0.0);
  CHECK((h0 - Eigen::MatrixXd(h0.diagonal().asDiagonal())).norm() == 0.0);
  CHECK(h0(idx(3, Qubit::e, Qubit::g), idx(3, Qubit::e, Qubit::g)) == doctest::Approx(3.4));
}

TEST_CASE("parity operator and symmetry properties") {
  const Truncation t{12};
  const auto pi = build_parity_operator(t);
  CHECK(pi(idx(0, Qubit::g, Qubit::g), idx(0, Qubit::g, Qubit::g)) == 1.0);
  CHECK(pi(idx(1, Qubit::g, Qubit::g), idx(1, Qubit::g, Qubit::g)) == -1.0);
  CHECK((pi * pi - Eigen::MatrixXd::Identity(pi.rows(), pi.cols())).norm() == 0.0);

  const ModelParams p{1.0, 1.3, 0.7, 0.8, -0.35};
  const auto h = build_full(p, t);
  CHECK((pi * h - h * pi).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h - h.transpose()).norm() == 0.0);

  for (Parity par : {Parity::Even, Parity::Odd}) {
    const auto perm = chain_to_product(par, t);
    const auto dense = expand_dense(build_parity_blocks(p, par, t));
    for (std::size_t a = 0; a < perm.size(); ++a)
      for (std::size_t b = 0; b < perm.size(); ++b)
        REQUIRE(h(perm[a], perm[b]) == dense(a, b));
  }
}

TEST_CASE("RWA conserves the excitation number") {
  const Truncation t{10};
  const ModelParams p{1.0, 1.2, 0.6, 0.3, 0.5};
  const auto r = build_rwa_full(p, t);
  const auto n = build_excitation_number(t);
  CHECK((r * n - n * r).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r - r.transpose()).norm() == 0.0);
}

TEST_CASE("RWA excitation blocks") {
  const ModelParams p{1.0, 1.2, 0.6, 0.3, 0.5};
  const auto ground = build_rwa_excitation_block(p, 0);
  REQUIRE(ground.matrix.rows() == 1);
  CHECK(ground.matrix(0, 0) == doctest::Approx(-(0.1 - 0.2)));
  CHECK(ground.basis[0] == ProductState{0, Qubit::g, Qubit::g});
  CHECK(build_rwa_excitation_block(p, 1).matrix.rows() == 3);
  CHECK(build_rwa_excitation_block(p, 5).matrix.rows() == 4);

  const ModelParams chiral{1.0, 1.0, 1.0, 1.0, 1.0};
  const Eigen::VectorXd ev = build_rwa_excitation_block(chiral, 2).matrix.eigenvalues().real();
  std::vector<double> sorted(ev.data(), ev.data() + ev.size());
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 4; ++i) CHECK(sorted[i] == doctest::Approx(-sorted[3 - i]).epsilon(1e-12));

  // Each sector, shifted by its frame offset, is the RWA Hamiltonian
  // restricted to that sector.
  const Truncation t{8};
  const auto r = build_rwa_full(p, t);
  for (int sector = 0; sector <= t.n_max; ++sector) {
    const auto b = build_rwa_excitation_block(p, sector);
    for (std::size_t i = 0; i < b.basis.size(); ++i) {
      CHECK(excitation_sector(b.basis[i]) == sector);
      for (std::size_t j = 0; j < b.basis.size(); ++j) {
        const double expect = b.matrix(i, j) + (i == j ? b.frame_offset() : 0.0);
        CHECK(r(product_index(b.basis[i]), product_index(b.basis[j])) ==
              doctest::Approx(expect).epsilon(1e-14));
      }
    }
  }
}
