#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "rabi2q/errors.hpp"
#include "rabi2q/hamiltonian.hpp"
#include "rabi2q/numerics.hpp"
#include "rabi2q/spectra.hpp"

using namespace rabi2q;

namespace {

// Two-level toy sweep H(g) = [[g, delta], [delta, -g]] packed as an even
// spectrum so detect_crossings can run on it.
SpectrumSweep toy_sweep(double delta, double start, double stop, double step) {
  SpectrumSweep s;
  s.k = 2;
  CouplingSchedule sched{CouplingSchedule::Vary::G1, start, stop, step};
  for (double g : sched.values()) {
    Eigen::MatrixXd h(2, 2);
    h << g, delta, delta, -g;
    const auto d = eigh(h);
    SweepPoint pt;
    pt.coordinate = g;
    pt.spectra[0] = ParitySpectrum{{d.values(0), d.values(1)}, d.vectors};
    s.points.push_back(pt);
  }
  return s;
}

}  // namespace

TEST_CASE("coupling schedule") {
  CouplingSchedule s{CouplingSchedule::Vary::Locked, 0.0, 2.0, 0.01};
  const auto v = s.values();
  CHECK(v.size() == 201);
  CHECK(v.back() == doctest::Approx(2.0));
  const ModelParams p = s.at(ModelParams{1.0, 1.3, 0.7, 0.0, 0.0}, 0.5);
  CHECK(p.g_1 == 0.5);
  CHECK(p.g_2 == 0.5);
  CHECK(CouplingSchedule{CouplingSchedule::Vary::G2, 0.0, 1.0, 0.5}.at(p, 0.1).g_1 == 0.5);
  CHECK_THROWS_AS((CouplingSchedule{CouplingSchedule::Vary::G1, 0.0, 1.0, 0.0}.values()),
                  std::invalid_argument);
}

TEST_CASE("decoupled sweep point") {
  const ModelParams base{1.0, 1.3, 0.7, 0.0, 0.0};
  SweepOptions opt;
  opt.k = 6;
  const auto sw = sweep_spectrum(base, {CouplingSchedule::Vary::Locked, 0.0, 0.0, 0.1},
                                 Truncation{20}, opt);
  REQUIRE(sw.points.size() == 1);
  // even chain: |0gg> -1, |0ee> 1, |1eg> 1.3, |1ge> 0.7, |2gg> 1, |3ge> 2.7, ...
  const std::vector<double> even{-1.0, 0.7, 1.0, 1.0, 1.3, 2.7};
  const auto& e = sw.points[0].at(Parity::Even).energies;
  for (int i = 0; i < 6; ++i) CHECK(e[i] == doctest::Approx(even[i]));
  // odd chain: |0eg> 0.3, |0ge> -0.3, |1gg> 0, |1ee> 2, |2ge> 1.7, |3gg> 2, ...
  const std::vector<double> odd{-0.3, 0.0, 0.3, 1.7, 2.0, 2.0};
  const auto& o = sw.points[0].at(Parity::Odd).energies;
  for (int i = 0; i < 6; ++i) CHECK(o[i] == doctest::Approx(odd[i]));
}

TEST_CASE("a sweep point equals a direct diagonalization") {
  const ModelParams base{1.0, 1.3, 0.7, 0.0, 0.0};
  SweepOptions opt;
  opt.k = 10;
  opt.threads = 3;
  const Truncation t{60};
  const auto sw = sweep_spectrum(base, {CouplingSchedule::Vary::Locked, 0.0, 1.0, 0.25}, t, opt);
  REQUIRE(sw.points.size() == 5);
  for (const auto& pt : sw.points) {
    for (Parity par : {Parity::Even, Parity::Odd}) {
      const ModelParams p{1.0, 1.3, 0.7, pt.g_1, pt.g_2};
      const auto d = eigvalsh(expand_dense(build_parity_blocks(p, par, t)));
      for (int i = 0; i < 10; ++i) CHECK(pt.at(par).energies[i] == doctest::Approx(d(i)));
    }
  }
}

TEST_CASE("sweep continuity") {
  const ModelParams base{1.0, 1.3, 0.7, 0.0, 0.0};
  SweepOptions opt;
  opt.k = 12;
  opt.keep_vectors = false;
  const auto sw = sweep_spectrum(base, {CouplingSchedule::Vary::Locked, 0.0, 0.8, 0.01},
                                 Truncation{60}, opt);
  for (Parity par : {Parity::Even, Parity::Odd}) {
    double max_slope = 0.0;
    for (std::size_t p = 0; p + 1 < sw.points.size(); ++p)
      for (std::size_t i = 0; i < opt.k; ++i)
        max_slope = std::max(max_slope, std::abs(sw.points[p + 1].at(par).energies[i] -
                                                 sw.points[p].at(par).energies[i]) / 0.01);
    for (std::size_t p = 0; p + 1 < sw.points.size(); ++p)
      for (std::size_t i = 0; i < opt.k; ++i)
        CHECK(std::abs(sw.points[p + 1].at(par).energies[i] - sw.points[p].at(par).energies[i]) <=
              10 * 0.01 * max_slope);
    CHECK(max_slope < 10.0);
  }
}

TEST_CASE("too small a truncation is reported") {
  const ModelParams base{1.0, 1.3, 0.7, 0.0, 0.0};
  SweepOptions opt;
  opt.k = 20;
  CHECK_THROWS_AS(sweep_spectrum(base, {CouplingSchedule::Vary::Locked, 3.0, 3.0, 0.1},
                                 Truncation{12}, opt),
                  TruncationInsufficient);
  opt.k = 4;
  opt.verify_doubling = true;
  CHECK_NOTHROW(sweep_spectrum(base, {CouplingSchedule::Vary::Locked, 0.5, 0.6, 0.1},
                               Truncation{60}, opt));
}

TEST_CASE("toy avoided crossing is not a crossing") {
  const auto sw = toy_sweep(0.1, -2.0, 2.0, 0.5);
  const auto rec = detect_crossings(sw, Parity::Even, 0.05, 0.05);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].kind == CrossingKind::AvoidedOrUnresolved);
  CHECK(rec[0].g_lo == doctest::Approx(-0.5));
  CHECK(rec[0].g_hi == doctest::Approx(0.5));
  CHECK(rec[0].min_gap == doctest::Approx(0.2));

  // with a wider gap and a fine grid, the continuation is the identity
  CHECK(detect_crossings(toy_sweep(0.5, -2.0, 2.0, 0.05), Parity::Even).empty());
  const auto labels = track_branches(toy_sweep(0.5, -2.0, 2.0, 0.05), Parity::Even);
  CHECK(labels.back()[0] == 0);
}

TEST_CASE("exact crossings between exchange sectors of identical qubits") {
  // The singlet |n>(|eg> - |ge>)/sqrt2 decouples at E = n and crosses the
  // exchange-symmetric branches.
  const ModelParams base{1.0, 1.0, 1.0, 0.0, 0.0};
  SweepOptions opt;
  opt.k = 8;
  opt.parities = {Parity::Even};
  const auto sw = sweep_spectrum(base, {CouplingSchedule::Vary::Locked, 0.0, 1.0, 0.02},
                                 Truncation{50}, opt);
  const auto rec = detect_crossings(sw, Parity::Even);
  const auto found = std::count_if(rec.begin(), rec.end(), [](const CrossingRecord& r) {
    return r.kind == CrossingKind::Crossing;
  });
  CHECK(found >= 1);
  for (const auto& r : rec) {
    if (r.kind == CrossingKind::Crossing) CHECK(r.overlap_same < 1e-8);
  }

  // tracked labels follow the swap
  const auto labels = track_branches(sw, Parity::Even);
  bool swapped = false;
  for (std::size_t p = 0; p < labels.size(); ++p)
    for (std::size_t i = 0; i < opt.k; ++i) swapped |= labels[p][i] != i;
  CHECK(swapped);
}

TEST_CASE("sweep without eigenvectors cannot be scanned") {
  SweepOptions opt;
  opt.k = 3;
  opt.keep_vectors = false;
  const auto sw = sweep_spectrum(ModelParams{1.0, 1.0, 1.0, 0.0, 0.0},
                                 {CouplingSchedule::Vary::Locked, 0.0, 0.2, 0.1}, Truncation{10},
                                 opt);
  CHECK_THROWS_AS(detect_crossings(sw, Parity::Even), std::invalid_argument);
}

TEST_CASE("deep-strong-coupling branches without qubit splitting") {
  const ModelParams p{1.0, 0.0, 0.0, 1.7, 0.6};
  const auto ps = dsc_perturbative_spectrum(p, 5);
  CHECK(ps.complete());
  for (const auto& l : ps.levels) {
    CHECK(*l.shift == 0.0);
    const double g = l.branch == 1 ? 2.3 : 1.1;
    CHECK(*l.total() == doctest::Approx(l.m - g * g));
  }

  // every eigenvalue of the full Hamiltonian is one of the two branches,
  // once per parity
  const Truncation t{120};
  const auto full = eigh(build_full(p, t));
  const auto ok = converged_mask(full, 8);
  std::vector<double> levels;
  for (std::size_t i = 0; i < full.size() && levels.size() < 16; ++i)
    if (ok[i]) levels.push_back(full.values(static_cast<Eigen::Index>(i)));
  std::vector<double> expect;
  for (int m = 0; m < 10; ++m)
    for (double g2 : {2.3 * 2.3, 1.1 * 1.1}) expect.insert(expect.end(), 2, m - g2);
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < levels.size(); ++i) CHECK(levels[i] == doctest::Approx(expect[i]));
}

TEST_CASE("second-order shifts shrink with coupling") {
  double prev = INFINITY;
  for (int i = 0; i <= 20; ++i) {
    const double g = 2.0 + 0.1 * i;
    const double e = std::abs(second_order_correction({1.0, 1.3, 0.7, g, g}, 0, +1));
    CHECK(e < prev);
    prev = e;
  }
  prev = INFINITY;
  for (double g : {2.0, 3.0, 4.0, 6.0}) {
    const double e = std::abs(second_order_correction({1.0, 1.3, 0.7, g, g}, 0, +1));
    CHECK(e < prev);
    prev = e;
    // With g1 = g2 the second branch of level m is degenerate with the first
    // branch of level m + 4g^2 whenever that is an integer.
    CHECK_THROWS_AS(second_order_correction({1.0, 1.3, 0.7, g, g}, 0, -1), SmallDenominator);
  }
}

TEST_CASE("resonant levels are reported as absent") {
  const auto ps = dsc_perturbative_spectrum({1.0, 1.3, 0.7, 2.0, 2.0}, 3);
  CHECK_FALSE(ps.complete());
  for (const auto& l : ps.levels) CHECK(l.shift.has_value() == (l.branch == 1));
  CHECK(ps.sorted_totals().size() == 4);
  CHECK(ps.n_cut >= 3 + 80);
}

TEST_CASE("perturbative branches track the numerical spectrum") {
  const ModelParams p{1.0, 1.3, 0.7, 2.6, 2.3};
  const auto ps = dsc_perturbative_spectrum(p, 8);
  REQUIRE(ps.complete());
  const auto totals = ps.sorted_totals();
  for (Parity par : {Parity::Even, Parity::Odd}) {
    const auto s = lowest_converged(p, par, Truncation{200}, 6, false);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(s.energies[i] - totals[i]) < 0.05);
  }

  DscOptions printed;
  printed.form = SecondOrderForm::Printed;
  const double a = second_order_correction(p, 2, +1, printed);
  const double b = second_order_correction(p, 2, +1);
  CHECK(std::isfinite(a));
  CHECK(a != doctest::Approx(b));

  DscOptions fixed;
  fixed.n_cut = 150;
  CHECK(second_order_correction(p, 2, +1, fixed) == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("RWA comparison") {
  const auto zero = rwa_relative_error({1.0, 1.2, 0.8, 0.0, 0.0}, Truncation{40}, 20);
  for (double e : zero.rel_error) CHECK(e <= 1e-14);
  CHECK(zero.mean_rel_error <= 1e-14);

  const auto weak = rwa_relative_error({1.0, 1.0, 1.0, 0.02, 0.02}, Truncation{40}, 20);
  CHECK(weak.ground_rel_error < 1e-3);
  CHECK(weak.e_full.size() == 20);
  for (std::size_t i = 1; i < 20; ++i) CHECK(weak.e_full[i] >= weak.e_full[i - 1]);
}
