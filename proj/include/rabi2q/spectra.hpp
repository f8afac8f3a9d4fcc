#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rabi2q/model.hpp"

namespace rabi2q {

/// Which coupling a sweep varies. Locked moves g1 and keeps g2 == g1.
struct CouplingSchedule {
  enum class Vary { G1, G2, Locked };

  Vary vary = Vary::Locked;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.01;

  /// start, start + step, ... up to stop (inclusive within step/1000).
  std::vector<double> values() const;
  ModelParams at(const ModelParams& base, double value) const;
};

struct SweepOptions {
  std::size_t k = 20;
  std::vector<Parity> parities{Parity::Even, Parity::Odd};
  bool keep_vectors = true;
  /// Worker threads for independent sweep points; 0 picks the hardware count.
  unsigned threads = 0;
  /// Eigenvectors with more weight than this on the top two photon levels
  /// are rejected.
  double guard_tol = 1e-8;
  /// Re-solve every point at 2 n_max and require each reported level to move
  /// by less than doubling_tol.
  bool verify_doubling = false;
  double doubling_tol = 1e-6;
};

/// The k lowest converged levels of one parity block; `vectors` holds the
/// matching chain eigenvectors as columns when they were kept.
struct ParitySpectrum {
  std::vector<double> energies;
  Eigen::MatrixXd vectors;
};

struct SweepPoint {
  double coordinate = 0.0;
  double g_1 = 0.0;
  double g_2 = 0.0;
  std::array<std::optional<ParitySpectrum>, 2> spectra;

  const ParitySpectrum& at(Parity p) const;
};

struct SpectrumSweep {
  ModelParams base;
  Truncation trunc;
  std::size_t k = 0;
  std::vector<SweepPoint> points;
};

/// Lowest k levels of H+ or H- passing the truncation guard. Throws
/// TruncationInsufficient when fewer than k pass.
ParitySpectrum lowest_converged(const ModelParams& params, Parity parity, const Truncation& trunc,
                                std::size_t k, bool keep_vectors = true, double guard_tol = 1e-8);

SpectrumSweep sweep_spectrum(const ModelParams& base, const CouplingSchedule& schedule,
                             const Truncation& trunc, const SweepOptions& options);

/// Continuation labels of the sorted levels along the sweep: labels[p][i] is
/// the branch that sorted level i belongs to at point p. Consecutive points
/// are matched greedily on |<v_a(p)|v_b(p+1)>|, ties broken by energy
/// proximity.
std::vector<std::vector<std::size_t>> track_branches(const SpectrumSweep& sweep, Parity parity);

enum class CrossingKind { Crossing, AvoidedOrUnresolved };

const char* to_string(CrossingKind k);

struct CrossingRecord {
  Parity parity = Parity::Even;
  std::size_t branch_lo = 0;  // sorted levels (branch_lo, branch_lo + 1)
  double g_lo = 0.0;          // bracketing sweep coordinates
  double g_hi = 0.0;
  double min_gap = 0.0;
  double overlap_same = 0.0;  // |<v_i(before)|v_i(after)>|
  double overlap_swap = 0.0;  // |<v_i(before)|v_{i+1}(after)>|
  CrossingKind kind = CrossingKind::AvoidedOrUnresolved;
};

/// Scans every adjacent pair of sorted levels for interior minima of their
/// gap. A minimum is reported when the gap is below gap_tol or the
/// eigenvectors swap between the neighbouring sweep points; it is a
/// Crossing only when both hold, where swapping means
///   |<v_i(before)|v_{i+1}(after)>| > 1 - overlap_tol and
///   |<v_i(before)|v_i(after)>| < overlap_tol.
std::vector<CrossingRecord> detect_crossings(const SpectrumSweep& sweep, Parity parity,
                                             double gap_tol = 0.05, double overlap_tol = 0.05);

/// Second-order correction used on the deep-strong-coupling branches.
///
/// Derived: eps_{2,+-}(m) = 1/4 sum_k [w1^2 <k|D(2g1)|m>^2 + w2^2 <k|D(2g2)|m>^2]
///                                   / (w_f (k - m) +- 4 g1 g2 / w_f),
/// the non-degenerate second-order shift of |m> under -(w1 sx1 + w2 sx2)/2,
/// summed over every k including k = m.
///
/// Printed: the literal term-by-term reading with the state index m held
/// fixed, no 1/4 prefactor, the k = m term excluded and denominators
/// w_f (m - k) +- 4 g1 g2 / w_f.
enum class SecondOrderForm { Derived, Printed };

struct DscOptions {
  /// Last Fock index summed; negative selects m + 80 plus a displacement
  /// margin, extended until terms drop below 1e-12.
  int n_cut = -1;
  SecondOrderForm form = SecondOrderForm::Derived;
  double denominator_tol = 1e-6;
};

/// eps_{2,+} for branch_sign = +1, eps_{2,-} for -1. Throws SmallDenominator
/// when a term with a nonzero numerator has |denominator| < denominator_tol.
double second_order_correction(const ModelParams& params, int m, int branch_sign,
                               const DscOptions& options = {});

struct PerturbativeLevel {
  int m = 0;
  int branch = 1;  // 1: w_f m - g+^2/w_f, 2: w_f m - g-^2/w_f
  double zeroth = 0.0;
  /// Additive second-order shift, -eps_{2,+-}(m); empty when resonant.
  std::optional<double> shift;

  std::optional<double> total() const;
};

struct PerturbativeSpectrum {
  int m_max = 0;
  int n_cut = 0;  // largest Fock index actually summed
  std::vector<PerturbativeLevel> levels;

  /// Every available total, ascending. Each value stands for a twofold
  /// degenerate pair, one member per parity.
  std::vector<double> sorted_totals() const;
  bool complete() const;
};

PerturbativeSpectrum dsc_perturbative_spectrum(const ModelParams& params, int m_max,
                                               const DscOptions& options = {});

struct RwaComparison {
  std::vector<double> e_full;
  std::vector<double> e_rwa;
  std::vector<double> rel_error;  // |E_rwa - E_full| / |E_full|, ascending pairing
  double mean_rel_error = 0.0;
  double ground_rel_error = 0.0;
};

RwaComparison rwa_relative_error(const ModelParams& params, const Truncation& trunc,
                                 std::size_t k);

}  // namespace rabi2q
