#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rabi2q/model.hpp"
#include "rabi2q/numerics.hpp"

namespace rabi2q {

/// Pure state split into its even- and odd-chain amplitudes.
struct ParityState {
  Truncation trunc;
  ComplexVector even;
  ComplexVector odd;

  static ParityState zero(const Truncation& trunc);
  /// Splits a product-basis vector; components are routed by chain_index_of.
  static ParityState from_product(const ComplexVector& psi, const Truncation& trunc);

  ComplexVector& chain(Parity p) { return p == Parity::Even ? even : odd; }
  const ComplexVector& chain(Parity p) const { return p == Parity::Even ? even : odd; }

  double norm() const;
  double weight(Parity p) const { return chain(p).squaredNorm(); }
  /// Weight on the two highest photon levels, summed over both chains.
  double top_weight() const;
  ComplexVector to_product() const;
};

struct FieldState {
  enum class Kind { Fock, Coherent };
  Kind kind = Kind::Fock;
  int n = 0;
  std::complex<double> alpha{0.0, 0.0};

  static FieldState fock(int n) { return {Kind::Fock, n, {}}; }
  static FieldState coherent(std::complex<double> alpha) { return {Kind::Coherent, 0, alpha}; }
};

/// |field> (x) |q1, q2>, truncated at trunc.n_max and renormalized. Throws
/// TruncationInsufficient when the discarded coherent tail exceeds 1e-12 or
/// a Fock level lies above n_max.
ParityState decompose_initial_state(const FieldState& field, Qubit q1, Qubit q2,
                                    const Truncation& trunc);

double mean_photon_number(const ParityState& s);
/// <(sz1 + sz2)/2>.
double population_inversion(const ParityState& s);
double energy_expectation(const ParityState& s, const ModelParams& params);

/// Qubit-pair state in the (ee, eg, ge, gg) basis.
using DensityMatrix = Eigen::Matrix4cd;

/// Field trace assembled entry by entry from chain amplitudes: with chain
/// positions counted from zero, photon pair (2n, 2n+1) contributes
///   even 4n: |2n,gg>  4n+1: |2n,ee>  4n+2: |2n+1,eg>  4n+3: |2n+1,ge>
///   odd  4n: |2n,eg>  4n+1: |2n,ge>  4n+2: |2n+1,gg>  4n+3: |2n+1,ee>
/// so the 2n terms pair c+_{4n+1}, c-_{4n}, c-_{4n+1}, c+_{4n} and the 2n+1
/// terms pair c-_{4n+3}, c+_{4n+2}, c+_{4n+3}, c-_{4n+2}.
DensityMatrix reduced_density_matrix(const ParityState& s);

/// Natural-log entropy. Eigenvalues in [-1e-10, 0) are clamped to zero;
/// anything below -1e-8 raises InvalidDensityMatrix.
double von_neumann_entropy(const DensityMatrix& rho);

/// Wootters concurrence with the spin flip taken in the (ee, eg, ge, gg) basis.
double concurrence(const DensityMatrix& rho);

struct Sample {
  double t = 0.0;
  double mean_n = 0.0;
  double s_z = 0.0;
  double entropy = 0.0;
  double concurrence = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  double weight_even = 0.0;
  double weight_odd = 0.0;
  double top_weight = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<std::size_t> state_index;  // samples whose state was kept
  std::vector<ParityState> states;
};

struct EvolveOptions {
  /// Keep every k-th state (0 keeps none).
  std::size_t keep_state_every = 0;
  /// Maximum weight allowed on the two highest photon levels.
  double guard_tol = 1e-6;
};

/// Eigendecompositions of H+ and H- computed once and reused for every time.
class ParityPropagator {
 public:
  ParityPropagator(const ModelParams& params, const Truncation& trunc);

  ParityState at(const ParityState& s0, double t) const;
  const EigenDecomposition& decomposition(Parity p) const {
    return p == Parity::Even ? even_ : odd_;
  }
  const Truncation& trunc() const { return trunc_; }

 private:
  Truncation trunc_;
  EigenDecomposition even_;
  EigenDecomposition odd_;
};

/// c(t) = exp(-i H_pm t) c(0) on each chain. Times must be strictly
/// increasing. Throws TruncationInsufficient when top_weight exceeds the
/// guard at any output time.
Trajectory evolve_parity(const ParityState& s0, const ModelParams& params,
                         const std::vector<double>& times, const EvolveOptions& options = {});

/// Depressed quartic lambda^4 + c2 lambda^2 + c1 lambda + c0 of one RWA sector.
struct QuarticCoefficients {
  int sector = 0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Closed-form coefficients for sector n >= 2 with D_j = (w_j - w_f)/2:
///   c0 = [n(g1^2 - g2^2) + D1^2 - D2^2][(n-1)(g1^2 - g2^2) + D1^2 - D2^2]
///   c1 = 2(g2^2 D1 + g1^2 D2)
///   c2 = (1 - 2n)(g1^2 + g2^2) - 2(D1^2 + D2^2)
QuarticCoefficients quartic_coefficients(const ModelParams& params, int n);

/// Coefficients of det(h - lambda) for a traceless symmetric 4x4 matrix:
/// c2 = -tr(h^2)/2, c1 = -tr(h^3)/3, c0 = det h.
QuarticCoefficients characteristic_coefficients(const Eigen::Matrix4d& h, int sector = 0);

/// Roots by the resolvent-cubic formulas
///   Q = 27 c1^2 - 72 c0 c2 + 2 c2^3,  q = sqrt(Q^2 - 4 (12 c0 + c2^2)^3),
///   c = [(q + Q)/2]^(1/3),  p = sqrt([12 c0 + (c2 - c)^2] / (3c)),
///   l12 = [p +- sqrt(-p^2 - 2 c2 - 2 c1/p)]/2,  l34 = [-p +- sqrt(-p^2 - 2 c2 + 2 c1/p)]/2
/// in complex arithmetic with principal branches, sorted ascending. When p
/// vanishes and c1 = 0 the biquadratic formula is used instead; p vanishing
/// with c1 != 0 throws DegenerateResolvent.
std::array<double, 4> quartic_roots(const QuarticCoefficients& qc);

enum class RwaBackend { SectorEigensolver, QuarticClosedForm };

/// Evolution under the RWA Hamiltonian by excitation sectors: each sector
/// block picks up exp(-i (N-1) t) exp(-i H_sc t). Sectors cut by the
/// truncation keep only their members with n <= n_max, which is exactly the
/// truncated RWA Hamiltonian. The closed-form backend uses quartic_roots on
/// complete 4x4 sectors and falls back to the eigensolver where the roots
/// are too close to separate eigenvectors.
Trajectory evolve_rwa_closed_form(const ParityState& s0, const ModelParams& params,
                                  const std::vector<double>& times,
                                  RwaBackend backend = RwaBackend::SectorEigensolver,
                                  const EvolveOptions& options = {});

}  // namespace rabi2q
