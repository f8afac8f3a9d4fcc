#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rabi2q/model.hpp"

namespace rabi2q {

/// Parity-chain vector built block by block from the four-term recurrence
///
///   v_1 = -O_1^{-1} (D_0 - xi) v_0
///   v_j = -O_j^{-1} (D_{j-1} - xi) v_{j-1} - sqrt((j-1)/j) v_{j-2}.
///
/// Forward iteration picks up the growing solution, so the sequence is cut
/// after `kept` blocks, at the cutoff that minimizes the relative residual
/// of the zero-padded vector. Blocks past the cutoff are zero.
struct RecurrenceState {
  Parity parity = Parity::Even;
  double xi = 0.0;
  std::vector<Eigen::Vector2d> v;  // normalized, n_max + 1 blocks
  std::size_t kept = 0;
  /// log of the norm the raw recurrence had before normalization, seed
  /// normalized to one.
  double log_norm = 0.0;
  /// Relative residual predicted from the two boundary rows at the cutoff.
  double boundary_residual = 0.0;

  int n_max() const { return static_cast<int>(v.size()) - 1; }
  Eigen::VectorXd chain_vector() const;
};

/// Throws SingularCoupling for |g1| == |g2| and OverflowDetected when a block
/// leaves the representable range between two rescalings (xi far outside
/// the spectrum).
RecurrenceState recurrence_eigenstate_la(const ModelParams& params, Parity parity, double xi,
                                         const Eigen::Vector2d& v0, int n_max);

/// The member of the two-dimensional seed space with the smallest relative
/// residual over all cutoffs: a generalized 2x2 eigenproblem per cutoff.
RecurrenceState decaying_solution(const ModelParams& params, Parity parity, double xi, int n_max);

/// ||(H_pm - xi) v|| / ||v|| on the chain truncated at state.n_max().
double residual(const ModelParams& params, Parity parity, const RecurrenceState& state);
double residual(const ModelParams& params, Parity parity, double xi, const Eigen::VectorXd& chain);

/// Coefficients c_k of the power series Phi_1(z) = sum_k c_k z^k solving the
/// Bargmann five-term recurrence
///
///   a0(j) c_j + a1(j) c_{j-1} + a2(j) c_{j-2} + a3(j) c_{j-3} + a4(j) c_{j-4} = 0,
///
/// with c_0 = 1 and c_1 supplied. Terms with negative index are zero, so
/// j = 2 and j = 3 are the startup relations. sigma is the recurrence sign,
/// equal to minus the parity eigenvalue.
///
/// Values are stored as mantissa * exp(log_scale[k]); the running window is
/// rescaled by its largest entry every 32 steps.
struct BargmannCoefficients {
  Parity parity = Parity::Even;
  int sigma = -1;
  double chi = 0.0;
  std::vector<double> c;
  std::vector<double> log_scale;
  std::vector<std::array<double, 5>> alpha;  // alpha[j] = (a0..a4)(j); rows 0, 1 unused
  /// Companion Phi_2 coefficients e_k, k < j_max, on the same scale as c_k:
  ///   e_k = [(k w_f - chi) c_k + g+ (c_{k-1} + (k+1) c_{k+1})] / gamma_k
  /// with gamma_k = (w2 - sigma w1)/2 for even k and (w2 + sigma w1)/2 for odd k.
  std::vector<double> phi2;

  int j_max() const { return static_cast<int>(c.size()) - 1; }
  double coefficient(int k) const;
  double phi2_coefficient(int k) const;
};

/// Throws StepSingular when a0(j) vanishes, i.e. g+ g- = 0 or
/// w1 = sigma (-1)^j w2 for some 2 <= j <= j_max, or a gamma_k vanishes.
BargmannCoefficients bargmann_coefficients(const ModelParams& params, Parity parity, double chi,
                                           int j_max, double c1);

/// Minimal (decaying) solution of the same recurrence with c_0 = 1: the
/// coefficients c_1..c_jmax solve rows j = 2..j_max + 4 in the least-squares
/// sense with c_k = 0 beyond j_max, in Fock scaling c_k sqrt(k!). c_1 is an
/// output here.
BargmannCoefficients bargmann_minimal_coefficients(const ModelParams& params, Parity parity,
                                                   double chi, int j_max);

/// Largest relative defect |sum_i a_i c_{j-i}| / sum_i |a_i c_{j-i}| over all j.
double recurrence_defect(const BargmannCoefficients& b);

/// c_1 / c_0 read off a parity-chain eigenvector.
double bargmann_seed_from_chain(Parity parity, const Eigen::VectorXd& chain);

/// Fock-basis parity-chain vector (normalized) with n_max + 1 photon levels,
/// assembled from the rotated components
///   ++ : c_k sqrt(k!),  +- : e_k sqrt(k!),
///   -- : p (-1)^k c_k sqrt(k!),  -+ : p (-1)^k e_k sqrt(k!)
/// where p is the parity eigenvalue, then rotated back by
/// exp(-i sy pi/4) on each qubit. Requires n_max < j_max.
Eigen::VectorXd bargmann_to_chain(const BargmannCoefficients& b, int n_max);

/// Identical qubits (w1 = w2 = w0, so g- drops out of the even-odd split):
///   c_j = (1/j) [alpha_j c_{j-1} - (1 - delta_{1j}) c_{j-2}],
///   alpha_j = ([chi - (j-1) w_f]^2 - [(1 + sigma (-1)^j)/2]^2 w0^2) / (g+ [chi - (j-1) w_f]).
struct IdenticalBargmann {
  Parity parity = Parity::Even;
  int sigma = -1;
  double chi = 0.0;
  std::vector<double> c;          // c_0..c_jmax, mantissas
  std::vector<double> log_scale;  // c_k = c[k] * exp(log_scale[k])
  std::vector<double> alpha;      // alpha[j], index 0 unused
  std::vector<double> ratio;      // ratio[j] = alpha_j / alpha_{j+1}, j < j_max

  double coefficient(int k) const;
};

/// Throws StepSingular when chi = (j-1) w_f for some j <= j_max + 1, or g+ = 0.
IdenticalBargmann bargmann_identical_coefficients(double omega0, double g_plus, Parity parity,
                                                  double chi, int j_max);

/// Largest relative defect of the three-term relation over all j.
double recurrence_defect(const IdenticalBargmann& b);

}  // namespace rabi2q
