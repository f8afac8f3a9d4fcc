#pragma once

#include <cstddef>
#include <string>

namespace rabi2q {

/// Qubit level. The sigma_z convention is fixed: e -> +1, g -> -1. This is
/// what puts |0,g,g> in the even parity chain.
enum class Qubit { g, e };

enum class Parity { Even, Odd };

constexpr int sigma_z(Qubit q) { return q == Qubit::e ? 1 : -1; }
constexpr int sign(Parity p) { return p == Parity::Even ? 1 : -1; }
constexpr Parity other(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

const char* to_string(Parity p);
const char* to_string(Qubit q);

/// Frequencies and couplings of the two-qubit Rabi Hamiltonian
///
///   H = w_f a^dag a + (w_1 sz1 + w_2 sz2)/2 + (a + a^dag)(g_1 sx1 + g_2 sx2).
///
/// omega_1..g_2 are stored in units of omega_f; omega_f itself is only the
/// energy unit and every library result is expressed in it.
struct ModelParams {
  double omega_f = 1.0;
  double omega_1 = 0.0;
  double omega_2 = 0.0;
  double g_1 = 0.0;
  double g_2 = 0.0;

  /// Builds parameters from absolute values, dividing through by omega_f once.
  static ModelParams from_absolute(double omega_f, double omega_1, double omega_2, double g_1,
                                   double g_2);

  double g_plus() const { return g_1 + g_2; }
  double g_minus() const { return g_1 - g_2; }

  /// Throws std::invalid_argument unless omega_f > 0, omega_1, omega_2 >= 0 and
  /// every field is finite.
  void validate() const;
};

/// Photon-number cutoff. Each parity chain then has 2(n_max+1) states and the
/// product basis 4(n_max+1).
struct Truncation {
  int n_max = 1;

  std::size_t chain_dim() const { return 2 * static_cast<std::size_t>(n_max + 1); }
  std::size_t full_dim() const { return 4 * static_cast<std::size_t>(n_max + 1); }
  void validate() const;
};

struct ProductState {
  int n = 0;
  Qubit q1 = Qubit::g;
  Qubit q2 = Qubit::g;

  friend bool operator==(const ProductState&, const ProductState&) = default;
};

struct ChainIndex {
  Parity parity = Parity::Even;
  std::size_t j = 0;

  friend bool operator==(const ChainIndex&, const ChainIndex&) = default;
};

/// j-th element of the even or odd parity chain
///   even: |0gg>,|0ee>,|1eg>,|1ge>,|2gg>,|2ee>,...
///   odd:  |0eg>,|0ge>,|1gg>,|1ee>,|2eg>,|2ge>,...
ProductState chain_state(Parity parity, std::size_t j);

/// Eigenvalue of sz1 sz2 (-1)^n on a product state.
Parity parity_of(const ProductState& s);

/// Inverse of chain_state.
ChainIndex chain_index_of(const ProductState& s);

/// Position of |n,q1,q2> in the product basis |n> (x) |q1> (x) |q2>; the qubit
/// pair runs over (ee, eg, ge, gg).
std::size_t product_index(const ProductState& s);
ProductState product_state(std::size_t index);

/// Qubit-pair index in the (ee, eg, ge, gg) order.
constexpr std::size_t pair_index(Qubit q1, Qubit q2) {
  return 2 * (q1 == Qubit::g ? 1 : 0) + (q2 == Qubit::g ? 1 : 0);
}

}  // namespace rabi2q
