#include "rabi2q/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rabi2q {

const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }
const char* to_string(Qubit q) { return q == Qubit::e ? "e" : "g"; }

ModelParams ModelParams::from_absolute(double omega_f, double omega_1, double omega_2, double g_1,
                                       double g_2) {
  if (!(omega_f > 0.0)) throw std::invalid_argument("omega_f must be positive");
  return ModelParams{omega_f, omega_1 / omega_f, omega_2 / omega_f, g_1 / omega_f, g_2 / omega_f};
}

void ModelParams::validate() const {
  for (double v : {omega_f, omega_1, omega_2, g_1, g_2}) {
    if (!std::isfinite(v)) throw std::invalid_argument("model parameters must be finite");
  }
  if (!(omega_f > 0.0)) throw std::invalid_argument("omega_f must be positive");
  if (omega_1 < 0.0 || omega_2 < 0.0) {
    throw std::invalid_argument("qubit frequencies must be non-negative");
  }
}

void Truncation::validate() const {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
}

namespace {

// Within-block order of the two members of chain block n.
bool block_is_diagonal_pair(Parity parity, int n) {
  // Even chain: gg/ee at even n, eg/ge at odd n; the odd chain is the reverse.
  const bool even_n = n % 2 == 0;
  return parity == Parity::Even ? even_n : !even_n;
}

}  // namespace

ProductState chain_state(Parity parity, std::size_t j) {
  const int n = static_cast<int>(j / 2);
  const bool second = j % 2 == 1;
  if (block_is_diagonal_pair(parity, n)) {
    return second ? ProductState{n, Qubit::e, Qubit::e} : ProductState{n, Qubit::g, Qubit::g};
  }
  return second ? ProductState{n, Qubit::g, Qubit::e} : ProductState{n, Qubit::e, Qubit::g};
}

Parity parity_of(const ProductState& s) {
  const int photon = s.n % 2 == 0 ? 1 : -1;
  return sigma_z(s.q1) * sigma_z(s.q2) * photon == 1 ? Parity::Even : Parity::Odd;
}

ChainIndex chain_index_of(const ProductState& s) {
  const Parity p = parity_of(s);
  const bool second = s.q1 == s.q2 ? s.q1 == Qubit::e : s.q1 == Qubit::g;
  return {p, 2 * static_cast<std::size_t>(s.n) + (second ? 1 : 0)};
}

std::size_t product_index(const ProductState& s) {
  return 4 * static_cast<std::size_t>(s.n) + pair_index(s.q1, s.q2);
}

ProductState product_state(std::size_t index) {
  const std::size_t pair = index % 4;
  return {static_cast<int>(index / 4), pair < 2 ? Qubit::e : Qubit::g,
          pair % 2 == 0 ? Qubit::e : Qubit::g};
}

}  // namespace rabi2q
