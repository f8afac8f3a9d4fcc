#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rabi2q/model.hpp"

namespace rabi2q {

/// Real symmetric matrix; every constructor below fills both triangles
/// explicitly, so the result equals its transpose exactly.
using SymmetricMatrix = Eigen::MatrixXd;

/// H+ or H- in its parity chain: 2x2 diagonal blocks D_j on the diagonal and
/// O_j = sqrt(j) [[g1, g2], [g2, g1]] on the first off-diagonal.
struct BlockTridiagonal {
  Parity parity = Parity::Even;
  std::vector<Eigen::Vector2d> diagonal;      // (d+, d-) of D_j, j = 0..n_max
  std::vector<Eigen::Matrix2d> off_diagonal;  // O_j for j = 1..n_max, stored at j-1

  std::size_t blocks() const { return diagonal.size(); }
  std::size_t dim() const { return 2 * diagonal.size(); }
};

BlockTridiagonal build_parity_blocks(const ModelParams& params, Parity parity,
                                     const Truncation& trunc);

SymmetricMatrix expand_dense(const BlockTridiagonal& blocks);

/// H in the product basis |n,q1,q2>, n <= n_max, with a + a^dag truncated.
SymmetricMatrix build_full(const ModelParams& params, const Truncation& trunc);

/// Diagonal +-1 matrix of sz1 sz2 (-1)^{a^dag a}.
SymmetricMatrix build_parity_operator(const Truncation& trunc);

/// Free terms plus sum_j g_j (a s+^(j) + a^dag s-^(j)).
SymmetricMatrix build_rwa_full(const ModelParams& params, const Truncation& trunc);

/// Diagonal matrix of N = a^dag a + (sz1 + sz2)/2 + 1, conserved by the RWA
/// Hamiltonian.
SymmetricMatrix build_excitation_number(const Truncation& trunc);

/// Row j of the result is the product-basis index of chain element j, so
/// H_full(perm, perm) reproduces expand_dense(H+-).
std::vector<std::size_t> chain_to_product(Parity parity, const Truncation& trunc);

/// One excitation sector of the RWA Hamiltonian in the frame rotating with
/// w_f N. The sector label N is the photon number of the |N,g,g> member; the
/// basis is {|N-2,e,e>, |N-1,e,g>, |N-1,g,e>, |N,g,g>} with members of negative
/// photon number dropped, so N = 0 gives a 1x1 block and N = 1 a 3x3 block.
/// Diagonal entries are +-D1 +-D2 with D_j = (w_j - w_f)/2.
struct RwaExcitationBlock {
  int sector = 0;
  std::vector<ProductState> basis;
  SymmetricMatrix matrix;

  /// Energy offset w_f (N - 1) that the rotating frame removes.
  double frame_offset() const { return static_cast<double>(sector) - 1.0; }
};

RwaExcitationBlock build_rwa_excitation_block(const ModelParams& params, int sector);

/// Excitation sector of a product state, a^dag a + (sz1 + sz2)/2 + 1.
int excitation_sector(const ProductState& s);

}  // namespace rabi2q
