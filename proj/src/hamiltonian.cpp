#include "rabi2q/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace rabi2q {

BlockTridiagonal build_parity_blocks(const ModelParams& params, Parity parity,
                                     const Truncation& trunc) {
  trunc.validate();
  const double s = sign(parity);
  BlockTridiagonal out;
  out.parity = parity;
  out.diagonal.reserve(trunc.n_max + 1);
  out.off_diagonal.reserve(trunc.n_max);
  for (int j = 0; j <= trunc.n_max; ++j) {
    const double alt = j % 2 == 0 ? 1.0 : -1.0;
    // d+ = j w_f -+ [(-1)^j w_1 +- w_2]/2, d- = j w_f +- [(-1)^j w_1 +- w_2]/2
    const double bracket = 0.5 * (alt * params.omega_1 + s * params.omega_2);
    out.diagonal.emplace_back(j - s * bracket, j + s * bracket);
    if (j >= 1) {
      Eigen::Matrix2d o;
      o << params.g_1, params.g_2, params.g_2, params.g_1;
      out.off_diagonal.push_back(std::sqrt(static_cast<double>(j)) * o);
    }
  }
  return out;
}

SymmetricMatrix expand_dense(const BlockTridiagonal& blocks) {
  const auto n = static_cast<Eigen::Index>(blocks.dim());
  SymmetricMatrix h = SymmetricMatrix::Zero(n, n);
  for (std::size_t j = 0; j < blocks.blocks(); ++j) {
    const auto r = static_cast<Eigen::Index>(2 * j);
    h(r, r) = blocks.diagonal[j](0);
    h(r + 1, r + 1) = blocks.diagonal[j](1);
    if (j >= 1) {
      const Eigen::Matrix2d& o = blocks.off_diagonal[j - 1];
      h.block<2, 2>(r - 2, r) = o;
      h.block<2, 2>(r, r - 2) = o.transpose();
    }
  }
  return h;
}

namespace {

double free_energy(const ModelParams& p, const ProductState& s) {
  return s.n + 0.5 * (p.omega_1 * sigma_z(s.q1) + p.omega_2 * sigma_z(s.q2));
}

Qubit flip(Qubit q) { return q == Qubit::e ? Qubit::g : Qubit::e; }

void set_symmetric(SymmetricMatrix& h, std::size_t a, std::size_t b, double v) {
  h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
  h(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
}

template <typename Coupling>
SymmetricMatrix build_product_basis(const ModelParams& params, const Truncation& trunc,
                                    Coupling&& coupling) {
  trunc.validate();
  const auto dim = trunc.full_dim();
  SymmetricMatrix h = SymmetricMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const ProductState s = product_state(i);
    h(i, i) = free_energy(params, s);
    if (s.n == trunc.n_max) continue;
    // Couple |n,q1,q2> to |n+1, ...> with one qubit flipped.
    const double amp = std::sqrt(static_cast<double>(s.n + 1));
    const ProductState up1{s.n + 1, flip(s.q1), s.q2};
    const ProductState up2{s.n + 1, s.q1, flip(s.q2)};
    set_symmetric(h, i, product_index(up1), amp * coupling(params.g_1, s.q1));
    set_symmetric(h, i, product_index(up2), amp * coupling(params.g_2, s.q2));
  }
  return h;
}

}  // namespace

SymmetricMatrix build_full(const ModelParams& params, const Truncation& trunc) {
  return build_product_basis(params, trunc, [](double g, Qubit) { return g; });
}

SymmetricMatrix build_rwa_full(const ModelParams& params, const Truncation& trunc) {
  // a^dag s- lowers the qubit while adding a photon: only e -> g survives.
  return build_product_basis(params, trunc,
                             [](double g, Qubit from) { return from == Qubit::e ? g : 0.0; });
}

SymmetricMatrix build_parity_operator(const Truncation& trunc) {
  trunc.validate();
  const auto dim = trunc.full_dim();
  SymmetricMatrix p = SymmetricMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) p(i, i) = sign(parity_of(product_state(i)));
  return p;
}

SymmetricMatrix build_excitation_number(const Truncation& trunc) {
  trunc.validate();
  const auto dim = trunc.full_dim();
  SymmetricMatrix n = SymmetricMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) n(i, i) = excitation_sector(product_state(i));
  return n;
}

std::vector<std::size_t> chain_to_product(Parity parity, const Truncation& trunc) {
  std::vector<std::size_t> perm(trunc.chain_dim());
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = product_index(chain_state(parity, j));
  return perm;
}

int excitation_sector(const ProductState& s) {
  return s.n + (sigma_z(s.q1) + sigma_z(s.q2)) / 2 + 1;
}

RwaExcitationBlock build_rwa_excitation_block(const ModelParams& params, int sector) {
  if (sector < 0) throw std::invalid_argument("excitation sector must be non-negative");
  const double d1 = 0.5 * (params.omega_1 - 1.0);
  const double d2 = 0.5 * (params.omega_2 - 1.0);
  const int n = sector;
  // Printed 4x4 layout before dropping members with negative photon number.
  const ProductState members[4] = {
      {n - 2, Qubit::e, Qubit::e}, {n - 1, Qubit::e, Qubit::g},
      {n - 1, Qubit::g, Qubit::e}, {n, Qubit::g, Qubit::g}};
  const double diag[4] = {d1 + d2, d1 - d2, -d1 + d2, -d1 - d2};
  const double r1 = n >= 1 ? std::sqrt(static_cast<double>(n - 1)) : 0.0;
  const double r0 = std::sqrt(static_cast<double>(n));
  Eigen::Matrix4d full;
  full << diag[0], params.g_2 * r1, params.g_1 * r1, 0.0,
          params.g_2 * r1, diag[1], 0.0, params.g_1 * r0,
          params.g_1 * r1, 0.0, diag[2], params.g_2 * r0,
          0.0, params.g_1 * r0, params.g_2 * r0, diag[3];

  RwaExcitationBlock out;
  out.sector = sector;
  std::vector<int> keep;
  for (int i = 0; i < 4; ++i) {
    if (members[i].n >= 0) {
      keep.push_back(i);
      out.basis.push_back(members[i]);
    }
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  out.matrix = SymmetricMatrix::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) out.matrix(a, b) = full(keep[a], keep[b]);
  return out;
}

}  // namespace rabi2q
