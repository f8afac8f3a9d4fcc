#include "rabi2q/eigenstates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "rabi2q/errors.hpp"
#include "rabi2q/hamiltonian.hpp"

namespace rabi2q {

namespace {

constexpr int kRescaleEvery = 32;
constexpr double kOverflow = 1e300;

using Seeds = Eigen::Matrix<double, 2, Eigen::Dynamic>;

// Raw recurrence blocks W_0..W_{n_max+1}; true value of block j is
// W[j] * exp(scale[j]). Each column corresponds to one seed.
struct RawRecurrence {
  std::vector<Seeds> w;
  std::vector<double> scale;
};

Eigen::Matrix2d coupling_square(const ModelParams& p, int j) {
  Eigen::Matrix2d o;
  o << p.g_1, p.g_2, p.g_2, p.g_1;
  return static_cast<double>(j) * (o * o);
}

RawRecurrence propagate(const ModelParams& params, Parity parity, double xi, const Seeds& seeds,
                        int n_max) {
  params.validate();
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  const double det = params.g_1 * params.g_1 - params.g_2 * params.g_2;
  if (std::abs(det) <= 1e-14 * (params.g_1 * params.g_1 + params.g_2 * params.g_2) ||
      det == 0.0) {
    throw SingularCoupling("O_j is not invertible for |g1| = |g2|");
  }
  const BlockTridiagonal h = build_parity_blocks(params, parity, Truncation{n_max + 1});

  RawRecurrence out;
  out.w.reserve(n_max + 2);
  out.scale.reserve(n_max + 2);
  Seeds prev2 = Seeds::Zero(2, seeds.cols());
  Seeds prev = seeds;
  double cur = 0.0;
  out.w.push_back(prev);
  out.scale.push_back(cur);
  for (int j = 1; j <= n_max + 1; ++j) {
    const double a = h.diagonal[j - 1](0) - xi;
    const double b = h.diagonal[j - 1](1) - xi;
    Eigen::Matrix2d m;
    m << params.g_1 * a, -params.g_2 * b, -params.g_2 * a, params.g_1 * b;
    m /= std::sqrt(static_cast<double>(j)) * det;
    Seeds next = -m * prev;
    if (j >= 2) next -= std::sqrt((j - 1.0) / j) * prev2;
    const double mag = next.cwiseAbs().maxCoeff();
    if (!std::isfinite(mag) || mag > kOverflow) {
      throw OverflowDetected("recurrence block " + std::to_string(j) +
                             " left the representable range");
    }
    out.w.push_back(next);
    out.scale.push_back(cur);
    prev2 = prev;
    prev = next;
    if (j % kRescaleEvery == 0) {
      const double s = std::max(prev.cwiseAbs().maxCoeff(), prev2.cwiseAbs().maxCoeff());
      if (s > 0.0) {
        prev /= s;
        prev2 /= s;
        cur += std::log(s);
      }
    }
  }
  return out;
}

struct Cutoff {
  int kept_last = 0;       // index J of the last retained block
  double residual = 0.0;   // relative residual of the zero-padded vector
  Eigen::VectorXd mix;     // seed combination
};

// Relative residual of the zero-padded vector cut after block J is
//   sqrt(|O_{J+1} v_{J+1}|^2 + |O_{J+1} v_J|^2) / |v_{0..J}|,
// the second term absent when J = n_max. Minimized over J and over seed
// mixtures through a generalized eigenproblem per J.
Cutoff best_cutoff(const ModelParams& params, const RawRecurrence& raw, int n_max) {
  const auto c = raw.w.front().cols();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(c, c);
  double gram_scale = -std::numeric_limits<double>::infinity();
  Cutoff best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n_max; ++j) {
    const double e = raw.scale[j];
    if (e > gram_scale) {
      if (std::isfinite(gram_scale)) gram *= std::exp(2.0 * (gram_scale - e));
      gram_scale = e;
    }
    const Seeds wj = raw.w[j] * std::exp(e - gram_scale);
    gram += wj.transpose() * wj;

    const Eigen::Matrix2d o2 = coupling_square(params, j + 1);
    const Seeds wn = raw.w[j + 1] * std::exp(raw.scale[j + 1] - gram_scale);
    Eigen::MatrixXd boundary = wn.transpose() * o2 * wn;
    if (j < n_max) boundary += wj.transpose() * o2 * wj;
    if (!boundary.allFinite()) continue;

    double lambda = 0.0;
    Eigen::VectorXd mix;
    if (c == 1) {
      lambda = boundary(0, 0) / gram(0, 0);
      mix = Eigen::VectorXd::Ones(1);
    } else {
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(boundary, gram);
      if (ges.info() != Eigen::Success) continue;
      lambda = ges.eigenvalues()(0);
      mix = ges.eigenvectors().col(0).normalized();
    }
    const double r = std::sqrt(std::max(lambda, 0.0));
    if (r < best.residual) {
      best.residual = r;
      best.kept_last = j;
      best.mix = mix;
    }
  }
  if (!std::isfinite(best.residual)) {
    throw OverflowDetected("no cutoff gives a finite residual");
  }
  return best;
}

RecurrenceState assemble(Parity parity, double xi, const RawRecurrence& raw, const Cutoff& cut,
                         int n_max) {
  RecurrenceState s;
  s.parity = parity;
  s.xi = xi;
  s.kept = static_cast<std::size_t>(cut.kept_last) + 1;
  s.boundary_residual = cut.residual;
  double ref = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= cut.kept_last; ++j) ref = std::max(ref, raw.scale[j]);
  s.v.assign(n_max + 1, Eigen::Vector2d::Zero());
  double norm2 = 0.0;
  for (int j = 0; j <= cut.kept_last; ++j) {
    s.v[j] = raw.w[j] * cut.mix * std::exp(raw.scale[j] - ref);
    norm2 += s.v[j].squaredNorm();
  }
  const double norm = std::sqrt(norm2);
  for (auto& b : s.v) b /= norm;
  s.log_norm = ref + std::log(norm);
  return s;
}

}  // namespace

Eigen::VectorXd RecurrenceState::chain_vector() const {
  Eigen::VectorXd out(2 * static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) out.segment<2>(2 * static_cast<Eigen::Index>(j)) = v[j];
  return out;
}

RecurrenceState recurrence_eigenstate_la(const ModelParams& params, Parity parity, double xi,
                                         const Eigen::Vector2d& v0, int n_max) {
  const double n0 = v0.norm();
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw std::invalid_argument("seed v0 must be nonzero");
  Seeds seed = v0 / n0;
  const RawRecurrence raw = propagate(params, parity, xi, seed, n_max);
  return assemble(parity, xi, raw, best_cutoff(params, raw, n_max), n_max);
}

RecurrenceState decaying_solution(const ModelParams& params, Parity parity, double xi, int n_max) {
  const Seeds seeds = Eigen::Matrix2d::Identity();
  const RawRecurrence raw = propagate(params, parity, xi, seeds, n_max);
  return assemble(parity, xi, raw, best_cutoff(params, raw, n_max), n_max);
}

double residual(const ModelParams& params, Parity parity, double xi, const Eigen::VectorXd& chain) {
  if (chain.size() < 4 || chain.size() % 2 != 0) {
    throw std::invalid_argument("chain vector must hold at least two blocks");
  }
  const Truncation trunc{static_cast<int>(chain.size() / 2) - 1};
  const BlockTridiagonal h = build_parity_blocks(params, parity, trunc);
  const auto blocks = static_cast<Eigen::Index>(h.blocks());
  double r2 = 0.0;
  for (Eigen::Index j = 0; j < blocks; ++j) {
    Eigen::Vector2d row = (h.diagonal[j].array() - xi).matrix().cwiseProduct(chain.segment<2>(2 * j));
    if (j >= 1) row += h.off_diagonal[j - 1].transpose() * chain.segment<2>(2 * (j - 1));
    if (j + 1 < blocks) row += h.off_diagonal[j] * chain.segment<2>(2 * (j + 1));
    r2 += row.squaredNorm();
  }
  return std::sqrt(r2) / chain.norm();
}

double residual(const ModelParams& params, Parity parity, const RecurrenceState& state) {
  return residual(params, parity, state.xi, state.chain_vector());
}

namespace {

int recurrence_sign(Parity p) { return -sign(p); }

std::array<double, 5> five_term_alpha(const ModelParams& p, int sigma, double chi, int j) {
  const double s = j % 2 == 0 ? 1.0 : -1.0;
  const double gp = p.g_plus();
  const double gm = p.g_minus();
  const double mp = p.omega_1 - sigma * s * p.omega_2;
  const double pp = p.omega_1 + sigma * s * p.omega_2;
  const double x2 = chi - (j - 2);
  return {j * (j - 1.0) * gp * gm * mp,
          (j - 1.0) * (gm * mp * ((j - 1) - chi) + gp * pp * x2),
          (2.0 * j - 3.0) * gp * gm * mp + pp * (0.25 * mp * mp - x2 * x2),
          gp * pp * x2 - gm * mp * (chi - (j - 3)),
          gp * gm * mp};
}

bool vanishes(double mp, const ModelParams& p) {
  return std::abs(mp) <= 1e-12 * std::max(p.omega_1, p.omega_2) || mp == 0.0;
}

// Converts stored (mantissa, log scale) values to a common scale.
double rel_value(const std::vector<double>& m, const std::vector<double>& ls, int k, double ref) {
  if (k < 0 || k >= static_cast<int>(m.size())) return 0.0;
  return m[k] * std::exp(ls[k] - ref);
}

void fill_phi2(BargmannCoefficients& b, const ModelParams& params) {
  const int j_max = b.j_max();
  const double gp = params.g_plus();
  const double ga = 0.5 * (params.omega_2 - b.sigma * params.omega_1);
  const double gb = 0.5 * (params.omega_2 + b.sigma * params.omega_1);
  b.phi2.resize(j_max);
  for (int k = 0; k < j_max; ++k) {
    const double gamma = k % 2 == 0 ? ga : gb;
    if (vanishes(gamma, params)) {
      throw StepSingular("Phi_2 denominator vanishes at k=" + std::to_string(k));
    }
    const double ref = b.log_scale[k];
    const double num = (k - b.chi) * b.c[k] +
                       gp * (rel_value(b.c, b.log_scale, k - 1, ref) +
                             (k + 1.0) * rel_value(b.c, b.log_scale, k + 1, ref));
    b.phi2[k] = num / gamma;
  }
}

std::array<double, 5> checked_alpha(const ModelParams& params, int sigma, double chi, int j) {
  const double s = j % 2 == 0 ? 1.0 : -1.0;
  if (vanishes(params.omega_1 - sigma * s * params.omega_2, params)) {
    throw StepSingular("a0 vanishes at j=" + std::to_string(j) + " (w1 = +-w2)");
  }
  return five_term_alpha(params, sigma, chi, j);
}

}  // namespace

double BargmannCoefficients::coefficient(int k) const { return c.at(k) * std::exp(log_scale.at(k)); }

double BargmannCoefficients::phi2_coefficient(int k) const {
  return phi2.at(k) * std::exp(log_scale.at(k));
}

BargmannCoefficients bargmann_coefficients(const ModelParams& params, Parity parity, double chi,
                                           int j_max, double c1) {
  params.validate();
  if (j_max < 2) throw std::invalid_argument("j_max must be at least 2");
  if (!std::isfinite(chi) || !std::isfinite(c1)) {
    throw std::invalid_argument("chi and c1 must be finite");
  }
  BargmannCoefficients b;
  b.parity = parity;
  b.sigma = recurrence_sign(parity);
  b.chi = chi;
  const double gpgm = params.g_plus() * params.g_minus();
  if (gpgm == 0.0) throw StepSingular("a0 vanishes: g+ g- = 0");

  b.c = {1.0, c1};
  b.log_scale = {0.0, 0.0};
  b.alpha.assign(2, {0.0, 0.0, 0.0, 0.0, 0.0});
  // window[i] = c_{j-1-i} on the running scale
  std::array<double, 4> window{c1, 1.0, 0.0, 0.0};
  double cur = 0.0;
  for (int j = 2; j <= j_max; ++j) {
    const auto a = checked_alpha(params, b.sigma, chi, j);
    b.alpha.push_back(a);
    const double next =
        -(a[1] * window[0] + a[2] * window[1] + a[3] * window[2] + a[4] * window[3]) / a[0];
    if (!std::isfinite(next) || std::abs(next) > kOverflow) {
      throw OverflowDetected("Bargmann coefficient c_" + std::to_string(j) + " overflowed");
    }
    window = {next, window[0], window[1], window[2]};
    b.c.push_back(next);
    b.log_scale.push_back(cur);
    if (j % kRescaleEvery == 0) {
      double m = 0.0;
      for (double w : window) m = std::max(m, std::abs(w));
      if (m > 0.0) {
        for (double& w : window) w /= m;
        cur += std::log(m);
      }
    }
  }

  fill_phi2(b, params);
  return b;
}

BargmannCoefficients bargmann_minimal_coefficients(const ModelParams& params, Parity parity,
                                                   double chi, int j_max) {
  params.validate();
  if (j_max < 2) throw std::invalid_argument("j_max must be at least 2");
  if (!std::isfinite(chi)) throw std::invalid_argument("chi must be finite");
  BargmannCoefficients b;
  b.parity = parity;
  b.sigma = recurrence_sign(parity);
  b.chi = chi;
  if (params.g_plus() * params.g_minus() == 0.0) throw StepSingular("a0 vanishes: g+ g- = 0");

  // Unknowns are the Fock amplitudes d_k = c_k sqrt(k!), k = 1..j_max, with
  // d_0 = 1 and d_k = 0 past j_max; rows j = 2..j_max+4 are normalized.
  constexpr int kTailRows = 4;
  b.alpha.assign(2, {0.0, 0.0, 0.0, 0.0, 0.0});
  for (int j = 2; j <= j_max + kTailRows; ++j) b.alpha.push_back(checked_alpha(params, b.sigma, chi, j));
  std::vector<double> inv_sqrt_fact(j_max + 1);
  for (int k = 0; k <= j_max; ++k) inv_sqrt_fact[k] = std::exp(-0.5 * std::lgamma(k + 1.0));

  const int rows = j_max + kTailRows - 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, j_max);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  for (int j = 2; j <= j_max + kTailRows; ++j) {
    const int lo = std::max(0, j - 4);
    double entries[5];
    double peak = 0.0;
    for (int i = 0; i < 5; ++i) {
      const int k = j - i;
      entries[i] = (k < 0 || k > j_max) ? 0.0 : b.alpha[j][i] * inv_sqrt_fact[k] / inv_sqrt_fact[lo];
      peak = std::max(peak, std::abs(entries[i]));
    }
    if (peak == 0.0) continue;
    for (int i = 0; i < 5; ++i) {
      const int k = j - i;
      if (entries[i] == 0.0) continue;
      if (k == 0) rhs(j - 2) -= entries[i] / peak;
      else a(j - 2, k - 1) += entries[i] / peak;
    }
  }
  const Eigen::VectorXd d = a.colPivHouseholderQr().solve(rhs);
  if (!d.allFinite()) throw OverflowDetected("minimal Bargmann solution is not finite");

  b.c.resize(j_max + 1);
  b.log_scale.resize(j_max + 1);
  b.c[0] = 1.0;
  b.log_scale[0] = 0.0;
  for (int k = 1; k <= j_max; ++k) {
    b.c[k] = d(k - 1);
    b.log_scale[k] = -0.5 * std::lgamma(k + 1.0);
  }
  b.alpha.resize(j_max + 1);
  fill_phi2(b, params);
  return b;
}

double recurrence_defect(const BargmannCoefficients& b) {
  double worst = 0.0;
  for (int j = 2; j <= b.j_max(); ++j) {
    const auto& a = b.alpha[j];
    const double ref = b.log_scale[j];
    double sum = 0.0;
    double mag = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double t = a[i] * rel_value(b.c, b.log_scale, j - i, ref);
      sum += t;
      mag += std::abs(t);
    }
    if (mag > 0.0) worst = std::max(worst, std::abs(sum) / mag);
  }
  return worst;
}

namespace {

// exp(-i sy pi/4) on one qubit in the (e, g) basis.
Eigen::Matrix4d two_qubit_rotation() {
  Eigen::Matrix2d r;
  r << 1.0, -1.0, 1.0, 1.0;
  r /= std::sqrt(2.0);
  Eigen::Matrix4d out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = r(a, c) * r(b, d);
  return out;
}

}  // namespace

double bargmann_seed_from_chain(Parity parity, const Eigen::VectorXd& chain) {
  if (chain.size() < 4) throw std::invalid_argument("chain vector too short");
  const Eigen::Matrix4d rot = two_qubit_rotation();
  double plus_plus[2];
  for (int n = 0; n < 2; ++n) {
    Eigen::Vector4d pair = Eigen::Vector4d::Zero();
    for (Qubit q1 : {Qubit::e, Qubit::g}) {
      for (Qubit q2 : {Qubit::e, Qubit::g}) {
        const ProductState s{n, q1, q2};
        const ChainIndex ci = chain_index_of(s);
        if (ci.parity == parity) pair(pair_index(q1, q2)) = chain(static_cast<Eigen::Index>(ci.j));
      }
    }
    plus_plus[n] = (rot.transpose() * pair)(0);
  }
  if (plus_plus[0] == 0.0) throw std::invalid_argument("Phi_1 has no constant term");
  return plus_plus[1] / plus_plus[0];
}

Eigen::VectorXd bargmann_to_chain(const BargmannCoefficients& b, int n_max) {
  if (n_max < 1 || n_max >= b.j_max()) {
    throw std::invalid_argument("n_max must lie in [1, j_max)");
  }
  const Eigen::Matrix4d rot = two_qubit_rotation();
  const double p = sign(b.parity);
  // Fock amplitudes c_k sqrt(k!) on one common scale.
  double ref = -std::numeric_limits<double>::infinity();
  std::vector<double> log_fock(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    log_fock[k] = b.log_scale[k] + 0.5 * std::lgamma(k + 1.0);
    ref = std::max(ref, log_fock[k]);
  }
  Eigen::VectorXd chain = Eigen::VectorXd::Zero(2 * (n_max + 1));
  for (int k = 0; k <= n_max; ++k) {
    const double f = std::exp(log_fock[k] - ref);
    const double alt = k % 2 == 0 ? 1.0 : -1.0;
    Eigen::Vector4d rotated;  // (++, +-, -+, --)
    rotated << b.c[k] * f, b.phi2[k] * f, p * alt * b.phi2[k] * f, p * alt * b.c[k] * f;
    const Eigen::Vector4d pair = rot * rotated;
    for (Qubit q1 : {Qubit::e, Qubit::g}) {
      for (Qubit q2 : {Qubit::e, Qubit::g}) {
        const ChainIndex ci = chain_index_of(ProductState{k, q1, q2});
        if (ci.parity == b.parity) chain(static_cast<Eigen::Index>(ci.j)) = pair(pair_index(q1, q2));
      }
    }
  }
  const double norm = chain.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw OverflowDetected("Bargmann state has no finite norm");
  }
  return chain / norm;
}

double IdenticalBargmann::coefficient(int k) const { return c.at(k) * std::exp(log_scale.at(k)); }

IdenticalBargmann bargmann_identical_coefficients(double omega0, double g_plus, Parity parity,
                                                  double chi, int j_max) {
  if (j_max < 1) throw std::invalid_argument("j_max must be at least 1");
  if (!std::isfinite(omega0) || !std::isfinite(g_plus) || !std::isfinite(chi)) {
    throw std::invalid_argument("parameters must be finite");
  }
  if (g_plus == 0.0) throw StepSingular("g+ = 0");
  IdenticalBargmann b;
  b.parity = parity;
  b.sigma = recurrence_sign(parity);
  b.chi = chi;
  b.alpha.assign(j_max + 2, 0.0);
  for (int j = 1; j <= j_max + 1; ++j) {
    const double x = chi - (j - 1);
    if (std::abs(x) < 1e-12) {
      throw StepSingular("chi sits on the oscillator ladder at j=" + std::to_string(j));
    }
    const double q = 0.5 * (1.0 + b.sigma * (j % 2 == 0 ? 1.0 : -1.0));
    b.alpha[j] = (x * x - q * q * omega0 * omega0) / (g_plus * x);
  }
  b.c = {1.0};
  b.log_scale = {0.0};
  double prev = 1.0;  // c_{j-1}
  double prev2 = 0.0; // c_{j-2}
  double cur = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    const double next = (b.alpha[j] * prev - (j == 1 ? 0.0 : prev2)) / j;
    if (!std::isfinite(next) || std::abs(next) > kOverflow) {
      throw OverflowDetected("coefficient c_" + std::to_string(j) + " overflowed");
    }
    b.c.push_back(next);
    b.log_scale.push_back(cur);
    prev2 = prev;
    prev = next;
    if (j % kRescaleEvery == 0) {
      const double m = std::max(std::abs(prev), std::abs(prev2));
      if (m > 0.0) {
        prev /= m;
        prev2 /= m;
        cur += std::log(m);
      }
    }
  }
  b.ratio.assign(j_max + 1, 0.0);
  for (int j = 1; j <= j_max; ++j) b.ratio[j] = b.alpha[j] / b.alpha[j + 1];
  return b;
}

double recurrence_defect(const IdenticalBargmann& b) {
  double worst = 0.0;
  const int j_max = static_cast<int>(b.c.size()) - 1;
  for (int j = 1; j <= j_max; ++j) {
    const double ref = b.log_scale[j];
    const double t0 = j * b.c[j];
    const double t1 = b.alpha[j] * rel_value(b.c, b.log_scale, j - 1, ref);
    const double t2 = j == 1 ? 0.0 : rel_value(b.c, b.log_scale, j - 2, ref);
    const double mag = std::abs(t0) + std::abs(t1) + std::abs(t2);
    if (mag > 0.0) worst = std::max(worst, std::abs(t0 - t1 + t2) / mag);
  }
  return worst;
}

}  // namespace rabi2q
