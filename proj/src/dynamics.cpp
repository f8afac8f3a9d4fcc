#include "rabi2q/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "rabi2q/errors.hpp"
#include "rabi2q/hamiltonian.hpp"

namespace rabi2q {

using cplx = std::complex<double>;

ParityState ParityState::zero(const Truncation& trunc) {
  trunc.validate();
  const auto n = static_cast<Eigen::Index>(trunc.chain_dim());
  return {trunc, ComplexVector::Zero(n), ComplexVector::Zero(n)};
}

ParityState ParityState::from_product(const ComplexVector& psi, const Truncation& trunc) {
  if (static_cast<std::size_t>(psi.size()) != trunc.full_dim()) {
    throw std::invalid_argument("product vector does not match the truncation");
  }
  ParityState s = zero(trunc);
  for (std::size_t i = 0; i < trunc.full_dim(); ++i) {
    const ChainIndex ci = chain_index_of(product_state(i));
    s.chain(ci.parity)(static_cast<Eigen::Index>(ci.j)) = psi(static_cast<Eigen::Index>(i));
  }
  return s;
}

double ParityState::norm() const { return std::sqrt(even.squaredNorm() + odd.squaredNorm()); }

double ParityState::top_weight() const {
  return even.tail(4).squaredNorm() + odd.tail(4).squaredNorm();
}

ComplexVector ParityState::to_product() const {
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(trunc.full_dim()));
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const auto perm = chain_to_product(p, trunc);
    for (std::size_t j = 0; j < perm.size(); ++j) {
      psi(static_cast<Eigen::Index>(perm[j])) = chain(p)(static_cast<Eigen::Index>(j));
    }
  }
  return psi;
}

ParityState decompose_initial_state(const FieldState& field, Qubit q1, Qubit q2,
                                    const Truncation& trunc) {
  ParityState s = ParityState::zero(trunc);
  auto put = [&](int n, cplx amp) {
    const ChainIndex ci = chain_index_of(ProductState{n, q1, q2});
    s.chain(ci.parity)(static_cast<Eigen::Index>(ci.j)) = amp;
  };
  if (field.kind == FieldState::Kind::Fock) {
    if (field.n < 0) throw std::invalid_argument("Fock level must be non-negative");
    if (field.n > trunc.n_max) {
      throw TruncationInsufficient("Fock level " + std::to_string(field.n) + " exceeds n_max");
    }
    put(field.n, 1.0);
    return s;
  }

  const double r = std::abs(field.alpha);
  const double theta = std::arg(field.alpha);
  auto log_mag = [&](int n) {
    return -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
  };
  if (r == 0.0) {
    put(0, 1.0);
    return s;
  }
  double tail = 0.0;
  for (int n = trunc.n_max + 1;; ++n) {
    const double w = std::exp(2.0 * log_mag(n));
    tail += w;
    if (n > r * r && w < 1e-18 * std::max(tail, 1e-300)) break;
    if (n > trunc.n_max + 100000) break;
  }
  if (tail >= 1e-12) {
    throw TruncationInsufficient("coherent state leaks " + std::to_string(tail) +
                                 " beyond n_max=" + std::to_string(trunc.n_max));
  }
  double norm2 = 0.0;
  for (int n = 0; n <= trunc.n_max; ++n) {
    const cplx amp = std::polar(std::exp(log_mag(n)), n * theta);
    put(n, amp);
    norm2 += std::norm(amp);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  s.even *= inv;
  s.odd *= inv;
  return s;
}

double mean_photon_number(const ParityState& s) {
  double out = 0.0;
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const ComplexVector& c = s.chain(p);
    for (Eigen::Index j = 0; j < c.size(); ++j) out += static_cast<double>(j / 2) * std::norm(c(j));
  }
  return out;
}

double population_inversion(const ParityState& s) {
  double out = 0.0;
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const ComplexVector& c = s.chain(p);
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      const ProductState ps = chain_state(p, static_cast<std::size_t>(j));
      out += 0.5 * (sigma_z(ps.q1) + sigma_z(ps.q2)) * std::norm(c(j));
    }
  }
  return out;
}

double energy_expectation(const ParityState& s, const ModelParams& params) {
  double out = 0.0;
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const Eigen::MatrixXd h = expand_dense(build_parity_blocks(params, p, s.trunc));
    const ComplexVector& c = s.chain(p);
    out += c.real().dot(h * c.real()) + c.imag().dot(h * c.imag());
  }
  return out;
}

DensityMatrix reduced_density_matrix(const ParityState& s) {
  auto at = [](const ComplexVector& c, Eigen::Index i) {
    return i < c.size() ? c(i) : cplx(0.0, 0.0);
  };
  DensityMatrix rho = DensityMatrix::Zero();
  const Eigen::Index blocks = (s.even.size() + 3) / 4;
  for (Eigen::Index n = 0; n < blocks; ++n) {
    const cplx p0 = at(s.even, 4 * n), p1 = at(s.even, 4 * n + 1);
    const cplx p2 = at(s.even, 4 * n + 2), p3 = at(s.even, 4 * n + 3);
    const cplx m0 = at(s.odd, 4 * n), m1 = at(s.odd, 4 * n + 1);
    const cplx m2 = at(s.odd, 4 * n + 2), m3 = at(s.odd, 4 * n + 3);
    DensityMatrix a;
    a << std::norm(p1), p1 * std::conj(m0), p1 * std::conj(m1), p1 * std::conj(p0),
         p2 * std::conj(m3), std::norm(p2), p2 * std::conj(p3), p2 * std::conj(m2),
         p3 * std::conj(m3), p3 * std::conj(p2), std::norm(p3), p3 * std::conj(m2),
         p0 * std::conj(p1), p0 * std::conj(m0), p0 * std::conj(m1), std::norm(p0);
    DensityMatrix b;
    b << std::norm(m3), m3 * std::conj(p2), m3 * std::conj(p3), m3 * std::conj(m2),
         m0 * std::conj(p1), std::norm(m0), m0 * std::conj(m1), m0 * std::conj(p0),
         m1 * std::conj(p1), m1 * std::conj(m0), std::norm(m1), m1 * std::conj(p0),
         m2 * std::conj(m3), m2 * std::conj(p2), m2 * std::conj(p3), std::norm(m2);
    rho += a + b;
  }
  return rho;
}

namespace {

Eigen::Vector4d checked_spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("density matrix eigensolver failed");
  Eigen::Vector4d ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (ev(i) < -1e-8) {
      throw InvalidDensityMatrix("density matrix eigenvalue " + std::to_string(ev(i)));
    }
  }
  return ev;
}

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::Vector4d ev = checked_spectrum(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    // values in [-1e-8, 0) are rounding noise as well
    if (ev(i) > 0.0) s -= ev(i) * std::log(ev(i));
  }
  return std::max(s, 0.0);
}

double concurrence(const DensityMatrix& rho) {
  checked_spectrum(rho);
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho);
  const Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
  const DensityMatrix root =
      es.eigenvectors() * lam.cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  DensityMatrix flip = DensityMatrix::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  // sqrt(rho) Y rho* Y sqrt(rho) is Hermitian with the eigenvalues of rho Y rho* Y.
  const DensityMatrix r = root * flip * rho.conjugate() * flip * root;
  Eigen::SelfAdjointEigenSolver<DensityMatrix> rs(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::Vector4d l = rs.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<double>());
  return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

namespace {

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw std::invalid_argument("times must be finite");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("times must be strictly increasing");
    }
  }
}

Sample observe(const ParityState& s, double t, double energy) {
  Sample out;
  out.t = t;
  out.mean_n = mean_photon_number(s);
  out.s_z = population_inversion(s);
  const DensityMatrix rho = reduced_density_matrix(s);
  out.entropy = von_neumann_entropy(rho);
  out.concurrence = concurrence(rho);
  out.weight_even = s.weight(Parity::Even);
  out.weight_odd = s.weight(Parity::Odd);
  out.norm = std::sqrt(out.weight_even + out.weight_odd);
  out.energy = energy;
  out.top_weight = s.top_weight();
  return out;
}

void record(Trajectory& traj, const ParityState& s, double t, double energy,
            const EvolveOptions& options) {
  const Sample smp = observe(s, t, energy);
  if (smp.top_weight > options.guard_tol) {
    throw TruncationInsufficient("weight " + std::to_string(smp.top_weight) +
                                 " on the top photon levels at t=" + std::to_string(t));
  }
  if (options.keep_state_every > 0 && traj.samples.size() % options.keep_state_every == 0) {
    traj.state_index.push_back(traj.samples.size());
    traj.states.push_back(s);
  }
  traj.samples.push_back(smp);
}

double chain_energy(const Eigen::MatrixXd& h, const ComplexVector& c) {
  return c.real().dot(h * c.real()) + c.imag().dot(h * c.imag());
}

}  // namespace

ParityPropagator::ParityPropagator(const ModelParams& params, const Truncation& trunc)
    : trunc_(trunc),
      even_(eigh(expand_dense(build_parity_blocks(params, Parity::Even, trunc)))),
      odd_(eigh(expand_dense(build_parity_blocks(params, Parity::Odd, trunc)))) {}

ParityState ParityPropagator::at(const ParityState& s0, double t) const {
  if (s0.trunc.n_max != trunc_.n_max) throw std::invalid_argument("truncation mismatch");
  return {trunc_, propagate_spectral(even_, s0.even, t), propagate_spectral(odd_, s0.odd, t)};
}

Trajectory evolve_parity(const ParityState& s0, const ModelParams& params,
                         const std::vector<double>& times, const EvolveOptions& options) {
  params.validate();
  check_times(times);
  const ParityPropagator prop(params, s0.trunc);
  const Eigen::MatrixXd h_even = expand_dense(build_parity_blocks(params, Parity::Even, s0.trunc));
  const Eigen::MatrixXd h_odd = expand_dense(build_parity_blocks(params, Parity::Odd, s0.trunc));
  Trajectory traj;
  traj.samples.reserve(times.size());
  for (double t : times) {
    const ParityState s = prop.at(s0, t);
    record(traj, s, t, chain_energy(h_even, s.even) + chain_energy(h_odd, s.odd), options);
  }
  return traj;
}

QuarticCoefficients quartic_coefficients(const ModelParams& params, int n) {
  params.validate();
  if (n < 2) throw std::invalid_argument("the 4x4 sector needs n >= 2");
  const double d1 = 0.5 * (params.omega_1 - 1.0);
  const double d2 = 0.5 * (params.omega_2 - 1.0);
  const double g1 = params.g_1 * params.g_1;
  const double g2 = params.g_2 * params.g_2;
  QuarticCoefficients qc;
  qc.sector = n;
  qc.c0 = (n * (g1 - g2) + d1 * d1 - d2 * d2) * ((n - 1) * (g1 - g2) + d1 * d1 - d2 * d2);
  qc.c1 = 2.0 * (g2 * d1 + g1 * d2);
  qc.c2 = (1.0 - 2.0 * n) * (g1 + g2) - 2.0 * (d1 * d1 + d2 * d2);
  return qc;
}

QuarticCoefficients characteristic_coefficients(const Eigen::Matrix4d& h, int sector) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (std::abs(h.trace()) > 1e-12 * scale) {
    throw std::invalid_argument("characteristic_coefficients expects a traceless matrix");
  }
  const Eigen::Matrix4d h2 = h * h;
  QuarticCoefficients qc;
  qc.sector = sector;
  qc.c2 = -0.5 * h2.trace();
  qc.c1 = -(h2 * h).trace() / 3.0;
  qc.c0 = h.determinant();
  return qc;
}

std::array<double, 4> quartic_roots(const QuarticCoefficients& qc) {
  const double c0 = qc.c0, c1 = qc.c1, c2 = qc.c2;
  const double scale = std::max({std::pow(std::abs(c0), 0.25), std::cbrt(std::abs(c1)),
                                 std::sqrt(std::abs(c2)), 1e-300});
  auto biquadratic = [&] {
    const cplx disc = std::sqrt(cplx(c2 * c2 - 4.0 * c0, 0.0));
    const cplx s1 = std::sqrt(0.5 * (-c2 + disc));
    const cplx s2 = std::sqrt(0.5 * (-c2 - disc));
    std::array<double, 4> r{s1.real(), -s1.real(), s2.real(), -s2.real()};
    std::sort(r.begin(), r.end());
    return r;
  };

  const double big_q = 27.0 * c1 * c1 - 72.0 * c0 * c2 + 2.0 * c2 * c2 * c2;
  const double k = 12.0 * c0 + c2 * c2;
  cplx q = std::sqrt(cplx(big_q * big_q - 4.0 * k * k * k, 0.0));
  // Either sign of q is a valid branch; keep the one that avoids cancellation.
  if (std::abs(big_q + q) < std::abs(big_q - q)) q = -q;
  const cplx c = std::pow(0.5 * (q + big_q), 1.0 / 3.0);
  const double tiny = 1e-12 * scale;
  if (std::abs(c) <= tiny * tiny) {
    if (std::abs(c1) <= 1e-12 * scale * scale * scale) return biquadratic();
    throw DegenerateResolvent("resolvent cube root vanishes");
  }
  const cplx p = std::sqrt((12.0 * c0 + (c2 - c) * (c2 - c)) / (3.0 * c));
  if (std::abs(p) <= tiny) {
    if (std::abs(c1) <= 1e-12 * scale * scale * scale) return biquadratic();
    throw DegenerateResolvent("resolvent parameter p vanishes with c1 != 0");
  }
  const cplx r12 = std::sqrt(-p * p - 2.0 * c2 - 2.0 * c1 / p);
  const cplx r34 = std::sqrt(-p * p - 2.0 * c2 + 2.0 * c1 / p);
  std::array<double, 4> r{0.5 * (p + r12).real(), 0.5 * (p - r12).real(),
                          0.5 * (-p + r34).real(), 0.5 * (-p - r34).real()};
  std::sort(r.begin(), r.end());
  return r;
}

namespace {

struct Sector {
  int label = 0;
  std::vector<ChainIndex> members;
  Eigen::MatrixXd h;  // H_sc restricted to the retained members
  EigenDecomposition eig;
};

bool closed_form_eigensystem(const Eigen::Matrix4d& h, EigenDecomposition& out) {
  std::array<double, 4> roots;
  try {
    roots = quartic_roots(characteristic_coefficients(h));
  } catch (const DegenerateResolvent&) {
    return false;
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (int i = 0; i < 3; ++i) {
    if (roots[i + 1] - roots[i] < 1e-6 * scale) return false;
  }
  out.values.resize(4);
  out.vectors.resize(4, 4);
  for (int i = 0; i < 4; ++i) {
    // inverse iteration next to the root
    const double mu = roots[i] + 1e-10 * scale;
    const Eigen::PartialPivLU<Eigen::Matrix4d> lu(h - mu * Eigen::Matrix4d::Identity());
    Eigen::Vector4d v(1.0, 0.7, -0.4, 0.3);
    for (int it = 0; it < 3; ++it) {
      v = lu.solve(v);
      for (int j = 0; j < i; ++j) v -= out.vectors.col(j).dot(v) * out.vectors.col(j);
      v.normalize();
    }
    if (!v.allFinite() || (h * v - roots[i] * v).norm() > 1e-9 * scale) return false;
    out.values(i) = roots[i];
    out.vectors.col(i) = v;
  }
  return true;
}

std::vector<Sector> build_sectors(const ModelParams& params, const Truncation& trunc,
                                  RwaBackend backend) {
  std::vector<Sector> out;
  for (int n = 0; n <= trunc.n_max + 2; ++n) {
    const RwaExcitationBlock block = build_rwa_excitation_block(params, n);
    std::vector<Eigen::Index> keep;
    Sector s;
    s.label = n;
    for (std::size_t i = 0; i < block.basis.size(); ++i) {
      if (block.basis[i].n > trunc.n_max) continue;
      keep.push_back(static_cast<Eigen::Index>(i));
      s.members.push_back(chain_index_of(block.basis[i]));
    }
    if (keep.empty()) continue;
    const auto m = static_cast<Eigen::Index>(keep.size());
    s.h.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) s.h(a, b) = block.matrix(keep[a], keep[b]);
    bool done = false;
    if (backend == RwaBackend::QuarticClosedForm && m == 4) {
      done = closed_form_eigensystem(s.h, s.eig);
    }
    if (!done) s.eig = eigh(s.h);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

Trajectory evolve_rwa_closed_form(const ParityState& s0, const ModelParams& params,
                                  const std::vector<double>& times, RwaBackend backend,
                                  const EvolveOptions& options) {
  params.validate();
  check_times(times);
  const std::vector<Sector> sectors = build_sectors(params, s0.trunc, backend);
  Trajectory traj;
  traj.samples.reserve(times.size());
  for (double t : times) {
    ParityState s = ParityState::zero(s0.trunc);
    double energy = 0.0;
    for (const Sector& sec : sectors) {
      const auto m = static_cast<Eigen::Index>(sec.members.size());
      ComplexVector a(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        a(i) = s0.chain(sec.members[i].parity)(static_cast<Eigen::Index>(sec.members[i].j));
      }
      if (a.squaredNorm() == 0.0) continue;
      ComplexVector b = propagate_spectral(sec.eig, a, t);
      b *= std::polar(1.0, -(sec.label - 1.0) * t);
      energy += chain_energy(sec.h, b) + (sec.label - 1.0) * b.squaredNorm();
      for (Eigen::Index i = 0; i < m; ++i) {
        s.chain(sec.members[i].parity)(static_cast<Eigen::Index>(sec.members[i].j)) = b(i);
      }
    }
    record(traj, s, t, energy, options);
  }
  return traj;
}

}  // namespace rabi2q
