#include "rabi2q/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "rabi2q/errors.hpp"
#include "rabi2q/hamiltonian.hpp"
#include "rabi2q/numerics.hpp"

namespace rabi2q {

std::vector<double> CouplingSchedule::values() const {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("sweep step must be positive");
  }
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw std::invalid_argument("sweep range must satisfy start <= stop");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-3)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

ModelParams CouplingSchedule::at(const ModelParams& base, double value) const {
  ModelParams p = base;
  switch (vary) {
    case Vary::G1: p.g_1 = value; break;
    case Vary::G2: p.g_2 = value; break;
    case Vary::Locked: p.g_1 = value; p.g_2 = value; break;
  }
  return p;
}

const ParitySpectrum& SweepPoint::at(Parity p) const {
  const auto& s = spectra[p == Parity::Even ? 0 : 1];
  if (!s) throw std::invalid_argument(std::string("sweep has no ") + to_string(p) + " spectrum");
  return *s;
}

ParitySpectrum lowest_converged(const ModelParams& params, Parity parity, const Truncation& trunc,
                                std::size_t k, bool keep_vectors, double guard_tol) {
  if (k > trunc.chain_dim()) throw std::invalid_argument("k exceeds the chain dimension");
  const EigenDecomposition d = eigh(expand_dense(build_parity_blocks(params, parity, trunc)));
  const std::vector<bool> ok = converged_mask(d, 4, guard_tol);
  ParitySpectrum out;
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < d.size() && cols.size() < k; ++i) {
    if (!ok[i]) continue;
    cols.push_back(static_cast<Eigen::Index>(i));
    out.energies.push_back(d.values(static_cast<Eigen::Index>(i)));
  }
  if (cols.size() < k) {
    throw TruncationInsufficient("only " + std::to_string(cols.size()) + " of " +
                                 std::to_string(k) + " " + to_string(parity) +
                                 " levels pass the truncation guard at n_max=" +
                                 std::to_string(trunc.n_max));
  }
  if (keep_vectors) {
    out.vectors.resize(d.vectors.rows(), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out.vectors.col(static_cast<Eigen::Index>(c)) = d.vectors.col(cols[c]);
    }
  }
  return out;
}

namespace {

void check_doubling(const ModelParams& params, Parity parity, const Truncation& trunc,
                    const ParitySpectrum& s, double tol) {
  const Truncation doubled{2 * trunc.n_max};
  const Eigen::VectorXd wide = eigvalsh(expand_dense(build_parity_blocks(params, parity, doubled)));
  for (std::size_t i = 0; i < s.energies.size(); ++i) {
    const double moved = std::abs(wide(static_cast<Eigen::Index>(i)) - s.energies[i]);
    if (moved >= tol) {
      throw TruncationInsufficient("level " + std::to_string(i) + " moves by " +
                                   std::to_string(moved) + " when n_max is doubled");
    }
  }
}

}  // namespace

SpectrumSweep sweep_spectrum(const ModelParams& base, const CouplingSchedule& schedule,
                             const Truncation& trunc, const SweepOptions& options) {
  base.validate();
  trunc.validate();
  if (options.k == 0) throw std::invalid_argument("k must be positive");
  if (options.k > trunc.chain_dim()) throw std::invalid_argument("k exceeds the chain dimension");
  const std::vector<double> values = schedule.values();

  SpectrumSweep out;
  out.base = base;
  out.trunc = trunc;
  out.k = options.k;
  out.points.resize(values.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_at = values.size();
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      try {
        const ModelParams p = schedule.at(base, values[i]);
        SweepPoint& pt = out.points[i];
        pt.coordinate = values[i];
        pt.g_1 = p.g_1;
        pt.g_2 = p.g_2;
        for (Parity par : options.parities) {
          ParitySpectrum s =
              lowest_converged(p, par, trunc, options.k, options.keep_vectors, options.guard_tol);
          if (options.verify_doubling) check_doubling(p, par, trunc, s, options.doubling_tol);
          pt.spectra[par == Parity::Even ? 0 : 1] = std::move(s);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        // Report the earliest failing point regardless of scheduling order.
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(values.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

void require_vectors(const SpectrumSweep& sweep, Parity parity) {
  for (const auto& pt : sweep.points) {
    if (pt.at(parity).vectors.cols() == 0) {
      throw std::invalid_argument("sweep was run without eigenvectors");
    }
  }
}

double overlap(const ParitySpectrum& a, std::size_t i, const ParitySpectrum& b, std::size_t j) {
  return std::abs(a.vectors.col(static_cast<Eigen::Index>(i))
                      .dot(b.vectors.col(static_cast<Eigen::Index>(j))));
}

}  // namespace

std::vector<std::vector<std::size_t>> track_branches(const SpectrumSweep& sweep, Parity parity) {
  require_vectors(sweep, parity);
  const std::size_t k = sweep.k;
  std::vector<std::vector<std::size_t>> labels(sweep.points.size(), std::vector<std::size_t>(k));
  if (sweep.points.empty()) return labels;
  for (std::size_t i = 0; i < k; ++i) labels[0][i] = i;

  for (std::size_t p = 0; p + 1 < sweep.points.size(); ++p) {
    const ParitySpectrum& a = sweep.points[p].at(parity);
    const ParitySpectrum& b = sweep.points[p + 1].at(parity);
    struct Entry {
      long long ov;  // overlap quantized so near-equal values tie
      double de;
      std::size_t i, j;
    };
    std::vector<Entry> entries;
    entries.reserve(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        entries.push_back({std::llround(overlap(a, i, b, j) * 1e10), std::abs(a.energies[i] - b.energies[j]), i, j});
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
      if (x.ov != y.ov) return x.ov > y.ov;
      return x.de < y.de;
    });
    std::vector<bool> used_a(k, false), used_b(k, false);
    for (const Entry& e : entries) {
      if (used_a[e.i] || used_b[e.j]) continue;
      used_a[e.i] = used_b[e.j] = true;
      labels[p + 1][e.j] = labels[p][e.i];
    }
  }
  return labels;
}

const char* to_string(CrossingKind k) {
  return k == CrossingKind::Crossing ? "Crossing" : "AvoidedOrUnresolved";
}

std::vector<CrossingRecord> detect_crossings(const SpectrumSweep& sweep, Parity parity,
                                             double gap_tol, double overlap_tol) {
  require_vectors(sweep, parity);
  std::vector<CrossingRecord> out;
  const std::size_t n = sweep.points.size();
  if (n < 3) return out;
  for (std::size_t i = 0; i + 1 < sweep.k; ++i) {
    auto gap = [&](std::size_t p) {
      const auto& e = sweep.points[p].at(parity).energies;
      return e[i + 1] - e[i];
    };
    for (std::size_t p = 1; p + 1 < n; ++p) {
      const double g = gap(p);
      if (!(g <= gap(p - 1) && g < gap(p + 1))) continue;
      const ParitySpectrum& before = sweep.points[p - 1].at(parity);
      const ParitySpectrum& after = sweep.points[p + 1].at(parity);
      CrossingRecord r;
      r.parity = parity;
      r.branch_lo = i;
      r.g_lo = sweep.points[p - 1].coordinate;
      r.g_hi = sweep.points[p + 1].coordinate;
      r.min_gap = g;
      r.overlap_same = overlap(before, i, after, i);
      r.overlap_swap = overlap(before, i, after, i + 1);
      const bool flipped = r.overlap_swap > r.overlap_same;
      if (g >= gap_tol && !flipped) continue;
      const bool swapped = r.overlap_swap > 1.0 - overlap_tol && r.overlap_same < overlap_tol;
      r.kind = g < gap_tol && swapped ? CrossingKind::Crossing : CrossingKind::AvoidedOrUnresolved;
      out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end(), [](const CrossingRecord& a, const CrossingRecord& b) {
    return a.g_lo != b.g_lo ? a.g_lo < b.g_lo : a.branch_lo < b.branch_lo;
  });
  return out;
}

namespace {

struct CorrectionSum {
  double value = 0.0;
  int last_index = 0;
};

int default_cutoff(const ModelParams& p, int m) {
  const double x = std::max(std::abs(p.g_1), std::abs(p.g_2));
  return m + 80 + static_cast<int>(std::ceil(4.0 * x * x + 40.0 * x));
}

CorrectionSum correction_sum(const ModelParams& p, int m, int branch_sign,
                             const DscOptions& opt) {
  if (m < 0) throw std::invalid_argument("branch index m must be non-negative");
  if (branch_sign != 1 && branch_sign != -1) {
    throw std::invalid_argument("branch sign must be +1 or -1");
  }
  const bool derived = opt.form == SecondOrderForm::Derived;
  const double shift = branch_sign * 4.0 * p.g_1 * p.g_2;
  const bool automatic = opt.n_cut < 0;
  const int floor_cut = automatic ? default_cutoff(p, m) : opt.n_cut;
  const int hard_cap = floor_cut + 4000;

  CorrectionSum out;
  for (int k = 0;; ++k) {
    if (!automatic && k > opt.n_cut) break;
    if (k > hard_cap) {
      throw ConvergenceFailure("second-order sum did not converge by n=" + std::to_string(k));
    }
    if (!derived && k == m) continue;
    double num = 0.0;
    if (p.omega_1 != 0.0) {
      const double d = displacement_element(k, m, p.g_1);
      num += p.omega_1 * p.omega_1 * d * d;
    }
    if (p.omega_2 != 0.0) {
      const double d = displacement_element(k, m, p.g_2);
      num += p.omega_2 * p.omega_2 * d * d;
    }
    out.last_index = k;
    if (num == 0.0) {
      if (automatic && k > floor_cut) break;
      continue;
    }
    const double den = derived ? (k - m) + shift : (m - k) + shift;
    if (std::abs(den) < opt.denominator_tol) {
      throw SmallDenominator("second-order denominator " + std::to_string(den) + " at m=" +
                             std::to_string(m) + ", n=" + std::to_string(k));
    }
    const double term = (derived ? 0.25 : 1.0) * num / den;
    out.value += term;
    if (automatic && k > floor_cut && std::abs(term) < 1e-12) break;
  }
  return out;
}

}  // namespace

double second_order_correction(const ModelParams& params, int m, int branch_sign,
                               const DscOptions& options) {
  params.validate();
  return correction_sum(params, m, branch_sign, options).value;
}

std::optional<double> PerturbativeLevel::total() const {
  if (!shift) return std::nullopt;
  return zeroth + *shift;
}

std::vector<double> PerturbativeSpectrum::sorted_totals() const {
  std::vector<double> out;
  for (const auto& l : levels)
    if (auto t = l.total()) out.push_back(*t);
  std::sort(out.begin(), out.end());
  return out;
}

bool PerturbativeSpectrum::complete() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](const PerturbativeLevel& l) { return l.shift.has_value(); });
}

PerturbativeSpectrum dsc_perturbative_spectrum(const ModelParams& params, int m_max,
                                               const DscOptions& options) {
  params.validate();
  if (m_max < 0) throw std::invalid_argument("m_max must be non-negative");
  PerturbativeSpectrum out;
  out.m_max = m_max;
  const double gp2 = params.g_plus() * params.g_plus();
  const double gm2 = params.g_minus() * params.g_minus();
  for (int branch = 1; branch <= 2; ++branch) {
    for (int m = 0; m <= m_max; ++m) {
      PerturbativeLevel l;
      l.m = m;
      l.branch = branch;
      l.zeroth = m - (branch == 1 ? gp2 : gm2);
      try {
        const CorrectionSum c = correction_sum(params, m, branch == 1 ? 1 : -1, options);
        l.shift = -c.value;
        out.n_cut = std::max(out.n_cut, c.last_index);
      } catch (const SmallDenominator&) {
        l.shift.reset();
      }
      out.levels.push_back(l);
    }
  }
  return out;
}

RwaComparison rwa_relative_error(const ModelParams& params, const Truncation& trunc,
                                 std::size_t k) {
  params.validate();
  trunc.validate();
  if (k == 0) throw std::invalid_argument("k must be positive");
  RwaComparison out;
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const auto s = lowest_converged(params, p, trunc, std::min(k, trunc.chain_dim()), false);
    out.e_full.insert(out.e_full.end(), s.energies.begin(), s.energies.end());
  }
  std::sort(out.e_full.begin(), out.e_full.end());
  out.e_full.resize(k);

  const EigenDecomposition rwa = eigh(build_rwa_full(params, trunc));
  const std::vector<bool> ok = converged_mask(rwa, 8);
  for (std::size_t i = 0; i < rwa.size() && out.e_rwa.size() < k; ++i) {
    if (ok[i]) out.e_rwa.push_back(rwa.values(static_cast<Eigen::Index>(i)));
  }
  if (out.e_rwa.size() < k) {
    throw TruncationInsufficient("only " + std::to_string(out.e_rwa.size()) +
                                 " RWA levels pass the truncation guard");
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double diff = std::abs(out.e_rwa[i] - out.e_full[i]);
    const double denom = std::abs(out.e_full[i]);
    const double rel =
        denom > 0.0 ? diff / denom : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    out.rel_error.push_back(rel);
    sum += rel;
  }
  out.mean_rel_error = sum / static_cast<double>(k);
  out.ground_rel_error = out.rel_error.front();
  return out;
}

}  // namespace rabi2q
