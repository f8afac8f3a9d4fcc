#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "rabi2q/dynamics.hpp"
#include "rabi2q/eigenstates.hpp"
#include "rabi2q/errors.hpp"
#include "rabi2q/hamiltonian.hpp"
#include "rabi2q/numerics.hpp"
#include "rabi2q/spectra.hpp"
#include "svg.hpp"

namespace rabi2q::cli {

namespace {

const std::vector<std::string> kCommands{"spectrum", "dynamics", "perturb", "rwa-compare",
                                         "eigenstate"};

struct Common {
  double omega_1 = 1.0;
  double omega_2 = 1.0;
  double omega_f = 1.0;  // display scale
  std::string out;
  std::string svg;
};

struct SpectrumArgs {
  std::string g1 = "0";
  std::string g2 = "0";
  std::string lock;
  int n_max = 120;
  int k = 20;
  std::string parity = "both";
  unsigned threads = 0;
  bool tracked = false;
  bool verify_doubling = false;
  double gap_tol = 0.05;
  double overlap_tol = 0.05;
  std::string crossings;
};

struct Couplings {
  double g1 = 0.0;
  double g2 = 0.0;
};

struct DynamicsArgs {
  Couplings g;
  double alpha = 0.0;
  int fock = -1;
  std::string qubits = "gg";
  double t_max = 100.0;
  double dt = 0.1;
  int n_max = 300;
  std::string engine = "full";
  std::string rwa_backend = "eig";
  double guard = 1e-6;
};

struct PerturbArgs {
  Couplings g;
  int m_max = 11;
  int n_cut = -1;
  std::string branch = "both";
  bool printed_form = false;
  double denominator_tol = 1e-6;
};

struct RwaArgs {
  Couplings g;
  int n_max = 120;
  int k = 20;
};

struct EigenstateArgs {
  Couplings g;
  std::string parity = "even";
  int index = 0;
  int count = 1;
  int n_max = 200;
  int j_max = 120;
};

ModelParams params_of(const Common& c, double g1, double g2) {
  ModelParams p{1.0, c.omega_1, c.omega_2, g1, g2};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

Canonical canonical_of(const Common& c) {
  Canonical can;
  can.add("omega1", c.omega_1).add("omega2", c.omega_2).add("omega_f", c.omega_f);
  return can;
}

Parity parse_parity(const std::string& s) {
  if (s == "even" || s == "+") return Parity::Even;
  if (s == "odd" || s == "-") return Parity::Odd;
  throw ConfigError("parity must be even or odd, got '" + s + "'");
}

Qubit parse_qubit(char c) {
  if (c == 'e') return Qubit::e;
  if (c == 'g') return Qubit::g;
  throw ConfigError(std::string("qubit state must be e or g, got '") + c + "'");
}

/// Target stream for CSV output: the --out file or the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError("cannot write '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw std::runtime_error("write failed for '" + (path_.empty() ? "stdout" : path_) + "'");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

std::string crossings_path(const SpectrumArgs& a, const Common& c) {
  if (!a.crossings.empty()) return a.crossings;
  if (c.out.empty()) return {};
  std::string stem = c.out;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
  return stem + ".crossings.csv";
}

int cmd_spectrum(const Common& c, const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
  const Range r1 = parse_range(a.g1);
  const Range r2 = parse_range(a.g2);
  const bool swept1 = a.g1.find(':') != std::string::npos;
  const bool swept2 = a.g2.find(':') != std::string::npos;
  CouplingSchedule sched;
  ModelParams base = params_of(c, r1.start, r2.start);
  if (!a.lock.empty()) {
    if (a.lock != "g2=g1" && a.lock != "g1=g2") throw ConfigError("--lock accepts only g2=g1");
    if (swept2) throw ConfigError("--lock g2=g1 takes the sweep from --g1");
    sched = {CouplingSchedule::Vary::Locked, r1.start, r1.stop, r1.step};
    base.g_2 = base.g_1;
  } else if (swept1 && swept2) {
    throw ConfigError("only one of --g1, --g2 can be a range");
  } else if (swept2) {
    sched = {CouplingSchedule::Vary::G2, r2.start, r2.stop, r2.step};
  } else {
    sched = {CouplingSchedule::Vary::G1, r1.start, r1.stop, r1.step};
  }
  if (a.k < 1) throw ConfigError("--k must be positive");
  const Truncation trunc{a.n_max};

  SweepOptions opt;
  opt.k = static_cast<std::size_t>(a.k);
  if (a.parity == "both") opt.parities = {Parity::Even, Parity::Odd};
  else opt.parities = {parse_parity(a.parity)};
  opt.threads = a.threads;
  opt.verify_doubling = a.verify_doubling;
  opt.keep_vectors = true;

  Canonical can = canonical_of(c);
  can.add("g1", a.g1).add("g2", a.g2).add("lock", a.lock).add("nmax", a.n_max).add("k", a.k);
  can.add("parity", a.parity).flag("tracked", a.tracked).flag("verify_doubling", a.verify_doubling);
  can.add("gap_tol", a.gap_tol).add("overlap_tol", a.overlap_tol);

  const SpectrumSweep sweep = sweep_spectrum(base, sched, trunc, opt);
  std::vector<std::vector<std::vector<std::size_t>>> labels(2);
  if (a.tracked) {
    for (Parity p : opt.parities) labels[p == Parity::Even ? 0 : 1] = track_branches(sweep, p);
  }

  Sink sink(c.out, out);
  CsvWriter csv(sink.stream(), "spectrum", can.hash_hex(), {"g1", "g2", "parity", "branch", "energy"});
  for (std::size_t pi = 0; pi < sweep.points.size(); ++pi) {
    const SweepPoint& pt = sweep.points[pi];
    for (Parity p : opt.parities) {
      const auto& e = pt.at(p).energies;
      const auto& lab = labels[p == Parity::Even ? 0 : 1];
      for (std::size_t i = 0; i < e.size(); ++i) {
        const auto branch = static_cast<long long>(a.tracked ? lab[pi][i] : i);
        csv.row({pt.g_1 * c.omega_f, pt.g_2 * c.omega_f, std::string(to_string(p)), branch,
                 e[i] * c.omega_f});
      }
    }
  }
  sink.finish();

  std::vector<CrossingRecord> records;
  for (Parity p : opt.parities) {
    const auto r = detect_crossings(sweep, p, a.gap_tol, a.overlap_tol);
    records.insert(records.end(), r.begin(), r.end());
  }
  const std::string cpath = crossings_path(a, c);
  if (!cpath.empty()) {
    Sink cs(cpath, out);
    CsvWriter w(cs.stream(), "spectrum-crossings", can.hash_hex(),
                {"parity", "branch_lo", "g_lo", "g_hi", "kind"});
    for (const auto& r : records) {
      w.row({std::string(to_string(r.parity)), static_cast<long long>(r.branch_lo),
             r.g_lo * c.omega_f, r.g_hi * c.omega_f, std::string(to_string(r.kind))});
    }
    cs.finish();
  }
  std::size_t crossings = 0;
  for (const auto& r : records) crossings += r.kind == CrossingKind::Crossing;
  err << "spectrum: " << sweep.points.size() << " points, " << records.size()
      << " gap minima, " << crossings << " crossings\n";

  if (!c.svg.empty()) {
    Panel panel{"Spectrum", sched.vary == CouplingSchedule::Vary::G2 ? "g2" : "g1", "E", {}};
    for (Parity p : opt.parities) {
      const auto& lab = labels[p == Parity::Even ? 0 : 1];
      for (std::size_t b = 0; b < opt.k; ++b) {
        Series s{to_string(p), {}, {}};
        for (std::size_t pi = 0; pi < sweep.points.size(); ++pi) {
          const auto& e = sweep.points[pi].at(p).energies;
          std::size_t i = b;
          if (a.tracked) {
            i = static_cast<std::size_t>(std::find(lab[pi].begin(), lab[pi].end(), b) - lab[pi].begin());
          }
          s.x.push_back(sweep.points[pi].coordinate * c.omega_f);
          s.y.push_back(i < e.size() ? e[i] * c.omega_f : NAN);
        }
        panel.series.push_back(std::move(s));
      }
    }
    write_svg(c.svg, {panel});
  }
  return kOk;
}

int cmd_dynamics(const Common& c, const DynamicsArgs& a, bool alpha_given, std::ostream& out,
                 std::ostream& err) {
  const ModelParams p = params_of(c, a.g.g1, a.g.g2);
  if (alpha_given && a.fock >= 0) throw ConfigError("--alpha and --fock are exclusive");
  if (a.qubits.size() != 2) throw ConfigError("--qubits takes two letters from {e, g}");
  if (!(a.dt > 0.0) || !(a.t_max >= 0.0)) throw ConfigError("--dt must be positive and --tmax non-negative");
  if (a.engine != "full" && a.engine != "rwa") throw ConfigError("--engine must be full or rwa");
  if (a.rwa_backend != "eig" && a.rwa_backend != "quartic") {
    throw ConfigError("--rwa-backend must be eig or quartic");
  }
  const Qubit q1 = parse_qubit(a.qubits[0]);
  const Qubit q2 = parse_qubit(a.qubits[1]);
  const FieldState field = a.fock >= 0 ? FieldState::fock(a.fock) : FieldState::coherent(a.alpha);
  const Truncation trunc{a.n_max};
  try {
    trunc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::vector<double> times;
  const auto steps = static_cast<long long>(std::floor(a.t_max / a.dt + 1e-9));
  for (long long i = 0; i <= steps; ++i) times.push_back(static_cast<double>(i) * a.dt);

  Canonical can = canonical_of(c);
  can.add("g1", a.g.g1).add("g2", a.g.g2).add("alpha", a.fock >= 0 ? 0.0 : a.alpha);
  can.add("fock", a.fock).add("qubits", a.qubits).add("tmax", a.t_max).add("dt", a.dt);
  can.add("nmax", a.n_max).add("engine", a.engine).add("guard", a.guard);
  if (a.engine == "rwa") can.add("rwa_backend", a.rwa_backend);

  const ParityState s0 = decompose_initial_state(field, q1, q2, trunc);
  EvolveOptions opt;
  opt.guard_tol = a.guard;
  const Trajectory traj =
      a.engine == "full"
          ? evolve_parity(s0, p, times, opt)
          : evolve_rwa_closed_form(s0, p, times,
                                   a.rwa_backend == "eig" ? RwaBackend::SectorEigensolver
                                                          : RwaBackend::QuarticClosedForm,
                                   opt);

  Sink sink(c.out, out);
  CsvWriter csv(sink.stream(), "dynamics", can.hash_hex(), {"t", "mean_n", "s_z", "entropy", "concurrence"});
  for (const Sample& s : traj.samples) {
    csv.row({s.t / c.omega_f, s.mean_n, s.s_z, s.entropy, s.concurrence});
  }
  sink.finish();
  double drift = 0.0;
  for (const Sample& s : traj.samples) drift = std::max(drift, std::abs(s.norm - 1.0));
  err << "dynamics: " << traj.samples.size() << " samples, max norm drift " << format_number(drift)
      << '\n';

  if (!c.svg.empty()) {
    std::vector<Panel> panels;
    const char* names[] = {"<n>", "<Sz>", "S", "C"};
    for (int k = 0; k < 4; ++k) {
      Series s{names[k], {}, {}};
      for (const Sample& smp : traj.samples) {
        s.x.push_back(smp.t / c.omega_f);
        s.y.push_back(k == 0 ? smp.mean_n : k == 1 ? smp.s_z : k == 2 ? smp.entropy : smp.concurrence);
      }
      panels.push_back({names[k], "t", names[k], {std::move(s)}});
    }
    write_svg(c.svg, panels);
  }
  return kOk;
}

int cmd_perturb(const Common& c, const PerturbArgs& a, std::ostream& out, std::ostream& err) {
  const ModelParams p = params_of(c, a.g.g1, a.g.g2);
  if (a.m_max < 0) throw ConfigError("--mmax must be non-negative");
  if (a.branch != "1" && a.branch != "2" && a.branch != "both") {
    throw ConfigError("--branch must be 1, 2 or both");
  }
  DscOptions opt;
  opt.n_cut = a.n_cut;
  opt.form = a.printed_form ? SecondOrderForm::Printed : SecondOrderForm::Derived;
  opt.denominator_tol = a.denominator_tol;
  if (opt.n_cut >= 0 && opt.n_cut < a.m_max) throw ConfigError("--ncut must be at least --mmax");

  Canonical can = canonical_of(c);
  can.add("g1", a.g.g1).add("g2", a.g.g2).add("mmax", a.m_max).add("ncut", a.n_cut);
  can.add("branch", a.branch).flag("printed_form", a.printed_form).add("denominator_tol", a.denominator_tol);

  const PerturbativeSpectrum spec = dsc_perturbative_spectrum(p, a.m_max, opt);
  Sink sink(c.out, out);
  CsvWriter csv(sink.stream(), "perturb", can.hash_hex(),
                {"m", "branch", "energy_zeroth", "correction_second", "energy_total"});
  std::vector<std::string> resonant;
  for (const auto& lv : spec.levels) {
    if (a.branch != "both" && std::to_string(lv.branch) != a.branch) continue;
    if (lv.shift) {
      csv.row({static_cast<long long>(lv.m), static_cast<long long>(lv.branch), lv.zeroth * c.omega_f,
               *lv.shift * c.omega_f, *lv.total() * c.omega_f});
    } else {
      csv.row({static_cast<long long>(lv.m), static_cast<long long>(lv.branch), lv.zeroth * c.omega_f,
               std::monostate{}, std::monostate{}});
      resonant.push_back("(m=" + std::to_string(lv.m) + ", branch " + std::to_string(lv.branch) + ")");
    }
  }
  sink.finish();
  if (!resonant.empty()) {
    err << "perturb: vanishing denominator, no second-order correction for";
    for (const auto& r : resonant) err << ' ' << r;
    err << '\n';
    return kNumericalError;
  }
  return kOk;
}

int cmd_rwa(const Common& c, const RwaArgs& a, std::ostream& out, std::ostream&) {
  const ModelParams p = params_of(c, a.g.g1, a.g.g2);
  if (a.k < 1) throw ConfigError("--k must be positive");
  Canonical can = canonical_of(c);
  can.add("g1", a.g.g1).add("g2", a.g.g2).add("nmax", a.n_max).add("k", a.k);
  const RwaComparison cmp = rwa_relative_error(p, Truncation{a.n_max}, static_cast<std::size_t>(a.k));
  Sink sink(c.out, out);
  CsvWriter csv(sink.stream(), "rwa-compare", can.hash_hex(), {"index", "e_full", "e_rwa", "rel_error"});
  for (std::size_t i = 0; i < cmp.rel_error.size(); ++i) {
    csv.row({static_cast<long long>(i), cmp.e_full[i] * c.omega_f, cmp.e_rwa[i] * c.omega_f,
             cmp.rel_error[i]});
  }
  csv.row({std::string("mean"), std::monostate{}, std::monostate{}, cmp.mean_rel_error});
  csv.row({std::string("ground"), std::monostate{}, std::monostate{}, cmp.ground_rel_error});
  sink.finish();
  return kOk;
}

int cmd_eigenstate(const Common& c, const EigenstateArgs& a, std::ostream& out, std::ostream& err) {
  const ModelParams p = params_of(c, a.g.g1, a.g.g2);
  const Parity parity = parse_parity(a.parity);
  if (a.index < 0 || a.count < 1) throw ConfigError("--index must be >= 0 and --count >= 1");
  if (a.j_max < 3) throw ConfigError("--jmax must be at least 3");
  const Truncation trunc{a.n_max};
  try {
    trunc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Canonical can = canonical_of(c);
  can.add("g1", a.g.g1).add("g2", a.g.g2).add("parity", a.parity).add("index", a.index);
  can.add("count", a.count).add("nmax", a.n_max).add("jmax", a.j_max);

  const EigenDecomposition ed = eigh(expand_dense(build_parity_blocks(p, parity, trunc)));
  const auto mask = converged_mask(ed, 4);
  const int last = a.index + a.count - 1;
  if (last >= static_cast<int>(ed.size())) throw ConfigError("--index/--count exceed the chain dimension");
  for (int i = a.index; i <= last; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) {
      throw TruncationInsufficient("eigenvector " + std::to_string(i) + " is not converged at n_max=" +
                                   std::to_string(a.n_max));
    }
  }

  Sink sink(c.out, out);
  CsvWriter csv(sink.stream(), "eigenstate", can.hash_hex(),
                {"index", "parity", "method", "xi", "kept", "residual"});
  bool failed = false;
  for (int i = a.index; i <= last; ++i) {
    const double xi = ed.values(i);
    const Eigen::VectorXd u = ed.vectors.col(i);
    auto emit = [&](const char* method, auto&& fn) {
      try {
        const auto [kept, res] = fn();
        csv.row({static_cast<long long>(i), std::string(to_string(parity)), std::string(method),
                 xi * c.omega_f, static_cast<long long>(kept), res});
      } catch (const NumericalError& e) {
        csv.row({static_cast<long long>(i), std::string(to_string(parity)), std::string(method),
                 xi * c.omega_f, std::monostate{}, std::monostate{}});
        err << "eigenstate: " << method << " failed for index " << i << ": " << e.what() << '\n';
        failed = true;
      }
    };
    emit("la", [&] {
      const auto st = recurrence_eigenstate_la(p, parity, xi, u.head<2>(), a.n_max);
      return std::pair<std::size_t, double>{st.kept, residual(p, parity, st)};
    });
    emit("decaying", [&] {
      const auto st = decaying_solution(p, parity, xi, a.n_max);
      return std::pair<std::size_t, double>{st.kept, residual(p, parity, st)};
    });
    emit("bargmann", [&] {
      const auto b = bargmann_minimal_coefficients(p, parity, xi, a.j_max);
      const int levels = std::min(a.n_max, a.j_max - 1);
      Eigen::VectorXd chain = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(trunc.chain_dim()));
      chain.head(2 * (levels + 1)) = bargmann_to_chain(b, levels);
      return std::pair<std::size_t, double>{static_cast<std::size_t>(levels + 1),
                                            residual(p, parity, xi, chain)};
    });
  }
  sink.finish();
  return failed ? kNumericalError : kOk;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--omega1", c.omega_1, "first qubit frequency (units of w_f)")->capture_default_str();
  sub->add_option("--omega2", c.omega_2, "second qubit frequency (units of w_f)")->capture_default_str();
  sub->add_option("--omega-f", c.omega_f, "display scale for frequencies and times")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "CSV output path (default stdout)");
  sub->add_option("--config", "key=value file; explicit flags win");
}

void add_couplings(CLI::App* sub, Couplings& g) {
  sub->add_option("--g1", g.g1, "first coupling (units of w_f)")->capture_default_str();
  sub->add_option("--g2", g.g2, "second coupling (units of w_f)")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-qubit quantum Rabi model: spectra, perturbative branches, RWA comparison, "
               "eigenstate recurrences and dynamics.",
               "rabi2q"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(RABI2Q_VERSION));
  app.require_subcommand(1);

  Common common;
  SpectrumArgs sa;
  DynamicsArgs da;
  PerturbArgs pa;
  RwaArgs ra;
  EigenstateArgs ea;

  auto* spectrum = app.add_subcommand("spectrum", "lowest levels per parity along a coupling sweep");
  add_common(spectrum, common);
  spectrum->add_option("--g1", sa.g1, "g1 value or start:stop:step")->capture_default_str();
  spectrum->add_option("--g2", sa.g2, "g2 value or start:stop:step")->capture_default_str();
  spectrum->add_option("--lock", sa.lock, "g2=g1 sweeps both couplings together");
  spectrum->add_option("--nmax", sa.n_max, "photon cutoff")->capture_default_str()->check(CLI::PositiveNumber);
  spectrum->add_option("--k", sa.k, "levels per parity")->capture_default_str();
  spectrum->add_option("--parity", sa.parity, "even, odd or both")->capture_default_str();
  spectrum->add_option("--threads", sa.threads, "sweep threads (0: hardware)")->capture_default_str();
  spectrum->add_flag("--tracked", sa.tracked, "label branches by eigenvector continuity");
  spectrum->add_flag("--verify-doubling", sa.verify_doubling, "re-solve at 2 nmax and compare");
  spectrum->add_option("--gap-tol", sa.gap_tol)->capture_default_str();
  spectrum->add_option("--overlap-tol", sa.overlap_tol)->capture_default_str();
  spectrum->add_option("--crossings", sa.crossings, "crossing records path (default <out>.crossings.csv)");
  spectrum->add_option("--svg", common.svg, "SVG plot path");

  auto* dynamics = app.add_subcommand("dynamics", "time evolution from |field, q1, q2>");
  add_common(dynamics, common);
  add_couplings(dynamics, da.g);
  auto* alpha_opt = dynamics->add_option("--alpha", da.alpha, "coherent amplitude (real)");
  dynamics->add_option("--fock", da.fock, "Fock level instead of a coherent state");
  dynamics->add_option("--qubits", da.qubits, "initial qubit states, e.g. gg")->capture_default_str();
  dynamics->add_option("--tmax", da.t_max)->capture_default_str();
  dynamics->add_option("--dt", da.dt)->capture_default_str();
  dynamics->add_option("--nmax", da.n_max, "photon cutoff")->capture_default_str()->check(CLI::PositiveNumber);
  dynamics->add_option("--engine", da.engine, "full or rwa")->capture_default_str();
  dynamics->add_option("--rwa-backend", da.rwa_backend, "eig or quartic")->capture_default_str();
  dynamics->add_option("--guard", da.guard, "largest weight allowed on the top two photon levels")
      ->capture_default_str();
  dynamics->add_option("--svg", common.svg, "SVG plot path");

  auto* perturb = app.add_subcommand("perturb", "deep-strong-coupling branches to second order");
  add_common(perturb, common);
  add_couplings(perturb, pa.g);
  perturb->add_option("--mmax", pa.m_max, "largest photon index m")->capture_default_str();
  perturb->add_option("--ncut", pa.n_cut, "last Fock index summed (negative: automatic)")->capture_default_str();
  perturb->add_option("--branch", pa.branch, "1, 2 or both")->capture_default_str();
  perturb->add_flag("--printed-form", pa.printed_form, "use the literal printed correction");
  perturb->add_option("--denominator-tol", pa.denominator_tol)->capture_default_str();

  auto* rwa = app.add_subcommand("rwa-compare", "relative error of the RWA spectrum");
  add_common(rwa, common);
  add_couplings(rwa, ra.g);
  rwa->add_option("--nmax", ra.n_max, "photon cutoff")->capture_default_str()->check(CLI::PositiveNumber);
  rwa->add_option("--k", ra.k, "levels compared")->capture_default_str();

  auto* eig = app.add_subcommand("eigenstate", "recurrence eigenstates and their residuals");
  add_common(eig, common);
  add_couplings(eig, ea.g);
  eig->add_option("--parity", ea.parity, "even or odd")->capture_default_str();
  eig->add_option("--index", ea.index, "first level")->capture_default_str();
  eig->add_option("--count", ea.count, "number of levels")->capture_default_str();
  eig->add_option("--nmax", ea.n_max, "photon cutoff")->capture_default_str()->check(CLI::PositiveNumber);
  eig->add_option("--jmax", ea.j_max, "Bargmann series length")->capture_default_str();

  try {
    const std::vector<std::string> args = expand_config(raw_args, kCommands);
    for (const auto& a : args) {
      if (a == "--seed" || a.rfind("--seed=", 0) == 0) {
        throw ConfigError("--seed is not accepted: every command is deterministic");
      }
    }
    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(reversed);

    if (*spectrum) return cmd_spectrum(common, sa, out, err);
    if (*dynamics) return cmd_dynamics(common, da, alpha_opt->count() > 0, out, err);
    if (*perturb) return cmd_perturb(common, pa, out, err);
    if (*rwa) return cmd_rwa(common, ra, out, err);
    if (*eig) return cmd_eigenstate(common, ea, out, err);
    return kConfigError;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    CLI::App* failed = &app;
    for (CLI::App* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace rabi2q::cli
