#include <optional>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rabi2q/dynamics.hpp"
#include "rabi2q/eigenstates.hpp"
#include "rabi2q/errors.hpp"
#include "rabi2q/hamiltonian.hpp"
#include "rabi2q/numerics.hpp"
#include "rabi2q/spectra.hpp"

namespace py = pybind11;
using namespace rabi2q;

namespace {

py::dict recurrence_dict(const ModelParams& p, Parity parity, const RecurrenceState& s) {
  py::dict d;
  d["xi"] = s.xi;
  d["vector"] = s.chain_vector();
  d["kept"] = s.kept;
  d["residual"] = residual(p, parity, s);
  return d;
}

CouplingSchedule::Vary parse_vary(const std::string& v) {
  if (v == "g1") return CouplingSchedule::Vary::G1;
  if (v == "g2") return CouplingSchedule::Vary::G2;
  if (v == "locked") return CouplingSchedule::Vary::Locked;
  throw std::invalid_argument("vary must be 'g1', 'g2' or 'locked'");
}

ParityState initial_state(const std::string& qubits, std::optional<std::complex<double>> alpha,
                          std::optional<int> fock, const Truncation& trunc) {
  if (qubits.size() != 2) throw std::invalid_argument("qubits takes two letters from {e, g}");
  auto q = [](char c) {
    if (c == 'e') return Qubit::e;
    if (c == 'g') return Qubit::g;
    throw std::invalid_argument("qubit state must be 'e' or 'g'");
  };
  if (alpha && fock) throw std::invalid_argument("give either alpha or fock");
  const FieldState field = fock ? FieldState::fock(*fock) : FieldState::coherent(alpha.value_or(0.0));
  return decompose_initial_state(field, q(qubits[0]), q(qubits[1]), trunc);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = RABI2Q_VERSION;

  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", numerical.ptr());
  py::register_exception<TruncationInsufficient>(m, "TruncationInsufficient", numerical.ptr());
  py::register_exception<SmallDenominator>(m, "SmallDenominator", numerical.ptr());
  py::register_exception<SingularCoupling>(m, "SingularCoupling", numerical.ptr());
  py::register_exception<OverflowDetected>(m, "OverflowDetected", numerical.ptr());
  py::register_exception<StepSingular>(m, "StepSingular", numerical.ptr());
  py::register_exception<DegenerateResolvent>(m, "DegenerateResolvent", numerical.ptr());
  py::register_exception<InvalidDensityMatrix>(m, "InvalidDensityMatrix", numerical.ptr());

  py::enum_<Parity>(m, "Parity").value("EVEN", Parity::Even).value("ODD", Parity::Odd);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double omega_1, double omega_2, double g_1, double g_2) {
             ModelParams p{1.0, omega_1, omega_2, g_1, g_2};
             p.validate();
             return p;
           }),
           py::arg("omega_1"), py::arg("omega_2"), py::arg("g_1") = 0.0, py::arg("g_2") = 0.0)
      .def_readwrite("omega_1", &ModelParams::omega_1)
      .def_readwrite("omega_2", &ModelParams::omega_2)
      .def_readwrite("g_1", &ModelParams::g_1)
      .def_readwrite("g_2", &ModelParams::g_2)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(omega_1=" + std::to_string(p.omega_1) + ", omega_2=" + std::to_string(p.omega_2) +
               ", g_1=" + std::to_string(p.g_1) + ", g_2=" + std::to_string(p.g_2) + ")";
      });

  m.def("parity_hamiltonian",
        [](const ModelParams& p, Parity parity, int n_max) {
          return expand_dense(build_parity_blocks(p, parity, Truncation{n_max}));
        },
        py::arg("params"), py::arg("parity"), py::arg("n_max"));
  m.def("full_hamiltonian", [](const ModelParams& p, int n_max) { return build_full(p, Truncation{n_max}); },
        py::arg("params"), py::arg("n_max"));
  m.def("rwa_hamiltonian", [](const ModelParams& p, int n_max) { return build_rwa_full(p, Truncation{n_max}); },
        py::arg("params"), py::arg("n_max"));

  m.def("lowest_converged",
        [](const ModelParams& p, Parity parity, int n_max, std::size_t k) {
          const auto s = lowest_converged(p, parity, Truncation{n_max}, k, true);
          return py::make_tuple(s.energies, s.vectors);
        },
        py::arg("params"), py::arg("parity"), py::arg("n_max"), py::arg("k"));

  py::class_<SpectrumSweep>(m, "SpectrumSweep")
      .def_property_readonly("coordinates",
                             [](const SpectrumSweep& s) {
                               std::vector<double> c;
                               for (const auto& p : s.points) c.push_back(p.coordinate);
                               return c;
                             })
      .def("energies",
           [](const SpectrumSweep& s, Parity parity) {
             Eigen::MatrixXd e(static_cast<Eigen::Index>(s.points.size()), static_cast<Eigen::Index>(s.k));
             for (std::size_t i = 0; i < s.points.size(); ++i)
               for (std::size_t j = 0; j < s.k; ++j) e(i, j) = s.points[i].at(parity).energies[j];
             return e;
           })
      .def("track_branches", [](const SpectrumSweep& s, Parity parity) { return track_branches(s, parity); });

  m.def("sweep_spectrum",
        [](const ModelParams& base, const std::string& vary, double start, double stop, double step, int n_max,
           std::size_t k, unsigned threads) {
          SweepOptions opt;
          opt.k = k;
          opt.threads = threads;
          py::gil_scoped_release release;
          return sweep_spectrum(base, {parse_vary(vary), start, stop, step}, Truncation{n_max}, opt);
        },
        py::arg("base"), py::arg("vary"), py::arg("start"), py::arg("stop"), py::arg("step"), py::arg("n_max"),
        py::arg("k") = 20, py::arg("threads") = 0);

  m.def("detect_crossings",
        [](const SpectrumSweep& s, Parity parity, double gap_tol, double overlap_tol) {
          py::list out;
          for (const auto& r : detect_crossings(s, parity, gap_tol, overlap_tol)) {
            py::dict d;
            d["parity"] = r.parity;
            d["branch_lo"] = r.branch_lo;
            d["g_lo"] = r.g_lo;
            d["g_hi"] = r.g_hi;
            d["min_gap"] = r.min_gap;
            d["overlap_same"] = r.overlap_same;
            d["overlap_swap"] = r.overlap_swap;
            d["kind"] = std::string(to_string(r.kind));
            out.append(d);
          }
          return out;
        },
        py::arg("sweep"), py::arg("parity"), py::arg("gap_tol") = 0.05, py::arg("overlap_tol") = 0.05);

  m.def("second_order_correction",
        [](const ModelParams& p, int mm, int branch_sign, bool printed, int n_cut) {
          DscOptions o;
          o.form = printed ? SecondOrderForm::Printed : SecondOrderForm::Derived;
          o.n_cut = n_cut;
          return second_order_correction(p, mm, branch_sign, o);
        },
        py::arg("params"), py::arg("m"), py::arg("branch_sign"), py::arg("printed") = false, py::arg("n_cut") = -1);

  m.def("dsc_perturbative_spectrum",
        [](const ModelParams& p, int m_max, bool printed, int n_cut) {
          DscOptions o;
          o.form = printed ? SecondOrderForm::Printed : SecondOrderForm::Derived;
          o.n_cut = n_cut;
          py::list out;
          for (const auto& lv : dsc_perturbative_spectrum(p, m_max, o).levels) {
            py::dict d;
            d["m"] = lv.m;
            d["branch"] = lv.branch;
            d["zeroth"] = lv.zeroth;
            d["shift"] = lv.shift;
            d["total"] = lv.total();
            out.append(d);
          }
          return out;
        },
        py::arg("params"), py::arg("m_max"), py::arg("printed") = false, py::arg("n_cut") = -1);

  m.def("rwa_relative_error",
        [](const ModelParams& p, int n_max, std::size_t k) {
          const auto r = rwa_relative_error(p, Truncation{n_max}, k);
          py::dict d;
          d["e_full"] = r.e_full;
          d["e_rwa"] = r.e_rwa;
          d["rel_error"] = r.rel_error;
          d["mean_rel_error"] = r.mean_rel_error;
          d["ground_rel_error"] = r.ground_rel_error;
          return d;
        },
        py::arg("params"), py::arg("n_max"), py::arg("k") = 20);

  m.def("recurrence_eigenstate",
        [](const ModelParams& p, Parity parity, double xi, const Eigen::Vector2d& v0, int n_max) {
          return recurrence_dict(p, parity, recurrence_eigenstate_la(p, parity, xi, v0, n_max));
        },
        py::arg("params"), py::arg("parity"), py::arg("xi"), py::arg("v0"), py::arg("n_max"));
  m.def("decaying_solution",
        [](const ModelParams& p, Parity parity, double xi, int n_max) {
          return recurrence_dict(p, parity, decaying_solution(p, parity, xi, n_max));
        },
        py::arg("params"), py::arg("parity"), py::arg("xi"), py::arg("n_max"));
  m.def("residual",
        [](const ModelParams& p, Parity parity, double xi, const Eigen::VectorXd& chain) {
          return residual(p, parity, xi, chain);
        },
        py::arg("params"), py::arg("parity"), py::arg("xi"), py::arg("chain"));
  m.def("bargmann_chain",
        [](const ModelParams& p, Parity parity, double chi, int j_max, int n_max) {
          return bargmann_to_chain(bargmann_minimal_coefficients(p, parity, chi, j_max), n_max);
        },
        py::arg("params"), py::arg("parity"), py::arg("chi"), py::arg("j_max"), py::arg("n_max"));
  m.def("bargmann_identical",
        [](double omega0, double g_plus, Parity parity, double chi, int j_max) {
          const auto b = bargmann_identical_coefficients(omega0, g_plus, parity, chi, j_max);
          py::dict d;
          d["alpha"] = b.alpha;
          d["ratio"] = b.ratio;
          d["defect"] = recurrence_defect(b);
          return d;
        },
        py::arg("omega0"), py::arg("g_plus"), py::arg("parity"), py::arg("chi"), py::arg("j_max"));

  m.def("displacement_element", &displacement_element, py::arg("m"), py::arg("n"), py::arg("x"));

  m.def("reduced_density_matrix",
        [](const Eigen::VectorXcd& psi, int n_max) {
          return reduced_density_matrix(ParityState::from_product(psi, Truncation{n_max}));
        },
        py::arg("psi"), py::arg("n_max"));
  m.def("von_neumann_entropy", [](const DensityMatrix& r) { return von_neumann_entropy(r); }, py::arg("rho"));
  m.def("concurrence", [](const DensityMatrix& r) { return concurrence(r); }, py::arg("rho"));

  m.def("quartic_coefficients",
        [](const ModelParams& p, int n) {
          const auto q = quartic_coefficients(p, n);
          return py::make_tuple(q.c0, q.c1, q.c2);
        },
        py::arg("params"), py::arg("n"));
  m.def("quartic_roots",
        [](double c0, double c1, double c2) { return quartic_roots({0, c0, c1, c2}); },
        py::arg("c0"), py::arg("c1"), py::arg("c2"));

  m.def("evolve",
        [](const ModelParams& p, int n_max, const std::vector<double>& times, const std::string& qubits,
           std::optional<std::complex<double>> alpha, std::optional<int> fock, const std::string& engine,
           double guard) {
          const Truncation trunc{n_max};
          const ParityState s0 = initial_state(qubits, alpha, fock, trunc);
          EvolveOptions opt;
          opt.guard_tol = guard;
          Trajectory traj;
          {
            py::gil_scoped_release release;
            if (engine == "full") traj = evolve_parity(s0, p, times, opt);
            else if (engine == "rwa") traj = evolve_rwa_closed_form(s0, p, times, RwaBackend::SectorEigensolver, opt);
            else if (engine == "rwa-quartic") traj = evolve_rwa_closed_form(s0, p, times, RwaBackend::QuarticClosedForm, opt);
            else throw std::invalid_argument("engine must be 'full', 'rwa' or 'rwa-quartic'");
          }
          const auto n = static_cast<Eigen::Index>(traj.samples.size());
          Eigen::VectorXd t(n), mean_n(n), s_z(n), entropy(n), conc(n), norm(n), energy(n);
          for (Eigen::Index i = 0; i < n; ++i) {
            const Sample& s = traj.samples[static_cast<std::size_t>(i)];
            t(i) = s.t;
            mean_n(i) = s.mean_n;
            s_z(i) = s.s_z;
            entropy(i) = s.entropy;
            conc(i) = s.concurrence;
            norm(i) = s.norm;
            energy(i) = s.energy;
          }
          py::dict d;
          d["t"] = t;
          d["mean_n"] = mean_n;
          d["s_z"] = s_z;
          d["entropy"] = entropy;
          d["concurrence"] = conc;
          d["norm"] = norm;
          d["energy"] = energy;
          return d;
        },
        py::arg("params"), py::arg("n_max"), py::arg("times"), py::arg("qubits") = "gg",
        py::arg("alpha") = py::none(), py::arg("fock") = py::none(), py::arg("engine") = "full",
        py::arg("guard") = 1e-6);
}
