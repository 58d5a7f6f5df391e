#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dfs/config.hpp"
#include "dfs/experiments.hpp"
#include "dfs/grape.hpp"
#include "dfs/io.hpp"
#include "dfs/logical.hpp"
#include "dfs/sequences.hpp"
#include "dfs/spin_model.hpp"
#include "dfs/tomography.hpp"

namespace py = pybind11;
using namespace dfs;

namespace {

Pulse pulse_from_array(const RMat& amps, double dt) {
  if (amps.cols() != 2) throw InvalidInput("amplitudes must have shape (n_steps, 2)");
  Pulse p = Pulse::zeros(static_cast<std::size_t>(amps.rows()), dt);
  for (Eigen::Index k = 0; k < amps.rows(); ++k) p.amps[k] = {amps(k, 0), amps(k, 1)};
  return p;
}

RMat pulse_to_array(const Pulse& p) {
  RMat out(static_cast<Eigen::Index>(p.n_steps()), 2);
  for (std::size_t k = 0; k < p.n_steps(); ++k) out.row(static_cast<Eigen::Index>(k)) << p.amps[k][0], p.amps[k][1];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Encoded two-qubit NMR control: spin model, GRAPE, tomography";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<SpinSystem>(m, "SpinSystem")
      .def(py::init([](std::vector<double> nu, RMat d, std::optional<RMat> j) {
             RMat jj = j ? *j : RMat::Zero(d.rows(), d.cols());
             SpinSystem s{std::move(nu), std::move(d), std::move(jj)};
             s.validate();
             return s;
           }),
           py::arg("nu_hz"), py::arg("d_hz"), py::arg("j_hz") = py::none())
      .def_readonly("nu_hz", &SpinSystem::nu)
      .def_readonly("d_hz", &SpinSystem::d)
      .def_readonly("j_hz", &SpinSystem::j)
      .def_property_readonly("n_spins", &SpinSystem::n_spins)
      .def("subsystem", &SpinSystem::subsystem, py::arg("spins"));

  m.def("cnb_nominal", &cnb_nominal);
  m.def("internal_hamiltonian", &internal_hamiltonian, py::arg("system"));
  m.def("total_fz", &total_fz, py::arg("n_spins"));
  m.def("pauli_embed", [](std::size_t n, std::size_t spin, char axis) {
    const Axis a = axis == 'x' ? Axis::X : axis == 'y' ? Axis::Y : axis == 'z' ? Axis::Z
                 : throw InvalidInput("axis must be 'x', 'y' or 'z'");
    return pauli_embed(n, spin, a);
  }, py::arg("n_spins"), py::arg("spin"), py::arg("axis"));

  m.def("logical_basis", [] { return logical_basis().basis; });
  m.def("logical_block", &logical_block, py::arg("u"));
  m.def("leakage", &leakage, py::arg("u"));
  m.def("logical_gate_fidelity", &logical_gate_fidelity, py::arg("u"), py::arg("target"));
  m.def("embed_logical_unitary", [](const Mat& t) { return embed_logical_unitary(t); }, py::arg("target"));
  m.def("u_ent", [] { return u_ent_logical().block; });
  m.def("u_prep", [] { return u_prep_logical().block; });
  m.def("collective_dephasing", [](const Mat& rho, double s) { return collective_dephasing(rho, s); },
        py::arg("rho"), py::arg("sigma_phi"));

  m.def("pulse_propagator",
        [](const RMat& amps, double dt, const SpinSystem& sys, double eps) {
          return pulse_propagator(pulse_from_array(amps, dt), EnsembleMember{sys, eps, 1.0});
        },
        py::arg("amps"), py::arg("dt"), py::arg("system"), py::arg("eps") = 1.0);

  m.def("gradient",
        [](const RMat& amps, double dt, const SpinSystem& sys, const std::string& target, double eps) {
          const ValueGradient vg = grape_gradient(pulse_from_array(amps, dt), EnsembleMember{sys, eps, 1.0},
                                                  make_target(target).objective);
          return py::make_tuple(vg.value, vg.gradient);
        },
        py::arg("amps"), py::arg("dt"), py::arg("system"), py::arg("target") = "u_ent", py::arg("eps") = 1.0);

  m.def("synthesize",
        [](const std::string& target, std::size_t n_steps, double dt, std::size_t max_iters, std::uint64_t seed,
           bool single_member) {
          Config cfg = default_config();
          cfg.grape.n_steps = n_steps;
          cfg.grape.dt = dt;
          cfg.grape.max_iters = max_iters;
          cfg.grape.seed = seed;
          const Ensemble ens = single_member ? Ensemble::single(cfg.system) : cfg.build_ensemble();
          OptimizeResult r;
          {
            py::gil_scoped_release release;
            r = synthesize(make_target(target), cfg.grape, ens);
          }
          py::dict out;
          out["amps"] = pulse_to_array(r.pulse);
          out["dt"] = r.pulse.dt;
          out["fidelity"] = r.fidelity();
          out["trace"] = r.trace.fidelity;
          out["termination"] = to_string(r.trace.reason);
          return out;
        },
        py::arg("target"), py::arg("n_steps") = 150, py::arg("dt") = 1e-5, py::arg("max_iters") = 2000,
        py::arg("seed") = 42, py::arg("single_member") = false);

  m.def("mrev8_shift_scale", &mrev8_shift_scale, py::arg("system"), py::arg("tau"));
  m.def("prepare_pseudo_pure", [](const Mat& u) { return prepare_pseudo_pure(u); }, py::arg("u_prep"));

  m.def("observe", &observe, py::arg("rho"));
  m.def("correlation", &correlation, py::arg("a"), py::arg("b"));
  m.def("ideal_round_trip",
        [](const Mat& rho) {
          const ReadoutSet set = ideal_readout_set();
          const Reconstruction rec = reconstruct(simulate_records(rho, set), set);
          return py::make_tuple(rec.rho_l, rec.residual, rec.condition);
        },
        py::arg("rho"), "Simulate ideal-mode readouts of a 16x16 state and reconstruct its logical block.");

  m.def("read_pulse_file", [](const std::string& path) {
    const PulseFile f = read_pulse_file(path);
    py::dict out;
    out["amps"] = pulse_to_array(f.pulse);
    out["dt"] = f.pulse.dt;
    out["amp_max_hz"] = f.amp_max_hz;
    out["target"] = f.target;
    out["config_hash"] = f.config_hash;
    return out;
  }, py::arg("path"));
  m.def("write_pulse_file",
        [](const std::string& path, const RMat& amps, double dt, const std::string& target, double amp_max) {
          write_pulse_file(path, {pulse_from_array(amps, dt), amp_max, target, ""});
        },
        py::arg("path"), py::arg("amps"), py::arg("dt"), py::arg("target"), py::arg("amp_max_hz") = kDefaultAmpMaxHz);
  m.def("config_hash", [](const std::string& path) { return config_hash(load_config(path)); }, py::arg("path"));
}
