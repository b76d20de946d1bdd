// python bindings for the core pipeline: spectral models, kernels, the two
// coefficient routes, propagation and the stochastic ensemble

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nmme/assemble.hpp"
#include "nmme/coefffuncs.hpp"
#include "nmme/dynamics.hpp"
#include "nmme/green.hpp"
#include "nmme/unravel.hpp"

namespace py = pybind11;
using namespace nmme;

namespace {

py::array_t<cplx> vector_to_numpy(const std::vector<cplx>& v) {
    py::array_t<cplx> out(py::ssize_t(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> vector_to_numpy(const std::vector<double>& v) {
    py::array_t<double> out(py::ssize_t(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

// full (n+1)^2 matrix with zeros above the diagonal
py::array_t<cplx> table_to_numpy(const TwoVarTable& table) {
    const int n = table.grid().n;
    py::array_t<cplx> out({n + 1, n + 1});
    auto view = out.mutable_unchecked<2>();
    for (int i = 0; i <= n; ++i) {
        auto row = table.row(i);
        for (int j = 0; j <= n; ++j) view(i, j) = j <= i ? row[j] : cplx(0.0, 0.0);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(nmme, m) {
    m.doc() = "exact time-dependent master-equation coefficients for dissipative quantum optics";

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, int>(), py::arg("h"), py::arg("n"))
        .def_static("from_horizon", &TimeGrid::from_horizon, py::arg("horizon"), py::arg("n"))
        .def_readonly("h", &TimeGrid::h)
        .def_readonly("n", &TimeGrid::n)
        .def_property_readonly("horizon", &TimeGrid::horizon)
        .def("node", &TimeGrid::node);

    py::class_<Temperature>(m, "Temperature")
        .def_static("zero", &Temperature::zero)
        .def_static("inverse", &Temperature::inverse, py::arg("beta"))
        .def_property_readonly("is_zero", &Temperature::is_zero);

    py::class_<NullBath>(m, "NullBath").def(py::init<>());
    py::class_<OhmicExp>(m, "OhmicExp")
        .def(py::init([](double eta, double omega_c) {
                 return OhmicExp{eta, omega_c};
             }),
             py::arg("eta"), py::arg("omega_c"))
        .def_readonly("eta", &OhmicExp::eta)
        .def_readonly("omega_c", &OhmicExp::omega_c);
    py::class_<LorentzianExtended>(m, "LorentzianExtended")
        .def(py::init([](double gamma0, double lambda, double omega_center) {
                 return LorentzianExtended{gamma0, lambda, omega_center};
             }),
             py::arg("gamma0"), py::arg("lambda_"), py::arg("omega_center"))
        .def_readonly("gamma0", &LorentzianExtended::gamma0)
        .def_readonly("lambda_", &LorentzianExtended::lambda)
        .def_readonly("omega_center", &LorentzianExtended::omega_center);
    py::class_<FlatCutoff>(m, "FlatCutoff")
        .def(py::init([](double gamma, double omega_max) {
                 return FlatCutoff{gamma, omega_max};
             }),
             py::arg("gamma"), py::arg("omega_max"));
    py::class_<Tabulated>(m, "Tabulated")
        .def(py::init([](std::vector<double> omega, std::vector<double> j) {
                 return Tabulated{std::move(omega), std::move(j)};
             }),
             py::arg("omega"), py::arg("j"));

    m.def("alpha1", [](const SpectralModel& model, double t) { return alpha1(model, t); },
          py::arg("model"), py::arg("t"));
    m.def("alpha2",
          [](const SpectralModel& model, const Temperature& temp, double t) {
              return alpha2(model, temp, t);
          },
          py::arg("model"), py::arg("temperature"), py::arg("t"));

    py::class_<ResponseKernel>(m, "ResponseKernel")
        .def_readonly("grid", &ResponseKernel::grid)
        .def_property_readonly("a1", [](const ResponseKernel& k) { return vector_to_numpy(k.a1); })
        .def_property_readonly("a2", [](const ResponseKernel& k) { return vector_to_numpy(k.a2); })
        .def("conjugated", &ResponseKernel::conjugated)
        .def("decimated", &ResponseKernel::decimated);
    m.def("sample_kernels", &sample_kernels, py::arg("model"), py::arg("temperature"),
          py::arg("grid"));

    py::enum_<SolveMethod>(m, "SolveMethod")
        .value("dense_collocation", SolveMethod::dense_collocation)
        .value("picard", SolveMethod::picard);
    py::class_<SolverPolicy>(m, "SolverPolicy")
        .def(py::init<>())
        .def_readwrite("method", &SolverPolicy::method)
        .def_readwrite("picard_tol", &SolverPolicy::picard_tol)
        .def_readwrite("picard_max_iter", &SolverPolicy::picard_max_iter)
        .def_readwrite("relaxation", &SolverPolicy::relaxation);

    py::class_<TwoVarTable>(m, "TwoVarTable")
        .def_property_readonly("grid", &TwoVarTable::grid)
        .def("at", [](const TwoVarTable& t, int i, int j) { return t.at(i, j); })
        .def_readonly("max_residual", &TwoVarTable::max_residual)
        .def("matrix", &table_to_numpy);
    py::class_<OneVarTable>(m, "OneVarTable")
        .def_readonly("grid", &OneVarTable::grid)
        .def_property_readonly("values",
                               [](const OneVarTable& t) { return vector_to_numpy(t.values); })
        .def_readonly("max_residual", &OneVarTable::max_residual);

    m.def("solve_x11", &solve_x11, py::arg("kernel"), py::arg("omega0"), py::arg("grid"),
          py::arg("policy") = SolverPolicy{});
    m.def("solve_x21", &solve_x21, py::arg("kernel"), py::arg("omega0"), py::arg("grid"),
          py::arg("policy") = SolverPolicy{});
    m.def("verify_x21_translation_invariance", &verify_x21_translation_invariance,
          py::arg("kernel"), py::arg("omega0"), py::arg("grid"), py::arg("policy") = SolverPolicy{});
    m.def("solve_x12", &solve_x12, py::arg("kernel"), py::arg("omega0"), py::arg("grid"),
          py::arg("x21"), py::arg("policy") = SolverPolicy{});
    m.def("compute_y", &compute_y, py::arg("x11"), py::arg("x12"));
    m.def("solve_x13", &solve_x13, py::arg("kernel"), py::arg("omega0"), py::arg("drive"),
          py::arg("grid"), py::arg("policy") = SolverPolicy{});
    m.def("solve_x_tsa", &solve_x_tsa, py::arg("kernel"), py::arg("omega0"), py::arg("grid"),
          py::arg("policy") = SolverPolicy{});

    py::class_<Drive>(m, "Drive")
        .def(py::init([](double amplitude) { return Drive(ConstantDrive{amplitude}); }),
             py::arg("amplitude"))
        .def_static(
            "sinusoid",
            [](double amplitude, double omega, double phase) {
                return Drive(SinusoidDrive{amplitude, omega, phase});
            },
            py::arg("amplitude"), py::arg("omega"), py::arg("phase") = 0.0)
        .def("__call__", &Drive::operator());

    py::enum_<CoeffKind>(m, "CoeffKind")
        .value("cavity", CoeffKind::cavity)
        .value("driven_extra", CoeffKind::driven_extra)
        .value("two_state", CoeffKind::two_state)
        .value("oracle", CoeffKind::oracle);
    py::class_<CoeffSeries>(m, "CoeffSeries")
        .def_readonly("grid", &CoeffSeries::grid)
        .def_readonly("kind", &CoeffSeries::kind)
        .def_property_readonly("c1", [](const CoeffSeries& s) { return vector_to_numpy(s.c1); })
        .def_property_readonly("c2", [](const CoeffSeries& s) { return vector_to_numpy(s.c2); })
        .def_property_readonly("c3", [](const CoeffSeries& s) { return vector_to_numpy(s.c3); })
        .def_property_readonly("C", [](const CoeffSeries& s) { return vector_to_numpy(s.C); })
        .def_property_readonly("D", [](const CoeffSeries& s) { return vector_to_numpy(s.D); });

    m.def("assemble_A", &assemble_A, py::arg("kernel"), py::arg("x11"), py::arg("x21"),
          py::arg("y"), py::arg("omega0"));
    m.def("assemble_CD", &assemble_CD, py::arg("kernel"), py::arg("x13"), py::arg("drive"));
    m.def("assemble_RS", &assemble_RS, py::arg("kernel"), py::arg("x_tsa"));

    py::class_<GreenSolution>(m, "GreenSolution")
        .def_readonly("grid", &GreenSolution::grid)
        .def_property_readonly("u", [](const GreenSolution& g) { return vector_to_numpy(g.u); })
        .def_readonly("v", &GreenSolution::v);
    py::class_<XbarTables>(m, "XbarTables")
        .def_readonly("x11", &XbarTables::x11)
        .def_readonly("x21", &XbarTables::x21)
        .def_readonly("y", &XbarTables::y);
    m.def("solve_u",
          [](const ResponseKernel& fine, double omega0, const TimeGrid& grid) {
              return vector_to_numpy(solve_u(fine, omega0, grid));
          },
          py::arg("half_step_kernel"), py::arg("omega0"), py::arg("grid"));
    m.def("solve_green", &solve_green, py::arg("half_step_kernel"), py::arg("omega0"),
          py::arg("grid"));
    m.def("xbar_tables", &xbar_tables, py::arg("green"));
    m.def("assemble_B", &assemble_B, py::arg("kernel"), py::arg("tables"), py::arg("omega0"));

    py::enum_<ScenarioKind>(m, "ScenarioKind")
        .value("cavity", ScenarioKind::cavity)
        .value("driven_cavity", ScenarioKind::driven_cavity)
        .value("two_state", ScenarioKind::two_state);
    py::class_<FockState>(m, "FockState").def(py::init<int>(), py::arg("n"));
    py::class_<CoherentState>(m, "CoherentState").def(py::init<cplx>(), py::arg("alpha"));
    py::class_<ExcitedState>(m, "ExcitedState").def(py::init<>());
    py::class_<GroundState>(m, "GroundState").def(py::init<>());
    py::class_<BlochState>(m, "BlochState")
        .def(py::init<double, double>(), py::arg("theta"), py::arg("phi"));

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("kind", &Scenario::kind)
        .def_readwrite("omega0", &Scenario::omega0)
        .def_readwrite("bath", &Scenario::bath)
        .def_readwrite("temperature", &Scenario::temperature)
        .def_readwrite("n_max", &Scenario::n_max)
        .def_readwrite("initial", &Scenario::initial)
        .def_readwrite("drive", &Scenario::drive)
        .def("validate", &Scenario::validate)
        .def("initial_density", &Scenario::initial_density);

    py::class_<ObservableRecord>(m, "ObservableRecord")
        .def_readonly("trace", &ObservableRecord::trace)
        .def_readonly("purity", &ObservableRecord::purity)
        .def_readonly("n_or_pe", &ObservableRecord::n_or_pe)
        .def_readonly("coherence", &ObservableRecord::coherence);
    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("t", [](const Trajectory& t) { return vector_to_numpy(t.t); })
        .def_readonly("samples", &Trajectory::samples)
        .def_readonly("max_trace_drift", &Trajectory::max_trace_drift)
        .def_readonly("max_hermiticity_defect", &Trajectory::max_hermiticity_defect)
        .def_property_readonly("n_or_pe", [](const Trajectory& t) {
            std::vector<double> v(t.samples.size());
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = t.samples[k].n_or_pe;
            return vector_to_numpy(v);
        });
    m.def("propagate",
          [](const Scenario& sc, const CoeffSeries& coeffs, const CoeffSeries* extra) {
              return propagate(sc, coeffs, extra);
          },
          py::arg("scenario"), py::arg("coeffs"), py::arg("driven_extra") = nullptr);

    py::enum_<NoiseChannelSet>(m, "NoiseChannelSet")
        .value("full", NoiseChannelSet::full)
        .value("decay_only", NoiseChannelSet::decay_only);
    py::class_<EnsembleResult>(m, "EnsembleResult")
        .def_property_readonly("t", [](const EnsembleResult& e) { return vector_to_numpy(e.t); })
        .def_property_readonly("mean_obs",
                               [](const EnsembleResult& e) { return vector_to_numpy(e.mean_obs); })
        .def_property_readonly(
            "stderr_obs", [](const EnsembleResult& e) { return vector_to_numpy(e.stderr_obs); })
        .def_property_readonly(
            "mean_trace", [](const EnsembleResult& e) { return vector_to_numpy(e.mean_trace); })
        .def_property_readonly(
            "stderr_trace", [](const EnsembleResult& e) { return vector_to_numpy(e.stderr_trace); })
        .def_readonly("n_used", &EnsembleResult::n_used)
        .def_readonly("n_excluded", &EnsembleResult::n_excluded)
        .def_readonly("seed", &EnsembleResult::seed);
    m.def("run_ensemble", &run_ensemble, py::arg("scenario"), py::arg("grid"), py::arg("n_traj"),
          py::arg("seed"), py::arg("channels") = NoiseChannelSet::full, py::arg("threads") = 0);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
