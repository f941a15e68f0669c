#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "optodistill/dynamics.hpp"
#include "optodistill/entanglement.hpp"
#include "optodistill/errors.hpp"
#include "optodistill/measurement.hpp"
#include "optodistill/params.hpp"
#include "optodistill/teleportation.hpp"
#include "optodistill/types.hpp"

namespace py = pybind11;
using namespace optodistill;

namespace {

// Two-mode operators cross the boundary as (d, d, d, d) arrays indexed
// [n1, n2, m1, m2]; single-mode ones as (d, d).
py::array_t<cplx> two_mode_to_numpy(const TwoModeDensityMatrix& rho) {
    const int d = rho.mode_dim();
    py::array_t<cplx> out({d, d, d, d});
    auto view = out.mutable_unchecked<4>();
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            for (int m1 = 0; m1 < d; ++m1)
                for (int m2 = 0; m2 < d; ++m2) view(n1, n2, m1, m2) = rho.at(n1, n2, m1, m2);
    return out;
}

TwoModeDensityMatrix two_mode_from_numpy(
    const py::array_t<cplx, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 4) throw IndexError("expected a (d, d, d, d) array");
    const int d = static_cast<int>(a.shape(0));
    for (int i = 1; i < 4; ++i)
        if (a.shape(i) != d) throw IndexError("expected equal dimensions on all four axes");
    if (d < 1) throw IndexError("empty state array");
    TwoModeDensityMatrix rho(d - 1);
    auto view = a.unchecked<4>();
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            for (int m1 = 0; m1 < d; ++m1)
                for (int m2 = 0; m2 < d; ++m2) rho.at(n1, n2, m1, m2) = view(n1, n2, m1, m2);
    return rho;
}

py::array_t<cplx> single_mode_to_numpy(const ComplexMatrix& m) {
    const int d = m.dim();
    py::array_t<cplx> out({d, d});
    auto view = out.mutable_unchecked<2>();
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) view(r, c) = m.at(r, c);
    return out;
}

}  // namespace

PYBIND11_MODULE(optodistill, m) {
    m.doc() = "Fock-space simulation of optomechanical entanglement distillation";
    m.attr("__version__") = kVersion;

    // Base first: translators run newest-first, so ConfigError gets matched
    // before falling back to the base Error mapping.
    py::register_exception<Error>(m, "OptodistillError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ProtocolParams>(m, "ProtocolParams")
        .def(py::init<>())
        .def_readwrite("lambda_", &ProtocolParams::lambda)
        .def_readwrite("g", &ProtocolParams::g)
        .def_readwrite("kappa", &ProtocolParams::kappa)
        .def_readwrite("theta", &ProtocolParams::theta)
        .def_readwrite("t", &ProtocolParams::t)
        .def_readwrite("delta_q", &ProtocolParams::delta_q)
        .def_readwrite("alpha", &ProtocolParams::alpha)
        .def_readwrite("n_max", &ProtocolParams::n_max)
        .def_readwrite("truncation_tol", &ProtocolParams::truncation_tol)
        .def_property("r", &ProtocolParams::reflectivity, &ProtocolParams::set_reflectivity)
        .def("validate", &ProtocolParams::validate);

    py::class_<SweepResultRow>(m, "SweepResultRow")
        .def_readonly("g", &SweepResultRow::g)
        .def_readonly("lambda_", &SweepResultRow::lambda)
        .def_readonly("success_prob", &SweepResultRow::success_prob)
        .def_readonly("ratio_at_q", &SweepResultRow::ratio_at_q)
        .def_readonly("n0", &SweepResultRow::n0)
        .def_readonly("max_ratio", &SweepResultRow::max_ratio)
        .def_readonly("argmax_q", &SweepResultRow::argmax_q)
        .def_readonly("status", &SweepResultRow::status);

    py::class_<FidelityMapRow>(m, "FidelityMapRow")
        .def_readonly("beta_mag", &FidelityMapRow::beta_mag)
        .def_readonly("beta_phase", &FidelityMapRow::beta_phase)
        .def_readonly("f_d", &FidelityMapRow::f_d)
        .def_readonly("f_0", &FidelityMapRow::f_0)
        .def_readonly("ratio", &FidelityMapRow::ratio)
        .def_readonly("status", &FidelityMapRow::status);

    py::class_<Eq6Diagnosis>(m, "Eq6Diagnosis")
        .def_readonly("max_dev_verbatim", &Eq6Diagnosis::max_dev_verbatim)
        .def_readonly("max_dev_production", &Eq6Diagnosis::max_dev_production)
        .def_readonly("first_diff_n", &Eq6Diagnosis::first_diff_n)
        .def_readonly("first_diff_m", &Eq6Diagnosis::first_diff_m)
        .def_readonly("verbatim_agrees", &Eq6Diagnosis::verbatim_agrees);

    m.def(
        "tmsv_state",
        [](double lambda, int n_max) { return two_mode_to_numpy(tmsv_state(lambda, n_max)); },
        py::arg("lambda_"), py::arg("n_max"),
        "Truncated two-mode squeezed vacuum as a (d,d,d,d) array [n1,n2,m1,m2]");

    m.def(
        "negativity",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& rho) {
            return negativity(two_mode_from_numpy(rho)).value;
        },
        py::arg("rho"), "Entanglement negativity of a (d,d,d,d) two-mode state");

    m.def("outcome_pdf",
          static_cast<double (*)(const ProtocolParams&, double)>(&outcome_pdf),
          py::arg("params"), py::arg("q"), "Probability density of position outcome q");

    m.def(
        "conditional_state",
        [](const ProtocolParams& p, double q) {
            const MeasurementRecord rec = conditional_state(p, q);
            return py::make_tuple(rec.pdf, two_mode_to_numpy(rec.conditional_state));
        },
        py::arg("params"), py::arg("q"),
        "(pdf, normalized post-measurement two-mode state) at outcome q");

    m.def(
        "distillation_ratio",
        [](const ProtocolParams& p, double q) {
            const DistillationRatio r = distillation_ratio(p, q);
            return py::make_tuple(r.n_d, r.n_0, r.ratio);
        },
        py::arg("params"), py::arg("q"), "(N_D, N_0, N_D/N_0) at outcome q");

    m.def("success_probability", &success_probability, py::arg("params"),
          py::arg("q_step") = 0.0,
          "Probability that the measured outcome increases the negativity");

    m.def("sweep", &sweep, py::arg("g_values"), py::arg("lambda_values"), py::arg("fixed"),
          py::arg("designated_q"), "Grid sweep; row-major over (g, lambda)");

    m.def(
        "teleport_outcome",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& resource,
           cplx beta, double x_bar, double p_bar) {
            const TeleportationOutcome out =
                teleport_outcome(two_mode_from_numpy(resource), beta, x_bar, p_bar);
            return py::make_tuple(out.joint_pdf, out.fidelity,
                                  single_mode_to_numpy(out.output_state));
        },
        py::arg("resource"), py::arg("beta"), py::arg("x_bar"), py::arg("p_bar"),
        "(joint pdf, fidelity, normalized output state) for one Bell outcome");

    m.def("average_fidelity", &average_fidelity, py::arg("params"), py::arg("q"),
          py::arg("beta"), "Outcome-averaged teleportation fidelity of the distilled state");

    m.def(
        "baseline_average_fidelity",
        [](const ProtocolParams& p, cplx beta, const std::string& which) {
            if (which == "pristine_tmsv")
                return baseline_average_fidelity(p, beta, BaselineResource::pristine_tmsv);
            if (which == "lossy_unmeasured")
                return baseline_average_fidelity(p, beta, BaselineResource::lossy_unmeasured);
            throw ConfigError("baseline must be 'pristine_tmsv' or 'lossy_unmeasured'");
        },
        py::arg("params"), py::arg("beta"), py::arg("which") = "pristine_tmsv",
        "Average fidelity through the undistilled reference resource");

    m.def("fidelity_ratio_map", &fidelity_ratio_map, py::arg("params"), py::arg("q"),
          py::arg("beta_magnitudes"), py::arg("beta_phases"), py::arg("rel_tol") = 1e-5,
          "Average-fidelity ratio over a (|beta|, phase) grid");

    m.def("diagnose_eq6", &diagnose_eq6, py::arg("params"), py::arg("q"), py::arg("beta"),
          py::arg("grid_per_axis") = 5, py::arg("half_range") = 2.0,
          "Compare the eq6 joint-measurement expansion against the dense oracle");
}
