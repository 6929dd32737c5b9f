#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdring/ensemble.hpp"
#include "sdring/lindblad.hpp"
#include "sdring/model.hpp"
#include "sdring/spectral.hpp"
#include "sdring/stochastic.hpp"

namespace py = pybind11;
using namespace sdring;

namespace {

ModelParams make_params(int N, double nu, double c, double gamma, double f_bias,
                        double sigma_f, double sigma_nu, double T_bath,
                        const std::string& dist_shape, std::uint64_t seed) {
    ModelParams p;
    p.N = N;
    p.nu = nu;
    p.c = c;
    p.gamma = gamma;
    p.f_bias = f_bias;
    p.sigma_f = sigma_f;
    p.sigma_nu = sigma_nu;
    p.T_bath = T_bath;
    p.dist_shape = dist_shape == "gaussian" ? DistShape::Gaussian : DistShape::Box;
    p.seed = seed;
    p.validate();
    return p;
}

}  // namespace

PYBIND11_MODULE(_sdring, m) {
    m.doc() = "spectra of disordered ring generators and their minimal Lindbladian";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<NoRootError>(m, "NoRootError", PyExc_ArithmeticError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&make_params), py::arg("N"), py::arg("nu") = 1.0, py::arg("c") = 0.0,
             py::arg("gamma") = 0.0, py::arg("f_bias") = 0.0, py::arg("sigma_f") = 0.0,
             py::arg("sigma_nu") = 0.0, py::arg("T_bath") = 100.0,
             py::arg("dist_shape") = "box", py::arg("seed") = 0)
        .def_readwrite("N", &ModelParams::N)
        .def_readwrite("nu", &ModelParams::nu)
        .def_readwrite("c", &ModelParams::c)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("f_bias", &ModelParams::f_bias)
        .def_readwrite("sigma_f", &ModelParams::sigma_f)
        .def_readwrite("sigma_nu", &ModelParams::sigma_nu)
        .def_readwrite("T_bath", &ModelParams::T_bath)
        .def_readwrite("seed", &ModelParams::seed)
        .def("validate", &ModelParams::validate)
        .def("hierarchy_warnings", &ModelParams::hierarchy_warnings);

    py::class_<DerivedScales>(m, "DerivedScales")
        .def_readonly("sigma_E", &DerivedScales::sigma_E)
        .def_readonly("eta", &DerivedScales::eta)
        .def_readonly("E_bias", &DerivedScales::E_bias);

    py::class_<RegimeLabel>(m, "RegimeLabel")
        .def_readonly("classical_high_T", &RegimeLabel::classical_high_T)
        .def_readonly("quantum_high_T", &RegimeLabel::quantum_high_T)
        .def_readonly("sinai_regime", &RegimeLabel::sinai_regime);

    py::class_<DisorderRealization>(m, "DisorderRealization")
        .def_readwrite("nu_x", &DisorderRealization::nu_x)
        .def_readwrite("f_x", &DisorderRealization::f_x)
        .def_readwrite("U", &DisorderRealization::U)
        .def_readwrite("E_x", &DisorderRealization::E_x)
        .def("size", &DisorderRealization::size)
        .def("field_mean", &DisorderRealization::field_mean);

    m.def("derive_scales", &derive_scales);
    m.def("classify_regime", &classify_regime);
    m.def("sample_realization", &sample_realization);
    m.def("rescale_field", &rescale_field, py::arg("real"), py::arg("new_f"),
          py::arg("new_scale"));
    m.def("params_from_json", &params_from_json);
    m.def("params_to_json", &params_to_json);

    m.def("transition_rates", [](const DisorderRealization& r) {
        const auto t = stochastic::transition_rates(r);
        return py::make_tuple(t.w_plus, t.w_minus);
    });
    m.def("build_rate_matrix", &stochastic::build_rate_matrix);
    m.def("build_rate_matrix_leading", &stochastic::build_rate_matrix_leading);
    m.def("clean_rate_spectrum", &stochastic::clean_rate_spectrum);
    m.def("hermitian_surrogate", [](const DisorderRealization& r) {
        const auto h = stochastic::hermitian_surrogate(r);
        return py::make_tuple(h.matrix, h.eigenvalues);
    });
    m.def("determinant_identity_residual", &stochastic::determinant_identity_residual);
    m.def("log_characteristic", &stochastic::log_characteristic);
    m.def("thouless_envelope", &stochastic::thouless_envelope, py::arg("lambda_"),
          py::arg("f"), py::arg("f_c"), py::arg("sigma_nu"), py::arg("nu"),
          py::arg("alpha0"), py::arg("alpha_c"));
    m.def("critical_bias_estimate", [](double sigma_f, const std::string& shape) {
        return stochastic::critical_bias_estimate(
            sigma_f, shape == "gaussian" ? DistShape::Gaussian : DistShape::Box);
    });
    m.def("spreading_exponent", &stochastic::spreading_exponent);
    m.def("spreading_exponent_gaussian", &stochastic::spreading_exponent_gaussian);

    m.def("build_hamiltonian", &lindblad::build_hamiltonian);
    m.def("build_bias_superoperator", &lindblad::build_bias_superoperator);
    m.def("build_lindbladian", &lindblad::build_lindbladian);
    m.def("clean_relaxation_rate", &lindblad::clean_relaxation_rate);
    m.def("clean_decoherence_spectrum", [](const ModelParams& p) {
        py::list out;
        for (const auto& mode : lindblad::clean_decoherence_spectrum(p))
            out.append(py::make_tuple(mode.r, mode.lambda, mode.multiplicity));
        return out;
    });
    m.def("momentum_block", [](double q, const ModelParams& p, int r_cutoff) {
        const auto block = lindblad::momentum_block(q, p, r_cutoff);
        return py::make_tuple(block.entries, block.central_decay_rate());
    });
    m.def("default_decay_scales", &lindblad::default_decay_scales);
    m.def("effective_bond_rates", &lindblad::effective_bond_rates);
    m.def("effective_resistor_width", &lindblad::effective_resistor_width);

    m.def(
        "eigendecompose",
        [](const Eigen::MatrixXcd& a, bool with_vectors) {
            const auto sol = spectral::eigendecompose(a, with_vectors);
            return py::make_tuple(sol.values, sol.vectors, sol.max_residual);
        },
        py::arg("matrix"), py::arg("with_vectors") = true);
    m.def("eigenvalues_only", &spectral::eigenvalues_only);
    m.def("mode_metrics", [](const Eigen::VectorXcd& mode, int N) {
        const auto mm = spectral::mode_metrics(mode, N);
        return py::make_tuple(mm.trace_q, mm.diag_weight, mm.ipr);
    });
    m.def("default_tol_im", &spectral::default_tol_im);
    m.def("count_complex", &spectral::count_complex);
    m.def(
        "spectrum_report",
        [](const Eigen::MatrixXcd& matrix, const std::string& kind, int N) {
            const auto mk = kind == "lindblad" ? spectral::MatrixKind::Lindbladian
                                               : spectral::MatrixKind::RateMatrix;
            const auto report =
                spectral::build_report(spectral::eigendecompose(matrix), mk, N);
            py::list modes;
            for (const auto& rec : report.modes) {
                py::dict d;
                d["lambda"] = rec.lambda;
                d["Q"] = rec.abs_q;
                d["diag_weight"] = rec.diag_weight;
                d["IPR"] = rec.ipr;
                d["branch"] = rec.branch == spectral::Branch::Relaxation ? "relaxation"
                              : rec.branch == spectral::Branch::Decoherence ? "decoherence"
                                                                            : "unresolved";
                d["pair_id"] = rec.pair_id;
                modes.append(d);
            }
            return modes;
        },
        py::arg("matrix"), py::arg("kind"), py::arg("N"));
    m.def("fit_transport", [](const std::vector<std::pair<double, std::complex<double>>>& q_lambda,
                              int N) {
        const auto fit = spectral::fit_transport(q_lambda, N);
        return py::make_tuple(fit.v, fit.D, fit.residual, fit.non_parabolic);
    });

    m.def(
        "threshold_fc",
        [](const DisorderRealization& real, const ModelParams& p, const std::string& model,
           double f_max, double tol) {
            ensemble::ThresholdOptions opts;
            opts.f_max = f_max;
            opts.tol = tol;
            const auto r = ensemble::threshold_fc(
                real, p,
                model == "lindblad" ? ensemble::ModelKind::Lindblad
                                    : ensemble::ModelKind::Stochastic,
                opts);
            return py::make_tuple(r.value, r.no_transition, r.monotone_ok);
        },
        py::arg("real"), py::arg("params"), py::arg("model") = "stochastic",
        py::arg("f_max") = 0.05, py::arg("tol") = 1e-5);
    m.def(
        "sigma_critical",
        [](const DisorderRealization& real, const ModelParams& p, const std::string& model,
           double sigma_max, double tol) {
            ensemble::ThresholdOptions opts;
            opts.sigma_max = sigma_max;
            opts.tol = tol;
            const auto r = ensemble::sigma_critical(
                real, p,
                model == "lindblad" ? ensemble::ModelKind::Lindblad
                                    : ensemble::ModelKind::Stochastic,
                opts);
            return py::make_tuple(r.value, r.no_transition, r.monotone_ok);
        },
        py::arg("real"), py::arg("params"), py::arg("model") = "stochastic",
        py::arg("sigma_max") = 0.3, py::arg("tol") = 1e-5);
    m.def("realization_seed", &ensemble::realization_seed);

    m.attr("__version__") = "0.1.0";
}
