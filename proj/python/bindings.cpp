#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snsqkd/math.hpp"
#include "snsqkd/montecarlo.hpp"
#include "snsqkd/optimize.hpp"
#include "snsqkd/protocol.hpp"
#include "snsqkd/security.hpp"

namespace py = pybind11;
using namespace snsqkd;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sending-or-not-sending twin-field QKD simulator and "
              "security analysis";

    m.def("binary_entropy", &binary_entropy, py::arg("x"));
    m.def("poisson_pmf", &poisson_pmf, py::arg("k"), py::arg("mu"));
    m.def("transmittance", &transmittance, py::arg("length_km"),
          py::arg("exponent_per_km"));
    m.def("slice_acceptance_probability", &slice_acceptance_probability,
          py::arg("lambda_"));
    m.def("phase_slice_accept", &phase_slice_accept, py::arg("delta_a"),
          py::arg("delta_b"), py::arg("lambda_"));

    py::class_<SourceEquivalence>(m, "SourceEquivalence")
        .def_readonly("mixture_distance", &SourceEquivalence::mixture_distance)
        .def_readonly("unitarity_deviation",
                      &SourceEquivalence::unitarity_deviation)
        .def("max_deviation", &SourceEquivalence::max_deviation);
    m.def("check_source_equivalence", &check_source_equivalence,
          py::arg("rho_a"), py::arg("rho_b"));

    py::class_<ProtocolParams>(m, "ProtocolParams")
        .def(py::init<>())
        .def_readwrite("mu", &ProtocolParams::mu)
        .def_readwrite("epsilon", &ProtocolParams::epsilon)
        .def_readwrite("p_x", &ProtocolParams::p_x)
        .def_readwrite("lambda_", &ProtocolParams::lambda)
        .def_readwrite("f", &ProtocolParams::f)
        .def_readwrite("n_windows", &ProtocolParams::n_windows)
        .def_readwrite("mu_M", &ProtocolParams::mu_M)
        .def_readwrite("test_fraction", &ProtocolParams::test_fraction)
        .def("validate", &ProtocolParams::validate);

    py::class_<ChannelModel>(m, "ChannelModel")
        .def(py::init<>())
        .def_readwrite("length_km", &ChannelModel::length_km)
        .def_readwrite("loss_exponent_per_km", &ChannelModel::loss_exponent_per_km)
        .def_readwrite("eta_d", &ChannelModel::eta_d)
        .def_readwrite("p_d", &ChannelModel::p_d)
        .def_readwrite("e_a", &ChannelModel::e_a)
        .def("channel_transmittance", &ChannelModel::channel_transmittance)
        .def("arm_transmittance", &ChannelModel::arm_transmittance)
        .def_static("paper_channel", &ChannelModel::paper_channel,
                    py::arg("length_km"), py::arg("e_a"))
        .def_static("standard_fiber", &ChannelModel::standard_fiber,
                    py::arg("length_km"), py::arg("e_a"));
    m.def("channel_transmittance", &channel_transmittance, py::arg("length_km"),
          py::arg("model"));

    py::class_<ClickProbabilities>(m, "ClickProbabilities")
        .def_readonly("p_d0", &ClickProbabilities::p_d0)
        .def_readonly("p_d1", &ClickProbabilities::p_d1);
    m.def("click_probabilities", &click_probabilities, py::arg("i_a"),
          py::arg("i_b"), py::arg("delta"), py::arg("channel"));

    py::class_<ObservedCounts>(m, "ObservedCounts")
        .def(py::init<>())
        .def_readwrite("n_windows", &ObservedCounts::n_windows)
        .def_readwrite("N_X", &ObservedCounts::N_X)
        .def_readwrite("n_X0", &ObservedCounts::n_X0)
        .def_readwrite("n_X1", &ObservedCounts::n_X1)
        .def_readwrite("N_Z", &ObservedCounts::N_Z)
        .def_readwrite("n_Z0", &ObservedCounts::n_Z0)
        .def_readwrite("n_Z1", &ObservedCounts::n_Z1)
        .def_readwrite("n_t", &ObservedCounts::n_t)
        .def_readwrite("n_err_Z", &ObservedCounts::n_err_Z)
        .def_readwrite("N_C", &ObservedCounts::N_C)
        .def_readwrite("N_00", &ObservedCounts::N_00)
        .def_readwrite("k_00_0", &ObservedCounts::k_00_0)
        .def_readwrite("k_00_1", &ObservedCounts::k_00_1);

    py::class_<GroundTruth>(m, "GroundTruth")
        .def(py::init<>())
        .def_readwrite("tilde_n_plus0", &GroundTruth::tilde_n_plus0)
        .def_readwrite("tilde_n_plus1", &GroundTruth::tilde_n_plus1)
        .def_readwrite("tilde_n_Z0", &GroundTruth::tilde_n_Z0)
        .def_readwrite("tilde_n_Z1", &GroundTruth::tilde_n_Z1)
        .def_readwrite("true_n1", &GroundTruth::true_n1);

    m.def("expected_observables", &expected_observables, py::arg("params"),
          py::arg("channel"));

    py::class_<McOptions>(m, "McOptions")
        .def(py::init<>())
        .def_readwrite("seed", &McOptions::seed)
        .def_readwrite("threads", &McOptions::threads)
        .def_readwrite("batch_size", &McOptions::batch_size)
        .def_readwrite("force_single_photon", &McOptions::force_single_photon);

    py::class_<McResult>(m, "McResult")
        .def_readonly("counts", &McResult::counts)
        .def_readonly("truth", &McResult::truth);

    m.def(
        "monte_carlo_observables",
        [](const ProtocolParams& params, const ChannelModel& ch,
           const McOptions& opt) {
            py::gil_scoped_release release;
            return monte_carlo_observables(params, ch, opt);
        },
        py::arg("params"), py::arg("channel"), py::arg("options"));
    m.def(
        "monte_carlo_observables",
        [](const ProtocolParams& params, const ChannelModel& ch,
           std::uint64_t seed) {
            py::gil_scoped_release release;
            return monte_carlo_observables(params, ch, seed);
        },
        py::arg("params"), py::arg("channel"), py::arg("seed"));

    py::class_<SecurityBounds>(m, "SecurityBounds")
        .def_readonly("n_plus0_L", &SecurityBounds::n_plus0_L)
        .def_readonly("n_plus1_U", &SecurityBounds::n_plus1_U)
        .def_readonly("n_tilde_Z_L", &SecurityBounds::n_tilde_Z_L)
        .def_readonly("e1ph_U", &SecurityBounds::e1ph_U)
        .def_readonly("n1_L", &SecurityBounds::n1_L)
        .def_readonly("EZ", &SecurityBounds::EZ)
        .def_readonly("N_f", &SecurityBounds::N_f)
        .def_readonly("R", &SecurityBounds::R)
        .def_readonly("matched_N_X", &SecurityBounds::matched_N_X)
        .def_readonly("matched_N_Z", &SecurityBounds::matched_N_Z)
        .def_readonly("diagnostic", &SecurityBounds::diagnostic)
        .def("collapsed", &SecurityBounds::collapsed);

    m.def("analyze", &analyze, py::arg("counts"), py::arg("params"));
    m.def("single_photon_e1ph", &single_photon_e1ph, py::arg("ground_truth"));
    m.def("key_length", &key_length, py::arg("n1"), py::arg("e1ph"),
          py::arg("n_t"), py::arg("EZ"), py::arg("f"));
    m.def("scale_to_matched", &scale_to_matched, py::arg("ground_truth"),
          py::arg("counts"), py::arg("bounds"));

    py::class_<SearchSpace>(m, "SearchSpace")
        .def(py::init<>())
        .def_readwrite("mu_min", &SearchSpace::mu_min)
        .def_readwrite("mu_max", &SearchSpace::mu_max)
        .def_readwrite("eps_min", &SearchSpace::eps_min)
        .def_readwrite("eps_max", &SearchSpace::eps_max)
        .def_readwrite("lambda_min", &SearchSpace::lambda_min)
        .def_readwrite("lambda_max", &SearchSpace::lambda_max)
        .def_readwrite("px_min", &SearchSpace::px_min)
        .def_readwrite("px_max", &SearchSpace::px_max)
        .def_readwrite("grid_points", &SearchSpace::grid_points);

    py::class_<OptimizeOptions>(m, "OptimizeOptions")
        .def(py::init<>())
        .def_readwrite("threads", &OptimizeOptions::threads)
        .def_readwrite("refine_rel_tol", &OptimizeOptions::refine_rel_tol)
        .def_readwrite("refine_max_iter", &OptimizeOptions::refine_max_iter)
        .def_readwrite("n_windows", &OptimizeOptions::n_windows)
        .def_readwrite("f", &OptimizeOptions::f)
        .def_readwrite("test_fraction", &OptimizeOptions::test_fraction)
        .def_readwrite("mu_M", &OptimizeOptions::mu_M);

    py::class_<OptimizeResult>(m, "OptimizeResult")
        .def_readonly("params", &OptimizeResult::params)
        .def_readonly("bounds", &OptimizeResult::bounds);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("length_km", &SweepRow::length_km)
        .def_readonly("params", &SweepRow::params)
        .def_readonly("bounds", &SweepRow::bounds);

    m.def(
        "optimize",
        [](const ChannelModel& ch, const SearchSpace& space,
           const OptimizeOptions& opt) {
            py::gil_scoped_release release;
            return optimize(ch, space, opt);
        },
        py::arg("channel"), py::arg("space") = SearchSpace{},
        py::arg("options") = OptimizeOptions{});
    m.def(
        "sweep",
        [](const std::vector<double>& distances, const ChannelModel& ch,
           const SearchSpace& space, const OptimizeOptions& opt) {
            py::gil_scoped_release release;
            return sweep(distances, ch, space, opt);
        },
        py::arg("distances_km"), py::arg("channel"),
        py::arg("space") = SearchSpace{}, py::arg("options") = OptimizeOptions{});
}
