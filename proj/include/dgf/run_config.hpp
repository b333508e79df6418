#ifndef DGF_RUN_CONFIG_HPP
#define DGF_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dgf/flow.hpp"
#include "dgf/states.hpp"

namespace dgf {

struct ManifoldConfig {
    std::string name = "round_sphere";
    double radius = 1.0; // round_sphere
    int dim = 3;         // flat_space
};

/// Initial-data specification: a named base fixture, optional explicit mode
/// lists, and optional seeded band-limited random perturbations.
struct InitialConfig {
    std::string fixture = "great_circle"; // great_circle | latitude | torus_winding |
                                          // stationary_pair | mode_list
    double z0 = 0.5;        // latitude height
    int winding_p = 1;      // torus windings
    int winding_q = 0;
    int curve_winding = 1;  // mode_list winding on the unit circle
    std::vector<ModeEntry> curve_modes; // angle offset a cos(ks) + b sin(ks)

    std::string spinor = "zero"; // zero | stationary | mode_list | random
    std::vector<ModeEntry> spinor_modes; // chi = sum (a + ib) e^{i lambda s}

    double perturbation_amplitude = 0.0; // random tangential curve perturbation
    int perturbation_band = 0;
    double spinor_amplitude = 0.0; // random tangent spinor
    int spinor_band = 0;
    int spinor_band_min = 0;
    std::uint64_t seed = 1;
};

/// Exact-solution regression on the unit circle, both spin structures.
struct ValidateConfig {
    std::vector<double> eps_values = {0.5, 1.0, 2.0};
    double tolerance = 1e-6;
    std::vector<ModeEntry> curve_modes;
    std::vector<ModeEntry> sigma1_modes;
    std::vector<ModeEntry> sigma2_modes;

    ValidateConfig();
};

struct RunConfig {
    std::string scenario = "flow"; // validate | flow | sweep | spectrum | report
    ManifoldConfig manifold;
    SpinStructure spin = SpinStructure::Sigma1;
    int n = 64;
    double eps = 1.0;
    std::vector<double> eps_list; // sweep scenario, descending
    double dt = 1e-3;
    double t_end = 1.0;
    Integrator integrator = Integrator::SemiImplicit;
    bool rescaled = true;
    double stationary_tol = 1e-6;
    int monitor_stride = 10;
    double blowup_sup_F = 1e12;
    bool require_convergence = false;
    InitialConfig initial;
    ValidateConfig validate;
    std::string out_dir = "out";

    std::string spectrum_operator = "all"; // spectrum scenario

    std::vector<std::string> report_inputs; // report scenario
    std::vector<double> report_eps_labels;

    FlowParams flow_params() const;
};

/// Parses and validates a JSON run configuration. Throws ConfigError on any
/// malformed or inconsistent input.
RunConfig parse_run_config_text(const std::string& text);
RunConfig parse_run_config_file(const std::string& path);

/// The config echo placed in run summaries; sufficient to reproduce the run.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config);

} // namespace dgf

#endif
