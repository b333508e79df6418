#include "dgf/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dgf/io.hpp"
#include "dgf/oracle.hpp"

namespace dgf {

namespace fs = std::filesystem;

namespace {

double wrap_to_pi(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

std::shared_ptr<const ManifoldSpec> manifold_from(const ManifoldConfig& m) {
    CatalogParams params;
    params.radius = m.radius;
    params.dim = m.dim;
    return catalog(m.name, params);
}

std::shared_ptr<const CurveField> base_curve(const RunConfig& c, const CircleGrid& grid,
                                             std::shared_ptr<const ManifoldSpec> spec) {
    const std::string& fixture = c.initial.fixture;
    const int q = spec->ambient_dim;

    if (fixture == "mode_list") {
        if (spec->name != "unit_circle")
            throw ConfigError("initial.fixture mode_list needs manifold unit_circle");
        const Eigen::VectorXd phi = angle_field(grid, c.initial.curve_modes);
        return std::make_shared<CurveField>(grid, spec,
                                            unit_circle_curve(grid, c.initial.curve_winding, phi));
    }
    if (fixture == "latitude") {
        if (spec->name != "round_sphere")
            throw ConfigError("initial.fixture latitude needs manifold round_sphere");
        const double r = c.manifold.radius;
        if (!(std::abs(c.initial.z0) < r))
            throw ConfigError("latitude fixture needs |z0| < radius");
        const double rho = std::sqrt(r * r - c.initial.z0 * c.initial.z0);
        MatrixXd pts(grid.size(), 3);
        for (int j = 0; j < grid.size(); ++j)
            pts.row(j) << rho * std::cos(grid.node(j)), rho * std::sin(grid.node(j)),
                c.initial.z0;
        return std::make_shared<CurveField>(grid, spec, pts);
    }
    if (fixture == "torus_winding") {
        if (spec->name != "clifford_torus")
            throw ConfigError("initial.fixture torus_winding needs manifold clifford_torus");
        const double r = 1.0 / std::sqrt(2.0);
        VectorXd p(4), v(4);
        p << r, 0.0, r, 0.0;
        v << 0.0, r * c.initial.winding_p, 0.0, r * c.initial.winding_q;
        return std::make_shared<CurveField>(grid, spec, geodesic_fixture(*spec, grid, p, v));
    }
    if (fixture == "great_circle" || fixture == "stationary_pair") {
        if (spec->name == "unit_circle") {
            VectorXd p(2), v(2);
            p << 1.0, 0.0;
            v << 0.0, 1.0;
            return std::make_shared<CurveField>(grid, spec, geodesic_fixture(*spec, grid, p, v));
        }
        if (spec->name == "round_sphere") {
            const double r = c.manifold.radius;
            VectorXd p(3), v(3);
            p << r, 0.0, 0.0;
            v << 0.0, r, 0.0;
            return std::make_shared<CurveField>(grid, spec, geodesic_fixture(*spec, grid, p, v));
        }
        if (spec->name == "clifford_torus") {
            const double r = 1.0 / std::sqrt(2.0);
            VectorXd p(4), v(4);
            p << r, 0.0, r, 0.0;
            v << 0.0, r, 0.0, 0.0; // (1,0)-winding
            return std::make_shared<CurveField>(grid, spec, geodesic_fixture(*spec, grid, p, v));
        }
        if (spec->name == "flat_space") {
            // round unit loop in the first two coordinates
            MatrixXd pts = MatrixXd::Zero(grid.size(), q);
            for (int j = 0; j < grid.size(); ++j) {
                pts(j, 0) = std::cos(grid.node(j));
                if (q > 1) pts(j, 1) = std::sin(grid.node(j));
            }
            return std::make_shared<CurveField>(grid, spec, pts);
        }
    }
    throw ConfigError("unknown initial.fixture '" + fixture + "'");
}

} // namespace

FlowState build_initial_state(const RunConfig& c) {
    const CircleGrid grid(c.n);
    auto spec = manifold_from(c.manifold);
    RandomStream rng(c.initial.seed);

    std::shared_ptr<const CurveField> curve = base_curve(c, grid, spec);
    const bool stationary_pair =
        c.initial.fixture == "stationary_pair" || c.initial.spinor == "stationary";

    if (c.initial.perturbation_amplitude != 0.0) {
        if (stationary_pair)
            throw ConfigError("stationary_pair cannot be combined with a curve perturbation");
        MatrixXd pts = random_tangent_perturbation(*curve, c.initial.perturbation_amplitude,
                                                   c.initial.perturbation_band, rng);
        curve = std::make_shared<CurveField>(grid, spec, std::move(pts));
    }

    SpinorField spinor = SpinorField::zero(curve, c.spin);
    if (stationary_pair) {
        if (c.spin != SpinStructure::Sigma1)
            throw ConfigError("stationary_pair needs spin_structure sigma1 (harmonic spinors "
                              "exist only for sigma1)");
        spinor = construct_stationary(curve, Eigen::VectorXcd::Ones(c.n), c.spin);
    } else if (c.initial.spinor == "mode_list") {
        spinor = spinor_along_velocity(curve, c.spin,
                                       spinor_scalar_field(grid, c.spin, c.initial.spinor_modes));
    } else if (c.initial.spinor == "random") {
        spinor = random_tangent_spinor(curve, c.spin, c.initial.spinor_amplitude,
                                       c.initial.spinor_band_min, c.initial.spinor_band, rng);
    } else if (c.initial.spinor != "zero") {
        throw ConfigError("unknown initial.spinor '" + c.initial.spinor + "'");
    }

    return FlowState{0.0, std::move(spinor)};
}

namespace {

struct ScopedTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void append_residuals(std::vector<std::pair<std::string, std::string>>& s,
                      const StationarityReport& stat) {
    s.emplace_back("grad_norm", format_double(stat.grad_norm));
    s.emplace_back("regularized_residual_sup",
                   format_double(std::max(stat.regularized.curve_sup, stat.regularized.spinor_sup)));
    s.emplace_back("unregularized_residual_sup",
                   format_double(std::max(stat.unregularized.curve_sup,
                                          stat.unregularized.spinor_sup)));
    s.emplace_back("dirac_residual_l2", format_double(stat.unregularized.spinor_l2));
}

void append_speed_spread(std::vector<std::pair<std::string, std::string>>& s,
                         const FlowState& state) {
    const Eigen::VectorXd speed = state.curve().velocity().rowwise().norm();
    const double lo = speed.minCoeff(), hi = speed.maxCoeff();
    s.emplace_back("gamma_speed_min", format_double(lo));
    s.emplace_back("gamma_speed_max", format_double(hi));
    s.emplace_back("gamma_speed_relative_spread",
                   format_double((hi - lo) / std::max(hi, 1e-300)));
}

int scenario_flow(const RunConfig& c) {
    FlowState state0 = build_initial_state(c);
    fs::create_directories(c.out_dir);
    const std::string diag_path = (fs::path(c.out_dir) / "diagnostics.csv").string();
    std::ofstream diag(diag_path);
    if (!diag) throw IoError("cannot open '" + diag_path + "'");
    write_diagnostics_header(diag);

    std::vector<std::string> snapshot_paths;
    double best_grad = std::numeric_limits<double>::infinity();
    Observer observer = [&](const FlowState& s, const DiagnosticsRecord& rec) {
        write_diagnostics_row(diag, rec);
        if (rec.grad_norm < best_grad) {
            best_grad = rec.grad_norm;
            const std::string path =
                (fs::path(c.out_dir) /
                 ("snapshot_" + std::to_string(snapshot_paths.size()) + ".csv"))
                    .string();
            write_snapshot_file(path, s.curve(), s.spinor);
            snapshot_paths.push_back(path);
        }
    };

    ScopedTimer timer;
    std::vector<std::pair<std::string, std::string>> summary = config_echo(c);
    try {
        const EvolveResult result = evolve(state0, c.flow_params(), {observer});
        diag.flush();
        const StationarityReport stat =
            detect_stationary(result.final_state, c.eps, c.stationary_tol);
        summary.emplace_back("status", "ok");
        summary.emplace_back("final_t", format_double(result.final_state.t));
        summary.emplace_back("converged", result.reached_stationary ? "true" : "false");
        append_residuals(summary, stat);
        append_speed_spread(summary, result.final_state);
        summary.emplace_back("wall_time_s", format_double(timer.seconds()));
        summary.emplace_back("energy_trace", diag_path);
        for (std::size_t i = 0; i < snapshot_paths.size(); ++i)
            summary.emplace_back("snapshot_" + std::to_string(i), snapshot_paths[i]);
        write_summary_file((fs::path(c.out_dir) / "summary.txt").string(), summary);
        if (c.require_convergence && !result.reached_stationary) return kExitNotConverged;
        return kExitOk;
    } catch (const BlowupError& err) {
        diag.flush();
        summary.emplace_back("status", "blowup");
        summary.emplace_back("error", err.what());
        summary.emplace_back("last_valid_t", format_double(err.last_valid_state.t));
        summary.emplace_back("wall_time_s", format_double(timer.seconds()));
        write_summary_file((fs::path(c.out_dir) / "summary.txt").string(), summary);
        return kExitBlowup;
    }
}

int scenario_sweep(const RunConfig& c) {
    FlowState state0 = build_initial_state(c);
    fs::create_directories(c.out_dir);
    ScopedTimer timer;

    const SweepResult sweep = epsilon_sweep(state0, c.eps_list, c.flow_params());

    std::vector<std::pair<std::string, std::string>> summary = config_echo(c);
    summary.emplace_back("status", "ok");
    for (std::size_t i = 0; i < sweep.entries.size(); ++i) {
        const SweepEntry& entry = sweep.entries[i];
        const std::string dir =
            (fs::path(c.out_dir) / ("entry_" + std::to_string(i))).string();
        fs::create_directories(dir);
        write_diagnostics_file(dir + "/diagnostics.csv", sweep.runs[i].trajectory);
        write_snapshot_file(dir + "/snapshot.csv", sweep.runs[i].final_state.curve(),
                            sweep.runs[i].final_state.spinor);
        const std::string tag = "entry_" + std::to_string(i) + ".";
        summary.emplace_back(tag + "eps", format_double(entry.eps));
        summary.emplace_back(tag + "converged", entry.converged ? "true" : "false");
        summary.emplace_back(tag + "exploratory", entry.exploratory ? "true" : "false");
        summary.emplace_back(tag + "final_t", format_double(entry.t_final));
        summary.emplace_back(tag + "grad_norm", format_double(entry.grad_norm));
        summary.emplace_back(tag + "regularized_residual_sup",
                             format_double(std::max(entry.reg_curve_sup, entry.reg_spinor_sup)));
        summary.emplace_back(tag + "unregularized_curve_sup",
                             format_double(entry.unreg_curve_sup));
        summary.emplace_back(tag + "dirac_residual_l2", format_double(entry.dirac_residual_l2));
        summary.emplace_back(tag + "psi_l2_sq", format_double(entry.psi_l2_sq));
    }
    summary.emplace_back("wall_time_s", format_double(timer.seconds()));
    write_summary_file((fs::path(c.out_dir) / "sweep_summary.txt").string(), summary);
    return kExitOk;
}

int scenario_spectrum(const RunConfig& c) {
    FlowState state = build_initial_state(c);
    fs::create_directories(c.out_dir);

    std::vector<std::pair<std::string, SpinorOperator>> ops;
    if (c.spectrum_operator == "dirac" || c.spectrum_operator == "all")
        ops.emplace_back("dirac", SpinorOperator::Dirac);
    if (c.spectrum_operator == "laplacian" || c.spectrum_operator == "all")
        ops.emplace_back("laplacian", SpinorOperator::Laplacian);
    if (c.spectrum_operator == "eps_laplacian_minus_dirac" || c.spectrum_operator == "all")
        ops.emplace_back("eps_laplacian_minus_dirac", SpinorOperator::EpsLaplacianMinusDirac);
    if (ops.empty())
        throw ConfigError("unknown spectrum_operator '" + c.spectrum_operator + "'");

    std::vector<std::pair<std::string, std::string>> summary = config_echo(c);
    summary.emplace_back("status", "ok");
    for (const auto& [name, op] : ops) {
        const DenseOperatorReport report =
            dense_operator_matrix(op, state.curve(), c.eps, c.spin);
        const std::string path =
            (fs::path(c.out_dir) / ("spectrum_" + name + ".csv")).string();
        write_spectrum_file(path, report.eigenvalues, report.symmetry_defect);
        summary.emplace_back("spectrum_" + name, path);
        summary.emplace_back("symmetry_defect_" + name,
                             format_double(report.symmetry_defect));
    }
    write_summary_file((fs::path(c.out_dir) / "summary.txt").string(), summary);
    return kExitOk;
}

int scenario_validate(const RunConfig& c) {
    if (c.manifold.name != "unit_circle")
        throw ConfigError("validate scenario runs on manifold unit_circle");
    const CircleGrid grid(c.n);
    auto spec = manifold_from(c.manifold);

    fs::create_directories(c.out_dir);
    std::vector<std::pair<std::string, std::string>> report = config_echo(c);
    bool all_pass = true;

    for (const SpinStructure spin : {SpinStructure::Sigma1, SpinStructure::Sigma2}) {
        const auto& chi_modes = (spin == SpinStructure::Sigma1) ? c.validate.sigma1_modes
                                                                : c.validate.sigma2_modes;
        for (const double eps : c.validate.eps_values) {
            const Eigen::VectorXd phi0 = angle_field(grid, c.validate.curve_modes);
            auto curve = std::make_shared<CurveField>(grid, spec,
                                                      unit_circle_curve(grid, 1, phi0));
            SpinorField psi0 =
                spinor_along_velocity(curve, spin, spinor_scalar_field(grid, spin, chi_modes));

            FlowParams params = c.flow_params();
            params.eps = eps;
            params.stationary_tol = 1e-300;
            params.monitor_stride = 1 << 30;
            const EvolveResult run = evolve(FlowState{0.0, psi0}, params);
            const double T = run.final_state.t;

            // exact angle offset under the heat semigroup
            const double klap = params.rescaled ? 1.0 / eps : 1.0; // spinor dirac weight
            const double wlap = params.rescaled ? 1.0 : eps;       // spinor laplacian weight
            double curve_err = 0.0, spinor_err = 0.0;
            const MatrixXd& pts = run.final_state.curve().points();
            const MatrixXcd& vals = run.final_state.spinor.values();
            const double shift = (spin == SpinStructure::Sigma2) ? 0.5 : 0.0;
            for (int j = 0; j < c.n; ++j) {
                const double s = grid.node(j);
                double phi_exact = 0.0;
                for (const auto& e : c.validate.curve_modes)
                    phi_exact += std::exp(-double(e.k) * e.k * T) *
                                 (e.a * std::cos(e.k * s) + e.b * std::sin(e.k * s));
                const double phi_sim = wrap_to_pi(std::atan2(pts(j, 1), pts(j, 0)) - s);
                curve_err = std::max(curve_err, std::abs(wrap_to_pi(phi_sim - phi_exact)));

                Complex chi_exact(0.0, 0.0);
                for (const auto& e : chi_modes) {
                    const double lam = e.k + shift;
                    chi_exact += Complex(e.a, e.b) * std::polar(1.0, lam * s) *
                                 std::exp((klap * lam - wlap * lam * lam) * T);
                }
                const Complex chi_sim = -pts(j, 1) * vals(j, 0) + pts(j, 0) * vals(j, 1);
                spinor_err = std::max(spinor_err, std::abs(chi_sim - chi_exact));
            }

            const bool pass =
                curve_err <= c.validate.tolerance && spinor_err <= c.validate.tolerance;
            all_pass = all_pass && pass;
            const std::string tag =
                std::string(to_string(spin)) + ".eps_" + format_double(eps) + ".";
            report.emplace_back(tag + "curve_sup_error", format_double(curve_err));
            report.emplace_back(tag + "spinor_sup_error", format_double(spinor_err));
            report.emplace_back(tag + "pass", pass ? "true" : "false");
        }
    }
    report.emplace_back("tolerance", format_double(c.validate.tolerance));
    report.emplace_back("result", all_pass ? "pass" : "fail");
    write_summary_file((fs::path(c.out_dir) / "validate_report.txt").string(), report);
    return all_pass ? kExitOk : kExitNotConverged;
}

int scenario_report(const RunConfig& c) {
    for (const auto& path : c.report_inputs)
        if (!fs::exists(path)) throw IoError("report input '" + path + "' does not exist");
    fs::create_directories(c.out_dir);
    emit_plot_data(c.report_inputs, c.report_eps_labels,
                   (fs::path(c.out_dir) / "plot_data.csv").string());
    return kExitOk;
}

} // namespace

int run_scenario(const RunConfig& c) {
    try {
        if (c.scenario == "flow") return scenario_flow(c);
        if (c.scenario == "sweep") return scenario_sweep(c);
        if (c.scenario == "spectrum") return scenario_spectrum(c);
        if (c.scenario == "validate") return scenario_validate(c);
        if (c.scenario == "report") return scenario_report(c);
        throw ConfigError("unknown scenario '" + c.scenario + "'");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BlowupError& e) {
        std::cerr << "blowup: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
}

} // namespace dgf
