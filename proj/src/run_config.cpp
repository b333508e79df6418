#include "dgf/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dgf/io.hpp"

namespace dgf {

namespace {

using nlohmann::json;

std::vector<ModeEntry> parse_modes(const json& j, const std::string& what) {
    std::vector<ModeEntry> out;
    if (!j.is_array()) throw ConfigError(what + ": expected an array of [k, a, b] entries");
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3)
            throw ConfigError(what + ": each entry must be [k, a, b]");
        ModeEntry m;
        m.k = e[0].get<int>();
        m.a = e[1].get<double>();
        m.b = e[2].get<double>();
        out.push_back(m);
    }
    return out;
}

SpinStructure parse_spin(const std::string& s) {
    if (s == "sigma1") return SpinStructure::Sigma1;
    if (s == "sigma2") return SpinStructure::Sigma2;
    throw ConfigError("spin_structure must be 'sigma1' or 'sigma2', got '" + s + "'");
}

Integrator parse_integrator(const std::string& s) {
    if (s == "semi_implicit") return Integrator::SemiImplicit;
    if (s == "explicit_rk4") return Integrator::ExplicitRk4;
    throw ConfigError("integrator must be 'semi_implicit' or 'explicit_rk4', got '" + s + "'");
}

std::string modes_to_string(const std::vector<ModeEntry>& modes) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (i) os << " ";
        os << "(" << modes[i].k << "," << format_double(modes[i].a) << ","
           << format_double(modes[i].b) << ")";
    }
    os << "]";
    return os.str();
}

} // namespace

ValidateConfig::ValidateConfig() {
    // Default data: curve angle offset on low modes, spinor modes chosen with
    // nonpositive growth rate lambda - eps lambda^2 for every eps in the
    // default list (the APS-type choice of the flat example). Amplitudes keep
    // the first-order splitting error of the integrator well below the 1e-6
    // regression tolerance at dt = 1e-3.
    curve_modes = {{1, 1e-3, 4e-4}, {2, 6e-4, -4e-4}, {3, -2e-4, 2e-4}};
    sigma1_modes = {{0, 8e-4, 2e-4}, {-1, 1e-3, -4e-4}, {-2, 4e-4, 6e-4}};
    sigma2_modes = {{-1, 1e-3, 4e-4}, {-2, 6e-4, -4e-4}}; // lambda = -1/2, -3/2
}

FlowParams RunConfig::flow_params() const {
    FlowParams p;
    p.eps = eps;
    p.dt = dt;
    p.t_end = t_end;
    p.rescaled = rescaled;
    p.integrator = integrator;
    p.stationary_tol = stationary_tol;
    p.monitor_stride = monitor_stride;
    p.blowup_sup_F = blowup_sup_F;
    return p;
}

RunConfig parse_run_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    RunConfig c;
    try {
        c.scenario = j.value("scenario", c.scenario);
        if (j.contains("manifold")) {
            const auto& m = j.at("manifold");
            c.manifold.name = m.value("name", c.manifold.name);
            c.manifold.radius = m.value("radius", c.manifold.radius);
            c.manifold.dim = m.value("dim", c.manifold.dim);
        }
        if (j.contains("spin_structure")) c.spin = parse_spin(j.at("spin_structure"));
        c.n = j.value("n", c.n);
        c.eps = j.value("epsilon", c.eps);
        if (j.contains("epsilons")) c.eps_list = j.at("epsilons").get<std::vector<double>>();
        c.dt = j.value("dt", c.dt);
        c.t_end = j.value("t_end", c.t_end);
        if (j.contains("integrator")) c.integrator = parse_integrator(j.at("integrator"));
        c.rescaled = j.value("rescaled", c.rescaled);
        c.stationary_tol = j.value("stationary_tol", c.stationary_tol);
        c.monitor_stride = j.value("monitor_stride", c.monitor_stride);
        c.blowup_sup_F = j.value("blowup_sup_F", c.blowup_sup_F);
        c.require_convergence = j.value("require_convergence", c.require_convergence);
        c.out_dir = j.value("out_dir", c.out_dir);
        c.spectrum_operator = j.value("spectrum_operator", c.spectrum_operator);

        if (j.contains("initial")) {
            const auto& i = j.at("initial");
            c.initial.fixture = i.value("fixture", c.initial.fixture);
            c.initial.z0 = i.value("z0", c.initial.z0);
            c.initial.winding_p = i.value("p", c.initial.winding_p);
            c.initial.winding_q = i.value("q", c.initial.winding_q);
            c.initial.curve_winding = i.value("curve_winding", c.initial.curve_winding);
            if (i.contains("curve_modes"))
                c.initial.curve_modes = parse_modes(i.at("curve_modes"), "initial.curve_modes");
            c.initial.spinor = i.value("spinor", c.initial.spinor);
            if (i.contains("spinor_modes"))
                c.initial.spinor_modes = parse_modes(i.at("spinor_modes"), "initial.spinor_modes");
            c.initial.perturbation_amplitude =
                i.value("perturbation_amplitude", c.initial.perturbation_amplitude);
            c.initial.perturbation_band = i.value("perturbation_band", c.initial.perturbation_band);
            c.initial.spinor_amplitude = i.value("spinor_amplitude", c.initial.spinor_amplitude);
            c.initial.spinor_band = i.value("spinor_band", c.initial.spinor_band);
            c.initial.spinor_band_min = i.value("spinor_band_min", c.initial.spinor_band_min);
            c.initial.seed = i.value("seed", c.initial.seed);
        }

        if (j.contains("validate")) {
            const auto& v = j.at("validate");
            if (v.contains("epsilons"))
                c.validate.eps_values = v.at("epsilons").get<std::vector<double>>();
            c.validate.tolerance = v.value("tolerance", c.validate.tolerance);
            if (v.contains("curve_modes"))
                c.validate.curve_modes = parse_modes(v.at("curve_modes"), "validate.curve_modes");
            if (v.contains("sigma1_modes"))
                c.validate.sigma1_modes =
                    parse_modes(v.at("sigma1_modes"), "validate.sigma1_modes");
            if (v.contains("sigma2_modes"))
                c.validate.sigma2_modes =
                    parse_modes(v.at("sigma2_modes"), "validate.sigma2_modes");
        }

        if (j.contains("report")) {
            const auto& r = j.at("report");
            if (r.contains("inputs"))
                c.report_inputs = r.at("inputs").get<std::vector<std::string>>();
            if (r.contains("eps_labels"))
                c.report_eps_labels = r.at("eps_labels").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }

    // structural validation
    if (c.scenario != "validate" && c.scenario != "flow" && c.scenario != "sweep" &&
        c.scenario != "spectrum" && c.scenario != "report")
        throw ConfigError("unknown scenario '" + c.scenario + "'");
    if (c.n < 4 || c.n % 2 != 0) throw ConfigError("n must be even and >= 4");
    if (c.eps <= 0.0) throw ConfigError("epsilon must be positive");
    if (c.scenario == "sweep" && c.eps_list.empty())
        throw ConfigError("sweep scenario requires an 'epsilons' list");
    if (c.scenario == "report" && c.report_inputs.empty())
        throw ConfigError("report scenario requires report.inputs");
    if (c.scenario == "flow" || c.scenario == "sweep" || c.scenario == "validate") {
        if (c.dt <= 0.0 || !(c.dt < c.t_end))
            throw ConfigError("need 0 < dt < t_end");
    }
    if (c.stationary_tol <= 0.0) throw ConfigError("stationary_tol must be positive");
    if (c.monitor_stride < 1) throw ConfigError("monitor_stride must be >= 1");
    return c;
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << is.rdbuf();
    return parse_run_config_text(buffer.str());
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("scenario", c.scenario);
    e.emplace_back("manifold", c.manifold.name);
    if (c.manifold.name == "round_sphere")
        e.emplace_back("radius", format_double(c.manifold.radius));
    if (c.manifold.name == "flat_space") e.emplace_back("dim", std::to_string(c.manifold.dim));
    e.emplace_back("spin_structure", to_string(c.spin));
    e.emplace_back("n", std::to_string(c.n));
    e.emplace_back("epsilon", format_double(c.eps));
    if (!c.eps_list.empty()) {
        std::string list;
        for (double v : c.eps_list) list += (list.empty() ? "" : " ") + format_double(v);
        e.emplace_back("epsilons", list);
    }
    e.emplace_back("dt", format_double(c.dt));
    e.emplace_back("t_end", format_double(c.t_end));
    e.emplace_back("integrator", c.integrator == Integrator::SemiImplicit ? "semi_implicit"
                                                                          : "explicit_rk4");
    e.emplace_back("rescaled", c.rescaled ? "true" : "false");
    e.emplace_back("stationary_tol", format_double(c.stationary_tol));
    e.emplace_back("monitor_stride", std::to_string(c.monitor_stride));
    e.emplace_back("initial.fixture", c.initial.fixture);
    e.emplace_back("initial.spinor", c.initial.spinor);
    if (c.initial.fixture == "latitude") e.emplace_back("initial.z0", format_double(c.initial.z0));
    if (c.initial.fixture == "torus_winding") {
        e.emplace_back("initial.p", std::to_string(c.initial.winding_p));
        e.emplace_back("initial.q", std::to_string(c.initial.winding_q));
    }
    if (!c.initial.curve_modes.empty())
        e.emplace_back("initial.curve_modes", modes_to_string(c.initial.curve_modes));
    if (!c.initial.spinor_modes.empty())
        e.emplace_back("initial.spinor_modes", modes_to_string(c.initial.spinor_modes));
    if (c.initial.perturbation_amplitude != 0.0) {
        e.emplace_back("initial.perturbation_amplitude",
                       format_double(c.initial.perturbation_amplitude));
        e.emplace_back("initial.perturbation_band", std::to_string(c.initial.perturbation_band));
    }
    if (c.initial.spinor == "random") {
        e.emplace_back("initial.spinor_amplitude", format_double(c.initial.spinor_amplitude));
        e.emplace_back("initial.spinor_band", std::to_string(c.initial.spinor_band));
        e.emplace_back("initial.spinor_band_min", std::to_string(c.initial.spinor_band_min));
    }
    e.emplace_back("initial.seed", std::to_string(c.initial.seed));
    return e;
}

} // namespace dgf
