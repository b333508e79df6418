#include "dgf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dgf {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

const char* kDiagnosticsColumns =
    "t,E_eps,E,cumulative_dissipation,sup_psi_sq,psi_l2_sq,sup_F,sup_G,grad_norm,"
    "gamma_speed_min,gamma_speed_max";

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_snapshot(std::ostream& os, const CurveField& curve, const SpinorField& psi) {
    require_base(curve, psi);
    const int q = curve.q();
    os << "s";
    for (int a = 1; a <= q; ++a) os << ",u" << a;
    for (int a = 1; a <= q; ++a) os << ",re_psi" << a;
    for (int a = 1; a <= q; ++a) os << ",im_psi" << a;
    os << "\n";
    for (int j = 0; j < curve.n(); ++j) {
        os << format_double(curve.grid().node(j));
        for (int a = 0; a < q; ++a) os << "," << format_double(curve.points()(j, a));
        for (int a = 0; a < q; ++a) os << "," << format_double(psi.values()(j, a).real());
        for (int a = 0; a < q; ++a) os << "," << format_double(psi.values()(j, a).imag());
        os << "\n";
    }
}

void write_snapshot_file(const std::string& path, const CurveField& curve,
                         const SpinorField& psi) {
    auto os = open_out(path);
    write_snapshot(os, curve, psi);
}

void write_diagnostics_header(std::ostream& os) { os << kDiagnosticsColumns << "\n"; }

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
    os << format_double(r.t) << "," << format_double(r.E_eps) << "," << format_double(r.E) << ","
       << format_double(r.cumulative_dissipation) << "," << format_double(r.sup_psi_sq) << ","
       << format_double(r.psi_l2_sq) << "," << format_double(r.sup_F) << ","
       << format_double(r.sup_G) << "," << format_double(r.grad_norm) << ","
       << format_double(r.gamma_speed_min) << "," << format_double(r.gamma_speed_max) << "\n";
}

void write_diagnostics_file(const std::string& path,
                            const std::vector<DiagnosticsRecord>& trajectory) {
    auto os = open_out(path);
    write_diagnostics_header(os);
    for (const auto& rec : trajectory) write_diagnostics_row(os, rec);
}

std::vector<DiagnosticsRecord> read_diagnostics_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(is, line)) throw IoError("'" + path + "': missing header");
    if (line != kDiagnosticsColumns)
        throw IoError("'" + path + "': unexpected diagnostics header");
    std::vector<DiagnosticsRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 11) throw IoError("'" + path + "': malformed diagnostics row");
        DiagnosticsRecord r;
        r.t = std::stod(cells[0]);
        r.E_eps = std::stod(cells[1]);
        r.E = std::stod(cells[2]);
        r.cumulative_dissipation = std::stod(cells[3]);
        r.sup_psi_sq = std::stod(cells[4]);
        r.psi_l2_sq = std::stod(cells[5]);
        r.sup_F = std::stod(cells[6]);
        r.sup_G = std::stod(cells[7]);
        r.grad_norm = std::stod(cells[8]);
        r.gamma_speed_min = std::stod(cells[9]);
        r.gamma_speed_max = std::stod(cells[10]);
        out.push_back(r);
    }
    return out;
}

void write_energy_report_header(std::ostream& os) {
    os << "dirichlet,dirac,regularizer,E,E_eps,eps,lower_bound\n";
}

void write_energy_report_row(std::ostream& os, const EnergyReport& r) {
    os << format_double(r.dirichlet) << "," << format_double(r.dirac) << ","
       << format_double(r.regularizer) << "," << format_double(r.E) << ","
       << format_double(r.E_eps) << "," << format_double(r.eps) << ","
       << format_double(r.lower_bound) << "\n";
}

void write_spectrum_file(const std::string& path, const Eigen::VectorXd& eigenvalues,
                         double symmetry_defect) {
    auto os = open_out(path);
    os << "index,eigenvalue,symmetry_defect\n";
    for (int i = 0; i < eigenvalues.size(); ++i)
        os << i << "," << format_double(eigenvalues(i)) << "," << format_double(symmetry_defect)
           << "\n";
}

void emit_plot_data(const std::vector<std::string>& diagnostics_files,
                    const std::vector<double>& eps_labels, const std::string& out_path) {
    if (!eps_labels.empty() && eps_labels.size() != diagnostics_files.size())
        throw ConfigError("emit_plot_data: one eps label per diagnostics file expected");
    const bool with_eps = !eps_labels.empty();

    static const char* quantities[] = {"E_eps", "E", "cumulative_dissipation", "sup_psi_sq",
                                       "psi_l2_sq", "sup_F", "sup_G", "grad_norm",
                                       "gamma_speed_min", "gamma_speed_max"};

    auto os = open_out(out_path);
    if (with_eps)
        os << "t,eps,quantity,value\n";
    else
        os << "t,quantity,value\n";

    for (std::size_t f = 0; f < diagnostics_files.size(); ++f) {
        const auto rows = read_diagnostics_file(diagnostics_files[f]);
        for (const auto& r : rows) {
            const double vals[] = {r.E_eps, r.E, r.cumulative_dissipation, r.sup_psi_sq,
                                   r.psi_l2_sq, r.sup_F, r.sup_G, r.grad_norm,
                                   r.gamma_speed_min, r.gamma_speed_max};
            for (int c = 0; c < 10; ++c) {
                os << format_double(r.t) << ",";
                if (with_eps) os << format_double(eps_labels[f]) << ",";
                os << quantities[c] << "," << format_double(vals[c]) << "\n";
            }
        }
    }
}

void write_summary_file(const std::string& path,
                        const std::vector<std::pair<std::string, std::string>>& entries) {
    auto os = open_out(path);
    for (const auto& [key, value] : entries) os << key << " = " << value << "\n";
}

} // namespace dgf
