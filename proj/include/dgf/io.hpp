#ifndef DGF_IO_HPP
#define DGF_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "dgf/energy.hpp"
#include "dgf/flow.hpp"

namespace dgf {
// CSV and summary emission. All floating-point output uses 17 significant
// digits so repeated runs are byte-comparable.

std::string format_double(double v);

/// Snapshot schema: s, u1..uq, re_psi1..re_psiq, im_psi1..im_psiq.
void write_snapshot(std::ostream& os, const CurveField& curve, const SpinorField& psi);
void write_snapshot_file(const std::string& path, const CurveField& curve,
                         const SpinorField& psi);

/// Diagnostics stream in the declared record order.
void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& rec);
void write_diagnostics_file(const std::string& path,
                            const std::vector<DiagnosticsRecord>& trajectory);
std::vector<DiagnosticsRecord> read_diagnostics_file(const std::string& path);

/// EnergyReport: one CSV row per evaluation.
void write_energy_report_header(std::ostream& os);
void write_energy_report_row(std::ostream& os, const EnergyReport& report);

/// Spectrum report: eigenvalue index, value, symmetry defect.
void write_spectrum_file(const std::string& path, const Eigen::VectorXd& eigenvalues,
                         double symmetry_defect);

/// Tidy long-form merge of diagnostics files: columns (t, quantity, value),
/// with a leading eps column when labels are given.
void emit_plot_data(const std::vector<std::string>& diagnostics_files,
                    const std::vector<double>& eps_labels, const std::string& out_path);

/// key = value lines.
void write_summary_file(const std::string& path,
                        const std::vector<std::pair<std::string, std::string>>& entries);

} // namespace dgf

#endif
