#ifndef DGF_FLOW_HPP
#define DGF_FLOW_HPP

#include <functional>
#include <vector>

#include "dgf/energy.hpp"

namespace dgf {

enum class Integrator { SemiImplicit, ExplicitRk4 };

/// Flow controls. The rescaled form evolves the spinor by
/// Lap psi - (1/eps) D psi; the unrescaled form by eps Lap psi - D psi.
struct FlowParams {
    double eps = 1.0;
    double dt = 1e-3;
    double t_end = 1.0;
    bool rescaled = true;
    Integrator integrator = Integrator::SemiImplicit;
    double stationary_tol = 1e-6;
    int monitor_stride = 10;
    double blowup_sup_F = 1e12;

    void validate() const;
};

/// A point of the coupled trajectory. The curve is the spinor's base.
struct FlowState {
    double t = 0.0;
    SpinorField spinor;

    const CurveField& curve() const { return spinor.base(); }
};

/// Per-step diagnostics, in the declared serialization order.
struct DiagnosticsRecord {
    double t = 0.0;
    double E_eps = 0.0;
    double E = 0.0;
    double cumulative_dissipation = 0.0; // int_0^t int (|d_t gamma|^2 + |cov_t psi|^2)
    double sup_psi_sq = 0.0;
    double psi_l2_sq = 0.0;
    double sup_F = 0.0;    // max_s (|gamma'|^2 + eps |cov psi|^2) / 2
    double sup_G = 0.0;    // max_s (|d_t gamma|^2 + |cov_t psi|^2) / 2
    double grad_norm = 0.0;
    double gamma_speed_min = 0.0;
    double gamma_speed_max = 0.0;
};

/// Thrown when a nodal value becomes non-finite or sup_F passes the blowup
/// threshold. Carries the last valid state, and the partial trajectory when
/// raised out of evolve().
class BlowupError : public Error {
public:
    BlowupError(const std::string& what, FlowState last_valid)
        : Error(what), last_valid_state(std::move(last_valid)) {}

    FlowState last_valid_state;
    std::vector<DiagnosticsRecord> partial_trajectory;
};

namespace detail {
/// Everything derived from one state that steps and diagnostics share.
struct RhsWork {
    StateDerivatives derivs;
    MatrixXd curve_rhs;    // tau - R - eps Rc
    MatrixXcd spinor_rhs;  // flow right-hand side in the run's clock
    MatrixXcd grad_spinor; // D psi - eps Lap psi
    double dissipation_density = 0.0; // |curve_rhs|^2 + |spinor_rhs|^2 in L2
    double grad_norm = 0.0;
    double sup_F = 0.0;
    double sup_G = 0.0;
    EnergyReport energy;
};
RhsWork compute_rhs(const FlowState& state, const FlowParams& params);
} // namespace detail

/// Advances the state by one time step. Semi-implicit mode integrates the
/// constant-coefficient mode-space part of both equations exactly and holds
/// the curvature/projection remainder fixed over the step; after the update
/// the curve is projected to N and the spinor re-tangentialized.
FlowState step(const FlowState& state, const FlowParams& params);

using Observer = std::function<void(const FlowState&, const DiagnosticsRecord&)>;

struct EvolveResult {
    FlowState final_state;
    std::vector<DiagnosticsRecord> trajectory;
    bool reached_stationary = false;
};

/// Runs the flow to t_end or stationarity, recording diagnostics every
/// monitor_stride steps (plus the first and last). Dissipation is accumulated
/// by the trapezoidal rule in t at every step.
EvolveResult evolve(const FlowState& initial, const FlowParams& params,
                    const std::vector<Observer>& observers = {});

struct StationarityReport {
    bool stationary = false;
    double grad_norm = 0.0;
    ElResidual regularized;
    ElResidual unregularized;
};

/// True iff the L2 norm of the exact discrete gradient is at most tol.
StationarityReport detect_stationary(const FlowState& state, double eps, double tol);

/// Greedy extraction of a strictly decreasing grad_norm subsequence;
/// the last index is the subconvergence candidate.
std::vector<std::size_t> subconvergence_extract(const std::vector<DiagnosticsRecord>& trajectory);

struct SweepEntry {
    double eps = 0.0;
    bool converged = false;
    bool exploratory = false; // eps < 1 or not converged
    double t_final = 0.0;
    double grad_norm = 0.0;
    double reg_curve_sup = 0.0;
    double reg_spinor_sup = 0.0;
    double unreg_curve_sup = 0.0;
    double dirac_residual_l2 = 0.0; // |D psi|_L2 at the limit
    double psi_l2_sq = 0.0;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    std::vector<EvolveResult> runs;
};

/// Runs evolve for each eps (positive, descending), warm-starting every
/// entry from the previous limit. Non-convergence is recorded, not fatal.
SweepResult epsilon_sweep(const FlowState& initial, const std::vector<double>& eps_values,
                          const FlowParams& params);

} // namespace dgf

#endif
