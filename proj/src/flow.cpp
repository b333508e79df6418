#include "dgf/flow.hpp"

#include <cmath>

namespace dgf {

namespace {

constexpr double kRk4StabilityLimit = 2.785; // negative real axis of classic RK4

struct Coefficients {
    double lap;   // weight of the Laplacian in the spinor equation
    double dirac; // weight of the Dirac term
};

Coefficients spinor_coefficients(const FlowParams& p) {
    if (p.rescaled) return {1.0, 1.0 / p.eps};
    return {p.eps, 1.0};
}

FlowState assemble_state(const FlowState& prototype, double t, const MatrixXd& raw_points,
                         const MatrixXcd& raw_spinor) {
    if (!raw_points.allFinite() || !raw_spinor.allFinite())
        throw BlowupError("flow: non-finite nodal value at t = " + std::to_string(t), prototype);
    const CurveField& old_curve = prototype.curve();
    MatrixXd projected(raw_points.rows(), raw_points.cols());
    for (int j = 0; j < raw_points.rows(); ++j)
        projected.row(j) = old_curve.manifold().closest_point(raw_points.row(j)).transpose();
    auto curve = std::make_shared<CurveField>(old_curve.grid(), old_curve.manifold_ptr(),
                                              std::move(projected));
    SpinorField spinor = retangentialize(curve, prototype.spinor.spin(), raw_spinor);
    return FlowState{t, std::move(spinor)};
}

FlowState step_semi_implicit(const FlowState& state, const FlowParams& p,
                             const detail::RhsWork& work) {
    const CurveField& curve = state.curve();
    const CircleGrid& grid = curve.grid();
    const Coefficients c = spinor_coefficients(p);

    // Curve: exact heat semigroup in mode space, remainder held over the step.
    const MatrixXd forcing_curve = work.curve_rhs - work.derivs.second_derivative;
    const MatrixXcd u_new =
        exponential_step_cols(grid, curve.points().cast<Complex>(), forcing_curve.cast<Complex>(),
                              SpinStructure::Sigma1, [](double k) { return -k * k; }, p.dt);

    // Spinor: exact integration of the flat symbol -c.lap l^2 + c.dirac l.
    const MatrixXcd d2psi = spinor_derivative_cols(grid, work.derivs.dpsi, state.spinor.spin());
    const MatrixXcd flat_part =
        c.lap * d2psi - c.dirac * (Complex(0.0, 1.0) * work.derivs.dpsi);
    const MatrixXcd forcing_spinor = work.spinor_rhs - flat_part;
    const MatrixXcd psi_new = exponential_step_cols(
        grid, state.spinor.values(), forcing_spinor, state.spinor.spin(),
        [c](double l) { return -c.lap * l * l + c.dirac * l; }, p.dt);

    return assemble_state(state, state.t + p.dt, u_new.real(), psi_new);
}

FlowState step_explicit_rk4(const FlowState& state, const FlowParams& p) {
    const CircleGrid& grid = state.curve().grid();
    const Coefficients c = spinor_coefficients(p);
    const double k_max = grid.size() / 2.0;
    const double stiffness = std::max(1.0, c.lap) * k_max * k_max + c.dirac * k_max;
    if (p.dt * stiffness > kRk4StabilityLimit)
        throw StepSizeError("explicit_rk4: dt " + std::to_string(p.dt) +
                            " violates the stability bound dt <= " +
                            std::to_string(kRk4StabilityLimit / stiffness));

    struct Slope {
        MatrixXd u;
        MatrixXcd psi;
    };
    auto rhs_at = [&](const MatrixXd& raw_u, const MatrixXcd& raw_psi) {
        FlowState s = assemble_state(state, state.t, raw_u, raw_psi);
        const detail::RhsWork w = detail::compute_rhs(s, p);
        return Slope{w.curve_rhs, w.spinor_rhs};
    };

    const MatrixXd& u0 = state.curve().points();
    const MatrixXcd& psi0 = state.spinor.values();
    const Slope k1 = rhs_at(u0, psi0);
    const Slope k2 = rhs_at(u0 + 0.5 * p.dt * k1.u, psi0 + 0.5 * p.dt * k1.psi);
    const Slope k3 = rhs_at(u0 + 0.5 * p.dt * k2.u, psi0 + 0.5 * p.dt * k2.psi);
    const Slope k4 = rhs_at(u0 + p.dt * k3.u, psi0 + p.dt * k3.psi);

    const MatrixXd u_new = u0 + (p.dt / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
    const MatrixXcd psi_new =
        psi0 + (p.dt / 6.0) * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
    return assemble_state(state, state.t + p.dt, u_new, psi_new);
}

DiagnosticsRecord make_record(const FlowState& state, const detail::RhsWork& work,
                              double dissipation) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.E_eps = work.energy.E_eps;
    rec.E = work.energy.E;
    rec.cumulative_dissipation = dissipation;
    rec.sup_psi_sq = state.spinor.sup_norm_squared();
    rec.psi_l2_sq = state.spinor.l2_norm_squared();
    rec.sup_F = work.sup_F;
    rec.sup_G = work.sup_G;
    rec.grad_norm = work.grad_norm;
    const Eigen::VectorXd speed = work.derivs.velocity.rowwise().norm();
    rec.gamma_speed_min = speed.minCoeff();
    rec.gamma_speed_max = speed.maxCoeff();
    return rec;
}

} // namespace

void FlowParams::validate() const {
    if (eps <= 0.0) throw DomainError("FlowParams: eps must be positive");
    if (dt <= 0.0) throw DomainError("FlowParams: dt must be positive");
    if (!(dt < t_end)) throw DomainError("FlowParams: dt must be smaller than t_end");
    if (stationary_tol <= 0.0) throw DomainError("FlowParams: stationary_tol must be positive");
    if (monitor_stride < 1) throw DomainError("FlowParams: monitor_stride must be >= 1");
    if (blowup_sup_F <= 0.0) throw DomainError("FlowParams: blowup threshold must be positive");
}

namespace detail {

RhsWork compute_rhs(const FlowState& state, const FlowParams& p) {
    const CurveField& curve = state.curve();
    const SpinorField& psi = state.spinor;
    const double w = curve.grid().quadrature_weight();
    const Coefficients c = spinor_coefficients(p);

    RhsWork work;
    work.derivs = state_derivatives(curve, psi);
    const MatrixXd R = curvature_term_R_impl(curve, psi, work.derivs.velocity);
    const MatrixXd Rc = curvature_term_Rc_impl(curve, psi, work.derivs.cov_psi,
                                               work.derivs.velocity);
    work.curve_rhs = work.derivs.tension - R - p.eps * Rc;
    work.spinor_rhs = c.lap * work.derivs.laplacian_psi - c.dirac * work.derivs.dirac_psi;
    work.grad_spinor = work.derivs.dirac_psi - p.eps * work.derivs.laplacian_psi;

    work.dissipation_density =
        w * (work.curve_rhs.squaredNorm() + work.spinor_rhs.squaredNorm());
    work.grad_norm =
        std::sqrt(w * (work.curve_rhs.squaredNorm() + work.grad_spinor.squaredNorm()));

    double sup_F = 0.0, sup_G = 0.0;
    for (int j = 0; j < curve.n(); ++j) {
        const double f = 0.5 * (work.derivs.velocity.row(j).squaredNorm() +
                                p.eps * work.derivs.cov_psi.row(j).squaredNorm());
        const double g = 0.5 * (work.curve_rhs.row(j).squaredNorm() +
                                work.spinor_rhs.row(j).squaredNorm());
        sup_F = std::max(sup_F, f);
        sup_G = std::max(sup_G, g);
    }
    work.sup_F = sup_F;
    work.sup_G = sup_G;

    // Energy scalars from the same derivative bundle.
    work.energy.eps = p.eps;
    work.energy.dirichlet = 0.5 * w * work.derivs.velocity.squaredNorm();
    double dirac = 0.0;
    for (int j = 0; j < curve.n(); ++j)
        dirac += psi.values()
                     .row(j)
                     .conjugate()
                     .cwiseProduct(work.derivs.dirac_psi.row(j))
                     .sum()
                     .real();
    work.energy.dirac = 0.5 * w * dirac;
    work.energy.regularizer = 0.5 * w * work.derivs.cov_psi.squaredNorm();
    work.energy.E = work.energy.dirichlet + work.energy.dirac;
    work.energy.E_eps = work.energy.E + p.eps * work.energy.regularizer;
    work.energy.lower_bound = -psi.l2_norm_squared() / (8.0 * p.eps);

    if (!std::isfinite(work.sup_F) || work.sup_F > p.blowup_sup_F)
        throw BlowupError("flow: sup_F exceeded the blowup threshold at t = " +
                              std::to_string(state.t),
                          state);
    return work;
}

} // namespace detail

FlowState step(const FlowState& state, const FlowParams& params) {
    params.validate();
    if (params.integrator == Integrator::ExplicitRk4) return step_explicit_rk4(state, params);
    const detail::RhsWork work = detail::compute_rhs(state, params);
    return step_semi_implicit(state, params, work);
}

EvolveResult evolve(const FlowState& initial, const FlowParams& params,
                    const std::vector<Observer>& observers) {
    params.validate();
    const long n_steps = std::lround(params.t_end / params.dt);

    EvolveResult result{initial, {}, false};
    FlowState state = initial;
    detail::RhsWork work = detail::compute_rhs(state, params);
    double dissipation = 0.0;

    auto record = [&](const FlowState& s, const detail::RhsWork& w) {
        const DiagnosticsRecord rec = make_record(s, w, dissipation);
        result.trajectory.push_back(rec);
        for (const auto& obs : observers) obs(s, rec);
    };

    record(state, work);
    if (work.grad_norm <= params.stationary_tol) {
        result.final_state = state;
        result.reached_stationary = true;
        return result;
    }

    for (long m = 1; m <= n_steps; ++m) {
        FlowState next{0.0, state.spinor};
        detail::RhsWork next_work;
        try {
            next = (params.integrator == Integrator::ExplicitRk4)
                       ? step_explicit_rk4(state, params)
                       : step_semi_implicit(state, params, work);
            next.t = m * params.dt;
            next_work = detail::compute_rhs(next, params);
        } catch (BlowupError& err) {
            err.last_valid_state = state;
            err.partial_trajectory = result.trajectory;
            throw;
        }
        dissipation +=
            0.5 * params.dt * (work.dissipation_density + next_work.dissipation_density);
        state = std::move(next);
        work = std::move(next_work);

        const bool stationary = work.grad_norm <= params.stationary_tol;
        if (m % params.monitor_stride == 0 || m == n_steps || stationary) record(state, work);
        if (stationary) {
            result.reached_stationary = true;
            break;
        }
    }

    result.final_state = state;
    return result;
}

StationarityReport detect_stationary(const FlowState& state, double eps, double tol) {
    StationarityReport report;
    const Gradient g = l2_gradient(state.curve(), state.spinor, eps);
    report.grad_norm = g.l2_norm();
    report.stationary = report.grad_norm <= tol;
    report.regularized = el_residual(state.curve(), state.spinor, eps, true);
    report.unregularized = el_residual(state.curve(), state.spinor, eps, false);
    return report;
}

std::vector<std::size_t> subconvergence_extract(const std::vector<DiagnosticsRecord>& trajectory) {
    std::vector<std::size_t> indices;
    if (trajectory.empty()) throw DomainError("subconvergence_extract: empty trajectory");
    indices.push_back(0);
    double best = trajectory.front().grad_norm;
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        if (trajectory[i].grad_norm < best) {
            best = trajectory[i].grad_norm;
            indices.push_back(i);
        }
    }
    return indices;
}

SweepResult epsilon_sweep(const FlowState& initial, const std::vector<double>& eps_values,
                          const FlowParams& params) {
    if (eps_values.empty()) throw ConfigError("epsilon_sweep: empty eps list");
    for (std::size_t i = 0; i < eps_values.size(); ++i) {
        if (eps_values[i] <= 0.0) throw ConfigError("epsilon_sweep: eps values must be positive");
        if (i > 0 && eps_values[i] >= eps_values[i - 1])
            throw ConfigError("epsilon_sweep: eps values must be strictly descending");
    }

    SweepResult result;
    FlowState current = initial;
    for (const double eps : eps_values) {
        FlowParams run_params = params;
        run_params.eps = eps;
        EvolveResult run = evolve(current, run_params);

        SweepEntry entry;
        entry.eps = eps;
        entry.converged = run.reached_stationary;
        entry.t_final = run.final_state.t;
        const StationarityReport stat =
            detect_stationary(run.final_state, eps, params.stationary_tol);
        entry.grad_norm = stat.grad_norm;
        entry.reg_curve_sup = stat.regularized.curve_sup;
        entry.reg_spinor_sup = stat.regularized.spinor_sup;
        entry.unreg_curve_sup = stat.unregularized.curve_sup;
        entry.dirac_residual_l2 = stat.unregularized.spinor_l2;
        entry.psi_l2_sq = run.final_state.spinor.l2_norm_squared();
        entry.exploratory = (eps < 1.0) || !entry.converged;
        result.entries.push_back(entry);

        current = run.final_state;
        current.t = 0.0; // warm start the next entry
        result.runs.push_back(std::move(run));
    }
    return result;
}

} // namespace dgf
