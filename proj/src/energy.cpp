#include "dgf/energy.hpp"

#include <cmath>

namespace dgf {

namespace detail {

StateDerivatives state_derivatives(const CurveField& curve, const SpinorField& psi) {
    StateDerivatives d;
    d.velocity = curve.velocity();
    d.second_derivative = curve_second_derivative_cols(curve.grid(), curve.points());
    d.tension.resize(curve.n(), curve.q());
    d.dpsi = spinor_derivative_cols(psi.grid(), psi.values(), psi.spin());
    d.cov_psi.resize(curve.n(), curve.q());
    for (int j = 0; j < curve.n(); ++j) {
        const MatrixXd P = curve.projector(j);
        d.tension.row(j) = (P * d.second_derivative.row(j).transpose()).transpose();
        d.cov_psi.row(j) = (P * d.dpsi.row(j).transpose()).transpose();
    }
    d.dirac_psi = Complex(0.0, 1.0) * d.cov_psi;
    d.dcov = spinor_derivative_cols(psi.grid(), d.cov_psi, psi.spin());
    d.laplacian_psi.resize(curve.n(), curve.q());
    for (int j = 0; j < curve.n(); ++j) {
        const MatrixXd P = curve.projector(j);
        d.laplacian_psi.row(j) = (P * d.dcov.row(j).transpose()).transpose();
    }
    return d;
}

MatrixXd curvature_term_R_impl(const CurveField& curve, const SpinorField& psi,
                               const MatrixXd& velocity) {
    const int n = curve.n(), q = curve.q();
    MatrixXd out = MatrixXd::Zero(n, q);
    if (curve.manifold().zero_curvature) return out;
    const MatrixXd a = psi.values().real();
    const MatrixXd b = psi.values().imag();
    for (int j = 0; j < n; ++j) {
        out.row(j) = curve.manifold()
                         .curvature(curve.points().row(j), b.row(j), a.row(j), velocity.row(j))
                         .transpose();
    }
    return out;
}

MatrixXd curvature_term_Rc_impl(const CurveField& curve, const SpinorField& psi,
                                const MatrixXcd& cov_psi, const MatrixXd& velocity) {
    const int n = curve.n(), q = curve.q();
    MatrixXd out = MatrixXd::Zero(n, q);
    if (curve.manifold().zero_curvature) return out;
    const MatrixXd a = psi.values().real();
    const MatrixXd b = psi.values().imag();
    const MatrixXd c = cov_psi.real();
    const MatrixXd d = cov_psi.imag();
    for (int j = 0; j < n; ++j) {
        const VectorXd p = curve.points().row(j);
        const VectorXd gp = velocity.row(j);
        out.row(j) = (curve.manifold().curvature(p, c.row(j), a.row(j), gp) +
                      curve.manifold().curvature(p, d.row(j), b.row(j), gp))
                         .transpose();
    }
    return out;
}

} // namespace detail

MatrixXd tension_field(const CurveField& curve) {
    const MatrixXd d2 = curve_second_derivative_cols(curve.grid(), curve.points());
    MatrixXd out(curve.n(), curve.q());
    for (int j = 0; j < curve.n(); ++j)
        out.row(j) = (curve.projector(j) * d2.row(j).transpose()).transpose();
    return out;
}

MatrixXd curvature_term_R(const CurveField& curve, const SpinorField& psi) {
    require_base(curve, psi);
    return detail::curvature_term_R_impl(curve, psi, curve.velocity());
}

MatrixXd curvature_term_Rc(const CurveField& curve, const SpinorField& psi) {
    require_base(curve, psi);
    const MatrixXcd cov = covariant_derivative(psi).values();
    return detail::curvature_term_Rc_impl(curve, psi, cov, curve.velocity());
}

EnergyReport energies(const CurveField& curve, const SpinorField& psi, double eps) {
    if (eps <= 0.0) throw DomainError("energies: eps must be positive");
    require_base(curve, psi);
    const double w = curve.grid().quadrature_weight();
    const auto d = detail::state_derivatives(curve, psi);

    EnergyReport report;
    report.eps = eps;
    report.dirichlet = 0.5 * w * d.velocity.squaredNorm();
    double dirac = 0.0;
    for (int j = 0; j < curve.n(); ++j)
        dirac += psi.values().row(j).conjugate().cwiseProduct(d.dirac_psi.row(j)).sum().real();
    report.dirac = 0.5 * w * dirac;
    report.regularizer = 0.5 * w * d.cov_psi.squaredNorm();
    report.E = report.dirichlet + report.dirac;
    report.E_eps = report.E + eps * report.regularizer;
    report.lower_bound = -psi.l2_norm_squared() / (8.0 * eps);
    return report;
}

ElResidual el_residual(const CurveField& curve, const SpinorField& psi, double eps,
                       bool regularized) {
    if (eps <= 0.0) throw DomainError("el_residual: eps must be positive");
    require_base(curve, psi);
    const auto d = detail::state_derivatives(curve, psi);
    const MatrixXd R = detail::curvature_term_R_impl(curve, psi, d.velocity);

    ElResidual res;
    if (regularized) {
        const MatrixXd Rc = detail::curvature_term_Rc_impl(curve, psi, d.cov_psi, d.velocity);
        res.curve = d.tension - R - eps * Rc;
        res.spinor = eps * d.laplacian_psi - d.dirac_psi;
    } else {
        res.curve = d.tension - R;
        res.spinor = d.dirac_psi;
    }
    const double w = curve.grid().quadrature_weight();
    res.curve_sup = res.curve.rowwise().norm().maxCoeff();
    res.curve_l2 = std::sqrt(w * res.curve.squaredNorm());
    res.spinor_sup = res.spinor.rowwise().norm().maxCoeff();
    res.spinor_l2 = std::sqrt(w * res.spinor.squaredNorm());
    return res;
}

Gradient l2_gradient(const CurveField& curve, const SpinorField& psi, double eps) {
    if (eps <= 0.0) throw DomainError("l2_gradient: eps must be positive");
    require_base(curve, psi);
    const auto d = detail::state_derivatives(curve, psi);
    const MatrixXd R = detail::curvature_term_R_impl(curve, psi, d.velocity);
    const MatrixXd Rc = detail::curvature_term_Rc_impl(curve, psi, d.cov_psi, d.velocity);

    Gradient g;
    g.curve = -d.tension + R + eps * Rc;
    g.spinor = d.dirac_psi - eps * d.laplacian_psi;
    g.quadrature_weight = curve.grid().quadrature_weight();
    return g;
}

} // namespace dgf
