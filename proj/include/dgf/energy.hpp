#ifndef DGF_ENERGY_HPP
#define DGF_ENERGY_HPP

#include "dgf/twisted_spinor.hpp"

namespace dgf {

/// The energy ledger of a state: E = dirichlet + dirac,
/// E_eps = E + eps * regularizer.
struct EnergyReport {
    double dirichlet = 0.0;   // 1/2 int |gamma'|^2
    double dirac = 0.0;       // 1/2 int <psi, D psi>
    double regularizer = 0.0; // 1/2 int |cov psi|^2
    double E = 0.0;
    double E_eps = 0.0;
    double eps = 0.0;

    /// -(1/(8 eps)) * L2-norm^2 of psi, the proven lower bound for E_eps.
    double lower_bound = 0.0;
};

/// Tension field tau(gamma): tangential projection of the spectral second
/// derivative, one row per node.
MatrixXd tension_field(const CurveField& curve);

/// Curvature term of the Dirac energy. With psi = a + i b (tangent fields)
/// this is R^N(b, a) gamma' per node; equivalently the real-pairing expansion
/// of (1/2) R^N(i psi, psi) gamma'.
MatrixXd curvature_term_R(const CurveField& curve, const SpinorField& psi);

/// Curvature term of the regularizer: with cov psi = c + i d,
/// R^N(c, a) gamma' + R^N(d, b) gamma' per node.
MatrixXd curvature_term_Rc(const CurveField& curve, const SpinorField& psi);

EnergyReport energies(const CurveField& curve, const SpinorField& psi, double eps);

/// Euler-Lagrange residual fields with their norms. Regularized:
/// (tau - R - eps Rc, eps Lap psi - D psi); unregularized: (tau - R, D psi).
struct ElResidual {
    MatrixXd curve;
    MatrixXcd spinor;
    double curve_sup = 0.0;
    double curve_l2 = 0.0;
    double spinor_sup = 0.0;
    double spinor_l2 = 0.0;
};

ElResidual el_residual(const CurveField& curve, const SpinorField& psi, double eps,
                       bool regularized);

/// Exact L2 gradient of the discrete E_eps:
///   curve part  -tau + R + eps Rc,
///   spinor part D psi - eps Lap psi.
struct Gradient {
    MatrixXd curve;
    MatrixXcd spinor;
    double quadrature_weight = 0.0;

    double l2_norm_squared() const {
        return quadrature_weight * (curve.squaredNorm() + spinor.squaredNorm());
    }
    double l2_norm() const { return std::sqrt(l2_norm_squared()); }
};

Gradient l2_gradient(const CurveField& curve, const SpinorField& psi, double eps);

namespace detail {
/// Shared per-state derivative bundle so flow steps and reports do not
/// recompute transforms.
struct StateDerivatives {
    MatrixXd velocity;         // gamma'
    MatrixXd second_derivative; // u''
    MatrixXd tension;          // P u''
    MatrixXcd dpsi;            // spectral d/ds of psi-hat
    MatrixXcd cov_psi;         // P dpsi
    MatrixXcd dirac_psi;       // i P dpsi
    MatrixXcd dcov;            // spectral d/ds of cov_psi
    MatrixXcd laplacian_psi;   // P dcov
};
StateDerivatives state_derivatives(const CurveField& curve, const SpinorField& psi);

MatrixXd curvature_term_R_impl(const CurveField& curve, const SpinorField& psi,
                               const MatrixXd& velocity);
MatrixXd curvature_term_Rc_impl(const CurveField& curve, const SpinorField& psi,
                                const MatrixXcd& cov_psi, const MatrixXd& velocity);
} // namespace detail

} // namespace dgf

#endif
