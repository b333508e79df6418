#ifndef DGF_ORACLE_HPP
#define DGF_ORACLE_HPP

#include "dgf/energy.hpp"

namespace dgf {
// Independent reference implementations used to validate conventions and
// discretizations. Deliberately slow and simple; they share only data types
// with the primary path.

/// Chart access along a curve: nodal coordinates, frame matrices and
/// coordinate velocities obtained by differentiating the (unwrapped)
/// coordinate functions themselves.
struct ChartFrame {
    const ChartSpec* chart = nullptr;
    int dim = 0;
    Eigen::MatrixXd coords;        // n x dim, angle-like coordinates unwrapped
    std::vector<MatrixXd> frames;  // per node, q x dim
    std::vector<int> windings;     // winding number per coordinate

    /// Chart components of an ambient vector at node j (least squares in the
    /// coordinate frame).
    VectorXd decompose(int j, const VectorXd& ambient) const;
    Eigen::VectorXcd decompose(int j, const Eigen::VectorXcd& ambient) const;
    /// Condition number of the frame at node j.
    double condition(int j) const;
};

/// Builds the chart data along a curve; throws ConfigError when the manifold
/// carries no chart and ChartDomainError when the curve leaves the sub-domain.
ChartFrame chart_frame(const CurveField& curve);

/// Central finite differences of the discrete E_eps under per-node tangential
/// perturbations (curve points re-projected, spinor values re-tangentialized).
/// h must lie in [1e-7, 1e-3].
Gradient fd_energy_gradient(const CurveField& curve, const SpinorField& psi, double eps,
                            double h);

/// Curvature term of the Dirac energy evaluated from chart components:
/// (1/2) R^m_{lij} gamma'^l <psi^i, ds . psi^j>, mapped back to ambient
/// coordinates.
MatrixXd chart_curvature_term(const CurveField& curve, const SpinorField& psi);

/// Connection Laplacian from the five-term coordinate expansion, mapped back
/// to ambient coordinates.
MatrixXcd chart_laplacian(const SpinorField& psi);

enum class SpinorOperator { Dirac, Laplacian, EpsLaplacianMinusDirac };

/// Dense matrix of a twisted operator over real coordinates of nodal spinor
/// values, restricted to the tangency subspace (orthonormal tangent basis per
/// node, real and imaginary units).
struct DenseOperatorReport {
    MatrixXd matrix;           // m x m, m = 2 * n * intrinsic_dim
    Eigen::VectorXd eigenvalues; // ascending, of the symmetrized matrix
    double symmetry_defect = 0.0;
};

DenseOperatorReport dense_operator_matrix(SpinorOperator op, const CurveField& curve, double eps,
                                          SpinStructure spin);

} // namespace dgf

#endif
