#ifndef DGF_TWISTED_SPINOR_HPP
#define DGF_TWISTED_SPINOR_HPP

#include <memory>

#include <Eigen/Dense>

#include "dgf/circle_spectral.hpp"
#include "dgf/target_manifold.hpp"

namespace dgf {

using Eigen::MatrixXcd;

/// Discrete closed curve u = iota(gamma): one embedded point per grid node,
/// all on the target manifold.
class CurveField {
public:
    CurveField(const CircleGrid& grid, std::shared_ptr<const ManifoldSpec> manifold,
               MatrixXd points);

    const CircleGrid& grid() const { return grid_; }
    const ManifoldSpec& manifold() const { return *manifold_; }
    std::shared_ptr<const ManifoldSpec> manifold_ptr() const { return manifold_; }
    const MatrixXd& points() const { return points_; }
    int n() const { return grid_.size(); }
    int q() const { return manifold_->ambient_dim; }

    /// gamma' by spectral differentiation, one row per node.
    MatrixXd velocity() const;
    /// Tangent projector at node j.
    MatrixXd projector(int j) const { return manifold_->tangent_projector(points_.row(j)); }

    /// Maximum nodal distance from the manifold.
    double manifold_defect() const;

private:
    CircleGrid grid_;
    std::shared_ptr<const ManifoldSpec> manifold_;
    MatrixXd points_; // n x q
};

/// Twisted spinor along a curve: one complex q-vector per node, tangent to
/// the target at the corresponding curve point.
class SpinorField {
public:
    SpinorField(std::shared_ptr<const CurveField> base, SpinStructure spin, MatrixXcd values);

    const CurveField& base() const { return *base_; }
    std::shared_ptr<const CurveField> base_ptr() const { return base_; }
    SpinStructure spin() const { return spin_; }
    const CircleGrid& grid() const { return base_->grid(); }
    const MatrixXcd& values() const { return values_; }
    int n() const { return base_->n(); }
    int q() const { return base_->q(); }

    /// Largest nodal violation of the tangency constraint.
    double tangency_defect() const;
    /// |psi|^2 per node.
    Eigen::VectorXd norm_squared_pointwise() const;
    double l2_norm_squared() const;
    double sup_norm_squared() const;

    /// Zero spinor along a curve.
    static SpinorField zero(std::shared_ptr<const CurveField> base, SpinStructure spin);

private:
    std::shared_ptr<const CurveField> base_;
    SpinStructure spin_;
    MatrixXcd values_; // n x q
};

/// Clifford multiplication: componentwise multiplication by i.
SpinorField clifford_mul(const SpinorField& psi);

/// Covariant derivative on the twisted bundle: tangential projection of the
/// spectral derivative of the extrinsic values.
SpinorField covariant_derivative(const SpinorField& psi);

/// Twisted Dirac operator D = i * covariant derivative.
SpinorField twisted_dirac(const SpinorField& psi);

/// Connection Laplacian: the covariant derivative applied twice.
SpinorField twisted_laplacian(const SpinorField& psi);

/// Stationary spinor psi = i chi gamma' along a geodesic, with chi a harmonic
/// spinor (constant, sigma1 only). chi is given by its nodal values.
SpinorField construct_stationary(std::shared_ptr<const CurveField> curve,
                                 const Eigen::VectorXcd& chi, SpinStructure spin);

/// Real pointwise spinor metric <psi, phi> = Re sum_a conj(psi^a) phi^a.
Eigen::VectorXd inner_product_pointwise(const SpinorField& psi, const SpinorField& phi);

/// Trapezoidal L2 pairing of two spinor fields.
double inner_product_l2(const SpinorField& psi, const SpinorField& phi);

/// Project raw extrinsic values onto the tangent spaces along a curve
/// (the discrete covariant time derivative: update, then re-tangentialize).
SpinorField retangentialize(std::shared_ptr<const CurveField> base, SpinStructure spin,
                            const MatrixXcd& raw_values);

/// Throws IntegrityError unless the two fields share grid, spin and base.
void require_same_bundle(const SpinorField& a, const SpinorField& b);

/// Throws IntegrityError unless psi lives along the given curve.
void require_base(const CurveField& curve, const SpinorField& psi);

} // namespace dgf

#endif
