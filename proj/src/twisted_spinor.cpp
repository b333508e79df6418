#include "dgf/twisted_spinor.hpp"

#include <cmath>

namespace dgf {

namespace {

constexpr double kOnManifoldTol = 1e-10;
constexpr double kTangencyTol = 1e-6;

// Rowwise application of the pointwise tangent projector, acting on real and
// imaginary parts separately (the projector is a real matrix).
MatrixXcd project_rows(const CurveField& curve, const MatrixXcd& values) {
    MatrixXcd out(values.rows(), values.cols());
    for (int j = 0; j < curve.n(); ++j) {
        const MatrixXd P = curve.projector(j);
        out.row(j) = (P * values.row(j).transpose()).transpose();
    }
    return out;
}

} // namespace

CurveField::CurveField(const CircleGrid& grid, std::shared_ptr<const ManifoldSpec> manifold,
                       MatrixXd points)
    : grid_(grid), manifold_(std::move(manifold)), points_(std::move(points)) {
    if (!manifold_) throw ConfigError("CurveField: missing manifold");
    if (points_.rows() != grid_.size() || points_.cols() != manifold_->ambient_dim)
        throw ShapeError("CurveField: points must be n x q");
    const double defect = manifold_defect();
    if (defect > kOnManifoldTol)
        throw IntegrityError("CurveField: node off the manifold by " + std::to_string(defect));
}

MatrixXd CurveField::velocity() const { return curve_derivative_cols(grid_, points_); }

double CurveField::manifold_defect() const {
    double worst = 0.0;
    for (int j = 0; j < n(); ++j)
        worst = std::max(worst, manifold_->distance(points_.row(j)));
    return worst;
}

SpinorField::SpinorField(std::shared_ptr<const CurveField> base, SpinStructure spin,
                         MatrixXcd values)
    : base_(std::move(base)), spin_(spin), values_(std::move(values)) {
    if (!base_) throw ConfigError("SpinorField: missing base curve");
    if (values_.rows() != base_->n() || values_.cols() != base_->q())
        throw ShapeError("SpinorField: values must be n x q");
    const double defect = tangency_defect();
    if (defect > kTangencyTol)
        throw IntegrityError("SpinorField: tangency violated by " + std::to_string(defect));
}

double SpinorField::tangency_defect() const {
    double worst = 0.0;
    for (int j = 0; j < n(); ++j) {
        const MatrixXd P = base_->projector(j);
        const Eigen::VectorXcd v = values_.row(j).transpose();
        const Eigen::VectorXcd normal = v - (P * v);
        worst = std::max(worst, normal.norm());
    }
    return worst;
}

Eigen::VectorXd SpinorField::norm_squared_pointwise() const {
    return values_.rowwise().squaredNorm();
}

double SpinorField::l2_norm_squared() const {
    return grid().quadrature_weight() * values_.squaredNorm();
}

double SpinorField::sup_norm_squared() const {
    return norm_squared_pointwise().maxCoeff();
}

SpinorField SpinorField::zero(std::shared_ptr<const CurveField> base, SpinStructure spin) {
    MatrixXcd z = MatrixXcd::Zero(base->n(), base->q());
    return SpinorField(std::move(base), spin, std::move(z));
}

SpinorField clifford_mul(const SpinorField& psi) {
    return SpinorField(psi.base_ptr(), psi.spin(), Complex(0.0, 1.0) * psi.values());
}

SpinorField covariant_derivative(const SpinorField& psi) {
    const MatrixXcd d = spinor_derivative_cols(psi.grid(), psi.values(), psi.spin());
    return SpinorField(psi.base_ptr(), psi.spin(), project_rows(psi.base(), d));
}

SpinorField twisted_dirac(const SpinorField& psi) { return clifford_mul(covariant_derivative(psi)); }

SpinorField twisted_laplacian(const SpinorField& psi) {
    return covariant_derivative(covariant_derivative(psi));
}

SpinorField construct_stationary(std::shared_ptr<const CurveField> curve,
                                 const Eigen::VectorXcd& chi, SpinStructure spin) {
    if (chi.size() != curve->n())
        throw ShapeError("construct_stationary: chi must have one value per node");
    const double chi_max = chi.cwiseAbs().maxCoeff();
    if (spin == SpinStructure::Sigma2 && chi_max > 0.0)
        throw NoHarmonicSpinorError(
            "construct_stationary: sigma2 admits no nonzero harmonic spinor");
    const MatrixXd d2 = curve_second_derivative_cols(curve->grid(), curve->points());
    double tension_sup = 0.0;
    for (int j = 0; j < curve->n(); ++j)
        tension_sup =
            std::max(tension_sup, (curve->projector(j) * d2.row(j).transpose()).norm());
    if (tension_sup > 1e-8)
        throw IntegrityError("construct_stationary: base curve is not a geodesic (sup tension " +
                             std::to_string(tension_sup) + ")");
    const MatrixXd vel = curve->velocity();
    MatrixXcd values(curve->n(), curve->q());
    const Complex i(0.0, 1.0);
    for (int j = 0; j < curve->n(); ++j)
        values.row(j) = i * chi(j) * vel.row(j).cast<Complex>();
    return SpinorField(std::move(curve), spin, std::move(values));
}

Eigen::VectorXd inner_product_pointwise(const SpinorField& psi, const SpinorField& phi) {
    require_same_bundle(psi, phi);
    Eigen::VectorXd out(psi.n());
    for (int j = 0; j < psi.n(); ++j)
        out(j) = psi.values().row(j).conjugate().cwiseProduct(phi.values().row(j)).sum().real();
    return out;
}

double inner_product_l2(const SpinorField& psi, const SpinorField& phi) {
    require_same_bundle(psi, phi);
    const Eigen::VectorXd pointwise = inner_product_pointwise(psi, phi);
    return psi.grid().quadrature_weight() * pointwise.sum();
}

SpinorField retangentialize(std::shared_ptr<const CurveField> base, SpinStructure spin,
                            const MatrixXcd& raw_values) {
    MatrixXcd projected(raw_values.rows(), raw_values.cols());
    for (int j = 0; j < base->n(); ++j) {
        const MatrixXd P = base->projector(j);
        projected.row(j) = (P * raw_values.row(j).transpose()).transpose();
    }
    return SpinorField(std::move(base), spin, std::move(projected));
}

void require_same_bundle(const SpinorField& a, const SpinorField& b) {
    if (a.spin() != b.spin())
        throw IntegrityError("spinor fields have different spin structures");
    if (!(a.grid() == b.grid()))
        throw IntegrityError("spinor fields live on different grids");
    const bool same_base = a.base_ptr() == b.base_ptr() ||
                           (a.base().manifold().name == b.base().manifold().name &&
                            a.base().points() == b.base().points());
    if (!same_base) throw IntegrityError("spinor fields have different base curves");
}

void require_base(const CurveField& curve, const SpinorField& psi) {
    if (!(curve.grid() == psi.grid()))
        throw IntegrityError("spinor field does not share the curve grid");
    const bool same = &curve == &psi.base() ||
                      (curve.manifold().name == psi.base().manifold().name &&
                       curve.points() == psi.base().points());
    if (!same) throw IntegrityError("spinor field is attached to a different base curve");
}

} // namespace dgf
