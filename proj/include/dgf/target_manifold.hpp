#ifndef DGF_TARGET_MANIFOLD_HPP
#define DGF_TARGET_MANIFOLD_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "dgf/circle_spectral.hpp"
#include "dgf/errors.hpp"

namespace dgf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Coordinate chart on a sub-domain of the target, with Christoffel symbols
/// and curvature components in the chart basis. Used by the chart oracles.
struct ChartSpec {
    int dim = 0; // intrinsic dimension

    std::function<bool(const VectorXd& p)> in_domain;
    std::function<VectorXd(const VectorXd& p)> to_coords;   // ambient point -> y
    std::function<VectorXd(const VectorXd& y)> to_ambient;  // y -> ambient point
    /// Columns are the coordinate frame X_l = d(embedding)/dy^l, a q x dim matrix.
    std::function<MatrixXd(const VectorXd& y)> frame;
    /// Gamma^i_{jk}(y)
    std::function<double(int i, int j, int k, const VectorXd& y)> christoffel;
    /// dGamma^i_{jk}/dy^p (y)
    std::function<double(int i, int j, int k, int p, const VectorXd& y)> christoffel_deriv;
    /// R^m_{lij}(y) with (R(X,Y)Z)^m = R^m_{lij} X^i Y^j Z^l
    std::function<double(int m, int l, int i, int j, const VectorXd& y)> curvature_comp;
};

/// Geometry bundle of a compact target isometrically embedded in R^q.
/// All members are closed-form and immutable after construction.
struct ManifoldSpec {
    std::string name;
    int ambient_dim = 0;   // q
    int intrinsic_dim = 0;
    bool zero_curvature = false;

    /// Closest-point projection onto N; throws ProjectionSingularityError
    /// inside the singular set.
    std::function<VectorXd(const VectorXd& p)> closest_point;
    /// Orthogonal projector onto T_p N, for p on N.
    std::function<MatrixXd(const VectorXd& p)> tangent_projector;
    /// Second fundamental form II_p(X, Y), normal-valued.
    std::function<VectorXd(const VectorXd& p, const VectorXd& X, const VectorXd& Y)>
        second_fundamental_form;
    /// Shape operator P(nu, X), the tangent-valued adjoint of II.
    std::function<VectorXd(const VectorXd& p, const VectorXd& nu, const VectorXd& X)>
        shape_operator;
    /// Riemann tensor R^N(X, Y)Z, tangent-valued.
    std::function<VectorXd(const VectorXd& p, const VectorXd& X, const VectorXd& Y,
                           const VectorXd& Z)>
        curvature;

    std::optional<ChartSpec> chart;

    /// Distance of p from N (used by on-manifold checks).
    double distance(const VectorXd& p) const { return (p - closest_point(p)).norm(); }

    /// Orthonormal basis of T_p N, q x intrinsic_dim.
    MatrixXd tangent_basis(const VectorXd& p) const;
};

struct CatalogParams {
    double radius = 1.0; // round_sphere
    int dim = 3;         // flat_space
};

/// Catalog entries: unit_circle, round_sphere, clifford_torus, flat_space.
std::shared_ptr<const ManifoldSpec> catalog(const std::string& name,
                                            const CatalogParams& params = {});

/// Closest-point projection with the spec's error behavior.
VectorXd project_point(const ManifoldSpec& spec, const VectorXd& p);

/// Nodal samples of the closed geodesic through (p, v); |v| encodes the speed
/// and must make the geodesic close over [0, 2*pi]. Throws ConfigError for
/// non-closing requests.
MatrixXd geodesic_fixture(const ManifoldSpec& spec, const CircleGrid& grid,
                          const VectorXd& p, const VectorXd& v);

} // namespace dgf

#endif
