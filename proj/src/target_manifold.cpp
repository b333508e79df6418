#include "dgf/target_manifold.hpp"

#include <cmath>

namespace dgf {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kClosureTol = 1e-9;
constexpr double kSphereChartThetaMin = 0.2; // polar caps excluded from the chart

void check_dim(const VectorXd& v, int q, const char* what) {
    if (v.size() != q)
        throw ShapeError(std::string(what) + ": expected dimension " + std::to_string(q) +
                         ", got " + std::to_string(v.size()));
}

// Fills ChartSpec::curvature_comp from the Christoffel symbols and their
// derivatives:
//   R^m_{lij} = d_i Gamma^m_{jl} - d_j Gamma^m_{il}
//             + Gamma^m_{ip} Gamma^p_{jl} - Gamma^m_{jp} Gamma^p_{il},
// matching (R(X,Y)Z)^m = R^m_{lij} X^i Y^j Z^l.
void derive_chart_curvature(ChartSpec& chart) {
    const auto gamma = chart.christoffel;
    const auto dgamma = chart.christoffel_deriv;
    const int dim = chart.dim;
    chart.curvature_comp = [gamma, dgamma, dim](int m, int l, int i, int j,
                                                const VectorXd& y) {
        double r = dgamma(m, j, l, i, y) - dgamma(m, i, l, j, y);
        for (int p = 0; p < dim; ++p)
            r += gamma(m, i, p, y) * gamma(p, j, l, y) -
                 gamma(m, j, p, y) * gamma(p, i, l, y);
        return r;
    };
}

ChartSpec sphere_chart(double radius) {
    ChartSpec chart;
    chart.dim = 2;
    const double r = radius;
    chart.in_domain = [r](const VectorXd& p) {
        const double c = p(2) / r;
        return std::abs(c) <= std::cos(kSphereChartThetaMin);
    };
    chart.to_coords = [r](const VectorXd& p) {
        VectorXd y(2);
        y(0) = std::acos(std::clamp(p(2) / r, -1.0, 1.0)); // theta
        y(1) = std::atan2(p(1), p(0));                     // phi
        return y;
    };
    chart.to_ambient = [r](const VectorXd& y) {
        VectorXd p(3);
        p << r * std::sin(y(0)) * std::cos(y(1)), r * std::sin(y(0)) * std::sin(y(1)),
            r * std::cos(y(0));
        return p;
    };
    chart.frame = [r](const VectorXd& y) {
        const double st = std::sin(y(0)), ct = std::cos(y(0));
        const double sp = std::sin(y(1)), cp = std::cos(y(1));
        MatrixXd X(3, 2);
        X.col(0) << r * ct * cp, r * ct * sp, -r * st; // d/dtheta
        X.col(1) << -r * st * sp, r * st * cp, 0.0;    // d/dphi
        return X;
    };
    chart.christoffel = [](int i, int j, int k, const VectorXd& y) {
        const double theta = y(0);
        if (i == 0 && j == 1 && k == 1) return -std::sin(theta) * std::cos(theta);
        if (i == 1 && ((j == 0 && k == 1) || (j == 1 && k == 0)))
            return std::cos(theta) / std::sin(theta);
        return 0.0;
    };
    chart.christoffel_deriv = [](int i, int j, int k, int p, const VectorXd& y) {
        if (p != 0) return 0.0; // no phi dependence
        const double theta = y(0);
        if (i == 0 && j == 1 && k == 1) return -std::cos(2.0 * theta);
        if (i == 1 && ((j == 0 && k == 1) || (j == 1 && k == 0))) {
            const double st = std::sin(theta);
            return -1.0 / (st * st);
        }
        return 0.0;
    };
    derive_chart_curvature(chart);
    return chart;
}

ChartSpec flat_chart(int q) {
    ChartSpec chart;
    chart.dim = q;
    chart.in_domain = [](const VectorXd&) { return true; };
    chart.to_coords = [](const VectorXd& p) { return p; };
    chart.to_ambient = [](const VectorXd& y) { return y; };
    chart.frame = [q](const VectorXd&) { return MatrixXd::Identity(q, q); };
    chart.christoffel = [](int, int, int, const VectorXd&) { return 0.0; };
    chart.christoffel_deriv = [](int, int, int, int, const VectorXd&) { return 0.0; };
    derive_chart_curvature(chart);
    return chart;
}

std::shared_ptr<const ManifoldSpec> make_unit_circle() {
    auto spec = std::make_shared<ManifoldSpec>();
    spec->name = "unit_circle";
    spec->ambient_dim = 2;
    spec->intrinsic_dim = 1;
    spec->zero_curvature = true;
    spec->closest_point = [](const VectorXd& p) {
        check_dim(p, 2, "unit_circle closest_point");
        const double r = p.norm();
        if (r < kSingularTol)
            throw ProjectionSingularityError("unit_circle: projection undefined at the origin");
        return VectorXd(p / r);
    };
    spec->tangent_projector = [](const VectorXd& p) {
        return MatrixXd(MatrixXd::Identity(2, 2) - p * p.transpose());
    };
    spec->second_fundamental_form = [](const VectorXd& p, const VectorXd& X,
                                       const VectorXd& Y) {
        return VectorXd(-X.dot(Y) * p);
    };
    spec->shape_operator = [](const VectorXd& p, const VectorXd& nu, const VectorXd& X) {
        return VectorXd(-nu.dot(p) * X);
    };
    spec->curvature = [](const VectorXd&, const VectorXd&, const VectorXd&, const VectorXd&) {
        return VectorXd(VectorXd::Zero(2));
    };
    return spec;
}

std::shared_ptr<const ManifoldSpec> make_round_sphere(double radius) {
    if (radius <= 0.0) throw ConfigError("round_sphere: radius must be positive");
    auto spec = std::make_shared<ManifoldSpec>();
    spec->name = "round_sphere";
    spec->ambient_dim = 3;
    spec->intrinsic_dim = 2;
    const double r = radius, r2 = radius * radius;
    spec->closest_point = [r](const VectorXd& p) {
        check_dim(p, 3, "round_sphere closest_point");
        const double norm = p.norm();
        if (norm < kSingularTol)
            throw ProjectionSingularityError("round_sphere: projection undefined at the center");
        return VectorXd(r * p / norm);
    };
    spec->tangent_projector = [](const VectorXd& p) {
        const VectorXd n = p.normalized();
        return MatrixXd(MatrixXd::Identity(3, 3) - n * n.transpose());
    };
    spec->second_fundamental_form = [r2](const VectorXd& p, const VectorXd& X,
                                         const VectorXd& Y) {
        return VectorXd(-(X.dot(Y) / r2) * p);
    };
    spec->shape_operator = [r2](const VectorXd& p, const VectorXd& nu, const VectorXd& X) {
        return VectorXd(-(nu.dot(p) / r2) * X);
    };
    spec->curvature = [r2](const VectorXd&, const VectorXd& X, const VectorXd& Y,
                           const VectorXd& Z) {
        return VectorXd((Y.dot(Z) * X - X.dot(Z) * Y) / r2);
    };
    spec->chart = sphere_chart(radius);
    return spec;
}

std::shared_ptr<const ManifoldSpec> make_clifford_torus() {
    auto spec = std::make_shared<ManifoldSpec>();
    spec->name = "clifford_torus";
    spec->ambient_dim = 4;
    spec->intrinsic_dim = 2;
    spec->zero_curvature = true;
    const double r = 1.0 / std::sqrt(2.0), r2 = 0.5;
    spec->closest_point = [r](const VectorXd& p) {
        check_dim(p, 4, "clifford_torus closest_point");
        VectorXd out(4);
        for (int b = 0; b < 2; ++b) {
            const Eigen::Vector2d pb = p.segment<2>(2 * b);
            const double norm = pb.norm();
            if (norm < kSingularTol)
                throw ProjectionSingularityError(
                    "clifford_torus: projection undefined on a factor axis");
            out.segment<2>(2 * b) = r * pb / norm;
        }
        return out;
    };
    spec->tangent_projector = [](const VectorXd& p) {
        MatrixXd P = MatrixXd::Zero(4, 4);
        for (int b = 0; b < 2; ++b) {
            const Eigen::Vector2d n = p.segment<2>(2 * b).normalized();
            P.block<2, 2>(2 * b, 2 * b) = Eigen::Matrix2d::Identity() - n * n.transpose();
        }
        return P;
    };
    spec->second_fundamental_form = [r2](const VectorXd& p, const VectorXd& X,
                                         const VectorXd& Y) {
        VectorXd out(4);
        for (int b = 0; b < 2; ++b)
            out.segment<2>(2 * b) =
                -(X.segment<2>(2 * b).dot(Y.segment<2>(2 * b)) / r2) * p.segment<2>(2 * b);
        return out;
    };
    spec->shape_operator = [r2](const VectorXd& p, const VectorXd& nu, const VectorXd& X) {
        VectorXd out(4);
        for (int b = 0; b < 2; ++b)
            out.segment<2>(2 * b) =
                -(nu.segment<2>(2 * b).dot(p.segment<2>(2 * b)) / r2) * X.segment<2>(2 * b);
        return out;
    };
    spec->curvature = [](const VectorXd&, const VectorXd&, const VectorXd&, const VectorXd&) {
        return VectorXd(VectorXd::Zero(4));
    };
    return spec;
}

std::shared_ptr<const ManifoldSpec> make_flat_space(int q) {
    if (q < 1) throw ConfigError("flat_space: dimension must be positive");
    auto spec = std::make_shared<ManifoldSpec>();
    spec->name = "flat_space";
    spec->ambient_dim = q;
    spec->intrinsic_dim = q;
    spec->zero_curvature = true;
    spec->closest_point = [q](const VectorXd& p) {
        check_dim(p, q, "flat_space closest_point");
        return p;
    };
    spec->tangent_projector = [q](const VectorXd&) { return MatrixXd(MatrixXd::Identity(q, q)); };
    spec->second_fundamental_form = [q](const VectorXd&, const VectorXd&, const VectorXd&) {
        return VectorXd(VectorXd::Zero(q));
    };
    spec->shape_operator = [q](const VectorXd&, const VectorXd&, const VectorXd&) {
        return VectorXd(VectorXd::Zero(q));
    };
    spec->curvature = [q](const VectorXd&, const VectorXd&, const VectorXd&, const VectorXd&) {
        return VectorXd(VectorXd::Zero(q));
    };
    spec->chart = flat_chart(q);
    return spec;
}

// Rotational geodesic in one circle factor of radius r: returns the winding
// frequency, validating closure.
double block_frequency(const Eigen::Vector2d& v, double r) {
    const double speed = v.norm();
    const double omega = speed / r;
    if (std::abs(omega - std::round(omega)) > kClosureTol)
        throw ConfigError("geodesic_fixture: requested speed does not close the circle factor "
                          "over [0, 2*pi]");
    return std::round(omega);
}

} // namespace

MatrixXd ManifoldSpec::tangent_basis(const VectorXd& p) const {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(tangent_projector(p));
    // eigenvalues ascend; the tangent space is the eigenvalue-1 block
    return es.eigenvectors().rightCols(intrinsic_dim);
}

std::shared_ptr<const ManifoldSpec> catalog(const std::string& name,
                                            const CatalogParams& params) {
    if (name == "unit_circle") return make_unit_circle();
    if (name == "round_sphere") return make_round_sphere(params.radius);
    if (name == "clifford_torus") return make_clifford_torus();
    if (name == "flat_space") return make_flat_space(params.dim);
    throw ConfigError("catalog: unknown manifold '" + name + "'");
}

VectorXd project_point(const ManifoldSpec& spec, const VectorXd& p) {
    return spec.closest_point(p);
}

MatrixXd geodesic_fixture(const ManifoldSpec& spec, const CircleGrid& grid,
                          const VectorXd& p, const VectorXd& v) {
    const int n = grid.size();
    const int q = spec.ambient_dim;
    check_dim(p, q, "geodesic_fixture point");
    check_dim(v, q, "geodesic_fixture velocity");
    if (spec.distance(p) > 1e-9)
        throw IntegrityError("geodesic_fixture: base point is not on the manifold");
    const VectorXd vt = spec.tangent_projector(p) * v;
    if ((vt - v).norm() > 1e-9 * std::max(1.0, v.norm()))
        throw IntegrityError("geodesic_fixture: velocity is not tangent at the base point");

    MatrixXd pts(n, q);

    if (spec.name == "flat_space") {
        if (v.norm() > 0.0)
            throw ConfigError("geodesic_fixture: straight lines in flat space do not close");
        for (int j = 0; j < n; ++j) pts.row(j) = p;
        return pts;
    }

    if (spec.name == "round_sphere") {
        const double r = p.norm();
        const double speed = v.norm();
        if (speed == 0.0) {
            for (int j = 0; j < n; ++j) pts.row(j) = p;
            return pts;
        }
        const double omega = speed / r;
        if (std::abs(omega - std::round(omega)) > kClosureTol)
            throw ConfigError("geodesic_fixture: great circle does not close at this speed");
        const double m = std::round(omega);
        const VectorXd vhat = v / speed;
        for (int j = 0; j < n; ++j) {
            const double a = m * grid.node(j);
            pts.row(j) = std::cos(a) * p + r * std::sin(a) * vhat;
        }
        return pts;
    }

    if (spec.name == "unit_circle" || spec.name == "clifford_torus") {
        const int blocks = q / 2;
        const double r = (spec.name == "unit_circle") ? 1.0 : 1.0 / std::sqrt(2.0);
        for (int b = 0; b < blocks; ++b) {
            const Eigen::Vector2d pb = p.segment<2>(2 * b);
            const Eigen::Vector2d vb = v.segment<2>(2 * b);
            if (vb.norm() == 0.0) {
                for (int j = 0; j < n; ++j) pts.block<1, 2>(j, 2 * b) = pb.transpose();
                continue;
            }
            const double m = block_frequency(vb, r);
            const double dir = (pb(0) * vb(1) - pb(1) * vb(0)) >= 0.0 ? 1.0 : -1.0;
            const double phase0 = std::atan2(pb(1), pb(0));
            for (int j = 0; j < n; ++j) {
                const double a = phase0 + dir * m * grid.node(j);
                pts(j, 2 * b) = r * std::cos(a);
                pts(j, 2 * b + 1) = r * std::sin(a);
            }
        }
        return pts;
    }

    throw ConfigError("geodesic_fixture: no fixture rule for manifold '" + spec.name + "'");
}

} // namespace dgf
