#include "dgf/oracle.hpp"

#include <cmath>

namespace dgf {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_to_pi(double a) {
    while (a > M_PI) a -= kTwoPi;
    while (a <= -M_PI) a += kTwoPi;
    return a;
}

} // namespace

VectorXd ChartFrame::decompose(int j, const VectorXd& ambient) const {
    const MatrixXd& X = frames[j];
    return (X.transpose() * X).ldlt().solve(X.transpose() * ambient);
}

Eigen::VectorXcd ChartFrame::decompose(int j, const Eigen::VectorXcd& ambient) const {
    const MatrixXd& X = frames[j];
    const MatrixXd gram = X.transpose() * X;
    const VectorXd re = gram.ldlt().solve(X.transpose() * ambient.real());
    const VectorXd im = gram.ldlt().solve(X.transpose() * ambient.imag());
    return re + Complex(0.0, 1.0) * im;
}

double ChartFrame::condition(int j) const {
    Eigen::JacobiSVD<MatrixXd> svd(frames[j]);
    return svd.singularValues()(0) / svd.singularValues().tail(1)(0);
}

ChartFrame chart_frame(const CurveField& curve) {
    if (!curve.manifold().chart)
        throw ConfigError("chart_frame: manifold '" + curve.manifold().name +
                          "' carries no chart");
    const ChartSpec& chart = *curve.manifold().chart;
    const int n = curve.n();
    const int dim = chart.dim;

    ChartFrame frame;
    frame.chart = &chart;
    frame.dim = dim;
    frame.coords.resize(n, dim);
    frame.frames.resize(n);
    frame.windings.assign(dim, 0);

    for (int j = 0; j < n; ++j) {
        const VectorXd p = curve.points().row(j);
        if (!chart.in_domain(p))
            throw ChartDomainError("chart_frame: curve leaves the chart sub-domain at node " +
                                   std::to_string(j));
        frame.coords.row(j) = chart.to_coords(p).transpose();
    }
    // Unwrap angle-like coordinates so each coordinate function is
    // winding * s + a periodic part.
    for (int c = 0; c < dim; ++c) {
        const Eigen::VectorXd raw = frame.coords.col(c);
        for (int j = 1; j < n; ++j)
            frame.coords(j, c) = frame.coords(j - 1, c) + wrap_to_pi(raw(j) - raw(j - 1));
        const double closing =
            frame.coords(n - 1, c) + wrap_to_pi(raw(0) - raw(n - 1)) - frame.coords(0, c);
        frame.windings[c] = static_cast<int>(std::lround(closing / kTwoPi));
    }
    for (int j = 0; j < n; ++j)
        frame.frames[j] = chart.frame(frame.coords.row(j));
    return frame;
}

namespace {

// Coordinate velocity and acceleration by spectral differentiation of the
// unwrapped coordinate functions (periodic part) plus the winding slope.
struct ChartKinematics {
    Eigen::MatrixXd vel;  // n x dim
    Eigen::MatrixXd acc;  // n x dim
};

ChartKinematics chart_kinematics(const CircleGrid& grid, const ChartFrame& frame) {
    const int n = grid.size(), dim = frame.dim;
    ChartKinematics k;
    k.vel.resize(n, dim);
    k.acc.resize(n, dim);
    for (int c = 0; c < dim; ++c) {
        const double w = frame.windings[c];
        Eigen::VectorXcd periodic(n);
        for (int j = 0; j < n; ++j)
            periodic(j) = frame.coords(j, c) - w * grid.node(j);
        const Eigen::VectorXcd d1 = differentiate(grid, periodic, SpinStructure::Sigma1);
        const Eigen::VectorXcd d2 =
            differentiate(grid, d1, SpinStructure::Sigma1);
        for (int j = 0; j < n; ++j) {
            k.vel(j, c) = d1(j).real() + w;
            k.acc(j, c) = d2(j).real();
        }
    }
    return k;
}

} // namespace

Gradient fd_energy_gradient(const CurveField& curve, const SpinorField& psi, double eps,
                            double h) {
    if (h < 1e-7 || h > 1e-3)
        throw DomainError("fd_energy_gradient: probe size must lie in [1e-7, 1e-3]");
    const int n = curve.n(), q = curve.q(), d = curve.manifold().intrinsic_dim;
    const double w = curve.grid().quadrature_weight();

    Gradient g;
    g.curve = MatrixXd::Zero(n, q);
    g.spinor = MatrixXcd::Zero(n, q);
    g.quadrature_weight = w;

    auto energy_of = [&](const MatrixXd& pts, const MatrixXcd& vals) {
        auto c = std::make_shared<CurveField>(curve.grid(), curve.manifold_ptr(), pts);
        SpinorField s(c, psi.spin(), vals);
        return energies(*c, s, eps).E_eps;
    };

    for (int j = 0; j < n; ++j) {
        const MatrixXd basis = curve.manifold().tangent_basis(curve.points().row(j));
        // curve probes: move the node along each tangent direction, project
        // back to N, and carry the spinor by re-projection.
        for (int a = 0; a < d; ++a) {
            const VectorXd dir = basis.col(a);
            double e_plus = 0.0, e_minus = 0.0;
            for (const double sign : {1.0, -1.0}) {
                MatrixXd pts = curve.points();
                const VectorXd moved =
                    curve.manifold().closest_point(pts.row(j).transpose() + sign * h * dir);
                pts.row(j) = moved.transpose();
                MatrixXcd vals = psi.values();
                const MatrixXd P = curve.manifold().tangent_projector(moved);
                vals.row(j) = (P * vals.row(j).transpose()).transpose();
                (sign > 0 ? e_plus : e_minus) = energy_of(pts, vals);
            }
            g.curve.row(j) += ((e_plus - e_minus) / (2.0 * h * w)) * dir.transpose();
        }
        // spinor probes: real and imaginary units of each tangent direction.
        for (int a = 0; a < d; ++a) {
            for (const bool imaginary : {false, true}) {
                const Eigen::VectorXcd dir =
                    (imaginary ? Complex(0.0, 1.0) : Complex(1.0, 0.0)) *
                    basis.col(a).cast<Complex>();
                double e_plus = 0.0, e_minus = 0.0;
                for (const double sign : {1.0, -1.0}) {
                    MatrixXcd vals = psi.values();
                    vals.row(j) += sign * h * dir.transpose();
                    (sign > 0 ? e_plus : e_minus) = energy_of(curve.points(), vals);
                }
                g.spinor.row(j) += ((e_plus - e_minus) / (2.0 * h * w)) * dir.transpose();
            }
        }
    }
    return g;
}

MatrixXd chart_curvature_term(const CurveField& curve, const SpinorField& psi) {
    require_base(curve, psi);
    const ChartFrame frame = chart_frame(curve);
    const ChartKinematics kin = chart_kinematics(curve.grid(), frame);
    const ChartSpec& chart = *frame.chart;
    const int n = curve.n(), dim = frame.dim;

    MatrixXd out = MatrixXd::Zero(n, curve.q());
    for (int node = 0; node < n; ++node) {
        const VectorXd y = frame.coords.row(node);
        const Eigen::VectorXcd comp = frame.decompose(node, Eigen::VectorXcd(psi.values().row(node).transpose()));
        VectorXd r_chart = VectorXd::Zero(dim);
        for (int m = 0; m < dim; ++m)
            for (int l = 0; l < dim; ++l)
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) {
                        // <psi^i, ds . psi^j> = Re(conj(psi^i) i psi^j)
                        const double pairing =
                            (std::conj(comp(i)) * Complex(0.0, 1.0) * comp(j)).real();
                        r_chart(m) += 0.5 * chart.curvature_comp(m, l, i, j, y) *
                                      kin.vel(node, l) * pairing;
                    }
        out.row(node) = (frame.frames[node] * r_chart).transpose();
    }
    return out;
}

MatrixXcd chart_laplacian(const SpinorField& psi) {
    const CurveField& curve = psi.base();
    const ChartFrame frame = chart_frame(curve);
    const ChartKinematics kin = chart_kinematics(curve.grid(), frame);
    const ChartSpec& chart = *frame.chart;
    const int n = curve.n(), dim = frame.dim;
    const CircleGrid& grid = curve.grid();

    // spinor chart components as scalar fields, with their s-derivatives
    Eigen::MatrixXcd comp(n, dim);
    for (int node = 0; node < n; ++node)
        comp.row(node) = frame.decompose(node, Eigen::VectorXcd(psi.values().row(node).transpose())).transpose();
    const Eigen::MatrixXcd dcomp = spinor_derivative_cols(grid, comp, psi.spin());
    const Eigen::MatrixXcd d2comp = spinor_derivative_cols(grid, dcomp, psi.spin());

    MatrixXcd out = MatrixXcd::Zero(n, curve.q());
    for (int node = 0; node < n; ++node) {
        const VectorXd y = frame.coords.row(node);
        Eigen::VectorXcd lap = Eigen::VectorXcd::Zero(dim);
        // Delta psi^i
        for (int i = 0; i < dim; ++i) lap(i) += d2comp(node, i);
        // 2 Gamma^k_{ij} gamma'^j d psi^i
        for (int k = 0; k < dim; ++k)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    lap(k) += 2.0 * chart.christoffel(k, i, j, y) * kin.vel(node, j) *
                              dcomp(node, i);
        // Gamma^k_{ij,p} gamma'^p gamma'^j psi^i
        for (int k = 0; k < dim; ++k)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    for (int p = 0; p < dim; ++p)
                        lap(k) += chart.christoffel_deriv(k, i, j, p, y) * kin.vel(node, p) *
                                  kin.vel(node, j) * comp(node, i);
        // Gamma^k_{ij} gamma''^j psi^i
        for (int k = 0; k < dim; ++k)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    lap(k) += chart.christoffel(k, i, j, y) * kin.acc(node, j) * comp(node, i);
        // Gamma^k_{ij} Gamma^r_{kt} gamma'^j gamma'^t psi^i
        for (int r = 0; r < dim; ++r)
            for (int k = 0; k < dim; ++k)
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        for (int t = 0; t < dim; ++t)
                            lap(r) += chart.christoffel(k, i, j, y) *
                                      chart.christoffel(r, k, t, y) * kin.vel(node, j) *
                                      kin.vel(node, t) * comp(node, i);
        const VectorXd re = frame.frames[node] * VectorXd(lap.real());
        const VectorXd im = frame.frames[node] * VectorXd(lap.imag());
        out.row(node) =
            (re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>()).transpose();
    }
    return out;
}

DenseOperatorReport dense_operator_matrix(SpinorOperator op, const CurveField& curve, double eps,
                                          SpinStructure spin) {
    const int n = curve.n(), q = curve.q(), d = curve.manifold().intrinsic_dim;
    if (n * 2 * q > 4096)
        throw ResourceError("dense_operator_matrix: problem exceeds the 4096-entry limit");

    std::vector<MatrixXd> bases(n);
    for (int j = 0; j < n; ++j) bases[j] = curve.manifold().tangent_basis(curve.points().row(j));

    auto curve_ptr = std::make_shared<CurveField>(curve.grid(), curve.manifold_ptr(),
                                                  curve.points());
    auto apply = [&](const MatrixXcd& values) -> MatrixXcd {
        SpinorField field(curve_ptr, spin, values);
        switch (op) {
            case SpinorOperator::Dirac:
                return twisted_dirac(field).values();
            case SpinorOperator::Laplacian:
                return twisted_laplacian(field).values();
            case SpinorOperator::EpsLaplacianMinusDirac:
                return eps * twisted_laplacian(field).values() - twisted_dirac(field).values();
        }
        throw DomainError("dense_operator_matrix: unknown operator");
    };

    const int m = 2 * n * d;
    MatrixXd mat(m, m);
    int col = 0;
    for (int j = 0; j < n; ++j) {
        for (int a = 0; a < d; ++a) {
            for (const bool imaginary : {false, true}) {
                MatrixXcd values = MatrixXcd::Zero(n, q);
                values.row(j) = (imaginary ? Complex(0.0, 1.0) : Complex(1.0, 0.0)) *
                                bases[j].col(a).cast<Complex>().transpose();
                const MatrixXcd image = apply(values);
                int row = 0;
                for (int j2 = 0; j2 < n; ++j2) {
                    const Eigen::VectorXcd z =
                        bases[j2].transpose() * image.row(j2).transpose();
                    for (int a2 = 0; a2 < d; ++a2) {
                        mat(row++, col) = z(a2).real();
                        mat(row++, col) = z(a2).imag();
                    }
                }
                ++col;
            }
        }
    }

    DenseOperatorReport report;
    report.symmetry_defect = (mat - mat.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (mat + mat.transpose()));
    report.eigenvalues = es.eigenvalues();
    report.matrix = std::move(mat);
    return report;
}

} // namespace dgf
