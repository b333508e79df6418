#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dgf/states.hpp"
#include "dgf/target_manifold.hpp"

using namespace dgf;

namespace {

VectorXd random_vec(int q, RandomStream& rng) {
    VectorXd v(q);
    for (int i = 0; i < q; ++i) v(i) = rng.uniform();
    return v;
}

VectorXd random_point_on(const ManifoldSpec& spec, RandomStream& rng) {
    for (;;) {
        const VectorXd p = random_vec(spec.ambient_dim, rng);
        if (p.norm() < 0.2) continue;
        try {
            return spec.closest_point(p);
        } catch (const ProjectionSingularityError&) {
        }
    }
}

VectorXd random_tangent(const ManifoldSpec& spec, const VectorXd& p, RandomStream& rng) {
    return spec.tangent_projector(p) * random_vec(spec.ambient_dim, rng);
}

// Finite-difference second fundamental form: the normal part of the
// derivative of the projected extension of Y along a curve through p with
// velocity X. Independent of the catalog's closed forms.
VectorXd fd_second_fundamental_form(const ManifoldSpec& spec, const VectorXd& p,
                                    const VectorXd& X, const VectorXd& Y) {
    const double h = 1e-5;
    auto tangent_extension = [&](double t) {
        const VectorXd c = spec.closest_point(p + t * X);
        return VectorXd(spec.tangent_projector(c) * Y);
    };
    const VectorXd derivative = (tangent_extension(h) - tangent_extension(-h)) / (2.0 * h);
    const MatrixXd P = spec.tangent_projector(p);
    return derivative - P * derivative;
}

void check_spec_invariants(const ManifoldSpec& spec, int samples) {
    RandomStream rng(1234 + spec.ambient_dim);
    for (int trial = 0; trial < samples; ++trial) {
        const VectorXd p = random_point_on(spec, rng);
        const MatrixXd P = spec.tangent_projector(p);

        // symmetric idempotent of rank intrinsic_dim
        CHECK((P - P.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((P * P - P).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::lround(P.trace()) == spec.intrinsic_dim);

        const VectorXd X = random_tangent(spec, p, rng);
        const VectorXd Y = random_tangent(spec, p, rng);
        const VectorXd Z = random_tangent(spec, p, rng);
        const VectorXd W = random_tangent(spec, p, rng);

        // II is normal-valued and symmetric
        const VectorXd II_XY = spec.second_fundamental_form(p, X, Y);
        CHECK((P * II_XY).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((II_XY - spec.second_fundamental_form(p, Y, X)).cwiseAbs().maxCoeff() < 1e-12);

        // duality <P(nu, X), Y> = <nu, II(X, Y)>
        const VectorXd nu = random_vec(spec.ambient_dim, rng);
        const VectorXd normal = nu - P * nu;
        const double lhs = spec.shape_operator(p, normal, X).dot(Y);
        const double rhs = normal.dot(II_XY);
        CHECK(std::abs(lhs - rhs) < 1e-10);

        // Gauss equation
        const double gauss = spec.second_fundamental_form(p, X, W).dot(
                                 spec.second_fundamental_form(p, Y, Z)) -
                             spec.second_fundamental_form(p, X, Z).dot(
                                 spec.second_fundamental_form(p, Y, W));
        const double riemann = spec.curvature(p, X, Y, Z).dot(W);
        CHECK(std::abs(riemann - gauss) < 1e-8);
    }
}

} // namespace

TEST_CASE("catalog names") {
    CHECK(catalog("unit_circle")->ambient_dim == 2);
    CHECK(catalog("round_sphere")->ambient_dim == 3);
    CHECK(catalog("clifford_torus")->ambient_dim == 4);
    CHECK(catalog("flat_space", CatalogParams{1.0, 5})->ambient_dim == 5);
    CHECK_THROWS_AS(catalog("moebius"), ConfigError);
}

TEST_CASE("flat space geometry is trivial") {
    auto spec = catalog("flat_space", CatalogParams{1.0, 3});
    RandomStream rng(5);
    const VectorXd p = random_vec(3, rng);
    CHECK((spec->tangent_projector(p) - MatrixXd::Identity(3, 3)).norm() == 0.0);
    CHECK(spec->second_fundamental_form(p, random_vec(3, rng), random_vec(3, rng)).norm() == 0.0);
    CHECK(spec->curvature(p, random_vec(3, rng), random_vec(3, rng), random_vec(3, rng)).norm() ==
          0.0);
}

TEST_CASE("sphere second fundamental form matches the projector derivative oracle") {
    auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
    RandomStream rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorXd p = random_point_on(*spec, rng);
        const VectorXd X = random_tangent(*spec, p, rng);
        const VectorXd Y = random_tangent(*spec, p, rng);
        const VectorXd closed_form = spec->second_fundamental_form(p, X, Y);
        CHECK((closed_form + X.dot(Y) * p).cwiseAbs().maxCoeff() < 1e-12); // -<X,Y> p
        const VectorXd fd = fd_second_fundamental_form(*spec, p, X, Y);
        CHECK((closed_form - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("sphere curvature equals the Gauss-equation form of the derived II") {
    auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
    RandomStream rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorXd p = random_point_on(*spec, rng);
        const VectorXd X = random_tangent(*spec, p, rng);
        const VectorXd Y = random_tangent(*spec, p, rng);
        const VectorXd Z = random_tangent(*spec, p, rng);
        const VectorXd W = random_tangent(*spec, p, rng);
        // closed form R(X,Y)Z = <Y,Z>X - <X,Z>Y on the unit sphere
        const VectorXd R = spec->curvature(p, X, Y, Z);
        CHECK((R - (Y.dot(Z) * X - X.dot(Z) * Y)).cwiseAbs().maxCoeff() < 1e-12);
        // Gauss pairing from the finite-difference II
        const double gauss = fd_second_fundamental_form(*spec, p, X, W)
                                 .dot(fd_second_fundamental_form(*spec, p, Y, Z)) -
                             fd_second_fundamental_form(*spec, p, X, Z)
                                 .dot(fd_second_fundamental_form(*spec, p, Y, W));
        CHECK(std::abs(R.dot(W) - gauss) < 1e-5);
    }
}

TEST_CASE("catalog invariants on random samples") {
    check_spec_invariants(*catalog("unit_circle"), 100);
    check_spec_invariants(*catalog("round_sphere", CatalogParams{1.0, 3}), 100);
    check_spec_invariants(*catalog("round_sphere", CatalogParams{1.7, 3}), 100);
    check_spec_invariants(*catalog("clifford_torus"), 100);
    check_spec_invariants(*catalog("flat_space", CatalogParams{1.0, 4}), 100);
}

TEST_CASE("project_point") {
    SUBCASE("radial projection on the sphere") {
        auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
        VectorXd p(3);
        p << 2.0, 0.0, 0.0;
        VectorXd expected(3);
        expected << 1.0, 0.0, 0.0;
        CHECK((project_point(*spec, p) - expected).norm() < 1e-15);
    }
    SUBCASE("idempotence") {
        auto spec = catalog("clifford_torus");
        RandomStream rng(31);
        const VectorXd p = random_point_on(*spec, rng);
        CHECK((project_point(*spec, p) - p).norm() < 1e-12);
    }
    SUBCASE("blockwise projection on the torus") {
        auto spec = catalog("clifford_torus");
        VectorXd p(4);
        p << 1.0, 0.0, 1.0, 0.0;
        const double r = 1.0 / std::sqrt(2.0);
        VectorXd expected(4);
        expected << r, 0.0, r, 0.0;
        CHECK((project_point(*spec, p) - expected).norm() < 1e-14);
    }
    SUBCASE("singular input fails loudly") {
        auto sphere = catalog("round_sphere", CatalogParams{1.0, 3});
        CHECK_THROWS_AS(project_point(*sphere, VectorXd::Zero(3)), ProjectionSingularityError);
        auto torus = catalog("clifford_torus");
        VectorXd axis(4);
        axis << 0.0, 0.0, 1.0, 0.0;
        CHECK_THROWS_AS(project_point(*torus, axis), ProjectionSingularityError);
    }
}

TEST_CASE("geodesic fixtures") {
    CircleGrid grid(64);
    SUBCASE("sphere equator") {
        auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
        VectorXd p(3), v(3);
        p << 1.0, 0.0, 0.0;
        v << 0.0, 1.0, 0.0;
        const MatrixXd pts = geodesic_fixture(*spec, grid, p, v);
        for (int j = 0; j < grid.size(); ++j) {
            CHECK(pts(j, 0) == doctest::Approx(std::cos(grid.node(j))));
            CHECK(pts(j, 1) == doctest::Approx(std::sin(grid.node(j))));
            CHECK(pts(j, 2) == 0.0);
        }
        // tension of the fixture vanishes
        CurveField curve(grid, spec, pts);
        const MatrixXd d2 = curve_second_derivative_cols(grid, pts);
        double sup = 0.0;
        for (int j = 0; j < grid.size(); ++j)
            sup = std::max(sup, (curve.projector(j) * d2.row(j).transpose()).norm());
        CHECK(sup < 1e-8);
    }
    SUBCASE("flat space lines do not close") {
        auto spec = catalog("flat_space", CatalogParams{1.0, 3});
        VectorXd p = VectorXd::Zero(3), v = VectorXd::Zero(3);
        v(0) = 1.0;
        CHECK_THROWS_AS(geodesic_fixture(*spec, grid, p, v), ConfigError);
    }
    SUBCASE("torus (1,0)-winding has constant speed") {
        auto spec = catalog("clifford_torus");
        const double r = 1.0 / std::sqrt(2.0);
        VectorXd p(4), v(4);
        p << r, 0.0, r, 0.0;
        v << 0.0, r, 0.0, 0.0;
        const MatrixXd pts = geodesic_fixture(*spec, grid, p, v);
        CurveField curve(grid, spec, pts);
        const Eigen::VectorXd speed = curve.velocity().rowwise().norm();
        CHECK((speed.maxCoeff() - speed.minCoeff()) < 1e-10);
        CHECK(speed(0) == doctest::Approx(r));
    }
    SUBCASE("non-closing speed is rejected") {
        auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
        VectorXd p(3), v(3);
        p << 1.0, 0.0, 0.0;
        v << 0.0, 1.5, 0.0;
        CHECK_THROWS_AS(geodesic_fixture(*spec, grid, p, v), ConfigError);
    }
}

TEST_CASE("sphere chart agrees with the embedding-derived geometry") {
    auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
    REQUIRE(spec->chart.has_value());
    const ChartSpec& chart = *spec->chart;
    RandomStream rng(47);

    for (int trial = 0; trial < 25; ++trial) {
        VectorXd y(2);
        y << 0.4 + 0.55 * (rng.uniform() + 1.0), M_PI * rng.uniform(); // theta in (0.4, 1.5+)
        const VectorXd p = chart.to_ambient(y);
        const MatrixXd X = chart.frame(y);
        const double h = 1e-5;

        // d_k X_l = Gamma^m_{kl} X_m + II(X_k, X_l), checked in both parts
        for (int k = 0; k < 2; ++k) {
            for (int l = 0; l < 2; ++l) {
                VectorXd yp = y, ym = y;
                yp(k) += h;
                ym(k) -= h;
                const VectorXd dXl = (chart.frame(yp).col(l) - chart.frame(ym).col(l)) / (2 * h);
                VectorXd gamma_part = VectorXd::Zero(3);
                for (int m = 0; m < 2; ++m)
                    gamma_part += chart.christoffel(m, k, l, y) * X.col(m);
                const VectorXd ii_part =
                    spec->second_fundamental_form(p, X.col(k), X.col(l));
                CHECK((dXl - gamma_part - ii_part).cwiseAbs().maxCoeff() < 1e-6);
            }
        }

        // chart curvature components against the extrinsic tensor
        for (int m = 0; m < 2; ++m)
            for (int l = 0; l < 2; ++l)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        VectorXd r_chart = VectorXd::Zero(3);
                        for (int mm = 0; mm < 2; ++mm)
                            r_chart += (mm == m ? 1.0 : 0.0) *
                                       chart.curvature_comp(mm, l, i, j, y) * X.col(mm);
                        // ambient R(X_i, X_j) X_l, m-component in the frame
                        const VectorXd r_amb =
                            spec->curvature(p, X.col(i), X.col(j), X.col(l));
                        const MatrixXd gram = X.transpose() * X;
                        const VectorXd comp = gram.ldlt().solve(X.transpose() * r_amb);
                        CHECK(std::abs(comp(m) - chart.curvature_comp(m, l, i, j, y)) < 1e-6);
                        (void)r_chart;
                    }
    }
}

TEST_CASE("christoffel derivative entries match finite differences") {
    auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
    const ChartSpec& chart = *spec->chart;
    RandomStream rng(53);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        VectorXd y(2);
        y << 0.5 + (rng.uniform() + 1.0), M_PI * rng.uniform();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int p = 0; p < 2; ++p) {
                        VectorXd yp = y, ym = y;
                        yp(p) += h;
                        ym(p) -= h;
                        const double fd = (chart.christoffel(i, j, k, yp) -
                                           chart.christoffel(i, j, k, ym)) /
                                          (2 * h);
                        CHECK(std::abs(chart.christoffel_deriv(i, j, k, p, y) - fd) < 1e-5);
                    }
    }
}
