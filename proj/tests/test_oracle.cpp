#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "dgf/oracle.hpp"
#include "test_support.hpp"

using namespace dgf;
using namespace dgf::test;

namespace {

std::shared_ptr<const CurveField> latitude_circle(const CircleGrid& grid, double z0) {
    auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
    const double rho = std::sqrt(1.0 - z0 * z0);
    MatrixXd pts(grid.size(), 3);
    for (int j = 0; j < grid.size(); ++j)
        pts.row(j) << rho * std::cos(grid.node(j)), rho * std::sin(grid.node(j)), z0;
    return std::make_shared<CurveField>(grid, spec, pts);
}

double relative_gap(const Gradient& a, const Gradient& b) {
    const double diff = std::sqrt(a.quadrature_weight * ((a.curve - b.curve).squaredNorm() +
                                                         (a.spinor - b.spinor).squaredNorm()));
    return diff / std::max(b.l2_norm(), 1e-12);
}

} // namespace

TEST_CASE("finite-difference energy gradient") {
    SUBCASE("flat target: matches the decoupled closed form") {
        CircleGrid grid(32);
        const auto state = random_state("flat_space", grid, SpinStructure::Sigma1, 3, 0.05, 0.05);
        const double eps = 0.8;
        const Gradient fd = fd_energy_gradient(*state.curve, *state.spinor, eps, 1e-5);
        const MatrixXd d2 = curve_second_derivative_cols(grid, state.curve->points());
        CHECK((fd.curve + d2).cwiseAbs().maxCoeff() < 1e-6);
        const MatrixXcd expected = twisted_dirac(*state.spinor).values() -
                                   eps * twisted_laplacian(*state.spinor).values();
        CHECK((fd.spinor - expected).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("sphere random states: matches l2_gradient to relative 1e-6") {
        CircleGrid grid(32);
        for (const auto spin : {SpinStructure::Sigma1, SpinStructure::Sigma2}) {
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                const auto state = random_state("round_sphere", grid, spin, seed);
                const double eps = 0.75;
                const Gradient fd = fd_energy_gradient(*state.curve, *state.spinor, eps, 1e-5);
                const Gradient an = l2_gradient(*state.curve, *state.spinor, eps);
                CHECK(relative_gap(fd, an) < 1e-6);
            }
        }
    }
    SUBCASE("h-refinement shows second-order error") {
        CircleGrid grid(16);
        const auto state = random_state("round_sphere", grid, SpinStructure::Sigma1, 5, 0.2, 0.4);
        const double eps = 1.0;
        // Richardson check against a fine-probe reference (its own truncation
        // is 2500x smaller than the coarsest probe's).
        const Gradient ref = fd_energy_gradient(*state.curve, *state.spinor, eps, 2e-5);
        auto err_at = [&](double h) {
            const Gradient fd = fd_energy_gradient(*state.curve, *state.spinor, eps, h);
            return std::sqrt(ref.quadrature_weight * ((fd.curve - ref.curve).squaredNorm() +
                                                      (fd.spinor - ref.spinor).squaredNorm()));
        };
        const double e1 = err_at(1e-3);
        const double e2 = err_at(2.5e-4);
        const double slope = std::log(e1 / e2) / std::log(4.0);
        CHECK(slope > 1.7);
        CHECK(slope < 2.3);
    }
    SUBCASE("probe size outside [1e-7, 1e-3] is rejected") {
        CircleGrid grid(16);
        const auto state = random_state("round_sphere", grid, SpinStructure::Sigma1, 7);
        CHECK_THROWS_AS(fd_energy_gradient(*state.curve, *state.spinor, 1.0, 1e-2), DomainError);
        CHECK_THROWS_AS(fd_energy_gradient(*state.curve, *state.spinor, 1.0, 1e-8), DomainError);
    }
}

TEST_CASE("chart curvature term") {
    CircleGrid grid(64);
    SUBCASE("45-degree latitude with a random tangent spinor") {
        auto curve = latitude_circle(grid, std::sqrt(0.5));
        RandomStream rng(11);
        const SpinorField psi =
            random_tangent_spinor(curve, SpinStructure::Sigma1, 0.5, 0, 4, rng);
        const MatrixXd chart = chart_curvature_term(*curve, psi);
        const MatrixXd extrinsic = curvature_term_R(*curve, psi);
        CHECK((chart - extrinsic).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("zero spinor gives zero") {
        auto curve = latitude_circle(grid, 0.3);
        const SpinorField psi = SpinorField::zero(curve, SpinStructure::Sigma1);
        CHECK(chart_curvature_term(*curve, psi).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("equator is inside the chart band") {
        auto curve = equator(grid);
        RandomStream rng(13);
        const SpinorField psi =
            random_tangent_spinor(curve, SpinStructure::Sigma2, 0.5, 0, 4, rng);
        const MatrixXd chart = chart_curvature_term(*curve, psi);
        const MatrixXd extrinsic = curvature_term_R(*curve, psi);
        CHECK((chart - extrinsic).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("curves through the polar caps are rejected") {
        auto spec = catalog("round_sphere", CatalogParams{1.0, 3});
        MatrixXd pts(grid.size(), 3);
        for (int j = 0; j < grid.size(); ++j)
            pts.row(j) << std::cos(grid.node(j)), 0.0, std::sin(grid.node(j));
        auto meridian = std::make_shared<CurveField>(grid, spec, pts);
        const SpinorField psi = SpinorField::zero(meridian, SpinStructure::Sigma1);
        CHECK_THROWS_AS(chart_curvature_term(*meridian, psi), ChartDomainError);
    }
}

TEST_CASE("chart laplacian") {
    SUBCASE("constant chart components on a latitude: only Christoffel terms survive") {
        // For gamma = (theta0, s) and psi^i constant, the five-term expansion
        // collapses to Gamma^k_{i phi} Gamma^r_{k phi} psi^i = -cos^2(theta0) psi^r.
        CircleGrid grid(64);
        const double z0 = 0.4;
        auto curve = latitude_circle(grid, z0);
        const ChartFrame frame = chart_frame(*curve);
        const Complex c_theta(0.3, -0.1), c_phi(0.2, 0.4);
        MatrixXcd values(grid.size(), 3);
        for (int j = 0; j < grid.size(); ++j) {
            const MatrixXd X = frame.frames[j];
            values.row(j) = (c_theta * X.col(0).cast<Complex>() +
                             c_phi * X.col(1).cast<Complex>())
                                .transpose();
        }
        SpinorField psi(curve, SpinStructure::Sigma1, values);
        const MatrixXcd lap_chart = chart_laplacian(psi);
        const double cos2 = z0 * z0; // cos(theta0) = z0 on the unit sphere
        CHECK((lap_chart + cos2 * values).cwiseAbs().maxCoeff() < 1e-8);
        const MatrixXcd lap_extrinsic = twisted_laplacian(psi).values();
        CHECK((lap_chart - lap_extrinsic).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("flat chart reduces to the plain second derivative") {
        CircleGrid grid(32);
        auto curve = flat_loop(grid, 3);
        RandomStream rng(17);
        const SpinorField psi =
            random_tangent_spinor(curve, SpinStructure::Sigma2, 0.5, 0, 4, rng);
        const MatrixXcd lap = chart_laplacian(psi);
        const MatrixXcd d2 = spinor_derivative_cols(
            grid, spinor_derivative_cols(grid, psi.values(), psi.spin()), psi.spin());
        CHECK((lap - d2).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("random band-limited data at n = 128") {
        CircleGrid grid(128);
        RandomStream rng(19);
        auto base = latitude_circle(grid, 0.2);
        MatrixXd pts = random_tangent_perturbation(*base, 0.03, 6, rng);
        auto curve = std::make_shared<CurveField>(grid, base->manifold_ptr(), pts);
        for (const auto spin : {SpinStructure::Sigma1, SpinStructure::Sigma2}) {
            const SpinorField psi = random_tangent_spinor(curve, spin, 0.5, 0, 6, rng);
            const MatrixXcd lap_chart = chart_laplacian(psi);
            const MatrixXcd lap_extrinsic = twisted_laplacian(psi).values();
            CHECK((lap_chart - lap_extrinsic).cwiseAbs().maxCoeff() < 1e-5);
        }
    }
    SUBCASE("manifolds without charts are rejected") {
        CircleGrid grid(16);
        auto curve = torus_loop(grid);
        const SpinorField psi = SpinorField::zero(curve, SpinStructure::Sigma1);
        CHECK_THROWS_AS(chart_laplacian(psi), ConfigError);
    }
}

TEST_CASE("dense operator matrices") {
    SUBCASE("flat sigma1 Dirac spectrum is the integers, multiplicity 2q") {
        CircleGrid grid(16);
        auto curve = flat_loop(grid, 2);
        const DenseOperatorReport rep =
            dense_operator_matrix(SpinorOperator::Dirac, *curve, 1.0, SpinStructure::Sigma1);
        CHECK(rep.symmetry_defect < 1e-8);
        std::vector<double> expected;
        for (int j = 0; j < 16; ++j)
            for (int copy = 0; copy < 4; ++copy) // q = 2 components, re/im
                expected.push_back(-grid.frequency(j, SpinStructure::Sigma1));
        std::sort(expected.begin(), expected.end());
        REQUIRE(rep.eigenvalues.size() == static_cast<int>(expected.size()));
        for (int i = 0; i < rep.eigenvalues.size(); ++i)
            CHECK(std::abs(rep.eigenvalues(i) - expected[i]) < 1e-8);
        // kernel is exactly the constants: 2q zero eigenvalues
        int zeros = 0;
        for (int i = 0; i < rep.eigenvalues.size(); ++i)
            if (std::abs(rep.eigenvalues(i)) < 1e-8) ++zeros;
        CHECK(zeros == 4);
    }
    SUBCASE("flat sigma2 Dirac spectrum is the half-integers, no kernel") {
        CircleGrid grid(16);
        auto curve = flat_loop(grid, 2);
        const DenseOperatorReport rep =
            dense_operator_matrix(SpinorOperator::Dirac, *curve, 1.0, SpinStructure::Sigma2);
        CHECK(rep.symmetry_defect < 1e-8);
        double min_abs = 1e9;
        for (int i = 0; i < rep.eigenvalues.size(); ++i) {
            const double lam = rep.eigenvalues(i);
            CHECK(std::abs(lam - std::round(lam - 0.5) - 0.5) < 1e-8); // in Z + 1/2
            min_abs = std::min(min_abs, std::abs(lam));
        }
        CHECK(min_abs > 0.4);
    }
    SUBCASE("laplacian is negative semidefinite and D^2 = -Lap in spectrum") {
        CircleGrid grid(24);
        const auto state = random_state("round_sphere", grid, SpinStructure::Sigma1, 23, 0.1,
                                        0.1);
        const DenseOperatorReport d =
            dense_operator_matrix(SpinorOperator::Dirac, *state.curve, 1.0,
                                  SpinStructure::Sigma1);
        const DenseOperatorReport lap =
            dense_operator_matrix(SpinorOperator::Laplacian, *state.curve, 1.0,
                                  SpinStructure::Sigma1);
        CHECK(lap.symmetry_defect < 1e-8);
        CHECK(lap.eigenvalues.maxCoeff() < 1e-8);
        std::vector<double> squares(d.eigenvalues.size());
        for (int i = 0; i < d.eigenvalues.size(); ++i)
            squares[i] = d.eigenvalues(i) * d.eigenvalues(i);
        std::sort(squares.begin(), squares.end());
        Eigen::VectorXd neg = -lap.eigenvalues;
        std::sort(neg.data(), neg.data() + neg.size());
        for (int i = 0; i < neg.size(); ++i) CHECK(std::abs(neg(i) - squares[i]) < 1e-6);
    }
    SUBCASE("eps = 1 kernel equality on random sphere curves") {
        CircleGrid grid(24);
        for (std::uint64_t seed : {29ULL, 31ULL}) {
            const auto state = random_state("round_sphere", grid, SpinStructure::Sigma1, seed,
                                            0.15, 0.1);
            const DenseOperatorReport d = dense_operator_matrix(
                SpinorOperator::Dirac, *state.curve, 1.0, SpinStructure::Sigma1);
            // -1/eps = -1 is not an eigenvalue of D on a generic curve
            double dist_to_minus_one = 1e9;
            int ker_d = 0;
            for (int i = 0; i < d.eigenvalues.size(); ++i) {
                dist_to_minus_one = std::min(dist_to_minus_one,
                                             std::abs(d.eigenvalues(i) + 1.0));
                if (std::abs(d.eigenvalues(i)) < 1e-8) ++ker_d;
            }
            CHECK(dist_to_minus_one > 1e-4);
            const DenseOperatorReport l = dense_operator_matrix(
                SpinorOperator::EpsLaplacianMinusDirac, *state.curve, 1.0,
                SpinStructure::Sigma1);
            int ker_l = 0;
            for (int i = 0; i < l.eigenvalues.size(); ++i)
                if (std::abs(l.eigenvalues(i)) < 1e-8) ++ker_l;
            CHECK(ker_d == ker_l);
        }
    }
    SUBCASE("on the equator -1 is an eigenvalue and the kernels differ") {
        // the degenerate case of the critical-point equivalence: eps = -1/lambda
        CircleGrid grid(24);
        auto curve = equator(grid);
        const DenseOperatorReport d =
            dense_operator_matrix(SpinorOperator::Dirac, *curve, 1.0, SpinStructure::Sigma1);
        double dist_to_minus_one = 1e9;
        int ker_d = 0;
        for (int i = 0; i < d.eigenvalues.size(); ++i) {
            dist_to_minus_one = std::min(dist_to_minus_one, std::abs(d.eigenvalues(i) + 1.0));
            if (std::abs(d.eigenvalues(i)) < 1e-8) ++ker_d;
        }
        CHECK(dist_to_minus_one < 1e-8);
        const DenseOperatorReport l = dense_operator_matrix(
            SpinorOperator::EpsLaplacianMinusDirac, *curve, 1.0, SpinStructure::Sigma1);
        int ker_l = 0;
        for (int i = 0; i < l.eigenvalues.size(); ++i)
            if (std::abs(l.eigenvalues(i)) < 1e-8) ++ker_l;
        CHECK(ker_l > ker_d);
    }
    SUBCASE("oversized problems are rejected") {
        CircleGrid grid(1024);
        auto curve = equator(grid);
        CHECK_THROWS_AS(dense_operator_matrix(SpinorOperator::Dirac, *curve, 1.0,
                                              SpinStructure::Sigma1),
                        ResourceError);
    }
}

TEST_CASE("chart frame bookkeeping") {
    CircleGrid grid(32);
    auto curve = latitude_circle(grid, 0.5);
    const ChartFrame frame = chart_frame(*curve);
    SUBCASE("windings: theta closed, phi winds once") {
        CHECK(frame.windings[0] == 0);
        CHECK(frame.windings[1] == 1);
    }
    SUBCASE("frame condition number stays moderate") {
        for (int j = 0; j < grid.size(); ++j) CHECK(frame.condition(j) < 1e6);
    }
    SUBCASE("decompose inverts the frame") {
        RandomStream rng(37);
        for (int j = 0; j < grid.size(); j += 5) {
            VectorXd comp(2);
            comp << rng.uniform(), rng.uniform();
            const VectorXd ambient = frame.frames[j] * comp;
            CHECK((frame.decompose(j, ambient) - comp).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}
