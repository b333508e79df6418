#include "dgf/states.hpp"

#include <cmath>

namespace dgf {

RandomStream::RandomStream(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

std::uint64_t RandomStream::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double RandomStream::uniform() {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53; // [0,1)
    return 2.0 * u - 1.0;
}

Eigen::VectorXd angle_field(const CircleGrid& grid, const std::vector<ModeEntry>& entries) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double s = grid.node(j);
        for (const auto& e : entries) out(j) += e.a * std::cos(e.k * s) + e.b * std::sin(e.k * s);
    }
    return out;
}

Eigen::VectorXcd spinor_scalar_field(const CircleGrid& grid, SpinStructure spin,
                                     const std::vector<ModeEntry>& entries) {
    const double shift = (spin == SpinStructure::Sigma2) ? 0.5 : 0.0;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double s = grid.node(j);
        for (const auto& e : entries)
            out(j) += Complex(e.a, e.b) * std::polar(1.0, (e.k + shift) * s);
    }
    return out;
}

MatrixXd unit_circle_curve(const CircleGrid& grid, int winding, const Eigen::VectorXd& phi) {
    if (phi.size() != grid.size()) throw ShapeError("unit_circle_curve: phi size mismatch");
    MatrixXd pts(grid.size(), 2);
    for (int j = 0; j < grid.size(); ++j) {
        const double theta = winding * grid.node(j) + phi(j);
        pts(j, 0) = std::cos(theta);
        pts(j, 1) = std::sin(theta);
    }
    return pts;
}

std::vector<MatrixXd> smooth_tangent_frame(const CurveField& curve) {
    const int n = curve.n(), q = curve.q(), d = curve.manifold().intrinsic_dim;
    std::vector<MatrixXd> frame(n, MatrixXd(q, d));

    if (d == q) { // flat target: the ambient frame is smooth and tangent
        for (int j = 0; j < n; ++j) frame[j] = MatrixXd::Identity(q, d);
        return frame;
    }

    const MatrixXd vel = curve.velocity();
    for (int j = 0; j < n; ++j) {
        // the spectral velocity is tangent only to truncation accuracy
        const VectorXd tangential = curve.projector(j) * vel.row(j).transpose();
        const double speed = tangential.norm();
        if (speed < 1e-12)
            throw IntegrityError("smooth_tangent_frame: vanishing curve speed at node " +
                                 std::to_string(j));
        frame[j].col(0) = tangential / speed;
    }
    if (d == 1) return frame;
    if (d > 2)
        throw IntegrityError("smooth_tangent_frame: no completion rule for intrinsic "
                             "dimension > 2 on curved targets");

    // d = 2: the unit complement of the velocity in the tangent plane is
    // determined up to sign; build it per node and chain the signs.
    for (int j = 0; j < n; ++j) {
        const MatrixXd P = curve.projector(j);
        VectorXd best = VectorXd::Zero(q);
        double best_norm = 0.0;
        for (int axis = 0; axis < q; ++axis) {
            VectorXd v = P.col(axis);
            v -= frame[j].col(0).dot(v) * frame[j].col(0);
            if (v.norm() > best_norm) {
                best_norm = v.norm();
                best = v;
            }
        }
        if (best_norm < 1e-8)
            throw IntegrityError("smooth_tangent_frame: degenerate tangent complement");
        frame[j].col(1) = best / best_norm;
        if (j > 0 && frame[j].col(1).dot(frame[j - 1].col(1)) < 0.0)
            frame[j].col(1) = -frame[j].col(1);
    }
    if (frame[0].col(1).dot(frame[n - 1].col(1)) < 0.0)
        throw IntegrityError("smooth_tangent_frame: frame does not close over the loop");
    return frame;
}

namespace {

// Band-limited real scalar with modes 0..band, normalized so the expected
// magnitude is O(1) before the amplitude scale.
Eigen::VectorXd random_band_scalar(const CircleGrid& grid, int band, RandomStream& rng) {
    std::vector<ModeEntry> entries;
    for (int k = 0; k <= band; ++k) {
        ModeEntry e;
        e.k = k;
        e.a = rng.uniform();
        e.b = (k == 0) ? 0.0 : rng.uniform();
        entries.push_back(e);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(band + 1));
    return scale * angle_field(grid, entries);
}

} // namespace

MatrixXd random_tangent_perturbation(const CurveField& base, double amplitude, int band,
                                     RandomStream& rng) {
    if (band < 0 || band > base.n() / 4)
        throw DomainError("random_tangent_perturbation: band must lie in [0, n/4]");
    const auto frame = smooth_tangent_frame(base);
    const int n = base.n(), d = base.manifold().intrinsic_dim;

    std::vector<Eigen::VectorXd> scalars;
    for (int c = 0; c < d; ++c) scalars.push_back(random_band_scalar(base.grid(), band, rng));

    MatrixXd pts(n, base.q());
    for (int j = 0; j < n; ++j) {
        VectorXd p = base.points().row(j);
        for (int c = 0; c < d; ++c) p += amplitude * scalars[c](j) * frame[j].col(c);
        pts.row(j) = base.manifold().closest_point(p).transpose();
    }
    return pts;
}

SpinorField random_tangent_spinor(std::shared_ptr<const CurveField> base, SpinStructure spin,
                                  double amplitude, int band_min, int band, RandomStream& rng) {
    if (band < band_min || band > base->n() / 4)
        throw DomainError("random_tangent_spinor: need band_min <= band <= n/4");
    const auto frame = smooth_tangent_frame(*base);
    const int n = base->n(), d = base->manifold().intrinsic_dim;
    const double shift = (spin == SpinStructure::Sigma2) ? 0.5 : 0.0;

    // Frequencies band_min <= |lambda| <= band on the spin-structure set.
    std::vector<double> freqs;
    for (int k = -band - 1; k <= band; ++k) {
        const double lam = k + shift;
        if (std::abs(lam) >= band_min - 0.25 && std::abs(lam) <= band + 0.25) freqs.push_back(lam);
    }
    if (freqs.empty()) throw DomainError("random_tangent_spinor: empty frequency window");

    const double scale = amplitude / std::sqrt(static_cast<double>(freqs.size()));
    MatrixXcd values = MatrixXcd::Zero(n, base->q());
    for (int c = 0; c < d; ++c) {
        Eigen::VectorXcd zeta = Eigen::VectorXcd::Zero(n);
        for (const double lam : freqs) {
            const Complex coeff(rng.uniform(), rng.uniform());
            for (int j = 0; j < n; ++j)
                zeta(j) += coeff * std::polar(1.0, lam * base->grid().node(j));
        }
        for (int j = 0; j < n; ++j)
            values.row(j) += scale * zeta(j) * frame[j].col(c).cast<Complex>().transpose();
    }
    return SpinorField(std::move(base), spin, std::move(values));
}

SpinorField spinor_along_velocity(std::shared_ptr<const CurveField> base, SpinStructure spin,
                                  const Eigen::VectorXcd& chi) {
    if (chi.size() != base->n()) throw ShapeError("spinor_along_velocity: chi size mismatch");
    const MatrixXd vel = base->velocity();
    MatrixXcd values(base->n(), base->q());
    for (int j = 0; j < base->n(); ++j) {
        const double speed = vel.row(j).norm();
        if (speed < 1e-12)
            throw IntegrityError("spinor_along_velocity: vanishing curve speed");
        values.row(j) = chi(j) * (vel.row(j) / speed).cast<Complex>();
    }
    return SpinorField(std::move(base), spin, std::move(values));
}

MatrixXd random_tangent_direction(const CurveField& curve, RandomStream& rng) {
    const auto frame = smooth_tangent_frame(curve);
    const int d = curve.manifold().intrinsic_dim;
    MatrixXd dir(curve.n(), curve.q());
    std::vector<Eigen::VectorXd> scalars;
    for (int c = 0; c < d; ++c)
        scalars.push_back(random_band_scalar(curve.grid(), curve.n() / 8, rng));
    for (int j = 0; j < curve.n(); ++j) {
        VectorXd v = VectorXd::Zero(curve.q());
        for (int c = 0; c < d; ++c) v += scalars[c](j) * frame[j].col(c);
        dir.row(j) = v.transpose();
    }
    return dir;
}

MatrixXcd random_tangent_spinor_direction(const CurveField& curve, RandomStream& rng) {
    MatrixXd re = random_tangent_direction(curve, rng);
    MatrixXd im = random_tangent_direction(curve, rng);
    return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
}

} // namespace dgf
