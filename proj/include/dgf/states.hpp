#ifndef DGF_STATES_HPP
#define DGF_STATES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "dgf/twisted_spinor.hpp"

namespace dgf {
// Initial-data builders: named fixtures, explicit mode lists, and seeded
// band-limited random perturbations.

/// Deterministic uniform doubles in [-1, 1] from a fixed-width generator,
/// identical across platforms.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);
    double uniform();

private:
    std::uint64_t next();
    std::uint64_t state_;
};

/// One trigonometric entry: the real field a cos(k s) + b sin(k s), or for
/// spinor fields the complex mode (a + i b) e^{i lambda s}.
struct ModeEntry {
    int k = 0;
    double a = 0.0;
    double b = 0.0;
};

/// Real periodic scalar field from mode entries.
Eigen::VectorXd angle_field(const CircleGrid& grid, const std::vector<ModeEntry>& entries);

/// Complex sigma-structured scalar field: sum of (a + i b) e^{i lambda s}
/// with lambda = k (sigma1) or k + 1/2 (sigma2).
Eigen::VectorXcd spinor_scalar_field(const CircleGrid& grid, SpinStructure spin,
                                     const std::vector<ModeEntry>& entries);

/// Closed curve on the unit circle with the given winding and angle offset
/// field: u(s) = (cos(w s + phi(s)), sin(w s + phi(s))).
MatrixXd unit_circle_curve(const CircleGrid& grid, int winding, const Eigen::VectorXd& phi);

/// Smooth orthonormal tangent frame along a curve: the first column is the
/// normalized velocity, the rest completed from fixed ambient directions.
/// Requires nowhere-vanishing speed.
std::vector<MatrixXd> smooth_tangent_frame(const CurveField& curve);

/// Perturbs each node along the smooth tangent frame by band-limited random
/// scalars with modes 0..band and amplitude scale, then projects back to N.
MatrixXd random_tangent_perturbation(const CurveField& base, double amplitude, int band,
                                     RandomStream& rng);

/// Random tangent spinor built on the smooth frame with complex coefficients
/// on frame frequencies band_min <= |lambda| <= band.
SpinorField random_tangent_spinor(std::shared_ptr<const CurveField> base, SpinStructure spin,
                                  double amplitude, int band_min, int band,
                                  RandomStream& rng);

/// Tangent spinor chi(s) times the normalized velocity.
SpinorField spinor_along_velocity(std::shared_ptr<const CurveField> base, SpinStructure spin,
                                  const Eigen::VectorXcd& chi);

/// Random tangent direction fields for directional derivative tests.
MatrixXd random_tangent_direction(const CurveField& curve, RandomStream& rng);
MatrixXcd random_tangent_spinor_direction(const CurveField& curve, RandomStream& rng);

} // namespace dgf

#endif
