#ifndef DGF_CIRCLE_SPECTRAL_HPP
#define DGF_CIRCLE_SPECTRAL_HPP

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dgf/errors.hpp"

namespace dgf {

using Complex = std::complex<double>;

/// The two spin structures on the circle. Sigma1 fields are periodic,
/// Sigma2 fields are antiperiodic: f(s + 2*pi) = -f(s).
enum class SpinStructure { Sigma1, Sigma2 };

const char* to_string(SpinStructure spin);

/// Uniform collocation grid s_j = 2*pi*j/n on [0, 2*pi). n must be even
/// and at least 4.
class CircleGrid {
public:
    explicit CircleGrid(int n);

    int size() const { return n_; }
    double node(int j) const;
    Eigen::VectorXd nodes() const;

    /// Weight of the uniform trapezoidal rule, 2*pi/n.
    double quadrature_weight() const;

    /// Integer base frequency of coefficient slot j: j for j < n/2, j - n
    /// otherwise, so the set is {-n/2, ..., n/2 - 1}.
    int base_frequency(int j) const;

    /// Physical frequency of slot j: base for Sigma1, base + 1/2 for Sigma2.
    double frequency(int j, SpinStructure spin) const;

    bool operator==(const CircleGrid& other) const { return n_ == other.n_; }

private:
    int n_;
};

/// Complex amplitudes b_k on the spin-structure frequency set.
struct ModeVector {
    SpinStructure spin = SpinStructure::Sigma1;
    Eigen::VectorXcd coeffs; // slot j carries frequency grid.frequency(j, spin)

    int size() const { return static_cast<int>(coeffs.size()); }
};

// ------------------------------------------------------------------ scalar ops

/// Discrete Fourier coefficients of nodal values on the spin-structure
/// frequency set. Sigma2 is reduced to the periodic transform by the gauge
/// factor e^{-is/2}.
ModeVector forward_transform(const CircleGrid& grid, const Eigen::VectorXcd& values,
                             SpinStructure spin);

/// Nodal values of a mode vector.
Eigen::VectorXcd inverse_transform(const CircleGrid& grid, const ModeVector& modes);

/// Spectral d/ds: multiplication by i*lambda_k in mode space. For Sigma1 the
/// unpaired Nyquist mode is zeroed so real input maps to real output.
Eigen::VectorXcd differentiate(const CircleGrid& grid, const Eigen::VectorXcd& values,
                               SpinStructure spin);

/// Untwisted Dirac operator i d/ds; acts on the mode e^{i lambda s} as
/// multiplication by -lambda, on the full frequency set.
Eigen::VectorXcd untwisted_dirac(const CircleGrid& grid, const Eigen::VectorXcd& values,
                                 SpinStructure spin);

/// Dirac eigenvalues lambda_k for indices k in [k_lo, k_hi]: k for Sigma1,
/// k + 1/2 for Sigma2.
std::vector<double> dirac_eigenvalues(SpinStructure spin, int k_lo, int k_hi);

/// Exact heat semigroup: each coefficient multiplied by e^{-k^2 t}.
/// Sigma1 modes only.
ModeVector heat_exact(const ModeVector& initial, double t);

/// Exact semigroup of d/dt psi = eps d^2/ds^2 psi - i d/ds psi: each
/// coefficient multiplied by e^{(lambda - eps lambda^2) t}.
ModeVector flat_spinor_exact(const ModeVector& initial, double eps, double t);

/// (1/2pi) * integral of psi0(y) chi(s - y, t) dy against the fundamental
/// solution of the flat spinor equation, evaluated spectrally.
Eigen::VectorXcd convolve_initial(const CircleGrid& grid, const Eigen::VectorXcd& psi0,
                                  SpinStructure spin_psi, SpinStructure spin_fundamental,
                                  double eps, double t);

// ------------------------------------------------------------ columnwise ops
// Bulk variants used by the field calculus and the flow; each column of the
// matrix is one scalar field over the grid.

/// d/ds per column with the untruncated multiplier i*lambda (all modes active,
/// including the Sigma1 Nyquist slot). This is the derivative entering the
/// twisted Dirac operator, whose kernel must be exactly the constants.
Eigen::MatrixXcd spinor_derivative_cols(const CircleGrid& grid, const Eigen::MatrixXcd& fields,
                                        SpinStructure spin);

/// d/ds per column with the Sigma1 Nyquist mode zeroed (real-safe).
Eigen::MatrixXd curve_derivative_cols(const CircleGrid& grid, const Eigen::MatrixXd& fields);

/// d^2/ds^2 per column (multiplier -lambda^2, all modes).
Eigen::MatrixXd curve_second_derivative_cols(const CircleGrid& grid, const Eigen::MatrixXd& fields);

/// Per-column mode-space filter: F^{-1} diag(filter(lambda)) F.
Eigen::MatrixXcd apply_mode_filter_cols(const CircleGrid& grid, const Eigen::MatrixXcd& fields,
                                        SpinStructure spin,
                                        const std::function<Complex(double)>& filter);

/// One exponential-integrator update per column:
///   F^{-1} [ e^{m(lambda) dt} F y  +  dt phi1(m(lambda) dt) F forcing ]
/// with phi1(z) = (e^z - 1)/z. The symbol m is the constant-coefficient part
/// integrated exactly; the forcing is everything else, held over the step.
Eigen::MatrixXcd exponential_step_cols(const CircleGrid& grid, const Eigen::MatrixXcd& state,
                                       const Eigen::MatrixXcd& forcing, SpinStructure spin,
                                       const std::function<double(double)>& symbol, double dt);

/// phi1(z) = (e^z - 1)/z, stable near z = 0.
double phi1(double z);

/// L2 pairing Re integral of conj(f) g by the trapezoidal rule.
double l2_inner(const CircleGrid& grid, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

} // namespace dgf

#endif
