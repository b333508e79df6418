#include "dgf/circle_spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace dgf {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Dense transform kernels per grid size, built once and shared. All entries
// are immutable after construction.
struct SpectralKernel {
    int n;
    Eigen::MatrixXcd fwd;     // modes = fwd * values (integer frequencies)
    Eigen::MatrixXcd inv;     // values = inv * modes
    Eigen::VectorXcd gauge_minus; // e^{-i s_j / 2}
    Eigen::VectorXcd gauge_plus;  // e^{+i s_j / 2}

    explicit SpectralKernel(int n_) : n(n_), fwd(n_, n_), inv(n_, n_),
                                      gauge_minus(n_), gauge_plus(n_) {
        for (int j = 0; j < n; ++j) {
            const double s = kTwoPi * j / n;
            gauge_minus(j) = std::polar(1.0, -0.5 * s);
            gauge_plus(j) = std::polar(1.0, 0.5 * s);
        }
        for (int r = 0; r < n; ++r) {
            const int k = (r < n / 2) ? r : r - n;
            for (int j = 0; j < n; ++j) {
                const double s = kTwoPi * j / n;
                fwd(r, j) = std::polar(1.0 / n, -k * s);
                inv(j, r) = std::polar(1.0, k * s);
            }
        }
    }
};

const SpectralKernel& kernel(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<SpectralKernel>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<SpectralKernel>(n)).first;
    return *it->second;
}

void check_length(const CircleGrid& grid, Eigen::Index len, const char* op) {
    if (len != grid.size())
        throw ShapeError(std::string(op) + ": expected " + std::to_string(grid.size()) +
                         " nodal values, got " + std::to_string(len));
}

Eigen::MatrixXcd forward_cols(const CircleGrid& grid, const Eigen::MatrixXcd& fields,
                              SpinStructure spin) {
    const SpectralKernel& k = kernel(grid.size());
    if (spin == SpinStructure::Sigma1) return k.fwd * fields;
    return k.fwd * (k.gauge_minus.asDiagonal() * fields);
}

Eigen::MatrixXcd inverse_cols(const CircleGrid& grid, const Eigen::MatrixXcd& modes,
                              SpinStructure spin) {
    const SpectralKernel& k = kernel(grid.size());
    if (spin == SpinStructure::Sigma1) return k.inv * modes;
    return k.gauge_plus.asDiagonal() * (k.inv * modes);
}

} // namespace

const char* to_string(SpinStructure spin) {
    return spin == SpinStructure::Sigma1 ? "sigma1" : "sigma2";
}

CircleGrid::CircleGrid(int n) : n_(n) {
    if (n < 4 || n % 2 != 0)
        throw DomainError("CircleGrid: node count must be even and >= 4, got " +
                          std::to_string(n));
}

double CircleGrid::node(int j) const { return kTwoPi * j / n_; }

Eigen::VectorXd CircleGrid::nodes() const {
    Eigen::VectorXd s(n_);
    for (int j = 0; j < n_; ++j) s(j) = node(j);
    return s;
}

double CircleGrid::quadrature_weight() const { return kTwoPi / n_; }

int CircleGrid::base_frequency(int j) const { return (j < n_ / 2) ? j : j - n_; }

double CircleGrid::frequency(int j, SpinStructure spin) const {
    return base_frequency(j) + (spin == SpinStructure::Sigma2 ? 0.5 : 0.0);
}

ModeVector forward_transform(const CircleGrid& grid, const Eigen::VectorXcd& values,
                             SpinStructure spin) {
    check_length(grid, values.size(), "forward_transform");
    ModeVector out;
    out.spin = spin;
    out.coeffs = forward_cols(grid, values, spin);
    return out;
}

Eigen::VectorXcd inverse_transform(const CircleGrid& grid, const ModeVector& modes) {
    check_length(grid, modes.coeffs.size(), "inverse_transform");
    return inverse_cols(grid, modes.coeffs, modes.spin);
}

Eigen::VectorXcd differentiate(const CircleGrid& grid, const Eigen::VectorXcd& values,
                               SpinStructure spin) {
    check_length(grid, values.size(), "differentiate");
    const int n = grid.size();
    ModeVector m = forward_transform(grid, values, spin);
    for (int j = 0; j < n; ++j) {
        if (spin == SpinStructure::Sigma1 && grid.base_frequency(j) == -n / 2) {
            m.coeffs(j) = 0.0; // unpaired Nyquist slot
        } else {
            m.coeffs(j) *= Complex(0.0, grid.frequency(j, spin));
        }
    }
    return inverse_transform(grid, m);
}

Eigen::VectorXcd untwisted_dirac(const CircleGrid& grid, const Eigen::VectorXcd& values,
                                 SpinStructure spin) {
    check_length(grid, values.size(), "untwisted_dirac");
    ModeVector m = forward_transform(grid, values, spin);
    for (int j = 0; j < m.size(); ++j) m.coeffs(j) *= -grid.frequency(j, spin);
    return inverse_transform(grid, m);
}

std::vector<double> dirac_eigenvalues(SpinStructure spin, int k_lo, int k_hi) {
    if (k_hi < k_lo) throw DomainError("dirac_eigenvalues: empty index range");
    std::vector<double> out;
    out.reserve(k_hi - k_lo + 1);
    const double shift = (spin == SpinStructure::Sigma2) ? 0.5 : 0.0;
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(k + shift);
    return out;
}

ModeVector heat_exact(const ModeVector& initial, double t) {
    if (initial.spin != SpinStructure::Sigma1)
        throw DomainError("heat_exact: defined for sigma1 modes");
    if (t < 0.0) throw DomainError("heat_exact: t must be nonnegative");
    const int n = initial.size();
    CircleGrid grid(n);
    ModeVector out = initial;
    for (int j = 0; j < n; ++j) {
        const double k = grid.frequency(j, initial.spin);
        out.coeffs(j) *= std::exp(-k * k * t);
    }
    return out;
}

ModeVector flat_spinor_exact(const ModeVector& initial, double eps, double t) {
    if (eps <= 0.0) throw DomainError("flat_spinor_exact: eps must be positive");
    if (t < 0.0) throw DomainError("flat_spinor_exact: t must be nonnegative");
    const int n = initial.size();
    CircleGrid grid(n);
    ModeVector out = initial;
    for (int j = 0; j < n; ++j) {
        const double lam = grid.frequency(j, initial.spin);
        out.coeffs(j) *= std::exp((lam - eps * lam * lam) * t);
    }
    return out;
}

Eigen::VectorXcd convolve_initial(const CircleGrid& grid, const Eigen::VectorXcd& psi0,
                                  SpinStructure spin_psi, SpinStructure spin_fundamental,
                                  double eps, double t) {
    if (spin_psi != spin_fundamental)
        throw ConfigError("convolve_initial: spin structures of the data and the "
                          "fundamental solution must agree");
    check_length(grid, psi0.size(), "convolve_initial");
    ModeVector m = forward_transform(grid, psi0, spin_psi);
    return inverse_transform(grid, flat_spinor_exact(m, eps, t));
}

Eigen::MatrixXcd spinor_derivative_cols(const CircleGrid& grid, const Eigen::MatrixXcd& fields,
                                        SpinStructure spin) {
    check_length(grid, fields.rows(), "spinor_derivative_cols");
    return apply_mode_filter_cols(grid, fields, spin,
                                  [](double lam) { return Complex(0.0, lam); });
}

Eigen::MatrixXd curve_derivative_cols(const CircleGrid& grid, const Eigen::MatrixXd& fields) {
    check_length(grid, fields.rows(), "curve_derivative_cols");
    const int n = grid.size();
    Eigen::MatrixXcd out = apply_mode_filter_cols(
        grid, fields.cast<Complex>(), SpinStructure::Sigma1, [n](double lam) {
            if (lam == -n / 2) return Complex(0.0, 0.0);
            return Complex(0.0, lam);
        });
    return out.real();
}

Eigen::MatrixXd curve_second_derivative_cols(const CircleGrid& grid,
                                             const Eigen::MatrixXd& fields) {
    check_length(grid, fields.rows(), "curve_second_derivative_cols");
    Eigen::MatrixXcd out = apply_mode_filter_cols(
        grid, fields.cast<Complex>(), SpinStructure::Sigma1,
        [](double lam) { return Complex(-lam * lam, 0.0); });
    return out.real();
}

Eigen::MatrixXcd apply_mode_filter_cols(const CircleGrid& grid, const Eigen::MatrixXcd& fields,
                                        SpinStructure spin,
                                        const std::function<Complex(double)>& filter) {
    check_length(grid, fields.rows(), "apply_mode_filter_cols");
    Eigen::MatrixXcd modes = forward_cols(grid, fields, spin);
    for (int j = 0; j < grid.size(); ++j)
        modes.row(j) *= filter(grid.frequency(j, spin));
    return inverse_cols(grid, modes, spin);
}

double phi1(double z) {
    if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

Eigen::MatrixXcd exponential_step_cols(const CircleGrid& grid, const Eigen::MatrixXcd& state,
                                       const Eigen::MatrixXcd& forcing, SpinStructure spin,
                                       const std::function<double(double)>& symbol, double dt) {
    check_length(grid, state.rows(), "exponential_step_cols");
    check_length(grid, forcing.rows(), "exponential_step_cols");
    Eigen::MatrixXcd y = forward_cols(grid, state, spin);
    Eigen::MatrixXcd f = forward_cols(grid, forcing, spin);
    for (int j = 0; j < grid.size(); ++j) {
        const double m = symbol(grid.frequency(j, spin));
        y.row(j) = std::exp(m * dt) * y.row(j) + dt * phi1(m * dt) * f.row(j);
    }
    return inverse_cols(grid, y, spin);
}

double l2_inner(const CircleGrid& grid, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
    check_length(grid, f.size(), "l2_inner");
    check_length(grid, g.size(), "l2_inner");
    return grid.quadrature_weight() * f.dot(g).real();
}

} // namespace dgf
