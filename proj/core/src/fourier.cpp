#include "vortex/fourier.hpp"

#include <algorithm>
#include <cmath>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

int max_abs_mode_of(const std::vector<Band>& bands) {
    int m = 0;
    for (const Band& b : bands) {
        if (b.lo > b.hi) throw ValidationError("band with lo > hi");
        m = std::max({m, std::abs(b.lo), std::abs(b.hi)});
    }
    return m;
}

void check_grid(const std::vector<Band>& bands, int grid_size) {
    if (bands.empty()) throw ValidationError("loop needs at least one coordinate");
    if (!is_power_of_two(grid_size)) throw ValidationError("grid size must be a power of two");
    if (grid_size <= 2 * max_abs_mode_of(bands)) {
        throw ValidationError("grid size violates the Nyquist margin T > 2 max|m|");
    }
}

// e^{2 pi i m p / T} lookup-free evaluation
inline std::complex<double> unit_root(int m, int p, int T) {
    const double a = kTwoPi * static_cast<double>((m % T + T) % T) * static_cast<double>(p) / static_cast<double>(T);
    return {std::cos(a), std::sin(a)};
}

} // namespace

FourierLoop FourierLoop::zero(std::vector<Band> bands, int grid_size) {
    check_grid(bands, grid_size);
    FourierLoop z;
    z.bands_ = std::move(bands);
    z.grid_size_ = grid_size;
    z.coeffs_.resize(z.bands_.size());
    for (std::size_t j = 0; j < z.bands_.size(); ++j) {
        z.coeffs_[j] = Eigen::VectorXcd::Zero(z.bands_[j].size());
    }
    return z;
}

std::complex<double> FourierLoop::coeff(int j, int m) const {
    const Band& b = bands_[static_cast<std::size_t>(j)];
    if (!b.contains(m)) return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(j)](m - b.lo);
}

void FourierLoop::set_coeff(int j, int m, std::complex<double> v) {
    const Band& b = bands_[static_cast<std::size_t>(j)];
    if (!b.contains(m)) throw ValidationError("set_coeff outside the band");
    coeffs_[static_cast<std::size_t>(j)](m - b.lo) = v;
}

Eigen::MatrixXcd FourierLoop::samples() const {
    const int T = grid_size_;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n(), T);
    for (int j = 0; j < n(); ++j) {
        const Band& b = band(j);
        const Eigen::VectorXcd& c = coeffs(j);
        for (int p = 0; p < T; ++p) {
            std::complex<double> acc(0.0, 0.0);
            for (int m = b.lo; m <= b.hi; ++m) acc += c(m - b.lo) * unit_root(m, p, T);
            s(j, p) = acc;
        }
    }
    return s;
}

FourierLoop FourierLoop::from_samples(const Eigen::MatrixXcd& samples, std::vector<Band> bands) {
    const int T = static_cast<int>(samples.cols());
    check_grid(bands, T);
    if (samples.rows() != static_cast<Eigen::Index>(bands.size())) {
        throw DimensionMismatch("from_samples: rows must match the number of bands");
    }
    FourierLoop z = zero(std::move(bands), T);
    for (int j = 0; j < z.n(); ++j) {
        const Band& b = z.band(j);
        for (int m = b.lo; m <= b.hi; ++m) {
            std::complex<double> acc(0.0, 0.0);
            for (int p = 0; p < T; ++p) acc += samples(j, p) * std::conj(unit_root(m, p, T));
            z.coeffs(j)(m - b.lo) = acc / static_cast<double>(T);
        }
    }
    return z;
}

FourierLoop FourierLoop::derivative() const {
    FourierLoop d = *this;
    for (int j = 0; j < n(); ++j) {
        const Band& b = band(j);
        for (int m = b.lo; m <= b.hi; ++m) {
            d.coeffs(j)(m - b.lo) *= std::complex<double>(0.0, kTwoPi * m);
        }
    }
    return d;
}

double FourierLoop::norm_l2_sq() const {
    double s = 0.0;
    for (int j = 0; j < n(); ++j) s += coeffs(j).squaredNorm();
    return s;
}

int FourierLoop::max_abs_mode() const { return max_abs_mode_of(bands_); }

int FourierLoop::coeff_count() const {
    int c = 0;
    for (const Band& b : bands_) c += b.size();
    return c;
}

int choose_grid_size(const std::vector<Band>& bands, int minimum) {
    // quartic expressions in z have modes up to 4 max|m|; the +1 keeps a
    // strict margin so analysis of such products on the grid stays exact
    const int need = 4 * max_abs_mode_of(bands) + 1;
    int T = minimum;
    while (T <= need) T *= 2;
    return T;
}

Eigen::VectorXd loop_mean(const Eigen::MatrixXd& samples) {
    return samples.rowwise().mean();
}

namespace {

// DFT of one real row: coefficients for modes m = 0..T/2 (the rest are
// conjugates); the loop helpers below only need this half-spectrum.
std::vector<std::complex<double>> half_spectrum(const Eigen::VectorXd& row) {
    const int T = static_cast<int>(row.size());
    std::vector<std::complex<double>> c(static_cast<std::size_t>(T / 2 + 1));
    for (int m = 0; m <= T / 2; ++m) {
        std::complex<double> acc(0.0, 0.0);
        for (int p = 0; p < T; ++p) acc += row(p) * std::conj(unit_root(m, p, T));
        c[static_cast<std::size_t>(m)] = acc / static_cast<double>(T);
    }
    return c;
}

Eigen::VectorXd synth_half_spectrum(const std::vector<std::complex<double>>& c, int T) {
    Eigen::VectorXd out(T);
    for (int p = 0; p < T; ++p) {
        double acc = c[0].real();
        for (int m = 1; m < T / 2; ++m) {
            acc += 2.0 * (c[static_cast<std::size_t>(m)] * unit_root(m, p, T)).real();
        }
        // Nyquist mode (m = T/2): real cosine component
        acc += (c[static_cast<std::size_t>(T / 2)] * unit_root(T / 2, p, T)).real();
        out(p) = acc;
    }
    return out;
}

} // namespace

Eigen::MatrixXd loop_derivative(const Eigen::MatrixXd& samples) {
    const int T = static_cast<int>(samples.cols());
    Eigen::MatrixXd out(samples.rows(), T);
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        auto c = half_spectrum(samples.row(r));
        for (int m = 0; m <= T / 2; ++m) {
            // the Nyquist derivative is not representable on the grid;
            // band-limited inputs never populate it
            const double f = (m == T / 2) ? 0.0 : kTwoPi * m;
            c[static_cast<std::size_t>(m)] *= std::complex<double>(0.0, f);
        }
        out.row(r) = synth_half_spectrum(c, T);
    }
    return out;
}

Eigen::MatrixXd loop_antiderivative(const Eigen::MatrixXd& samples, double mean_tol) {
    const int T = static_cast<int>(samples.cols());
    Eigen::MatrixXd out(samples.rows(), T);
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        auto c = half_spectrum(samples.row(r));
        if (std::abs(c[0]) > mean_tol) {
            throw NonMeanZeroData("loop_antiderivative: input must be mean-zero");
        }
        c[0] = 0.0;
        for (int m = 1; m <= T / 2; ++m) {
            c[static_cast<std::size_t>(m)] /= std::complex<double>(0.0, kTwoPi * m);
        }
        out.row(r) = synth_half_spectrum(c, T);
    }
    return out;
}

double loop_inner(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) throw GridMismatch("loop_inner: shape mismatch");
    return u.cwiseProduct(v).sum() / static_cast<double>(u.cols());
}

} // namespace vortex
