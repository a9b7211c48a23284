#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gqg {

/// Uniform periodic grid on [0,L)^2 with n modes per axis.
///
/// Wavenumbers are k = (2*pi/L) * m with m in {-n/2, ..., n/2 - 1},
/// stored in FFT order: index i maps to m = i for i <= n/2, m = i - n
/// otherwise.  The lattice is symmetric under negation except for the
/// Nyquist line m = -n/2, which derivative-like multipliers zero out.
class Grid2D {
public:
    Grid2D(std::size_t n, double box_length);

    std::size_t n() const { return n_; }
    double box_length() const { return length_; }
    double dx() const { return length_ / static_cast<double>(n_); }
    std::size_t size() const { return n_ * n_; }

    /// Signed integer mode number for FFT index i.
    int mode(std::size_t i) const {
        return i <= n_ / 2 ? static_cast<int>(i)
                           : static_cast<int>(i) - static_cast<int>(n_);
    }
    /// Physical wavenumber component for FFT index i.
    double wavenumber(std::size_t i) const { return k_unit_ * mode(i); }
    /// |k| for FFT index pair (i, j).
    double k_abs(std::size_t i, std::size_t j) const;
    /// Base wavenumber 2*pi/L.
    double k_unit() const { return k_unit_; }
    /// Largest representable |k| component (excluding Nyquist).
    double k_max() const { return k_unit_ * (static_cast<double>(n_) / 2.0 - 1.0); }

    bool is_nyquist(std::size_t i) const { return i == n_ / 2; }

    /// Physical coordinate of grid point index i along one axis.
    double coord(std::size_t i) const { return dx() * static_cast<double>(i); }

    bool operator==(const Grid2D& other) const {
        return n_ == other.n_ && length_ == other.length_;
    }

private:
    std::size_t n_;
    double length_;
    double k_unit_;
};

} // namespace gqg
