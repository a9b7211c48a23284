#pragma once

#include <complex>
#include <vector>

#include "gqg/grid.hpp"

namespace gqg {

/// Real scalar field on a periodic grid, held in physical and/or spectral
/// representation with lazy conversion.  Spectral coefficients use the
/// unnormalized forward FFT convention; the inverse transform divides by n^2,
/// so round trips are exact to rounding.
///
/// Operations that hand out a non-const view invalidate the other
/// representation; const accessors synchronize on demand.
class ScalarField2D {
public:
    explicit ScalarField2D(const Grid2D& grid);

    const Grid2D& grid() const { return grid_; }

    // --- physical access ---
    const std::vector<double>& physical() const;
    std::vector<double>& physical_mut();
    double& at(std::size_t ix, std::size_t iy);
    double at(std::size_t ix, std::size_t iy) const;

    // --- spectral access ---
    const std::vector<std::complex<double>>& spectral() const;
    std::vector<std::complex<double>>& spectral_mut();
    std::complex<double> coeff(std::size_t i, std::size_t j) const;

    bool physical_valid() const { return physical_valid_; }
    bool spectral_valid() const { return spectral_valid_; }

    /// L2 norm over the box: sqrt( (L/n)^2 * sum f^2 ).
    double l2_norm() const;
    /// max |f| over grid points.
    double linf_norm() const;
    /// Mean value (zero-mode / n^2).
    double mean() const;
    /// Spectral-side L2 norm by Parseval (for cross checks).
    double l2_norm_spectral() const;
    /// Largest Hermitian-symmetry defect max |c(-k) - conj(c(k))|.
    double hermitian_defect() const;

    ScalarField2D clone() const { return *this; }

private:
    void ensure_physical() const;
    void ensure_spectral() const;

    Grid2D grid_;
    mutable std::vector<double> phys_;
    mutable std::vector<std::complex<double>> spec_;
    mutable bool physical_valid_ = false;
    mutable bool spectral_valid_ = false;
};

/// Two scalar components on a shared grid.
struct VectorField2D {
    ScalarField2D x;
    ScalarField2D y;

    explicit VectorField2D(const Grid2D& grid) : x(grid), y(grid) {}

    const Grid2D& grid() const { return x.grid(); }
    /// max over grid points of |u| (Euclidean).
    double linf_norm() const;
    /// Largest |k . u_hat(k)| over modes (divergence in spectral space).
    double max_spectral_divergence() const;
};

namespace fft {
/// Forward/backward complex 2D transforms used by ScalarField2D; exposed for
/// tests.  Thread safe: plan creation is serialized, execution uses
/// new-array interfaces.
void forward(const Grid2D& grid, const std::vector<double>& phys,
             std::vector<std::complex<double>>& spec);
void backward(const Grid2D& grid, const std::vector<std::complex<double>>& spec,
              std::vector<double>& phys);
} // namespace fft

} // namespace gqg
