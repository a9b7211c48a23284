#include "gqg/grid.hpp"

#include <cmath>

namespace gqg {

Grid2D::Grid2D(std::size_t n, double box_length)
    : n_(n), length_(box_length) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("Grid2D: n must be even and >= 8");
    if (!(box_length > 0.0))
        throw std::invalid_argument("Grid2D: box length must be positive");
    k_unit_ = 2.0 * M_PI / length_;
}

double Grid2D::k_abs(std::size_t i, std::size_t j) const {
    const double kx = wavenumber(i);
    const double ky = wavenumber(j);
    return std::sqrt(kx * kx + ky * ky);
}

} // namespace gqg
