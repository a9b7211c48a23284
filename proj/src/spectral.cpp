#include "gqg/spectral.hpp"

#include <cmath>
#include <functional>

namespace gqg {
namespace spectral {

namespace {

// Apply a complex multiplier m(i, j) modewise; Nyquist lines are zeroed.
ScalarField2D apply_multiplier(
    const ScalarField2D& f,
    const std::function<std::complex<double>(std::size_t, std::size_t)>& sym) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    ScalarField2D out(g);
    auto& dst = out.spectral_mut();
    const auto& src = f.spectral();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (g.is_nyquist(i) || g.is_nyquist(j)) {
                dst[j * n + i] = 0.0;
            } else {
                dst[j * n + i] = sym(i, j) * src[j * n + i];
            }
        }
    }
    return out;
}

} // namespace

ScalarField2D fractional_laplacian(const ScalarField2D& f, double s) {
    if (s < 0.0 || s > 2.0)
        throw std::domain_error("fractional_laplacian: exponent outside [0,2]");
    const Grid2D& g = f.grid();
    return apply_multiplier(f, [&](std::size_t i, std::size_t j) {
        const double k = g.k_abs(i, j);
        if (k == 0.0) return std::complex<double>(0.0, 0.0);
        return std::complex<double>(std::pow(k, s), 0.0);
    });
}

VectorField2D velocity(const ScalarField2D& theta, double alpha) {
    const Grid2D& g = theta.grid();
    VectorField2D u(g);
    const std::complex<double> I(0.0, 1.0);
    u.x = apply_multiplier(theta, [&](std::size_t i, std::size_t j) {
        const double k = g.k_abs(i, j);
        if (k == 0.0) return std::complex<double>(0.0, 0.0);
        return I * std::pow(k, alpha - 1.0) * (-g.wavenumber(j));
    });
    u.y = apply_multiplier(theta, [&](std::size_t i, std::size_t j) {
        const double k = g.k_abs(i, j);
        if (k == 0.0) return std::complex<double>(0.0, 0.0);
        return I * std::pow(k, alpha - 1.0) * g.wavenumber(i);
    });
    return u;
}

VectorField2D riesz_perp(const ScalarField2D& theta) {
    return velocity(theta, 0.0);
}

VectorField2D gradient(const ScalarField2D& f) {
    const Grid2D& g = f.grid();
    VectorField2D out(g);
    const std::complex<double> I(0.0, 1.0);
    out.x = apply_multiplier(f, [&](std::size_t i, std::size_t) {
        return I * g.wavenumber(i);
    });
    out.y = apply_multiplier(f, [&](std::size_t, std::size_t j) {
        return I * g.wavenumber(j);
    });
    return out;
}

int max_shell(const Grid2D& grid) {
    const double kmax = grid.k_max() / grid.k_unit() * std::sqrt(2.0);
    return static_cast<int>(std::floor(std::log2(std::max(1.0, kmax))));
}

double dyadic_shell_energy(const ScalarField2D& f, int j, bool* out_of_band) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    if (out_of_band) *out_of_band = (j < 0 || j > max_shell(g));
    if (j < 0) return 0.0;

    const double lo = std::pow(2.0, j);
    const double hi = 2.0 * lo;
    const auto& c = f.spectral();
    double s = 0.0;
    for (std::size_t jj = 0; jj < n; ++jj) {
        for (std::size_t ii = 0; ii < n; ++ii) {
            const double kk = g.k_abs(ii, jj) / g.k_unit();
            if (kk >= lo && kk < hi) s += std::norm(c[jj * n + ii]);
        }
    }
    const double n2 = static_cast<double>(g.size());
    return s / n2 * g.dx() * g.dx();
}

ScalarField2D dealias(const ScalarField2D& f, double fraction) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    const double cutoff = fraction * static_cast<double>(n) / 2.0;
    ScalarField2D out(g);
    auto& dst = out.spectral_mut();
    const auto& src = f.spectral();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const bool keep = std::abs(g.mode(i)) < cutoff && std::abs(g.mode(j)) < cutoff;
            dst[j * n + i] = keep ? src[j * n + i] : 0.0;
        }
    }
    return out;
}

ScalarField2D truncate_modes(const ScalarField2D& f, double cutoff) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    ScalarField2D out(g);
    auto& dst = out.spectral_mut();
    const auto& src = f.spectral();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double kk = g.k_abs(i, j) / g.k_unit();
            dst[j * n + i] = (kk <= cutoff) ? src[j * n + i] : 0.0;
        }
    }
    return out;
}

ScalarField2D minus_div_product(const VectorField2D& u, const ScalarField2D& theta) {
    const Grid2D& g = theta.grid();
    const std::size_t n = g.n();
    ScalarField2D fx(g), fy(g);
    {
        const auto& ux = u.x.physical();
        const auto& uy = u.y.physical();
        const auto& th = theta.physical();
        auto& px = fx.physical_mut();
        auto& py = fy.physical_mut();
        for (std::size_t i = 0; i < th.size(); ++i) {
            px[i] = ux[i] * th[i];
            py[i] = uy[i] * th[i];
        }
    }
    ScalarField2D out(g);
    auto& dst = out.spectral_mut();
    const auto& cx = fx.spectral();
    const auto& cy = fy.spectral();
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (g.is_nyquist(i) || g.is_nyquist(j)) {
                dst[j * n + i] = 0.0;
            } else {
                dst[j * n + i] = -I * (g.wavenumber(i) * cx[j * n + i] +
                                       g.wavenumber(j) * cy[j * n + i]);
            }
        }
    }
    return out;
}

} // namespace spectral
} // namespace gqg
