#pragma once

#include "gqg/field.hpp"

namespace gqg {

/// Fourier-multiplier operators on periodic fields.  All operators are pure
/// (inputs untouched), zero the Nyquist line of derivative-like symbols, and
/// map the zero mode per their symbol (|0|^s = 0 for s > 0, Riesz symbol at
/// the origin defined as 0).
namespace spectral {

/// Lambda^s with symbol |k|^s, s in [0, 2].  Zero mode maps to 0.
ScalarField2D fractional_laplacian(const ScalarField2D& f, double s);

/// Constitutive velocity u = Lambda^alpha R_perp theta:
/// u_hat(k) = i |k|^(alpha-1) (-k2, k1) theta_hat(k).
VectorField2D velocity(const ScalarField2D& theta, double alpha);

/// R_perp = (-R2, R1), i.e. velocity with alpha = 0.
VectorField2D riesz_perp(const ScalarField2D& theta);

/// Spectral gradient (i k1, i k2).
VectorField2D gradient(const ScalarField2D& f);

/// L2 energy ||P_j f||_{L2}^2 in the sharp dyadic shell 2^j <= |k| < 2^{j+1}
/// (|k| in units of 2*pi/L).  Shells outside the resolved band return 0 and
/// set out_of_band.
double dyadic_shell_energy(const ScalarField2D& f, int j,
                           bool* out_of_band = nullptr);

/// Largest shell index with any resolved mode.
int max_shell(const Grid2D& grid);

/// Zero all modes with |k_i| above fraction * (n/2) on either axis (2/3 rule
/// when fraction = 2/3).  Returns a new field.
ScalarField2D dealias(const ScalarField2D& f, double fraction);

/// Friedrichs projection: zero all modes with |k| > cutoff (cutoff in units
/// of 2*pi/L).
ScalarField2D truncate_modes(const ScalarField2D& f, double cutoff);

/// -div(u * theta): products in physical space, divergence spectrally.
/// Caller is responsible for dealiasing of inputs/output.
ScalarField2D minus_div_product(const VectorField2D& u, const ScalarField2D& theta);

} // namespace spectral

} // namespace gqg
