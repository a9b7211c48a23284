#pragma once

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqg/field.hpp"

namespace gqg {

enum class Side { Left, Right };

/// Hypothesis classification at the origin: omega(0+) > 0, or
/// omega'(0+) = inf, or omega''(0+) = -inf.
enum class OriginCondition { PositiveAtZero, InfiniteSlope, InfiniteCurvature };

constexpr double kInf = std::numeric_limits<double>::infinity();

/// A modulus of continuity: continuous, increasing, concave on ]0, inf[,
/// piecewise C^2 with one-sided derivatives everywhere.  Instances are
/// immutable after construction; all methods are pure.
class Moc {
public:
    virtual ~Moc() = default;

    virtual double eval(double xi) const = 0;
    virtual double deriv(double xi, Side side) const = 0;
    virtual double deriv2(double xi) const = 0;

    virtual double value_at_zero() const = 0;        // omega(0+)
    virtual double slope_at_zero() const = 0;        // omega'(0+), may be inf
    virtual double sup() const = 0;                  // lim at infinity, may be inf
    virtual std::vector<double> breakpoints() const = 0;
    virtual std::string family_name() const = 0;

    /// omega(xi) == value for all xi >= start, when such a tail exists.
    struct ConstantTail {
        double start;
        double value;
    };
    virtual std::optional<ConstantTail> constant_tail() const { return std::nullopt; }

    /// Exponent g with omega ~ c * xi^g as xi -> 0+ (g = 0 when omega(0+) > 0).
    virtual double origin_exponent() const;

    /// Generalized inverse; +inf sentinel when y exceeds sup().
    /// Throws std::domain_error for y < 0.
    virtual double inverse(double y) const;

    OriginCondition classify() const;

    /// Derivative convenience with the Prop-3.2 tie-break: at a seam the
    /// larger one-sided value is taken.
    double deriv_upper(double xi) const;

    /// Numeric concavity check: one-sided derivatives ordered at breakpoints,
    /// derivative non-increasing on log-spaced samples of [lo, hi].
    bool is_concave(double lo = 1e-8, double hi = 1e8, int samples = 200) const;

protected:
    void require_positive(double xi) const {
        if (!(xi > 0.0))
            throw std::domain_error("Moc: argument must be positive");
    }
};

using MocPtr = std::shared_ptr<const Moc>;

/// omega(xi) = coef * xi^exponent (exponent in ]0,1]).
MocPtr make_power_moc(double coef, double exponent);
/// omega == value (constant, concave limit case used by the dissipation
/// functional's closed form).
MocPtr make_constant_moc(double value);
/// omega(xi) = slope * xi.
MocPtr make_linear_moc(double slope);

/// Family: xi - xi^{3/2} on ]0, delta], integral tail with
/// omega' = gamma / (4 (xi + xi^beta)) beyond.  Requires 0 < gamma < delta
/// <= 1/9 and beta > 1 (bounded tail).
MocPtr make_kisel_nv_moc(double delta, double gamma, double beta);

/// Family: (H/delta^gamma) xi^gamma on ]0, delta], H beyond.
MocPtr make_stationary_holder_moc(double H, double delta, double gamma);

/// Family: tangent-line head on ]0, xi0], power on ]xi0, delta], H beyond.
MocPtr make_eventual_moc(double H, double delta, double gamma, double xi0);

/// omega_lambda(xi) = lambda^exponent * omega(lambda xi); for the equation's
/// scaling, exponent = beta - alpha - 1.
MocPtr make_scaled_moc(MocPtr base, double lambda, double exponent);

/// Tabulated monotone-concave data with linear interpolation ("approximate").
MocPtr make_tabulated_moc(std::vector<double> xi, std::vector<double> omega);
/// CSV import with columns (xi, omega), strictly increasing xi.
MocPtr load_tabulated_moc_csv(const std::string& path);

struct ScaledMocView {
    MocPtr base;
    double lambda;
    double exponent;
};
/// Access scaling metadata when the instance is a scaled wrapper.
std::optional<ScaledMocView> as_scaled(const MocPtr& moc);

/// Closed-form shrinking scale xi0(t) = (delta^beta - C2 beta t)^{1/beta};
/// throws std::domain_error past the vanishing time.
double xi0_of_t(double delta, double beta, double c2, double t);
/// T0 = delta^beta / (C2 beta).
double vanish_time(double delta, double beta, double c2);

/// Result of a pairwise obedience scan |f(x)-f(y)| vs omega(d(x,y)).
struct ObedienceReport {
    double worst_ratio = 0.0;
    std::array<std::size_t, 2> witness_a{0, 0};   // grid indices (ix, iy)
    std::array<std::size_t, 2> witness_b{0, 0};
    double witness_distance = 0.0;
    bool obeys = true;
    bool exhaustive = false;
    std::size_t pairs_checked = 0;
};

/// Scan grid pairs of `f` against `moc` with torus geodesic distances.
/// Exhaustive for n <= exhaustive_limit, else deterministic stratified
/// sampling seeded by `seed`.
ObedienceReport obeys(const ScalarField2D& f, const Moc& moc,
                      std::size_t exhaustive_limit = 48, std::uint64_t seed = 0);

} // namespace gqg
