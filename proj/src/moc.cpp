#include "gqg/moc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gqg/quadrature.hpp"

namespace gqg {

// ---------------------------------------------------------------------------
// Base class machinery

double Moc::origin_exponent() const {
    if (value_at_zero() > 0.0) return 0.0;
    const double t = 1e-10;
    const double lo = eval(t), hi = eval(2.0 * t);
    if (!(lo > 0.0) || !(hi > 0.0)) return 1.0;
    double g = std::log(hi / lo) / std::log(2.0);
    return std::clamp(g, 0.0, 1.0);
}

double Moc::inverse(double y) const {
    if (y < 0.0) throw std::domain_error("Moc::inverse: negative argument");
    if (y == 0.0) return 0.0;
    if (y <= value_at_zero()) return 0.0;
    const double s = sup();
    if (y > s) return kInf;
    if (y == s) {
        if (auto tail = constant_tail()) return tail->start;
    }
    // bracket: shrink lo until omega(lo) < y, grow hi until omega(hi) >= y
    double lo = 1.0;
    while (eval(lo) >= y) {
        lo *= 0.1;
        if (lo < 1e-300) return 0.0;
    }
    double hi = std::max(1.0, 2.0 * lo);
    while (eval(hi) < y) {
        hi *= 2.0;
        if (hi > 1e300) return kInf;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eval(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

OriginCondition Moc::classify() const {
    if (value_at_zero() > 0.0) return OriginCondition::PositiveAtZero;
    if (std::isinf(slope_at_zero())) return OriginCondition::InfiniteSlope;
    if (deriv2(1e-12) < -1e3) return OriginCondition::InfiniteCurvature;
    throw std::domain_error(
        "Moc::classify: no origin condition holds (omega(0+)=0, finite slope, "
        "bounded curvature)");
}

double Moc::deriv_upper(double xi) const {
    return std::max(deriv(xi, Side::Left), deriv(xi, Side::Right));
}

bool Moc::is_concave(double lo, double hi, int samples) const {
    for (double b : breakpoints()) {
        if (b <= 0.0) continue;
        if (deriv(b, Side::Right) > deriv(b, Side::Left) * (1.0 + 1e-12) + 1e-300)
            return false;
    }
    double prev = kInf;
    const double ratio = std::pow(hi / lo, 1.0 / (samples - 1));
    double xi = lo;
    for (int i = 0; i < samples; ++i, xi *= ratio) {
        const double d = deriv_upper(xi);
        if (d < -1e-14) return false;
        if (d > prev * (1.0 + 1e-10) + 1e-14) return false;
        prev = std::max(d, 0.0);
    }
    return true;
}

// ---------------------------------------------------------------------------
// Elementary families

namespace {

class PowerMoc final : public Moc {
public:
    PowerMoc(double coef, double g) : c_(coef), g_(g) {
        if (!(coef > 0.0) || !(g > 0.0) || g > 1.0)
            throw std::domain_error("power moc: need coef > 0, 0 < g <= 1");
    }
    double eval(double xi) const override {
        require_positive(xi);
        return c_ * std::pow(xi, g_);
    }
    double deriv(double xi, Side) const override {
        require_positive(xi);
        return c_ * g_ * std::pow(xi, g_ - 1.0);
    }
    double deriv2(double xi) const override {
        require_positive(xi);
        return c_ * g_ * (g_ - 1.0) * std::pow(xi, g_ - 2.0);
    }
    double value_at_zero() const override { return 0.0; }
    double slope_at_zero() const override { return g_ < 1.0 ? kInf : c_; }
    double sup() const override { return kInf; }
    std::vector<double> breakpoints() const override { return {}; }
    std::string family_name() const override {
        return g_ == 1.0 ? "linear" : "power";
    }
    double origin_exponent() const override { return g_; }
    double inverse(double y) const override {
        if (y < 0.0) throw std::domain_error("Moc::inverse: negative argument");
        return std::pow(y / c_, 1.0 / g_);
    }

private:
    double c_, g_;
};

class ConstantMoc final : public Moc {
public:
    explicit ConstantMoc(double value) : h_(value) {
        if (!(value > 0.0))
            throw std::domain_error("constant moc: need value > 0");
    }
    double eval(double xi) const override {
        require_positive(xi);
        return h_;
    }
    double deriv(double xi, Side) const override {
        require_positive(xi);
        return 0.0;
    }
    double deriv2(double xi) const override {
        require_positive(xi);
        return 0.0;
    }
    double value_at_zero() const override { return h_; }
    double slope_at_zero() const override { return 0.0; }
    double sup() const override { return h_; }
    std::vector<double> breakpoints() const override { return {}; }
    std::string family_name() const override { return "constant"; }
    std::optional<ConstantTail> constant_tail() const override {
        return ConstantTail{0.0, h_};
    }
    double inverse(double y) const override {
        if (y < 0.0) throw std::domain_error("Moc::inverse: negative argument");
        return y <= h_ ? 0.0 : kInf;
    }

private:
    double h_;
};

// ---------------------------------------------------------------------------
// xi - xi^{3/2} head with the slowly-growing integral tail
// omega'(xi) = gamma / (4 (xi + xi^beta)), beta > 1.

class KiselNvMoc final : public Moc {
public:
    KiselNvMoc(double delta, double gamma, double beta)
        : delta_(delta), gamma_(gamma), beta_(beta) {
        if (!(delta > 0.0) || delta > 1.0 / 9.0)
            throw std::domain_error("kisel_nv moc: need 0 < delta <= 1/9");
        // gamma < delta is the concave regime; larger gamma is accepted so
        // that failing certification parameters remain expressible, and
        // is_concave() reports the kink
        if (!(gamma > 0.0) || !(gamma < 1.0))
            throw std::domain_error("kisel_nv moc: need 0 < gamma < 1");
        if (!(beta > 1.0))
            throw std::domain_error("kisel_nv moc: need beta > 1 for a bounded tail");
        head_end_ = delta - std::pow(delta, 1.5);
        build_anchors();
    }

    double eval(double xi) const override {
        require_positive(xi);
        if (xi <= delta_) return xi - std::pow(xi, 1.5);
        return head_end_ + tail_integral(xi);
    }
    double deriv(double xi, Side side) const override {
        require_positive(xi);
        if (xi < delta_ || (xi == delta_ && side == Side::Left))
            return 1.0 - 1.5 * std::sqrt(xi);
        return slope(xi);
    }
    double deriv2(double xi) const override {
        require_positive(xi);
        if (xi <= delta_) return -0.75 / std::sqrt(xi);
        const double denom = xi + std::pow(xi, beta_);
        return -gamma_ * (1.0 + beta_ * std::pow(xi, beta_ - 1.0)) /
               (4.0 * denom * denom);
    }
    double value_at_zero() const override { return 0.0; }
    double slope_at_zero() const override { return 1.0; }
    double sup() const override { return sup_; }
    std::vector<double> breakpoints() const override { return {delta_}; }
    std::string family_name() const override { return "kisel_nv"; }
    double origin_exponent() const override { return 1.0; }

private:
    double slope(double xi) const {
        return gamma_ / (4.0 * (xi + std::pow(xi, beta_)));
    }

    // Cumulative tail integrals at log-spaced anchors delta * 10^{m/16},
    // m = 0..192 (12 decades).  Each segment is one smooth Kronrod panel.
    void build_anchors() {
        const int per_decade = 16, decades = 12;
        const int m_max = per_decade * decades;
        anchors_.resize(m_max + 1);
        cum_.resize(m_max + 1);
        anchors_[0] = delta_;
        cum_[0] = 0.0;
        auto f = [this](double e) { return slope(e); };
        for (int m = 1; m <= m_max; ++m) {
            anchors_[m] = delta_ * std::pow(10.0, double(m) / per_decade);
            cum_[m] = cum_[m - 1] +
                      quad::panel_kronrod(f, anchors_[m - 1], anchors_[m]).value;
        }
        // remainder past R = 1e12 delta: integrand = gamma/4 * eta^{-beta}
        // * (1 + eta^{1-beta})^{-1}; keep two terms of the expansion.
        const double R = anchors_.back();
        const double tail =
            (gamma_ / 4.0) * (std::pow(R, 1.0 - beta_) / (beta_ - 1.0) -
                              std::pow(R, 2.0 - 2.0 * beta_) / (2.0 * beta_ - 2.0));
        sup_ = head_end_ + cum_.back() + tail;
    }

    double tail_integral(double xi) const {
        auto f = [this](double e) { return slope(e); };
        if (xi >= anchors_.back())
            return cum_.back() +
                   quad::integrate(f, anchors_.back(), xi, 1e-14).value;
        const auto it =
            std::upper_bound(anchors_.begin(), anchors_.end(), xi) - 1;
        const std::size_t m = static_cast<std::size_t>(it - anchors_.begin());
        return cum_[m] + quad::panel_kronrod(f, anchors_[m], xi).value;
    }

    double delta_, gamma_, beta_, head_end_, sup_ = 0.0;
    std::vector<double> anchors_, cum_;
};

// ---------------------------------------------------------------------------
// Holder head, constant tail: (H/delta^gamma) xi^gamma then H.

class StationaryHolderMoc final : public Moc {
public:
    StationaryHolderMoc(double H, double delta, double gamma)
        : h_(H), delta_(delta), gamma_(gamma), coef_(H / std::pow(delta, gamma)) {
        if (!(H > 0.0) || !(delta > 0.0))
            throw std::domain_error("stationary_holder moc: need H, delta > 0");
        if (!(gamma > 0.0) || !(gamma < 1.0))
            throw std::domain_error("stationary_holder moc: need 0 < gamma < 1");
    }
    double eval(double xi) const override {
        require_positive(xi);
        return xi <= delta_ ? coef_ * std::pow(xi, gamma_) : h_;
    }
    double deriv(double xi, Side side) const override {
        require_positive(xi);
        if (xi < delta_ || (xi == delta_ && side == Side::Left))
            return coef_ * gamma_ * std::pow(xi, gamma_ - 1.0);
        return 0.0;
    }
    double deriv2(double xi) const override {
        require_positive(xi);
        if (xi <= delta_)
            return coef_ * gamma_ * (gamma_ - 1.0) * std::pow(xi, gamma_ - 2.0);
        return 0.0;
    }
    double value_at_zero() const override { return 0.0; }
    double slope_at_zero() const override { return kInf; }
    double sup() const override { return h_; }
    std::vector<double> breakpoints() const override { return {delta_}; }
    std::string family_name() const override { return "stationary_holder"; }
    std::optional<ConstantTail> constant_tail() const override {
        return ConstantTail{delta_, h_};
    }
    double origin_exponent() const override { return gamma_; }
    double inverse(double y) const override {
        if (y < 0.0) throw std::domain_error("Moc::inverse: negative argument");
        if (y > h_) return kInf;
        return delta_ * std::pow(y / h_, 1.0 / gamma_);
    }

private:
    double h_, delta_, gamma_, coef_;
};

// ---------------------------------------------------------------------------
// Eventual-regularity shape: affine head tangent to the Holder piece at xi0,
// positive at the origin.

class EventualMoc final : public Moc {
public:
    EventualMoc(double H, double delta, double gamma, double xi0)
        : h_(H), delta_(delta), gamma_(gamma), xi0_(xi0),
          coef_(H / std::pow(delta, gamma)) {
        if (!(H > 0.0) || !(delta > 0.0))
            throw std::domain_error("eventual moc: need H, delta > 0");
        if (!(gamma > 0.0) || !(gamma < 1.0))
            throw std::domain_error("eventual moc: need 0 < gamma < 1");
        if (!(xi0 > 0.0) || xi0 > delta)
            throw std::domain_error("eventual moc: need 0 < xi0 <= delta");
        head_slope_ = coef_ * gamma_ * std::pow(xi0_, gamma_ - 1.0);
        head_offset_ = (1.0 - gamma_) * coef_ * std::pow(xi0_, gamma_);
    }
    double eval(double xi) const override {
        require_positive(xi);
        if (xi <= xi0_) return head_slope_ * xi + head_offset_;
        if (xi <= delta_) return coef_ * std::pow(xi, gamma_);
        return h_;
    }
    double deriv(double xi, Side side) const override {
        require_positive(xi);
        if (xi < xi0_ || (xi == xi0_ && side == Side::Left)) return head_slope_;
        if (xi < delta_ || (xi == delta_ && side == Side::Left))
            return coef_ * gamma_ * std::pow(xi, gamma_ - 1.0);
        return 0.0;
    }
    double deriv2(double xi) const override {
        require_positive(xi);
        if (xi <= xi0_) return 0.0;
        if (xi <= delta_)
            return coef_ * gamma_ * (gamma_ - 1.0) * std::pow(xi, gamma_ - 2.0);
        return 0.0;
    }
    double value_at_zero() const override { return head_offset_; }
    double slope_at_zero() const override { return head_slope_; }
    double sup() const override { return h_; }
    std::vector<double> breakpoints() const override {
        if (xi0_ == delta_) return {delta_};
        return {xi0_, delta_};
    }
    std::string family_name() const override { return "eventual"; }
    std::optional<ConstantTail> constant_tail() const override {
        return ConstantTail{delta_, h_};
    }
    double origin_exponent() const override { return 0.0; }
    double inverse(double y) const override {
        if (y < 0.0) throw std::domain_error("Moc::inverse: negative argument");
        if (y <= head_offset_) return 0.0;
        const double at_xi0 = coef_ * std::pow(xi0_, gamma_);
        if (y <= at_xi0) return (y - head_offset_) / head_slope_;
        if (y <= h_) return delta_ * std::pow(y / h_, 1.0 / gamma_);
        return kInf;
    }

private:
    double h_, delta_, gamma_, xi0_, coef_, head_slope_, head_offset_;
};

// ---------------------------------------------------------------------------
// Scaling wrapper omega_lambda(xi) = lambda^e omega(lambda xi).

class ScaledMoc final : public Moc {
public:
    ScaledMoc(MocPtr base, double lambda, double e)
        : base_(std::move(base)), lambda_(lambda), e_(e),
          pre_(std::pow(lambda, e)) {
        if (!base_) throw std::domain_error("scaled moc: null base");
        if (!(lambda > 0.0))
            throw std::domain_error("scaled moc: need lambda > 0");
    }
    double eval(double xi) const override { return pre_ * base_->eval(lambda_ * xi); }
    double deriv(double xi, Side side) const override {
        return pre_ * lambda_ * base_->deriv(lambda_ * xi, side);
    }
    double deriv2(double xi) const override {
        return pre_ * lambda_ * lambda_ * base_->deriv2(lambda_ * xi);
    }
    double value_at_zero() const override { return pre_ * base_->value_at_zero(); }
    double slope_at_zero() const override {
        return pre_ * lambda_ * base_->slope_at_zero();
    }
    double sup() const override { return pre_ * base_->sup(); }
    std::vector<double> breakpoints() const override {
        auto b = base_->breakpoints();
        for (double& x : b) x /= lambda_;
        return b;
    }
    std::string family_name() const override {
        return "scaled(" + base_->family_name() + ")";
    }
    std::optional<ConstantTail> constant_tail() const override {
        if (auto t = base_->constant_tail())
            return ConstantTail{t->start / lambda_, pre_ * t->value};
        return std::nullopt;
    }
    double origin_exponent() const override { return base_->origin_exponent(); }
    double inverse(double y) const override {
        if (y < 0.0) throw std::domain_error("Moc::inverse: negative argument");
        return base_->inverse(y / pre_) / lambda_;
    }

    MocPtr base() const { return base_; }
    double lambda() const { return lambda_; }
    double exponent() const { return e_; }

private:
    MocPtr base_;
    double lambda_, e_, pre_;
};

// ---------------------------------------------------------------------------
// Linear interpolation through tabulated samples; constant past the last
// point, linear through the origin before the first.

class TabulatedMoc final : public Moc {
public:
    TabulatedMoc(std::vector<double> xi, std::vector<double> om)
        : xi_(std::move(xi)), om_(std::move(om)) {
        if (xi_.size() != om_.size() || xi_.size() < 2)
            throw std::domain_error("tabulated moc: need >= 2 samples");
        for (std::size_t i = 0; i < xi_.size(); ++i) {
            if (!(xi_[i] > 0.0) || !(om_[i] > 0.0))
                throw std::domain_error("tabulated moc: samples must be positive");
            if (i > 0 && (xi_[i] <= xi_[i - 1] || om_[i] < om_[i - 1]))
                throw std::invalid_argument(
                    "tabulated moc: xi strictly increasing, omega non-decreasing");
        }
    }
    double eval(double xi) const override {
        require_positive(xi);
        if (xi <= xi_.front()) return om_.front() * xi / xi_.front();
        if (xi >= xi_.back()) return om_.back();
        const std::size_t i = seg(xi);
        const double t = (xi - xi_[i]) / (xi_[i + 1] - xi_[i]);
        return om_[i] + t * (om_[i + 1] - om_[i]);
    }
    double deriv(double xi, Side side) const override {
        require_positive(xi);
        if (xi < xi_.front() || (xi == xi_.front() && side == Side::Left))
            return om_.front() / xi_.front();
        if (xi > xi_.back() || (xi == xi_.back() && side == Side::Right)) return 0.0;
        std::size_t i = seg(xi);
        if (xi == xi_[i] && side == Side::Left && i > 0) --i;
        return (om_[i + 1] - om_[i]) / (xi_[i + 1] - xi_[i]);
    }
    double deriv2(double xi) const override {
        require_positive(xi);
        return 0.0;
    }
    double value_at_zero() const override { return 0.0; }
    double slope_at_zero() const override { return om_.front() / xi_.front(); }
    double sup() const override { return om_.back(); }
    std::vector<double> breakpoints() const override { return xi_; }
    std::string family_name() const override { return "tabulated"; }
    std::optional<ConstantTail> constant_tail() const override {
        return ConstantTail{xi_.back(), om_.back()};
    }

private:
    std::size_t seg(double xi) const {
        const auto it = std::upper_bound(xi_.begin(), xi_.end(), xi) - 1;
        return std::min(static_cast<std::size_t>(it - xi_.begin()), xi_.size() - 2);
    }
    std::vector<double> xi_, om_;
};

} // namespace

// ---------------------------------------------------------------------------
// Factories

MocPtr make_power_moc(double coef, double exponent) {
    return std::make_shared<PowerMoc>(coef, exponent);
}
MocPtr make_constant_moc(double value) {
    return std::make_shared<ConstantMoc>(value);
}
MocPtr make_linear_moc(double slope) {
    return std::make_shared<PowerMoc>(slope, 1.0);
}
MocPtr make_kisel_nv_moc(double delta, double gamma, double beta) {
    return std::make_shared<KiselNvMoc>(delta, gamma, beta);
}
MocPtr make_stationary_holder_moc(double H, double delta, double gamma) {
    return std::make_shared<StationaryHolderMoc>(H, delta, gamma);
}
MocPtr make_eventual_moc(double H, double delta, double gamma, double xi0) {
    return std::make_shared<EventualMoc>(H, delta, gamma, xi0);
}
MocPtr make_scaled_moc(MocPtr base, double lambda, double exponent) {
    // rescaling a rescaled modulus with the same exponent composes
    // multiplicatively in lambda; flatten so the metadata reflects that
    if (auto view = as_scaled(base); view && view->exponent == exponent)
        return std::make_shared<ScaledMoc>(view->base, view->lambda * lambda,
                                           exponent);
    return std::make_shared<ScaledMoc>(std::move(base), lambda, exponent);
}
MocPtr make_tabulated_moc(std::vector<double> xi, std::vector<double> omega) {
    return std::make_shared<TabulatedMoc>(std::move(xi), std::move(omega));
}

MocPtr load_tabulated_moc_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("tabulated moc: cannot open " + path);
    std::vector<double> xi, om;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, w;
        if (ls >> x >> w) {
            xi.push_back(x);
            om.push_back(w);
        }
    }
    return make_tabulated_moc(std::move(xi), std::move(om));
}

std::optional<ScaledMocView> as_scaled(const MocPtr& moc) {
    if (auto s = std::dynamic_pointer_cast<const ScaledMoc>(moc))
        return ScaledMocView{s->base(), s->lambda(), s->exponent()};
    return std::nullopt;
}

double vanish_time(double delta, double beta, double c2) {
    if (!(delta > 0.0) || !(beta > 0.0) || !(c2 > 0.0))
        throw std::domain_error("vanish_time: need delta, beta, c2 > 0");
    return std::pow(delta, beta) / (c2 * beta);
}

double xi0_of_t(double delta, double beta, double c2, double t) {
    if (t < 0.0) throw std::domain_error("xi0_of_t: need t >= 0");
    const double inner = std::pow(delta, beta) - c2 * beta * t;
    if (inner < 0.0)
        throw std::domain_error("xi0_of_t: t past the vanishing time");
    return std::pow(inner, 1.0 / beta);
}

} // namespace gqg
