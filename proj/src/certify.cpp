#include "gqg/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gqg/functionals.hpp"

namespace gqg {
namespace certify {

using ordered_json = nlohmann::ordered_json;

void CriterionConstants::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0))
            throw std::domain_error(std::string("constants: ") + name +
                                    " must be positive");
    };
    pos(c_alpha, "c_alpha");
    pos(c_beta, "c_beta");
    pos(c_beta_prime, "c_beta_prime");
    pos(A, "A");
    pos(nu, "nu");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("constants: alpha must lie in ]0, 1[");
    if (!(beta > 0.0) || beta > 2.0)
        throw std::domain_error("constants: beta must lie in ]0, 2]");
}

// ---------------------------------------------------------------------------

std::vector<double> build_log_grid(double lo, double hi,
                                   const std::vector<double>& brks,
                                   int base_per_decade, int dense_per_decade) {
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("build_log_grid: need 0 < lo < hi");
    std::vector<double> pts;
    auto fill = [&pts](double a, double b, int per_decade) {
        const double decades = std::log10(b / a);
        const int n = std::max(2, int(std::ceil(decades * per_decade)) + 1);
        for (int i = 0; i < n; ++i)
            pts.push_back(a * std::pow(b / a, double(i) / (n - 1)));
    };
    fill(lo, hi, base_per_decade);
    const double half = std::sqrt(10.0);
    for (double b : brks) {
        if (!(b > lo) || !(b < hi)) continue;
        fill(std::max(lo, b / half), std::min(hi, b * half), dense_per_decade);
        pts.push_back(b * (1.0 - 1e-9));
        pts.push_back(b);
        pts.push_back(b * (1.0 + 1e-9));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// ---------------------------------------------------------------------------

namespace {
std::atomic<int> g_max_threads{0};
} // namespace

void set_max_threads(int n) { g_max_threads.store(n); }

namespace {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    unsigned nt = std::clamp(hw ? hw : 1u, 1u, 16u);
    const int cap = g_max_threads.load();
    if (cap > 0) nt = std::min(nt, static_cast<unsigned>(cap));
    if (nt == 1 || n < 2 * nt) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(8)) < n;)
                for (std::size_t j = i; j < std::min(i + 8, n); ++j) fn(j);
        });
    for (auto& th : pool) th.join();
}

void reduce_worst(Certificate& cert) {
    // fixed-order min scan for reproducible reports
    cert.pass = true;
    cert.worst_margin = -kInf;
    cert.max_quad_error = 0.0;
    for (const auto& s : cert.samples) {
        cert.max_quad_error = std::max(cert.max_quad_error, s.quad_error);
        const bool nonstrict = s.label == "truncation-coefficient";
        const bool ok = nonstrict ? s.margin <= 0.0
                                  : s.margin + s.quad_error < 0.0;
        if (!ok) cert.pass = false;
        if (s.margin > cert.worst_margin) {
            cert.worst_margin = s.margin;
            cert.worst_xi = s.xi;
            cert.worst_xi0 = s.xi0;
            cert.worst_label = s.label;
        }
    }
}

} // namespace

Certificate certify_subcritical(double delta, double gamma,
                                const CriterionConstants& c,
                                std::size_t min_points) {
    c.validate();
    if (!(c.beta > c.alpha + 1.0))
        throw std::domain_error(
            "certify_subcritical: scope requires beta > alpha + 1");

    MocPtr moc = make_kisel_nv_moc(delta, gamma, c.beta);
    // out-of-domain gamma loses concavity; the margin scan still runs and
    // records the fact (such parameters are exactly the FAIL candidates)
    const bool concave = moc->is_concave();

    const double lo = 1e-8 * delta, hi = 1e8 * delta;
    const int per_decade = std::max<int>(125, int(min_points / 16) + 1);
    const auto grid = build_log_grid(lo, hi, {delta}, per_decade);

    Certificate cert;
    cert.kind = "subcritical";
    cert.grid_lo = lo;
    cert.grid_hi = hi;
    cert.grid_points = grid.size();
    cert.parameters = {{"delta", delta}, {"gamma", gamma},
                       {"alpha", c.alpha}, {"beta", c.beta},
                       {"nu", c.nu}, {"c_alpha", c.c_alpha},
                       {"c_beta", c.c_beta},
                       {"concave", concave ? 1.0 : 0.0}};
    const double a = c.alpha, b = c.beta;
    cert.thresholds = {
        {"delta_bound",
         std::pow(3.0 * c.nu * a * (1.0 - a) * c.c_beta / (16.0 * c.c_alpha),
                  1.0 / (b - a - 0.5))},
        {"gamma_bound",
         std::min(delta, c.nu * a * (1.0 - a) * c.c_beta * std::pow(delta, a) /
                             (2.0 * c.c_alpha))}};

    cert.samples.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double xi = grid[i];
        const func::Eval om1 = func::omega1(*moc, xi, c.alpha, c.c_alpha);
        const func::Eval ups =
            func::upsilon_beta(*moc, xi, c.beta, c.c_beta, false);
        const double slope = moc->deriv_upper(xi);
        MarginSample& s = cert.samples[i];
        s.xi = xi;
        s.drift_term = om1.value * slope;
        s.dissipation_term = c.nu * ups.value;
        s.margin = s.drift_term + s.dissipation_term;
        s.quad_error = om1.error * slope + c.nu * ups.error;
        s.label = "criterion";
        if (!om1.converged || !ups.converged) s.quad_error = kInf;
    });

    reduce_worst(cert);
    return cert;
}

// ---------------------------------------------------------------------------

Certificate certify_eventual(double H, double delta, double gamma,
                             double xi0_lo, double xi0_hi, double c2,
                             const CriterionConstants& c,
                             std::size_t xi_points, std::size_t xi0_points) {
    c.validate();
    const double a = c.alpha, b = c.beta;
    if (!(b > a) || !(b <= a + 1.0))
        throw std::domain_error(
            "certify_eventual: scope requires alpha < beta <= alpha + 1");
    if (!(gamma > std::max(a + 1.0 - b, 0.5 * a)) || !(gamma < 1.0))
        throw std::domain_error(
            "certify_eventual: need max{alpha+1-beta, alpha/2} < gamma < 1");
    if (!(H > 0.0) || !(delta > 0.0) || !(c2 > 0.0))
        throw std::domain_error("certify_eventual: need H, delta, c2 > 0");
    if (!(xi0_lo > 0.0) || !(xi0_hi >= xi0_lo) || xi0_hi > delta)
        throw std::domain_error(
            "certify_eventual: need 0 < xi0_lo <= xi0_hi <= delta");

    const double c1 = H * std::pow(delta, b - a - 1.0);
    const double cb = c.c_beta_prime;

    Certificate cert;
    cert.kind = "eventual";
    cert.grid_lo = xi0_lo;
    cert.grid_hi = xi0_hi;
    cert.parameters = {{"H", H}, {"delta", delta}, {"gamma", gamma},
                       {"c1", c1}, {"c2", c2}, {"alpha", a}, {"beta", b},
                       {"nu", c.nu}, {"A", c.A}, {"c_beta_prime", cb}};
    cert.thresholds = {
        {"c2_bound", cb * c.nu / (2.0 * gamma)},
        {"c1_bound", std::min(c.nu * cb * (1.0 - gamma) / (2.0 * c.A * gamma),
                              c.nu / (c.A * gamma))}};

    std::vector<double> xi0s(xi0_points);
    for (std::size_t i = 0; i < xi0_points; ++i)
        xi0s[i] = xi0_points == 1
                      ? xi0_lo
                      : xi0_lo * std::pow(xi0_hi / xi0_lo,
                                          double(i) / (xi0_points - 1));

    const std::size_t per_regime = std::max<std::size_t>(8, xi_points / 4);
    auto log_span = [per_regime](double lo, double hi) {
        std::vector<double> v(per_regime);
        for (std::size_t i = 0; i < per_regime; ++i)
            v[i] = lo * std::pow(hi / lo, double(i) / (per_regime - 1));
        return v;
    };

    const double diss = 0.5 * c.nu * cb * (1.0 - gamma);
    for (double xi0 : xi0s) {
        const double head_pre =
            c.A * gamma * c1 * std::pow(xi0 / delta, gamma + b - a - 1.0);
        for (double xi : log_span(1e-4 * xi0, xi0)) {
            // time-derivative inequality on the shrinking head
            cert.samples.push_back(
                {xi, xi0, gamma * c2,
                 -0.5 * c.nu * cb * std::pow(xi0 / xi, b),
                 gamma * c2 - 0.5 * c.nu * cb * std::pow(xi0 / xi, b), 0.0,
                 "time-derivative"});
            // drift inequality, affine-head regime
            const double drift = head_pre * std::pow(xi / xi0, b - a);
            cert.samples.push_back({xi, xi0, drift, -diss, drift - diss, 0.0,
                                    "drift-head"});
            // truncated-dissipation coefficient must stay nonnegative;
            // recorded as -coefficient so pass means <= 0
            cert.samples.push_back({xi, xi0, drift, -c.nu, drift - c.nu, 0.0,
                                    "truncation-coefficient"});
        }
        if (xi0 < delta)
            for (double xi : log_span(xi0, delta)) {
                const double drift =
                    c.A * c1 * std::pow(xi / delta, gamma + b - 1.0 - a);
                cert.samples.push_back({xi, xi0, drift, -diss, drift - diss,
                                        0.0, "drift-middle"});
            }
        // constant tail: drift vanishes, dissipation bound is flat
        cert.samples.push_back(
            {2.0 * delta, xi0, 0.0, -diss, -diss, 0.0, "drift-tail"});
    }
    cert.grid_points = cert.samples.size();

    reduce_worst(cert);
    return cert;
}

// ---------------------------------------------------------------------------

ScaleSelection lambda_for_data(double theta0_linf, double grad_theta0_linf,
                               double c0, const Moc& moc, double alpha,
                               double beta) {
    if (!(beta > alpha + 1.0))
        throw std::domain_error("lambda_for_data: requires beta > alpha + 1");
    if (!(theta0_linf > 0.0) || grad_theta0_linf < 0.0 || !(c0 > 0.0))
        throw std::domain_error("lambda_for_data: bad norms or c0");
    if (!(c0 < moc.sup()))
        throw std::domain_error("lambda_for_data: c0 must be below sup omega");

    const double e = beta - alpha - 1.0;
    const double l1 = std::pow(4.0 * theta0_linf / c0, 1.0 / e);
    const double l2 = moc.inverse(c0) * grad_theta0_linf / theta0_linf;
    ScaleSelection out;
    out.lambda = std::max(l1, l2);
    out.delta0 = moc.inverse(2.0 * theta0_linf / std::pow(out.lambda, e));
    return out;
}

// ---------------------------------------------------------------------------

LadderResult regularity_ladder(double alpha, double beta, double sigma1,
                               double p, int max_steps) {
    if (!(alpha > 0.0) || !(alpha < 1.0) || !(beta > 0.0) || beta > 2.0)
        throw std::domain_error("regularity_ladder: alpha/beta out of range");
    if (!(p > 0.0)) throw std::domain_error("regularity_ladder: need p > 0");

    LadderResult r;
    r.sigma0 = std::max(alpha + 1.0 - beta, 0.5 * alpha);
    if (!(sigma1 > r.sigma0))
        throw std::domain_error("regularity_ladder: need sigma1 > sigma0");
    r.p1 = 2.0 / (1.0 - r.sigma0);
    r.p2 = 2.0 / (sigma1 - (1.0 + alpha - beta));
    r.increment = sigma1 + beta - 1.0 - alpha - 2.0 / p;
    r.p_admissible = p > std::max(r.p1, r.p2);
    r.sigma.push_back(sigma1);
    // an increment at rounding scale is no progress at all
    const double stall_tol =
        1e-12 * (std::abs(sigma1) + std::abs(beta) + 1.0 + std::abs(alpha) +
                 2.0 / p);
    if (r.increment <= stall_tol) {
        r.stalls = true;
        r.minimal_p = 2.0 / (sigma1 + beta - 1.0 - alpha);
        return r;
    }
    double s = sigma1;
    for (int n = 1; n <= max_steps; ++n) {
        s = 2.0 * s + beta - 1.0 - alpha - 2.0 / p;
        r.sigma.push_back(s);
        if (s > 1.0) {
            r.n0 = n;
            break;
        }
    }
    return r;
}

double decay_bound(double theta0_linf, double theta0_l2, double beta, double C,
                   double t) {
    if (!(theta0_linf > 0.0) || !(theta0_l2 > 0.0) || !(beta > 0.0) ||
        !(C > 0.0) || t < 0.0)
        throw std::domain_error("decay_bound: inputs must be positive, t >= 0");
    const double rate = C * std::pow(theta0_linf / theta0_l2, beta);
    return theta0_linf / std::pow(1.0 + rate * t, 1.0 / beta);
}

// ---------------------------------------------------------------------------

std::string Certificate::to_json() const {
    ordered_json j;
    j["schema_version"] = 1;
    j["config_hash"] = config_hash;
    j["kind"] = kind;
    j["verdict"] = pass ? "PASS" : "FAIL";
    j["grid"] = {{"lo", grid_lo}, {"hi", grid_hi}, {"points", grid_points}};
    j["worst"] = {{"margin", worst_margin}, {"xi", worst_xi},
                  {"xi0", worst_xi0}, {"label", worst_label}};
    j["max_quadrature_error"] = max_quad_error;
    j["parameters"] = parameters;
    j["thresholds"] = thresholds;
    return j.dump(2) + "\n";
}

void Certificate::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("certificate: cannot open " + path);
    os.precision(17);
    os << "schema_version,1\n";
    os << "xi,xi0,drift_term,dissipation_term,margin,quad_error,label\n";
    for (const auto& s : samples)
        os << s.xi << ',' << s.xi0 << ',' << s.drift_term << ','
           << s.dissipation_term << ',' << s.margin << ',' << s.quad_error
           << ',' << s.label << '\n';
}

} // namespace certify
} // namespace gqg
