#include "gqg/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace gqg {

namespace fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

// One plan pair per grid size, created against scratch buffers and reused
// via the new-array execute interface (thread safe per FFTW docs).
PlanPair& plans_for(std::size_t n) {
    static std::map<std::size_t, PlanPair> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const int ni = static_cast<int>(n);
    fftw_complex* buf = fftw_alloc_complex(n * n);
    PlanPair p;
    p.fwd = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_2d(ni, ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(buf);
    return cache.emplace(n, p).first->second;
}

} // namespace

void forward(const Grid2D& grid, const std::vector<double>& phys,
             std::vector<std::complex<double>>& spec) {
    const std::size_t n = grid.n();
    spec.resize(n * n);
    std::vector<std::complex<double>> in(n * n);
    for (std::size_t i = 0; i < n * n; ++i) in[i] = phys[i];

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = plans_for(n).fwd;
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(spec.data()));
}

void backward(const Grid2D& grid, const std::vector<std::complex<double>>& spec,
              std::vector<double>& phys) {
    const std::size_t n = grid.n();
    std::vector<std::complex<double>> out(n * n);
    std::vector<std::complex<double>> in(spec);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = plans_for(n).bwd;
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));

    phys.resize(n * n);
    const double scale = 1.0 / static_cast<double>(n * n);
    for (std::size_t i = 0; i < n * n; ++i) phys[i] = out[i].real() * scale;
}

} // namespace fft

ScalarField2D::ScalarField2D(const Grid2D& grid)
    : grid_(grid), phys_(grid.size(), 0.0), spec_(grid.size(), {0.0, 0.0}) {
    physical_valid_ = true;
    spectral_valid_ = true;
}

void ScalarField2D::ensure_physical() const {
    if (physical_valid_) return;
    fft::backward(grid_, spec_, phys_);
    physical_valid_ = true;
}

void ScalarField2D::ensure_spectral() const {
    if (spectral_valid_) return;
    fft::forward(grid_, phys_, spec_);
    spectral_valid_ = true;
}

const std::vector<double>& ScalarField2D::physical() const {
    ensure_physical();
    return phys_;
}

std::vector<double>& ScalarField2D::physical_mut() {
    ensure_physical();
    spectral_valid_ = false;
    return phys_;
}

double& ScalarField2D::at(std::size_t ix, std::size_t iy) {
    return physical_mut()[iy * grid_.n() + ix];
}

double ScalarField2D::at(std::size_t ix, std::size_t iy) const {
    return physical()[iy * grid_.n() + ix];
}

const std::vector<std::complex<double>>& ScalarField2D::spectral() const {
    ensure_spectral();
    return spec_;
}

std::vector<std::complex<double>>& ScalarField2D::spectral_mut() {
    ensure_spectral();
    physical_valid_ = false;
    return spec_;
}

std::complex<double> ScalarField2D::coeff(std::size_t i, std::size_t j) const {
    return spectral()[j * grid_.n() + i];
}

double ScalarField2D::l2_norm() const {
    const auto& p = physical();
    double s = 0.0;
    for (double v : p) s += v * v;
    const double cell = grid_.dx() * grid_.dx();
    return std::sqrt(s * cell);
}

double ScalarField2D::linf_norm() const {
    const auto& p = physical();
    double m = 0.0;
    for (double v : p) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField2D::mean() const {
    const auto& p = physical();
    double s = 0.0;
    for (double v : p) s += v;
    return s / static_cast<double>(p.size());
}

double ScalarField2D::l2_norm_spectral() const {
    const auto& c = spectral();
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    // Parseval with the unnormalized forward transform: sum|f|^2 = sum|c|^2/n^2.
    const double n2 = static_cast<double>(grid_.size());
    const double cell = grid_.dx() * grid_.dx();
    return std::sqrt(s / n2 * cell);
}

double ScalarField2D::hermitian_defect() const {
    const auto& c = spectral();
    const std::size_t n = grid_.n();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t in = (n - i) % n;
            const std::size_t jn = (n - j) % n;
            const auto d = c[jn * n + in] - std::conj(c[j * n + i]);
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

double VectorField2D::linf_norm() const {
    const auto& px = x.physical();
    const auto& py = y.physical();
    double m = 0.0;
    for (std::size_t i = 0; i < px.size(); ++i)
        m = std::max(m, std::hypot(px[i], py[i]));
    return m;
}

double VectorField2D::max_spectral_divergence() const {
    const auto& cx = x.spectral();
    const auto& cy = y.spectral();
    const Grid2D& g = x.grid();
    const std::size_t n = g.n();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double ky = g.wavenumber(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double kx = g.wavenumber(i);
            worst = std::max(worst, std::abs(kx * cx[j * n + i] + ky * cy[j * n + i]));
        }
    }
    return worst;
}

} // namespace gqg
