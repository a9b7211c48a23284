#include <cmath>
#include <random>
#include <unordered_map>

#include "gqg/moc.hpp"

namespace gqg {

namespace {

struct Scan {
    const ScalarField2D& f;
    const Moc& moc;
    std::size_t n;
    double dx;
    const std::vector<double>& vals;
    std::unordered_map<std::uint64_t, double> om_cache;
    ObedienceReport rep;

    Scan(const ScalarField2D& field, const Moc& m)
        : f(field), moc(m), n(field.grid().n()), dx(field.grid().dx()),
          vals(field.physical()) {}

    std::size_t geo(std::size_t a, std::size_t b) const {
        const std::size_t d = a > b ? a - b : b - a;
        return std::min(d, n - d);
    }

    double omega(std::size_t di, std::size_t dj) {
        const std::uint64_t key = std::uint64_t(di) * n + dj;
        auto it = om_cache.find(key);
        if (it != om_cache.end()) return it->second;
        const double r = std::hypot(double(di), double(dj)) * dx;
        const double w = moc.eval(r);
        om_cache.emplace(key, w);
        return w;
    }

    void pair(std::size_t ix1, std::size_t iy1, std::size_t ix2, std::size_t iy2) {
        const std::size_t di = geo(ix1, ix2), dj = geo(iy1, iy2);
        if (di == 0 && dj == 0) return;
        const double diff = std::abs(vals[iy1 * n + ix1] - vals[iy2 * n + ix2]);
        const double w = omega(di, dj);
        const double ratio = w > 0.0 ? diff / w : (diff > 0.0 ? kInf : 0.0);
        ++rep.pairs_checked;
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.witness_a = {ix1, iy1};
            rep.witness_b = {ix2, iy2};
            rep.witness_distance = std::hypot(double(di), double(dj)) * dx;
        }
    }
};

} // namespace

ObedienceReport obeys(const ScalarField2D& f, const Moc& moc,
                      std::size_t exhaustive_limit, std::uint64_t seed) {
    Scan scan(f, moc);
    const std::size_t n = scan.n;

    if (n <= exhaustive_limit) {
        scan.rep.exhaustive = true;
        const std::size_t total = n * n;
        for (std::size_t p = 0; p < total; ++p)
            for (std::size_t q = p + 1; q < total; ++q)
                scan.pair(p % n, p / n, q % n, q / n);
    } else {
        // nearest-neighbor sweep catches the small-scale extremes
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                scan.pair(i, j, (i + 1) % n, j);
                scan.pair(i, j, i, (j + 1) % n);
                scan.pair(i, j, (i + 1) % n, (j + 1) % n);
            }
        // randomly translated coarse sublattices cover the large scales
        const std::size_t stride = std::max<std::size_t>(1, n / 16);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> off(0, stride - 1);
        for (int t = 0; t < 64; ++t) {
            const std::size_t ox = off(rng), oy = off(rng);
            std::vector<std::array<std::size_t, 2>> pts;
            for (std::size_t j = oy; j < n; j += stride)
                for (std::size_t i = ox; i < n; i += stride)
                    pts.push_back({i, j});
            for (std::size_t p = 0; p < pts.size(); ++p)
                for (std::size_t q = p + 1; q < pts.size(); ++q)
                    scan.pair(pts[p][0], pts[p][1], pts[q][0], pts[q][1]);
        }
    }

    scan.rep.obeys = scan.rep.worst_ratio < 1.0;
    return scan.rep;
}

} // namespace gqg
