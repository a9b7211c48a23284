#include "gqg/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace gqg {
namespace checkpoint {

namespace {

constexpr char kMagic[4] = {'G', 'Q', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kEndianTag = 0x01020304u;

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

} // namespace

void save(const ScalarField2D& field, const std::string& path, bool spectral) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
    os.write(kMagic, 4);
    put(os, kVersion);
    put(os, kEndianTag);
    put(os, static_cast<std::uint32_t>(spectral ? 1 : 0));
    put(os, static_cast<std::uint64_t>(field.grid().n()));
    put(os, field.grid().box_length());
    if (spectral) {
        for (const auto& c : field.spectral()) {
            put(os, c.real());
            put(os, c.imag());
        }
    } else {
        for (double v : field.physical()) put(os, v);
    }
    if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

ScalarField2D load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    const auto version = get<std::uint32_t>(is);
    if (version != kVersion)
        throw std::runtime_error("checkpoint: unsupported version");
    const auto endian = get<std::uint32_t>(is);
    if (endian != kEndianTag)
        throw std::runtime_error("checkpoint: foreign endianness");
    const auto repr = get<std::uint32_t>(is);
    const auto n = static_cast<std::size_t>(get<std::uint64_t>(is));
    const double L = get<double>(is);

    ScalarField2D field{Grid2D(n, L)};
    if (repr == 1) {
        auto& spec = field.spectral_mut();
        for (auto& c : spec) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            c = {re, im};
        }
    } else {
        auto& phys = field.physical_mut();
        for (auto& v : phys) v = get<double>(is);
    }
    return field;
}

void export_csv(const ScalarField2D& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
    const std::size_t n = field.grid().n();
    const auto& p = field.physical();
    os << std::setprecision(17);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            os << p[j * n + i];
            os << (i + 1 == n ? '\n' : ',');
        }
    }
}

} // namespace checkpoint
} // namespace gqg
