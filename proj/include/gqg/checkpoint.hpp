#pragma once

#include <string>

#include "gqg/field.hpp"

namespace gqg {
namespace checkpoint {

/// Binary field checkpoint.
/// Layout: magic "GQGF", u32 version, u32 endian tag (0x01020304 as written),
/// u32 representation flag (0 = physical, 1 = spectral), u64 n, f64 L,
/// then row-major 64-bit payload (n*n doubles, or n*n complex pairs).
void save(const ScalarField2D& field, const std::string& path,
          bool spectral = false);
ScalarField2D load(const std::string& path);

/// Plain-text debugging export: one CSV row per grid row of physical values.
void export_csv(const ScalarField2D& field, const std::string& path);

} // namespace checkpoint
} // namespace gqg
