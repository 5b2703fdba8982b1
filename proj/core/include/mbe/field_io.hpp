#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "mbe/field.hpp"

namespace mbe {

// Binary layout (little-endian):
//   0  char[4]  "MBEF"
//   4  uint32   version (1)
//   8  uint32   dimension
//  12  uint32   points per axis
//  16  float64  box length
//  24  uint8[8] reserved, zero
//  32  float64  samples, row-major
inline constexpr std::uint32_t kFieldFormatVersion = 1;
inline constexpr std::size_t kFieldHeaderBytes = 32;

void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in);
void save_field(const std::filesystem::path& path, const Field& f);
Field load_field(const std::filesystem::path& path);

/// One row per sample: index coordinates then value.
void write_field_csv(std::ostream& out, const Field& f);

}  // namespace mbe
