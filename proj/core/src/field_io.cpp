#include "mbe/field_io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <string>
#include <fstream>
#include <istream>
#include <ostream>

#include "mbe/error.hpp"

namespace mbe {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), b.size());
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
  const GridSpec& g = f.grid();
  out.write("MBEF", 4);
  put_u32(out, kFieldFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(g.dimension()));
  put_u32(out, static_cast<std::uint32_t>(g.points()));
  put_f64(out, g.length());
  const std::array<char, 8> reserved{};
  out.write(reserved.data(), reserved.size());
  for (double v : f.samples()) put_f64(out, v);
  if (!out) throw Error("failed writing field");
}

Field read_field(std::istream& in) {
  std::array<unsigned char, kFieldHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (!in) throw InvalidArgument("truncated field header");
  if (std::memcmp(header.data(), "MBEF", 4) != 0) throw InvalidArgument("bad field magic");
  const auto version = static_cast<std::uint32_t>(get_le(header.data() + 4, 4));
  if (version != kFieldFormatVersion) {
    throw InvalidArgument("unsupported field format version " + std::to_string(version));
  }
  const auto d = static_cast<int>(get_le(header.data() + 8, 4));
  const auto n = static_cast<int>(get_le(header.data() + 12, 4));
  const double length = std::bit_cast<double>(get_le(header.data() + 16, 8));
  GridSpec grid(d, n, length);

  std::vector<double> samples(grid.size());
  std::vector<unsigned char> raw(samples.size() * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw InvalidArgument("truncated field samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = std::bit_cast<double>(get_le(raw.data() + 8 * i, 8));
  }
  return Field(grid, std::move(samples));
}

void save_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_field(out, f);
}

Field load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_field(in);
}

void write_field_csv(std::ostream& out, const Field& f) {
  const int n = f.grid().points();
  char buf[64];
  if (f.grid().dimension() == 1) {
    out << "i,value\n";
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%d,%.17g\n", i, f[static_cast<std::size_t>(i)]);
      out << buf;
    }
    return;
  }
  out << "i,j,value\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", i, j,
                    f[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(j)]);
      out << buf;
    }
  }
}

}  // namespace mbe
