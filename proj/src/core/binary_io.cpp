#include "incde/core/binary_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "incde/core/errors.hpp"

namespace incde {

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffULL) << (8 * (7 - i));
    return r;
  }
  return v;
}

}  // namespace

void write_f64(const std::filesystem::path& path, std::span<const double> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  std::vector<std::uint64_t> buf(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) buf[i] = to_little(std::bit_cast<std::uint64_t>(data[i]));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::vector<double> read_f64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % 8 != 0) throw ConfigError(path.string() + ": size is not a multiple of 8 bytes");
  in.seekg(0);
  std::vector<std::uint64_t> buf(bytes / 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = std::bit_cast<double>(to_little(buf[i]));
  return out;
}

std::vector<double> read_f64(const std::filesystem::path& path, std::size_t expected_count) {
  auto v = read_f64(path);
  if (v.size() != expected_count)
    throw ConfigError(path.string() + ": expected " + std::to_string(expected_count) + " values, found " +
                      std::to_string(v.size()));
  return v;
}

}  // namespace incde
