#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace incde {

/// Raw little-endian float64 arrays.
void write_f64(const std::filesystem::path& path, std::span<const double> data);
std::vector<double> read_f64(const std::filesystem::path& path);
std::vector<double> read_f64(const std::filesystem::path& path, std::size_t expected_count);

}  // namespace incde
