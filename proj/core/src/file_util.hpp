#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace geoloc::detail {

/// Whole file as bytes; throws InputError naming the path on failure.
std::string read_file(const std::filesystem::path& path);

/// Writes atomically enough for our purposes: truncate then write.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Splits on LF, strips a trailing CR and a leading UTF-8 BOM.
std::vector<std::string_view> split_lines(std::string_view content);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split_on(std::string_view s, char delimiter);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Incremental 64-bit FNV-1a.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  void update(std::uint64_t value);
  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::string hex64(std::uint64_t value);

}  // namespace geoloc::detail
