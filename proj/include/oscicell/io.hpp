#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace oscicell::io {

// Full-precision decimal rendering (17 significant digits).
std::string format_double(double x);

// Atomic write: temp file in the target directory, then rename.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

// CSV with a header row, LF line endings.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
  std::string to_string() const;
};

void write_csv(const std::filesystem::path& path, const Csv& table);

// Minimal reader for round-trip tests and post-processing.
Csv read_csv(const std::filesystem::path& path);

// One JSON record per line.
void write_ndjson(const std::filesystem::path& path,
                  const std::vector<nlohmann::json>& records);

void write_bytes(const std::filesystem::path& path,
                 const std::vector<std::uint8_t>& bytes);

}  // namespace oscicell::io
