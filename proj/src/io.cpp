#include "oscicell/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oscicell/errors.hpp"

namespace oscicell::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path dir = path.parent_path();
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

std::string Csv::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

void write_csv(const std::filesystem::path& path, const Csv& table) {
  atomic_write(path, table.to_string());
}

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  Csv out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.empty() || line.back() == ',') cells.push_back("");
    if (first) {
      out.header = std::move(cells);
      first = false;
    } else {
      out.rows.push_back(std::move(cells));
    }
  }
  return out;
}

void write_ndjson(const std::filesystem::path& path,
                  const std::vector<nlohmann::json>& records) {
  std::string bytes;
  for (const auto& rec : records) {
    bytes += rec.dump();
    bytes += '\n';
  }
  atomic_write(path, bytes);
}

void write_bytes(const std::filesystem::path& path,
                 const std::vector<std::uint8_t>& bytes) {
  atomic_write(path,
               std::string(reinterpret_cast<const char*>(bytes.data()),
                           bytes.size()));
}

}  // namespace oscicell::io
