#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace kwlab {

inline constexpr int kSchemaVersion = 1;

using CsvCell = std::variant<double, std::int64_t, std::string>;

struct CsvTable {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<CsvCell>> rows;
  // Extra key=value pairs appended to the schema comment line.
  std::map<std::string, std::string> tags;
};

// 17 significant digits, shortest round-trip for integers.
std::string format_double(double v);

std::string render_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Writes through a temporary sibling and renames.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace kwlab
