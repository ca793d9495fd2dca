#pragma once

#include <fstream>
#include <filesystem>
#include <string>
#include <vector>

namespace chse::cli {

// RFC-4180 field quoting: fields holding a comma, quote or line break are
// wrapped in quotes with inner quotes doubled.
std::string csv_field(const std::string& s);

// Writes a header on construction; rows must match its width. Lines end in CRLF.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_;
};

// Shortest round-trip decimal for a double.
std::string fmt(double x);

}  // namespace chse::cli
