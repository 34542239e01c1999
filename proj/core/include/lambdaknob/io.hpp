#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lambdaknob::io {

/// Full-precision scientific notation (17 significant digits) so reruns are
/// byte-comparable.
std::string format_number(double value);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);

/// Writes via a temporary file in the same directory followed by a rename,
/// so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace lambdaknob::io
