#include "lambdaknob/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lambdaknob/errors.hpp"

namespace lambdaknob::io {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw ValidationError("csv row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_number(row[c]);
    }
    out << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << contents;
    if (!out.good()) throw ValidationError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  write_file_atomic(path, to_csv(table));
}

}  // namespace lambdaknob::io
