#include "paradiag/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace paradiag {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", v);  // 9 significant digits
  return buf;
}

std::string format_int(long v) { return std::to_string(v); }

static std::string escape_field(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + tmp);
    auto write_row = [&out](const std::vector<std::string>& row) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape_field(row[i]);
      }
      out << "\r\n";
    };
    write_row(header);
    for (const auto& row : rows) {
      if (row.size() != header.size())
        throw std::runtime_error("emit_csv: row width differs from header");
      write_row(row);
    }
    out.flush();
    if (!out) throw std::runtime_error("emit_csv: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace paradiag
