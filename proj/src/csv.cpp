#include "mvpde/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mvpde/errors.hpp"

namespace mvpde {
namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && s[start] == ' ') ++start;
  return s.substr(start);
}

double parse_real(const std::string& text, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError("csv line " + std::to_string(line) + ": cannot parse '" +
                  text + "' as a number");
  }
}

}  // namespace

Samples read_two_column_csv(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: empty input");
  if (trim(line) != key + ",value") {
    throw IoError("csv: expected header '" + key + ",value', got '" +
                  trim(line) + "'");
  }
  Samples out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw IoError("csv line " + std::to_string(lineno) +
                    ": expected exactly two columns");
    }
    out.emplace_back(parse_real(trim(line.substr(0, comma)), lineno),
                     parse_real(trim(line.substr(comma + 1)), lineno));
  }
  return out;
}

Samples read_two_column_csv(const std::filesystem::path& path,
                            const std::string& key) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_two_column_csv(in, key);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace mvpde
