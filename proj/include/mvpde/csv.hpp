#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace mvpde {

using Samples = std::vector<std::pair<double, double>>;

/// Two-column CSV with header `<key>,value` (key is "x" or "s"), comma
/// separated, one pair per line.
Samples read_two_column_csv(std::istream& in, const std::string& key);
Samples read_two_column_csv(const std::filesystem::path& path,
                            const std::string& key);

/// Shortest round-trip decimal text (17 significant digits).
std::string format_real(double v);

}  // namespace mvpde
