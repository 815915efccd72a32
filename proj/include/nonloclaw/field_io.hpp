#ifndef NONLOCLAW_FIELD_IO_HPP
#define NONLOCLAW_FIELD_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nonloclaw/grid.hpp"

namespace nonloclaw {

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);
/// Strict parse of a whole string as a double; throws InvalidInput otherwise.
double parse_double(const std::string& text);

// GridField CSV layout:
//
//   # dim,cells,spacing
//   # 2,32 32,0.03125 0.03125
//   0,0,1.25
//   0,1,1.5
//   ...
//
// One row per cell in lexicographic order: the axis indices, then the value.
void write_field_csv(std::ostream& out, const GridField& u);
GridField read_field_csv(std::istream& in);

void write_field_csv(const std::filesystem::path& path, const GridField& u);
GridField read_field_csv(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Hex SHA-256 digest of a byte string.
std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace nonloclaw

#endif
