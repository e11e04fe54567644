#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qshape/shape.hpp"

namespace qshape {

enum class PointFormat { autodetect, csv, json };

// Reads a point configuration from CSV ("x,y" per line, optional header,
// '#' comments, blank lines ignored) or JSON (array of [x, y] pairs).
// Autodetection treats text whose first non-space byte is '[' as JSON.
// Point labels are the file order.
PointConfig parse_points(std::string_view text,
                         PointFormat format = PointFormat::autodetect);

// Same grammar, caller-chosen minimum pair count; shared by point files
// (pairs are coordinates) and coefficient files (pairs are re/im parts).
cvector_t parse_pairs(std::string_view text, PointFormat format,
                      std::size_t min_pairs);

// "x,y" rows with 17 significant digits; parse_points round-trips the
// output exactly.
std::string serialize_points_csv(const PointConfig& config);

// Array of [x, y] pairs with 17 significant digits.
std::string serialize_points_json(const PointConfig& config);

// FNV-1a 64-bit digest of raw bytes, for input fingerprints in result
// documents.
std::uint64_t fnv1a64(std::string_view bytes);

// Whole file as bytes; throws IoError.
std::string read_file(const std::string& path);

// Creates parent directories as needed; throws IoError.
void write_file(const std::string& path, std::string_view bytes);

} // namespace qshape
