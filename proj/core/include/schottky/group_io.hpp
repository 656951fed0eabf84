#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "schottky/schottky_group.hpp"

namespace schottky {

// Group config text: line-oriented key/value format with fields
//   model ("disc" | "halfplane"), rank, one `generator a b c d` line per
//   generator (row-major, determinant one), optional `label`, optional
//   `integer_trace` boolean.  '#' starts a comment.  Numbers are written
//   with 17 significant digits so a write/read round trip is exact.
std::string serialize_group(const SchottkyGroup& g);

// Parses and finalizes a group; rank-1 files load in cylinder mode.  Throws
// std::invalid_argument on malformed text.
SchottkyGroup parse_group(const std::string& text);

void write_group(const SchottkyGroup& g, const std::string& path);
SchottkyGroup read_group(const std::string& path);

// FNV-1a 64-bit hash, used to fingerprint group files in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

// Hash of a file's bytes as a fixed-width hex string.
std::string file_hash_hex(const std::string& path);

} // namespace schottky
