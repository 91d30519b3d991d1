#pragma once

// Binary field files, little-endian:
//   "LAMEFLD1" | u32 n | u32 N | f64 L_side | u8 representation |
//   components (n of them) in order, each N^n pairs (f64 re, f64 im),
//   row-major with axis 1 slowest.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "lame/grid.hpp"

namespace lame {

void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

namespace io {

void write_magic(std::ostream& os, std::string_view magic);
void expect_magic(std::istream& is, std::string_view magic);
void write_u8(std::ostream& os, std::uint8_t v);
void write_u32(std::ostream& os, std::uint32_t v);
void write_f64(std::ostream& os, double v);
std::uint8_t read_u8(std::istream& is);
std::uint32_t read_u32(std::istream& is);
double read_f64(std::istream& is);

/// u32 n | u32 N | f64 L_side
void write_grid_header(std::ostream& os, const Grid& g);
Grid read_grid_header(std::istream& is);
/// Component payload only (no header).
void write_payload(std::ostream& os, const Field& f);
void read_payload(std::istream& is, Field& f);

}  // namespace io
}  // namespace lame
