#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "fhlab/grid.hpp"

namespace fhlab {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// FRH1 layout (all little-endian):
//   bytes 0..3   "FRH1"
//   bytes 4..7   u32 format version (1)
//   bytes 8..15  reserved, zero
//   u32 dim, u32 n, f64 L, then (f64 re, f64 im) per sample, row-major.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& os, const FieldState& field);
FieldState read_snapshot(std::istream& is);

void save_snapshot(const std::filesystem::path& path, const FieldState& field);
FieldState load_snapshot(const std::filesystem::path& path);

}  // namespace fhlab
