#include "fhlab/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace fhlab {
namespace {

constexpr std::array<char, 4> kMagic{'F', 'R', 'H', '1'};

template <class U>
void put_le(std::ostream& os, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  os.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!is) throw SnapshotError("snapshot: truncated file");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& os, double x) { put_le(os, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void write_snapshot(std::ostream& os, const FieldState& field) {
  field.validate();
  const GridSpec& g = field.grid;
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kSnapshotVersion);
  put_le<std::uint64_t>(os, 0);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.points_per_axis()));
  put_f64(os, g.half_width());
  for (const auto& z : field.values) {
    put_f64(os, z.real());
    put_f64(os, z.imag());
  }
  if (!os) throw SnapshotError("snapshot: write failed");
}

FieldState read_snapshot(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw SnapshotError("snapshot: bad magic (not an FRH1 file)");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kSnapshotVersion)
    throw SnapshotError("snapshot: unsupported version " + std::to_string(version));
  (void)get_le<std::uint64_t>(is);
  const auto dim = get_le<std::uint32_t>(is);
  const auto n = get_le<std::uint32_t>(is);
  const double L = get_f64(is);
  GridSpec grid = [&] {
    try {
      return GridSpec(static_cast<int>(dim), L, static_cast<int>(n));
    } catch (const std::invalid_argument& e) {
      throw SnapshotError(std::string("snapshot: invalid grid header: ") + e.what());
    }
  }();
  FieldState field(grid);
  for (auto& z : field.values) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    z = Complex(re, im);
  }
  if (!field.all_finite()) throw SnapshotError("snapshot: non-finite sample");
  return field;
}

void save_snapshot(const std::filesystem::path& path, const FieldState& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SnapshotError("snapshot: cannot open " + path.string() + " for writing");
  write_snapshot(os, field);
}

FieldState load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SnapshotError("snapshot: cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace fhlab
