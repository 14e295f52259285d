#include "neflab/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace neflab {

static_assert(std::endian::native == std::endian::little,
              "field dumps assume a little-endian host");

namespace {
constexpr char kMagic[4] = {'N', 'E', 'F', 'F'};
}

void dump_field(const PeriodicField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("dump_field: cannot open " + path);
  out.write(kMagic, 4);
  std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
  std::uint32_t N = static_cast<std::uint32_t>(f.grid.N);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&N), 4);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw FormatError("dump_field: short write to " + path);
}

PeriodicField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("load_field: cannot open " + path);
  char magic[4];
  std::uint32_t n = 0, N = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&N), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("load_field: bad magic in " + path);
  Grid grid;
  try {
    grid = Grid(static_cast<int>(n), static_cast<int>(N));
  } catch (const std::invalid_argument& e) {
    throw FormatError("load_field: " + std::string(e.what()) + " in " + path);
  }
  PeriodicField f(grid);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in || in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
    throw FormatError("load_field: truncated payload in " + path);
  if (!f.all_finite()) throw FormatError("load_field: non-finite values in " + path);
  return f;
}

void write_level_csv(const LevelStats& stats, const std::vector<double>& trudinger,
                     const std::string& path) {
  if (trudinger.size() != stats.s_values.size())
    throw std::invalid_argument("write_level_csv: trudinger length mismatch");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("write_level_csv: cannot open " + path);
  out << "s,A_s,tail,omega_measure,trudinger_lhs\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < stats.s_values.size(); ++i)
    out << stats.s_values[i] << ',' << stats.A_s[i] << ',' << stats.tail[i] << ','
        << stats.omega_measure[i] << ',' << trudinger[i] << '\n';
  if (!out) throw FormatError("write_level_csv: short write to " + path);
}

}  // namespace neflab
