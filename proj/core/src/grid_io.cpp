#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "hdl/errors.hpp"
#include "hdl/grid.hpp"

namespace hdl {
namespace {

constexpr std::array<char, 8> kMagic{'H', 'D', 'L', 'G', 'R', 'I', 'D', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw InvalidArgument("load_grid: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void save_grid(const PlanarGrid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("save_grid: cannot open " + path);
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint64_t>(out, g.node_count());
  put_le<double>(out, g.side());
  put_le<std::uint32_t>(out, g.boundary() == BoundaryMode::periodic ? 1u : 0u);
  put_le<std::uint32_t>(out, g.placement() == Placement::lattice ? 1u : 0u);
  for (double v : g.values()) put_le<double>(out, v);
  if (!out) throw InvalidArgument("save_grid: write failed for " + path);
}

PlanarGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("load_grid: cannot open " + path);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw InvalidArgument("load_grid: bad magic in " + path);
  }
  const auto n = get_le<std::uint64_t>(in);
  const auto side = get_le<double>(in);
  const auto boundary = get_le<std::uint32_t>(in);
  const auto placement = get_le<std::uint32_t>(in);
  if (boundary > 1 || placement > 1) throw InvalidArgument("load_grid: bad header flags");
  if (n < 2 || n > (1u << 16)) throw InvalidArgument("load_grid: implausible node count");
  std::vector<double> values(n * n);
  for (auto& v : values) v = get_le<double>(in);
  return PlanarGrid(side, n, boundary ? BoundaryMode::periodic : BoundaryMode::zero_extended,
                    placement ? Placement::lattice : Placement::cell_centered, std::move(values));
}

}  // namespace hdl
