#include "zk/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace zk {

static_assert(std::endian::native == std::endian::little,
              "ZKF1 I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'Z', 'K', 'F', '1'};

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const RealField& u,
                    double time) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write(kMagic, 4);
  const Grid3& g = *u.grid;
  put<std::uint32_t>(os, g.nx());
  put<std::uint32_t>(os, g.ny1());
  put<std::uint32_t>(os, g.ny2());
  put<double>(os, g.lx());
  put<double>(os, g.ly1());
  put<double>(os, g.ly2());
  put<double>(os, time);
  os.write(reinterpret_cast<const char*>(u.v.data()),
           static_cast<std::streamsize>(u.v.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path.string() + ": not a ZKF1 snapshot");
  const auto nx = get<std::uint32_t>(is);
  const auto ny1 = get<std::uint32_t>(is);
  const auto ny2 = get<std::uint32_t>(is);
  const double lx = get<double>(is);
  const double ly1 = get<double>(is);
  const double ly2 = get<double>(is);
  const double time = get<double>(is);
  Snapshot s;
  s.field = RealField(Grid3::make(static_cast<int>(nx), static_cast<int>(ny1),
                                  static_cast<int>(ny2), lx, ly1, ly2));
  s.time = time;
  is.read(reinterpret_cast<char*>(s.field.v.data()),
          static_cast<std::streamsize>(s.field.v.size() * sizeof(double)));
  if (!is) throw std::runtime_error(path.string() + ": truncated snapshot");
  return s;
}

}  // namespace zk
