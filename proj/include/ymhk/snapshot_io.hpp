#pragma once

// Binary snapshot format (little-endian), one record per field:
//
//   "YMHK" | version u32 | group u8 | rank u8 | N u32 | L f64 | t f64 | k u32 |
//   payload f64[N^4 * 4^rank * dim] in storage order
//
// A flow state is written as two consecutive records: A (rank 1) then u (rank 0).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ymhk/flow.hpp"

namespace ymhk::io {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'Y', 'M', 'H', 'K'};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
template <typename T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}
template <typename T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw FormatError("truncated snapshot");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}
}  // namespace detail

struct FieldRecord {
  TensorField field;
  double t = 0.0;
  std::uint32_t k = 0;
};

inline void write_field(std::ostream& os, const TensorField& f, double t, int k) {
  os.write(kMagic, 4);
  detail::put_le<std::uint32_t>(os, kFormatVersion);
  detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(f.group().tag));
  detail::put_le<std::uint8_t>(os, static_cast<std::uint8_t>(f.rank()));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.geom().n()));
  detail::put_le<double>(os, f.geom().side());
  detail::put_le<double>(os, t);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(k));
  for (double v : f.values()) detail::put_le<double>(os, v);
}

inline FieldRecord read_field(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad snapshot magic");
  const auto version = detail::get_le<std::uint32_t>(is);
  if (version != kFormatVersion) throw FormatError("unsupported snapshot version " + std::to_string(version));
  const auto tag = detail::get_le<std::uint8_t>(is);
  if (tag > 1) throw FormatError("unknown group tag");
  const auto rank = detail::get_le<std::uint8_t>(is);
  const auto n = detail::get_le<std::uint32_t>(is);
  const auto side = detail::get_le<double>(is);
  FieldRecord rec;
  rec.t = detail::get_le<double>(is);
  rec.k = detail::get_le<std::uint32_t>(is);
  rec.field = TensorField(LatticeGeom(static_cast<int>(n), side), rank, GroupSpec{static_cast<Group>(tag)});
  for (double& v : rec.field.values()) v = detail::get_le<double>(is);
  return rec;
}

inline void write_state(std::ostream& os, const FlowState& s) {
  write_field(os, s.A, s.t, s.k);
  write_field(os, s.u, s.t, s.k);
}

inline FlowState read_state(std::istream& is) {
  auto a = read_field(is);
  auto u = read_field(is);
  if (a.field.rank() != 1 || u.field.rank() != 0) throw FormatError("state records out of order");
  return {a.t, std::move(a.field), std::move(u.field), static_cast<int>(a.k)};
}

inline void save_state(const std::string& path, const FlowState& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_state(os, s);
}

inline FlowState load_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_state(is);
}

/// One row per site: site, x1..x4 (lattice indices), pointwise norm.
inline void write_site_norms_csv(std::ostream& os, const TensorField& f) {
  os << "site,x1,x2,x3,x4,norm\n";
  char buf[64];
  for (std::size_t s = 0; s < f.geom().sites(); ++s) {
    const Coord c = f.geom().coord(s);
    std::snprintf(buf, sizeof buf, "%.17g", pointwise_norm(f, s));
    os << s << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << ',' << buf << '\n';
  }
}

}  // namespace ymhk::io
