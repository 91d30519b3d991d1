#include "lame/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "lame/error.hpp"

namespace lame {
namespace io {
namespace {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(ErrorKind::Io, "unexpected end of file");
  return to_little(v);
}

}  // namespace

void write_magic(std::ostream& os, std::string_view magic) { os.write(magic.data(), static_cast<std::streamsize>(magic.size())); }

void expect_magic(std::istream& is, std::string_view magic) {
  std::string buf(magic.size(), '\0');
  if (!is.read(buf.data(), static_cast<std::streamsize>(buf.size())) || buf != magic)
    throw Error(ErrorKind::Io, "bad magic, expected " + std::string(magic));
}

void write_u8(std::ostream& os, std::uint8_t v) { put(os, v); }
void write_u32(std::ostream& os, std::uint32_t v) { put(os, v); }
void write_f64(std::ostream& os, double v) { put(os, v); }
std::uint8_t read_u8(std::istream& is) { return get<std::uint8_t>(is); }
std::uint32_t read_u32(std::istream& is) { return get<std::uint32_t>(is); }
double read_f64(std::istream& is) { return get<double>(is); }

void write_grid_header(std::ostream& os, const Grid& g) {
  write_u32(os, static_cast<std::uint32_t>(g.n));
  write_u32(os, static_cast<std::uint32_t>(g.N));
  write_f64(os, g.L);
}

Grid read_grid_header(std::istream& is) {
  const auto n = read_u32(is);
  const auto N = read_u32(is);
  const double L = read_f64(is);
  if (n > 8 || N > (1u << 16)) throw Error(ErrorKind::Io, "implausible grid header");
  try {
    return Grid::make(static_cast<int>(n), static_cast<int>(N), L);
  } catch (const Error& e) {
    throw Error(ErrorKind::Io, std::string("invalid grid header: ") + e.what());
  }
}

void write_payload(std::ostream& os, const Field& f) {
  std::vector<double> buf;
  buf.reserve(2 * f.points());
  for (int j = 0; j < f.components(); ++j) {
    buf.clear();
    for (const cplx& v : f.component(j)) {
      buf.push_back(to_little(v.real()));
      buf.push_back(to_little(v.imag()));
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
  }
  if (!os) throw Error(ErrorKind::Io, "write failed");
}

void read_payload(std::istream& is, Field& f) {
  std::vector<double> buf(2 * f.points());
  for (int j = 0; j < f.components(); ++j) {
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double))))
      throw Error(ErrorKind::Io, "truncated field payload");
    auto c = f.component(j);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx(to_little(buf[2 * i]), to_little(buf[2 * i + 1]));
  }
}

}  // namespace io

void write_field(const std::filesystem::path& path, const Field& f) {
  if (!f.is_vector()) throw Error(ErrorKind::ContractViolation, "field files hold vector fields");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + path.string());
  io::write_magic(os, "LAMEFLD1");
  io::write_grid_header(os, f.grid());
  io::write_u8(os, static_cast<std::uint8_t>(f.representation()));
  io::write_payload(os, f);
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
  io::expect_magic(is, "LAMEFLD1");
  const Grid g = io::read_grid_header(is);
  const auto rep = io::read_u8(is);
  if (rep > 1) throw Error(ErrorKind::Io, "unknown representation tag");
  Field f = Field::vector(g, static_cast<Representation>(rep));
  io::read_payload(is, f);
  return f;
}

}  // namespace lame
