#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "savkin/collision.hpp"

namespace savkin {

namespace {

constexpr std::array<char, 8> kMagic{'K', 'S', 'A', 'V', 'M', 'O', 'D', 'E'};
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), n); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw Error(ErrorKind::io, "write to " + path.string() + " failed");
  }

 private:
  void le(std::uint64_t v, int n) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < n; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out_.write(reinterpret_cast<const char*>(b.data()), n);
  }
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw Error(ErrorKind::io, "cannot open " + path.string());
  }
  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), n);
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(ErrorKind::corrupt_file, path_.string() + " is truncated");
    }
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::uint64_t le(int n) {
    std::array<unsigned char, 8> b{};
    bytes(b.data(), n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::ifstream in_;
  std::filesystem::path path_;
};

// Tables are serialized as interleaved (re, im) little-endian doubles.
std::vector<unsigned char> encode(std::span<const Complex> values) {
  std::vector<unsigned char> buf(values.size() * 16);
  std::size_t p = 0;
  for (const auto& z : values) {
    for (double x : {z.real(), z.imag()}) {
      auto bits = std::bit_cast<std::uint64_t>(x);
      for (int i = 0; i < 8; ++i) buf[p++] = static_cast<unsigned char>(bits >> (8 * i));
    }
  }
  return buf;
}

std::vector<Complex> decode(std::span<const unsigned char> buf) {
  std::vector<Complex> values(buf.size() / 16);
  std::size_t p = 0;
  for (auto& z : values) {
    std::array<double, 2> parts{};
    for (double& x : parts) {
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[p++]) << (8 * i);
      x = std::bit_cast<double>(bits);
    }
    z = Complex(parts[0], parts[1]);
  }
  return values;
}

std::uint64_t fnv1a(std::span<const unsigned char> data) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void write_file(const std::filesystem::path& path, const ModesMetadata& m,
                std::span<const Complex> tables) {
  const auto payload = encode(tables);
  Writer w(path);
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(kModesFormatVersion);
  w.u32(static_cast<std::uint32_t>(m.kind));
  w.u32(static_cast<std::uint32_t>(m.n));
  w.f64(m.half_width);
  w.f64(m.kernel_constant);
  w.f64(m.gamma);
  w.f64(m.angular);
  w.f64(m.radius);
  w.u32(static_cast<std::uint32_t>(m.radial_order));
  w.u32(static_cast<std::uint32_t>(m.angular_order));
  w.u64(tables.size());
  w.u64(fnv1a(payload));
  w.bytes(payload.data(), payload.size());
  w.finish(path);
}

std::vector<Complex> read_file(const std::filesystem::path& path, const ModesMetadata& expected,
                               std::size_t expected_count) {
  Reader r(path);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) throw Error(ErrorKind::corrupt_file, path.string() + " is not a mode cache");
  const auto version = r.u32();
  ModesMetadata m;
  m.kind = static_cast<OperatorKind>(r.u32());
  m.n = static_cast<int>(r.u32());
  m.half_width = r.f64();
  m.kernel_constant = r.f64();
  m.gamma = r.f64();
  m.angular = r.f64();
  m.radius = r.f64();
  m.radial_order = static_cast<int>(r.u32());
  m.angular_order = static_cast<int>(r.u32());
  const auto count = r.u64();
  const auto checksum = r.u64();
  if (version != kModesFormatVersion) {
    throw Error(ErrorKind::metadata_mismatch,
                "cache format version " + std::to_string(version) + " is not supported");
  }
  if (!(m == expected)) {
    throw Error(ErrorKind::metadata_mismatch,
                path.string() + " was built for a different grid, kernel or quadrature");
  }
  if (count != expected_count) {
    throw Error(ErrorKind::corrupt_file, path.string() + " has an inconsistent table size");
  }
  std::vector<unsigned char> payload(count * 16);
  r.bytes(payload.data(), payload.size());
  if (!r.at_end()) throw Error(ErrorKind::corrupt_file, path.string() + " has trailing bytes");
  if (fnv1a(payload) != checksum) {
    throw Error(ErrorKind::corrupt_file, path.string() + " failed its checksum");
  }
  return decode(payload);
}

}  // namespace

void save_modes(const BoltzmannModes& modes, const std::filesystem::path& path) {
  std::vector<Complex> tables;
  tables.reserve(modes.coupling().size() + modes.loss().size());
  for (double b : modes.coupling()) tables.emplace_back(b, 0.0);
  for (double b : modes.loss()) tables.emplace_back(b, 0.0);
  write_file(path, modes.metadata(), tables);
}

void save_modes(const LandauModes& modes, const std::filesystem::path& path) {
  std::vector<Complex> tables;
  tables.reserve(3 * modes.grid().point_count());
  for (const auto* t : {&modes.a11(), &modes.a12(), &modes.a22()}) {
    tables.insert(tables.end(), t->begin(), t->end());
  }
  write_file(path, modes.metadata(), tables);
}

BoltzmannModes load_boltzmann_modes(const std::filesystem::path& path, const VelocityGrid& grid,
                                    const ModesMetadata& expected) {
  const std::size_t nc = BoltzmannModes::coupling_size(grid.size());
  const auto tables = read_file(path, expected, nc + grid.point_count());
  std::vector<double> coupling(nc), loss(grid.point_count());
  for (std::size_t i = 0; i < nc; ++i) coupling[i] = tables[i].real();
  for (std::size_t i = 0; i < loss.size(); ++i) loss[i] = tables[nc + i].real();
  return BoltzmannModes(grid, expected, std::move(coupling), std::move(loss));
}

LandauModes load_landau_modes(const std::filesystem::path& path, const VelocityGrid& grid,
                              const ModesMetadata& expected) {
  const std::size_t np = grid.point_count();
  const auto tables = read_file(path, expected, 3 * np);
  auto at = [&](std::size_t k) {
    return std::vector<Complex>(tables.begin() + k * np, tables.begin() + (k + 1) * np);
  };
  return LandauModes(grid, expected, at(0), at(1), at(2));
}

}  // namespace savkin
