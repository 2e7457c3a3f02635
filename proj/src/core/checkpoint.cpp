#include "qpse/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "qpse/errors.hpp"

namespace qpse {

namespace {

constexpr std::array<char, 4> kMagic{'Q', 'P', 'S', '1'};

template <class U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("checkpoint truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_double(std::ostream& out, double v) { put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v)); }
double get_double(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

void write_checkpoint(std::ostream& out, const SpectralState& state, MethodTag tag) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tag));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(state.n()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(state.bounding_halfwidth()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(state.size()));
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (int v : state.index(i)) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v));
    put_double(out, state.value(i).real());
    put_double(out, state.value(i).imag());
  }
  if (!out) throw FormatError("failed writing checkpoint");
}

void write_checkpoint(const std::filesystem::path& path, const SpectralState& state, MethodTag tag) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, state, tag);
}

Checkpoint read_checkpoint(std::istream& in, ProjectionPtr projection) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("not a QPS1 checkpoint");
  const auto tag = get_le<std::uint32_t>(in);
  if (tag > static_cast<std::uint32_t>(MethodTag::QSM)) throw FormatError("unknown method tag in checkpoint");
  const auto n = get_le<std::uint32_t>(in);
  const auto box = get_le<std::uint32_t>(in);
  const auto count = get_le<std::uint64_t>(in);
  if (!projection || n != projection->n()) throw FormatError("checkpoint lattice dimension does not match projection");

  SpectralStateBuilder builder(projection);
  builder.reserve(static_cast<std::size_t>(count));
  std::vector<int> k(n);
  for (std::uint64_t i = 0; i < count; ++i) {
    for (auto& v : k) v = static_cast<int>(get_le<std::uint32_t>(in));
    const double re = get_double(in);
    const double im = get_double(in);
    builder.add(k, Complex(re, im));
  }
  return Checkpoint{std::move(builder).build(), static_cast<MethodTag>(tag), box};
}

Checkpoint read_checkpoint(const std::filesystem::path& path, ProjectionPtr projection) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_checkpoint(in, std::move(projection));
}

void write_text(std::ostream& out, const SpectralState& state) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::scientific << std::setprecision(16);
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (int v : state.index(i)) out << v << ' ';
    out << state.value(i).real() << ' ' << state.value(i).imag() << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

SpectralState read_text(std::istream& in, ProjectionPtr projection) {
  SpectralStateBuilder builder(projection);
  const std::size_t n = projection->n();
  std::vector<int> k(n);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    for (auto& v : k) row >> v;
    double re = 0.0;
    double im = 0.0;
    row >> re >> im;
    if (!row) throw FormatError("malformed mode on line " + std::to_string(line_no));
    builder.add(k, Complex(re, im));
  }
  return std::move(builder).build();
}

}  // namespace qpse
