#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "qpse/spectral_state.hpp"

namespace qpse {

enum class MethodTag : std::uint32_t { None = 0, PM = 1, QSM = 2 };

/// Binary checkpoint layout, all fields little-endian:
///
///   offset  size  field
///   0       4     magic "QPS1"
///   4       4     method tag (uint32, see MethodTag)
///   8       4     n (uint32)
///   12      4     bounding half-width N (uint32, smallest N with support in K_N^n)
///   16      8     mode count (uint64)
///   24      ...   per mode: n x int32 index, float64 real, float64 imag
///
/// The projection matrix is not stored; the reader supplies it.
void write_checkpoint(std::ostream& out, const SpectralState& state, MethodTag tag = MethodTag::None);
void write_checkpoint(const std::filesystem::path& path, const SpectralState& state,
                      MethodTag tag = MethodTag::None);

struct Checkpoint {
  SpectralState state;
  MethodTag tag;
  std::uint32_t bounding_halfwidth;
};

/// Throws FormatError on a bad magic, truncated data or an n that does not
/// match the projection.
Checkpoint read_checkpoint(std::istream& in, ProjectionPtr projection);
Checkpoint read_checkpoint(const std::filesystem::path& path, ProjectionPtr projection);

/// One mode per line: "k_1 ... k_n real imag", values with 17 significant digits.
void write_text(std::ostream& out, const SpectralState& state);
SpectralState read_text(std::istream& in, ProjectionPtr projection);

}  // namespace qpse
