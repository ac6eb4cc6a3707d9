#pragma once

// Binary cycle file:
//   "GCYC" | version u8 | modulus: u8 length + big-endian bytes | phi u64 LE |
//   crc32 u32 LE of the payload | payload: LEB128 varints of gap/2
//
// Odd gaps (only possible for odd N) are not representable and rejected.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include "gapsieve/cycle.hpp"

namespace gapsieve {

inline constexpr std::uint8_t kCycleFormatVersion = 1;

struct CycleFileInfo {
  std::uint64_t modulus = 0;
  std::uint64_t phi = 0;
  std::uint32_t crc = 0;
};

void write_cycle(std::ostream& out, const GapCycle& cycle);
GapCycle read_cycle(std::istream& in);

void save_cycle(const std::string& path, const GapCycle& cycle);
GapCycle load_cycle(const std::string& path);

/// Emits every gap of a cycle to the given sink, in order; must produce the
/// same sequence each time it is called.
using GapProducer = std::function<void(const std::function<void(Gap)>&)>;

/// Writes a cycle that is never materialized. The producer runs twice: once
/// for the checksum, once for the payload.
CycleFileInfo write_streamed(std::ostream& out, std::uint64_t modulus, std::uint64_t phi, const GapProducer& produce);

/// Header only; leaves the stream at the first payload byte.
CycleFileInfo read_header(std::istream& in);

}  // namespace gapsieve
