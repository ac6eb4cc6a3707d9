#include "gapsieve/cycle_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <zlib.h>

#include "gapsieve/errors.hpp"

namespace gapsieve {

namespace {

constexpr std::array<char, 4> kMagic{'G', 'C', 'Y', 'C'};

std::size_t encode_varint(std::uint32_t v, std::uint8_t* buf) {
  std::size_t n = 0;
  while (v >= 0x80) {
    buf[n++] = static_cast<std::uint8_t>(v | 0x80);
    v >>= 7;
  }
  buf[n++] = static_cast<std::uint8_t>(v);
  return n;
}

// Buffers encoded gaps and feeds them to a byte sink in chunks.
class PayloadEncoder {
 public:
  explicit PayloadEncoder(std::function<void(const std::uint8_t*, std::size_t)> sink) : sink_(std::move(sink)) {
    buf_.reserve(kChunk + 8);
  }

  void push(Gap g) {
    if (g == 0 || g % 2 != 0) throw FormatError("cycle file stores positive even gaps only");
    std::uint8_t tmp[8];
    const std::size_t n = encode_varint(g / 2, tmp);
    buf_.insert(buf_.end(), tmp, tmp + n);
    ++count_;
    if (buf_.size() >= kChunk) flush();
  }

  void flush() {
    if (!buf_.empty()) sink_(buf_.data(), buf_.size());
    buf_.clear();
  }

  std::uint64_t count() const { return count_; }

 private:
  static constexpr std::size_t kChunk = 1 << 16;
  std::function<void(const std::uint8_t*, std::size_t)> sink_;
  std::vector<std::uint8_t> buf_;
  std::uint64_t count_ = 0;
};

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == EOF) throw FormatError("truncated cycle header");
    v |= static_cast<std::uint64_t>(c) << (8 * i);
  }
  return v;
}

void write_header(std::ostream& out, const CycleFileInfo& info) {
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kCycleFormatVersion));
  std::vector<std::uint8_t> be;
  for (std::uint64_t m = info.modulus; m != 0; m >>= 8) be.insert(be.begin(), static_cast<std::uint8_t>(m & 0xff));
  out.put(static_cast<char>(be.size()));
  out.write(reinterpret_cast<const char*>(be.data()), static_cast<std::streamsize>(be.size()));
  put_le(out, info.phi, 8);
  put_le(out, info.crc, 4);
}

std::uint32_t crc_update(std::uint32_t crc, const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(::crc32(crc, data, static_cast<uInt>(n)));
}

}  // namespace

CycleFileInfo read_header(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("not a cycle file (bad magic)");
  const int version = in.get();
  if (version != kCycleFormatVersion) throw FormatError("unsupported cycle file version " + std::to_string(version));
  const int len = in.get();
  if (len == EOF || len > 8) throw FormatError("modulus does not fit in 64 bits");
  CycleFileInfo info;
  for (int i = 0; i < len; ++i) {
    const int c = in.get();
    if (c == EOF) throw FormatError("truncated modulus");
    info.modulus = (info.modulus << 8) | static_cast<std::uint64_t>(c);
  }
  info.phi = get_le(in, 8);
  info.crc = static_cast<std::uint32_t>(get_le(in, 4));
  return info;
}

void write_cycle(std::ostream& out, const GapCycle& cycle) {
  std::vector<std::uint8_t> payload;
  PayloadEncoder enc([&](const std::uint8_t* d, std::size_t n) { payload.insert(payload.end(), d, d + n); });
  for (Gap g : cycle.gaps()) enc.push(g);
  enc.flush();
  CycleFileInfo info{cycle.modulus(), cycle.size(), crc_update(0, payload.data(), payload.size())};
  write_header(out, info);
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out) throw ResourceError("write failed");
}

GapCycle read_cycle(std::istream& in) {
  const auto info = read_header(in);
  if (info.phi > (1ull << 34)) throw ResourceError("cycle too large to load");
  std::vector<Gap> gaps;
  gaps.reserve(info.phi);
  auto crc = static_cast<std::uint32_t>(::crc32(0, nullptr, 0));
  std::uint64_t cur = 0;
  int shift = 0;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    crc = crc_update(crc, reinterpret_cast<const std::uint8_t*>(buf.data()), got);
    for (std::size_t i = 0; i < got; ++i) {
      const auto b = static_cast<std::uint8_t>(buf[i]);
      cur |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (b & 0x80) {
        shift += 7;
        if (shift > 28) throw FormatError("varint too long");
        continue;
      }
      if (cur == 0 || cur > 0x7fffffff) throw FormatError("gap out of range");
      if (gaps.size() == info.phi) throw FormatError("more gaps than the header declares");
      gaps.push_back(static_cast<Gap>(cur * 2));
      cur = 0;
      shift = 0;
    }
  }
  if (shift != 0) throw FormatError("truncated varint");
  if (gaps.size() != info.phi) throw FormatError("fewer gaps than the header declares");
  if (crc != info.crc) throw FormatError("checksum mismatch");
  try {
    return GapCycle(info.modulus, std::move(gaps));
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("inconsistent cycle file: ") + e.what());
  }
}

void save_cycle(const std::string& path, const GapCycle& cycle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot open " + path + " for writing");
  write_cycle(out, cycle);
}

GapCycle load_cycle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_cycle(in);
}

CycleFileInfo write_streamed(std::ostream& out, std::uint64_t modulus, std::uint64_t phi, const GapProducer& produce) {
  CycleFileInfo info{modulus, phi, static_cast<std::uint32_t>(::crc32(0, nullptr, 0))};
  std::uint64_t sum = 0;
  {
    PayloadEncoder enc([&](const std::uint8_t* d, std::size_t n) { info.crc = crc_update(info.crc, d, n); });
    produce([&](Gap g) {
      sum += g;
      enc.push(g);
    });
    enc.flush();
    if (enc.count() != phi || sum != modulus) throw FormatError("producer does not match the declared cycle");
  }
  write_header(out, info);
  PayloadEncoder enc([&](const std::uint8_t* d, std::size_t n) {
    out.write(reinterpret_cast<const char*>(d), static_cast<std::streamsize>(n));
  });
  produce([&](Gap g) { enc.push(g); });
  enc.flush();
  if (!out) throw ResourceError("write failed");
  return info;
}

}  // namespace gapsieve
