#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "flowsentry/core.hpp"

namespace flowsentry::pcap {

enum class ByteOrder { kLittle, kBig };
enum class TsResolution { kMicro, kNano };

// Classic libpcap magics. The file's byte order is whatever order makes the
// first four bytes read back as one of the two canonical values.
inline constexpr std::uint32_t kMagicMicro = 0xa1b2c3d4;
inline constexpr std::uint32_t kMagicNano = 0xa1b23c4d;

// Sequential reader over an in-memory classic pcap byte stream. The reader
// borrows the buffer; the caller keeps it alive. Only linktype 1 (Ethernet)
// is accepted. Nanosecond timestamps are truncated to microseconds.
class PcapReader {
 public:
  ByteOrder byte_order() const { return byte_order_; }
  TsResolution ts_resolution() const { return ts_resolution_; }
  std::uint32_t snaplen() const { return snaplen_; }
  std::uint32_t linktype() const { return linktype_; }

  // Decodes the next packet, or nullopt at clean end of file.
  // Throws Truncated / MalformedHeader on damaged records.
  std::optional<PacketRecord> next();

 private:
  friend PcapReader pcap_open(std::span<const std::byte> bytes);

  std::span<const std::byte> data_;
  std::size_t pos_ = 0;
  ByteOrder byte_order_ = ByteOrder::kLittle;
  TsResolution ts_resolution_ = TsResolution::kMicro;
  std::uint32_t snaplen_ = 0;
  std::uint32_t linktype_ = 0;
};

// Decodes the 24-byte global header and positions the reader at the first
// record. Throws BadMagic, UnsupportedLinkType, Truncated.
PcapReader pcap_open(std::span<const std::byte> bytes);

// Convenience: open and drain a whole stream.
std::vector<PacketRecord> pcap_read_all(std::span<const std::byte> bytes);

// Serializes packets as a little-endian microsecond-resolution classic pcap
// with synthetic Ethernet/IPv4 frames (zero payload bytes, valid checksums).
// Reading the output back reproduces the input records exactly.
std::vector<std::byte> pcap_write(std::span<const PacketRecord> packets);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::byte> bytes);

}  // namespace flowsentry::pcap
