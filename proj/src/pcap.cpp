#include "flowsentry/pcap.hpp"

#include <cstring>
#include <fstream>

namespace flowsentry::pcap {

namespace {

constexpr std::size_t kGlobalHeaderLen = 24;
constexpr std::size_t kRecordHeaderLen = 16;
constexpr std::size_t kEthernetLen = 14;

constexpr std::uint16_t kEtherIpv4 = 0x0800;
// Local experimental ethertype used when serializing protocol=OTHER records.
constexpr std::uint16_t kEtherOther = 0x88b5;

std::uint32_t read_u32(std::span<const std::byte> d, std::size_t at,
                       ByteOrder order) {
  auto b = [&](std::size_t i) { return std::to_integer<std::uint32_t>(d[at + i]); };
  if (order == ByteOrder::kLittle)
    return b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
  return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

std::uint16_t read_u16be(std::span<const std::byte> d, std::size_t at) {
  return static_cast<std::uint16_t>(
      (std::to_integer<std::uint16_t>(d[at]) << 8) |
      std::to_integer<std::uint16_t>(d[at + 1]));
}

std::uint32_t read_u32be(std::span<const std::byte> d, std::size_t at) {
  return (std::uint32_t{std::to_integer<std::uint8_t>(d[at])} << 24) |
         (std::uint32_t{std::to_integer<std::uint8_t>(d[at + 1])} << 16) |
         (std::uint32_t{std::to_integer<std::uint8_t>(d[at + 2])} << 8) |
         std::uint32_t{std::to_integer<std::uint8_t>(d[at + 3])};
}

void put_u16le(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(std::byte(v & 0xff));
  out.push_back(std::byte((v >> 8) & 0xff));
}

void put_u32le(std::vector<std::byte>& out, std::uint32_t v) {
  out.push_back(std::byte(v & 0xff));
  out.push_back(std::byte((v >> 8) & 0xff));
  out.push_back(std::byte((v >> 16) & 0xff));
  out.push_back(std::byte((v >> 24) & 0xff));
}

void put_u16be(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(std::byte((v >> 8) & 0xff));
  out.push_back(std::byte(v & 0xff));
}

void put_u32be(std::vector<std::byte>& out, std::uint32_t v) {
  out.push_back(std::byte((v >> 24) & 0xff));
  out.push_back(std::byte((v >> 16) & 0xff));
  out.push_back(std::byte((v >> 8) & 0xff));
  out.push_back(std::byte(v & 0xff));
}

// RFC 1071 ones-complement sum over a byte range (odd tail zero-padded).
std::uint16_t inet_checksum(std::span<const std::byte> data,
                            std::uint32_t initial = 0) {
  std::uint64_t sum = initial;
  std::size_t i = 0;
  for (; i + 1 < data.size(); i += 2)
    sum += (std::to_integer<std::uint32_t>(data[i]) << 8) |
           std::to_integer<std::uint32_t>(data[i + 1]);
  if (i < data.size()) sum += std::to_integer<std::uint32_t>(data[i]) << 8;
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum & 0xffff);
}

void patch_u16be(std::vector<std::byte>& buf, std::size_t at, std::uint16_t v) {
  buf[at] = std::byte((v >> 8) & 0xff);
  buf[at + 1] = std::byte(v & 0xff);
}

}  // namespace

PcapReader pcap_open(std::span<const std::byte> bytes) {
  if (bytes.size() < kGlobalHeaderLen)
    throw Truncated("pcap stream shorter than the 24-byte global header");

  PcapReader reader;
  reader.data_ = bytes;

  std::uint32_t magic_le = read_u32(bytes, 0, ByteOrder::kLittle);
  std::uint32_t magic_be = read_u32(bytes, 0, ByteOrder::kBig);
  if (magic_le == kMagicMicro) {
    reader.byte_order_ = ByteOrder::kLittle;
    reader.ts_resolution_ = TsResolution::kMicro;
  } else if (magic_le == kMagicNano) {
    reader.byte_order_ = ByteOrder::kLittle;
    reader.ts_resolution_ = TsResolution::kNano;
  } else if (magic_be == kMagicMicro) {
    reader.byte_order_ = ByteOrder::kBig;
    reader.ts_resolution_ = TsResolution::kMicro;
  } else if (magic_be == kMagicNano) {
    reader.byte_order_ = ByteOrder::kBig;
    reader.ts_resolution_ = TsResolution::kNano;
  } else {
    throw BadMagic("unknown pcap magic");
  }

  reader.snaplen_ = read_u32(bytes, 16, reader.byte_order_);
  reader.linktype_ = read_u32(bytes, 20, reader.byte_order_);
  if (reader.linktype_ != 1)
    throw UnsupportedLinkType("pcap linktype " +
                              std::to_string(reader.linktype_) +
                              " (only Ethernet/1 is supported)");
  reader.pos_ = kGlobalHeaderLen;
  return reader;
}

std::optional<PacketRecord> PcapReader::next() {
  if (pos_ == data_.size()) return std::nullopt;
  if (data_.size() - pos_ < kRecordHeaderLen)
    throw Truncated("partial pcap record header at end of stream");

  std::uint32_t ts_sec = read_u32(data_, pos_, byte_order_);
  std::uint32_t ts_frac = read_u32(data_, pos_ + 4, byte_order_);
  std::uint32_t captured_len = read_u32(data_, pos_ + 8, byte_order_);
  std::uint32_t orig_len = read_u32(data_, pos_ + 12, byte_order_);
  pos_ += kRecordHeaderLen;

  if (captured_len > data_.size() - pos_)
    throw Truncated("record claims " + std::to_string(captured_len) +
                    " captured bytes with only " +
                    std::to_string(data_.size() - pos_) + " remaining");
  if (captured_len > snaplen_)
    throw MalformedHeader("record captured_len exceeds file snaplen");

  std::span<const std::byte> frame = data_.subspan(pos_, captured_len);
  pos_ += captured_len;

  PacketRecord pkt;
  pkt.timestamp_us =
      static_cast<std::int64_t>(ts_sec) * 1'000'000 +
      (ts_resolution_ == TsResolution::kMicro ? ts_frac : ts_frac / 1000);
  pkt.wire_len = orig_len;

  if (frame.size() < kEthernetLen) {
    pkt.protocol = Protocol::kOther;
    return pkt;
  }
  std::uint16_t ethertype = read_u16be(frame, 12);
  if (ethertype != kEtherIpv4) {
    pkt.protocol = Protocol::kOther;
    pkt.payload_len = static_cast<std::uint32_t>(frame.size() - kEthernetLen);
    return pkt;
  }

  // IPv4
  std::span<const std::byte> ip = frame.subspan(kEthernetLen);
  if (ip.size() < 20) throw MalformedHeader("captured IPv4 header shorter than 20 bytes");
  std::uint8_t ver_ihl = std::to_integer<std::uint8_t>(ip[0]);
  if ((ver_ihl >> 4) != 4) {
    pkt.protocol = Protocol::kOther;
    pkt.payload_len = static_cast<std::uint32_t>(frame.size() - kEthernetLen);
    return pkt;
  }
  std::size_t ihl = (ver_ihl & 0x0f) * 4u;
  if (ihl < 20) throw MalformedHeader("IPv4 header length below 20 bytes");
  if (ip.size() < ihl) throw MalformedHeader("captured bytes end inside IPv4 options");

  std::uint16_t total_len = read_u16be(ip, 2);
  if (total_len < ihl) throw MalformedHeader("IPv4 total length below header length");
  std::uint8_t ip_proto = std::to_integer<std::uint8_t>(ip[9]);
  pkt.src_ip = read_u32be(ip, 12);
  pkt.dst_ip = read_u32be(ip, 16);

  std::span<const std::byte> transport = ip.subspan(ihl);
  switch (ip_proto) {
    case 6: {  // TCP
      if (transport.size() < 20)
        throw MalformedHeader("captured TCP header shorter than 20 bytes");
      pkt.protocol = Protocol::kTcp;
      pkt.src_port = read_u16be(transport, 0);
      pkt.dst_port = read_u16be(transport, 2);
      std::size_t data_off = (std::to_integer<std::uint8_t>(transport[12]) >> 4) * 4u;
      if (data_off < 20) throw MalformedHeader("TCP data offset below 20 bytes");
      if (total_len < ihl + data_off)
        throw MalformedHeader("IPv4 total length ends inside TCP header");
      pkt.tcp_flags = std::to_integer<std::uint8_t>(transport[13]) & 0x3f;
      pkt.payload_len = static_cast<std::uint32_t>(total_len - ihl - data_off);
      break;
    }
    case 17: {  // UDP
      if (transport.size() < 8)
        throw MalformedHeader("captured UDP header shorter than 8 bytes");
      pkt.protocol = Protocol::kUdp;
      pkt.src_port = read_u16be(transport, 0);
      pkt.dst_port = read_u16be(transport, 2);
      std::uint16_t udp_len = read_u16be(transport, 4);
      if (udp_len < 8) throw MalformedHeader("UDP length below 8 bytes");
      pkt.payload_len = static_cast<std::uint32_t>(udp_len - 8);
      break;
    }
    case 1: {  // ICMP
      if (transport.size() < 8)
        throw MalformedHeader("captured ICMP header shorter than 8 bytes");
      pkt.protocol = Protocol::kIcmp;
      if (total_len < ihl + 8)
        throw MalformedHeader("IPv4 total length ends inside ICMP header");
      pkt.payload_len = static_cast<std::uint32_t>(total_len - ihl - 8);
      break;
    }
    default:
      pkt.protocol = Protocol::kOther;
      pkt.payload_len = static_cast<std::uint32_t>(frame.size() - kEthernetLen);
      break;
  }
  return pkt;
}

std::vector<PacketRecord> pcap_read_all(std::span<const std::byte> bytes) {
  PcapReader reader = pcap_open(bytes);
  std::vector<PacketRecord> packets;
  while (auto pkt = reader.next()) packets.push_back(*pkt);
  return packets;
}

namespace {

// Builds one synthetic Ethernet frame for a record. Payload bytes are zeros;
// IP/TCP/UDP/ICMP checksums are valid so standard tools read the file clean.
std::vector<std::byte> build_frame(const PacketRecord& pkt) {
  std::vector<std::byte> f;
  f.reserve(kEthernetLen + 20 + 20 + pkt.payload_len);

  // Ethernet: fixed locally-administered MACs.
  const std::byte dst_mac[6] = {std::byte{0x02}, std::byte{0},  std::byte{0},
                                std::byte{0},    std::byte{0},  std::byte{0x02}};
  const std::byte src_mac[6] = {std::byte{0x02}, std::byte{0},  std::byte{0},
                                std::byte{0},    std::byte{0},  std::byte{0x01}};
  f.insert(f.end(), dst_mac, dst_mac + 6);
  f.insert(f.end(), src_mac, src_mac + 6);

  if (pkt.protocol == Protocol::kOther) {
    put_u16be(f, kEtherOther);
    f.resize(f.size() + pkt.payload_len, std::byte{0});
    return f;
  }
  put_u16be(f, kEtherIpv4);

  std::size_t transport_hdr = pkt.protocol == Protocol::kTcp   ? 20
                              : pkt.protocol == Protocol::kUdp ? 8
                                                               : 8;
  std::uint16_t total_len =
      static_cast<std::uint16_t>(20 + transport_hdr + pkt.payload_len);

  // IPv4 header
  std::size_t ip_at = f.size();
  f.push_back(std::byte{0x45});  // version 4, ihl 5
  f.push_back(std::byte{0});     // tos
  put_u16be(f, total_len);
  put_u16be(f, 0);  // identification
  put_u16be(f, 0);  // flags/fragment
  f.push_back(std::byte{64});  // ttl
  std::uint8_t proto_num = pkt.protocol == Protocol::kTcp   ? 6
                           : pkt.protocol == Protocol::kUdp ? 17
                                                            : 1;
  f.push_back(std::byte{proto_num});
  put_u16be(f, 0);  // checksum placeholder
  put_u32be(f, pkt.src_ip);
  put_u32be(f, pkt.dst_ip);
  patch_u16be(f, ip_at + 10,
              inet_checksum({f.data() + ip_at, 20}));

  // Pseudo-header sum for TCP/UDP checksums.
  auto pseudo_sum = [&](std::uint16_t seg_len) {
    std::uint32_t sum = 0;
    sum += (pkt.src_ip >> 16) + (pkt.src_ip & 0xffff);
    sum += (pkt.dst_ip >> 16) + (pkt.dst_ip & 0xffff);
    sum += proto_num;
    sum += seg_len;
    return sum;
  };

  std::size_t t_at = f.size();
  switch (pkt.protocol) {
    case Protocol::kTcp: {
      put_u16be(f, pkt.src_port);
      put_u16be(f, pkt.dst_port);
      put_u32be(f, 0);  // seq
      put_u32be(f, 0);  // ack
      f.push_back(std::byte{0x50});  // data offset 5
      f.push_back(std::byte{pkt.tcp_flags});
      put_u16be(f, 65535);  // window
      put_u16be(f, 0);      // checksum placeholder
      put_u16be(f, 0);      // urgent
      f.resize(f.size() + pkt.payload_len, std::byte{0});
      auto seg_len = static_cast<std::uint16_t>(20 + pkt.payload_len);
      patch_u16be(f, t_at + 16,
                  inet_checksum({f.data() + t_at, seg_len}, pseudo_sum(seg_len)));
      break;
    }
    case Protocol::kUdp: {
      put_u16be(f, pkt.src_port);
      put_u16be(f, pkt.dst_port);
      auto seg_len = static_cast<std::uint16_t>(8 + pkt.payload_len);
      put_u16be(f, seg_len);
      put_u16be(f, 0);  // checksum placeholder
      f.resize(f.size() + pkt.payload_len, std::byte{0});
      std::uint16_t cksum =
          inet_checksum({f.data() + t_at, seg_len}, pseudo_sum(seg_len));
      if (cksum == 0) cksum = 0xffff;  // 0 means "no checksum" in UDP
      patch_u16be(f, t_at + 6, cksum);
      break;
    }
    default: {  // ICMP echo request
      f.push_back(std::byte{8});  // type
      f.push_back(std::byte{0});  // code
      put_u16be(f, 0);            // checksum placeholder
      put_u16be(f, 0);            // identifier
      put_u16be(f, 0);            // sequence
      f.resize(f.size() + pkt.payload_len, std::byte{0});
      patch_u16be(f, t_at + 2,
                  inet_checksum({f.data() + t_at, 8 + pkt.payload_len}));
      break;
    }
  }
  return f;
}

}  // namespace

std::vector<std::byte> pcap_write(std::span<const PacketRecord> packets) {
  std::vector<std::byte> out;
  out.reserve(kGlobalHeaderLen + packets.size() * 80);

  put_u32le(out, kMagicMicro);
  put_u16le(out, 2);   // version major
  put_u16le(out, 4);   // version minor
  put_u32le(out, 0);   // thiszone
  put_u32le(out, 0);   // sigfigs
  put_u32le(out, 65535);  // snaplen
  put_u32le(out, 1);   // linktype Ethernet

  for (const auto& pkt : packets) {
    auto frame = build_frame(pkt);
    put_u32le(out, static_cast<std::uint32_t>(pkt.timestamp_us / 1'000'000));
    put_u32le(out, static_cast<std::uint32_t>(pkt.timestamp_us % 1'000'000));
    put_u32le(out, static_cast<std::uint32_t>(frame.size()));
    put_u32le(out, pkt.wire_len);
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open for read: " + path.string());
  std::vector<std::byte> bytes;
  in.seekg(0, std::ios::end);
  bytes.resize(static_cast<std::size_t>(in.tellg()));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!in) throw IoFailure("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for write: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoFailure("write failed: " + path.string());
}

}  // namespace flowsentry::pcap
