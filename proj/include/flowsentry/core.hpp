#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowsentry/errors.hpp"

namespace flowsentry {

enum class Protocol : std::uint8_t { kTcp = 0, kUdp, kIcmp, kOther };

std::string_view protocol_name(Protocol p);          // "tcp", "udp", "icmp", "other"
Protocol protocol_from_name(std::string_view name);  // throws Error on unknown

// TCP flag bits, low byte of the flags field (RFC 793 order).
namespace tcpflag {
inline constexpr std::uint8_t kFin = 0x01;
inline constexpr std::uint8_t kSyn = 0x02;
inline constexpr std::uint8_t kRst = 0x04;
inline constexpr std::uint8_t kPsh = 0x08;
inline constexpr std::uint8_t kAck = 0x10;
inline constexpr std::uint8_t kUrg = 0x20;
}  // namespace tcpflag

// IPv4 address in host byte order.
using Ipv4 = std::uint32_t;

Ipv4 ipv4_from_string(std::string_view dotted);  // throws Error on bad input
std::string ipv4_to_string(Ipv4 addr);

// IPv4 prefix, e.g. 10.10.0.0/16.
struct Subnet {
  Ipv4 base = 0;
  int prefix_len = 0;

  std::uint32_t host_span() const;  // number of addresses in the prefix
  bool contains(Ipv4 addr) const;
};

Subnet subnet_from_string(std::string_view cidr);
std::string subnet_to_string(const Subnet& s);

// One decoded link/IP/transport packet.
// Invariants: wire_len >= payload_len; ports are 0 unless protocol is
// TCP/UDP; tcp_flags is 0 unless protocol is TCP.
struct PacketRecord {
  std::int64_t timestamp_us = 0;  // microseconds since epoch
  Ipv4 src_ip = 0;
  Ipv4 dst_ip = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  Protocol protocol = Protocol::kOther;
  std::uint8_t tcp_flags = 0;
  std::uint32_t payload_len = 0;  // transport payload bytes
  std::uint32_t wire_len = 0;     // original frame length on the wire

  bool operator==(const PacketRecord&) const = default;
};

// Canonical bidirectional 5-tuple: the lexicographically lower (ip, port)
// endpoint is stored first, so key(a->b) == key(b->a).
struct FlowKey {
  Ipv4 ip_a = 0;
  std::uint16_t port_a = 0;
  Ipv4 ip_b = 0;
  std::uint16_t port_b = 0;
  Protocol protocol = Protocol::kOther;

  auto operator<=>(const FlowKey&) const = default;
};

FlowKey canonical_key(Ipv4 src_ip, std::uint16_t src_port, Ipv4 dst_ip,
                      std::uint16_t dst_port, Protocol protocol);
FlowKey canonical_key(const PacketRecord& pkt);

// Stable text form used in the ground-truth sidecar, e.g.
// "tcp:10.0.0.1:80-10.0.0.2:4242".
std::string flow_key_to_string(const FlowKey& key);
FlowKey flow_key_from_string(std::string_view text);

enum class LabelSource : std::uint8_t {
  kSimulatorGroundTruth = 0,
  kAttackerIpList,
  kUnlabeled,
};

std::string_view label_source_name(LabelSource s);
LabelSource label_source_from_name(std::string_view name);

// Bidirectional flow aggregate; the unit of classification. src_* is the
// initiator endpoint (the first packet seen defines "forward").
struct FlowRecord {
  Ipv4 src_ip = 0;
  std::uint16_t src_port = 0;
  Ipv4 dst_ip = 0;
  std::uint16_t dst_port = 0;
  Protocol protocol = Protocol::kOther;
  std::int64_t first_seen_us = 0;
  std::int64_t last_seen_us = 0;
  std::int64_t fwd_pkts = 0;
  std::int64_t bwd_pkts = 0;
  std::int64_t fwd_bytes = 0;
  std::int64_t bwd_bytes = 0;
  std::int64_t syn_cnt = 0;
  std::int64_t ack_cnt = 0;
  std::int64_t rst_cnt = 0;
  std::int64_t fin_cnt = 0;
  double fwd_iat_mean_us = 0.0;  // 0 when fewer than 2 forward packets
  int label = 0;                 // 0 benign, 1 scan
  LabelSource label_source = LabelSource::kUnlabeled;

  FlowKey key() const;

  bool operator==(const FlowRecord&) const = default;
};

// FlowRecord CSV schema. Fixed column order, header row, one flow per line.
// Reals are written with shortest round-trip formatting, so
// row -> FlowRecord -> row is the identity.
extern const char* const kFlowCsvHeader;

std::string flow_to_csv_row(const FlowRecord& flow);
FlowRecord flow_from_csv_row(std::string_view row);

void write_flow_csv(const std::filesystem::path& path,
                    std::span<const FlowRecord> flows);
std::vector<FlowRecord> read_flow_csv(const std::filesystem::path& path);

// Shortest-round-trip text for a double (std::to_chars); the one formatting
// used for every real written to CSV/JSON so reruns are byte-identical.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace flowsentry
