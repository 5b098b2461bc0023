#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "flowsentry/core.hpp"
#include "flowsentry/rng.hpp"

namespace flowsentry {

enum class ScanKind : std::uint8_t {
  kPingSweep = 0,
  kSynPortScan,
  kServiceVersionScan,
};

std::string_view scan_kind_name(ScanKind k);
ScanKind scan_kind_from_name(std::string_view name);

// One reconnaissance stage. Response-model probabilities are desk-scale
// defaults, all overridable from the scenario config:
//   ping_reply_prob  — target answers an echo request
//   open_port_prob   — a probed TCP port is open (SYN-ACK) instead of closed
//   filtered_prob    — a closed port stays silent instead of sending RST
struct ScanProfile {
  ScanKind kind = ScanKind::kPingSweep;
  std::vector<std::uint16_t> target_ports;  // ignored by PING_SWEEP
  double rate_pps = 50.0;
  Ipv4 scanner_ip = 0;
  double ping_reply_prob = 0.9;
  double open_port_prob = 0.05;
  double filtered_prob = 0.05;
};

// Emits the packet footprint of one scan stage against `targets`, starting
// at start_us with probe launches spaced exponentially at mean 1/rate_pps.
// Deterministic given rng; output is timestamp-nondecreasing and every
// packet has scanner_ip as an endpoint. Throws Error on empty targets or on
// a port scan with no ports.
std::vector<PacketRecord> simulate_scan(const ScanProfile& profile,
                                        std::span<const Ipv4> targets,
                                        Rng64& rng, std::int64_t start_us);

// Emits n_flows benign sessions (HTTP/HTTPS, MQTT, DNS) between hosts of
// `subnet`: full handshakes, 5-50 bidirectional data packets, lognormal
// payload sizes with mean ~300 B, client ports ephemeral (>= 1024). Every
// session has a distinct 5-tuple. Deterministic given rng.
std::vector<PacketRecord> simulate_benign(int n_flows, const Subnet& subnet,
                                          Rng64& rng, std::int64_t start_us);

// label = 1 iff either endpoint is in attacker_ips; label_source becomes
// ATTACKER_IP_LIST on every row.
std::vector<FlowRecord> label_flows(std::vector<FlowRecord> flows,
                                    const std::set<Ipv4>& attacker_ips);

}  // namespace flowsentry
