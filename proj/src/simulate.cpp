#include "flowsentry/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace flowsentry {

namespace {

constexpr std::uint32_t kEthIpv4Overhead = 14 + 20;  // Ethernet + IPv4 headers
constexpr std::uint32_t kTcpHeader = 20;
constexpr std::uint32_t kUdpHeader = 8;
constexpr std::uint32_t kIcmpHeader = 8;

PacketRecord tcp_packet(std::int64_t ts, Ipv4 src, std::uint16_t sport, Ipv4 dst,
                        std::uint16_t dport, std::uint8_t flags,
                        std::uint32_t payload) {
  PacketRecord p;
  p.timestamp_us = ts;
  p.src_ip = src;
  p.src_port = sport;
  p.dst_ip = dst;
  p.dst_port = dport;
  p.protocol = Protocol::kTcp;
  p.tcp_flags = flags;
  p.payload_len = payload;
  p.wire_len = kEthIpv4Overhead + kTcpHeader + payload;
  return p;
}

PacketRecord udp_packet(std::int64_t ts, Ipv4 src, std::uint16_t sport, Ipv4 dst,
                        std::uint16_t dport, std::uint32_t payload) {
  PacketRecord p;
  p.timestamp_us = ts;
  p.src_ip = src;
  p.src_port = sport;
  p.dst_ip = dst;
  p.dst_port = dport;
  p.protocol = Protocol::kUdp;
  p.payload_len = payload;
  p.wire_len = kEthIpv4Overhead + kUdpHeader + payload;
  return p;
}

PacketRecord icmp_packet(std::int64_t ts, Ipv4 src, Ipv4 dst, std::uint32_t payload) {
  PacketRecord p;
  p.timestamp_us = ts;
  p.src_ip = src;
  p.dst_ip = dst;
  p.protocol = Protocol::kIcmp;
  p.payload_len = payload;
  p.wire_len = kEthIpv4Overhead + kIcmpHeader + payload;
  return p;
}

// Response latency: 100 us base plus an exponential tail.
std::int64_t rtt_us(Rng64& rng) {
  return 100 + static_cast<std::int64_t>(rng.exponential(400.0));
}

std::int64_t gap_us(Rng64& rng, double rate_pps) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(rng.exponential(1e6 / rate_pps)));
}

void sort_by_time(std::vector<PacketRecord>& packets) {
  std::stable_sort(packets.begin(), packets.end(),
                   [](const PacketRecord& a, const PacketRecord& b) {
                     return a.timestamp_us < b.timestamp_us;
                   });
}

// Lognormal payload draw with mean ~300 B, clamped to a sane frame size.
std::uint32_t benign_payload(Rng64& rng) {
  constexpr double kSigma = 0.75;
  constexpr double kMu = 5.42255;  // ln(300) - sigma^2/2
  double value = std::exp(kMu + kSigma * rng.normal());
  return static_cast<std::uint32_t>(std::clamp(value, 1.0, 1400.0));
}

}  // namespace

std::string_view scan_kind_name(ScanKind k) {
  switch (k) {
    case ScanKind::kPingSweep:
      return "ping_sweep";
    case ScanKind::kSynPortScan:
      return "syn_port_scan";
    case ScanKind::kServiceVersionScan:
      return "service_version_scan";
  }
  return "ping_sweep";
}

ScanKind scan_kind_from_name(std::string_view name) {
  if (name == "ping_sweep") return ScanKind::kPingSweep;
  if (name == "syn_port_scan") return ScanKind::kSynPortScan;
  if (name == "service_version_scan") return ScanKind::kServiceVersionScan;
  throw Error("unknown scan kind: " + std::string(name));
}

std::vector<PacketRecord> simulate_scan(const ScanProfile& profile,
                                        std::span<const Ipv4> targets,
                                        Rng64& rng, std::int64_t start_us) {
  if (targets.empty()) throw Error("simulate_scan: targets must be nonempty");
  if (profile.kind != ScanKind::kPingSweep && profile.target_ports.empty())
    throw Error("simulate_scan: port scans need a nonempty port set");
  if (!(profile.rate_pps > 0)) throw Error("simulate_scan: rate_pps must be > 0");

  std::vector<PacketRecord> out;
  std::int64_t t = start_us;
  const Ipv4 scanner = profile.scanner_ip;

  switch (profile.kind) {
    case ScanKind::kPingSweep: {
      for (Ipv4 target : targets) {
        t += gap_us(rng, profile.rate_pps);
        out.push_back(icmp_packet(t, scanner, target, 56));
        if (rng.uniform() < profile.ping_reply_prob)
          out.push_back(icmp_packet(t + rtt_us(rng), target, scanner, 56));
      }
      break;
    }
    case ScanKind::kSynPortScan: {
      // Half-open scan: SYN, then SYN-ACK (open, torn down with RST) or
      // RST-ACK (closed) or silence (filtered).
      std::uint16_t sport = 43210;
      for (Ipv4 target : targets) {
        for (std::uint16_t port : profile.target_ports) {
          t += gap_us(rng, profile.rate_pps);
          out.push_back(tcp_packet(t, scanner, sport, target, port, tcpflag::kSyn, 0));
          if (rng.uniform() < profile.open_port_prob) {
            std::int64_t r1 = t + rtt_us(rng);
            out.push_back(tcp_packet(r1, target, port, scanner, sport,
                                     tcpflag::kSyn | tcpflag::kAck, 0));
            out.push_back(tcp_packet(r1 + rtt_us(rng), scanner, sport, target, port,
                                     tcpflag::kRst, 0));
          } else if (rng.uniform() >= profile.filtered_prob) {
            out.push_back(tcp_packet(t + rtt_us(rng), target, port, scanner, sport,
                                     tcpflag::kRst | tcpflag::kAck, 0));
          }
        }
      }
      break;
    }
    case ScanKind::kServiceVersionScan: {
      // Full connect plus a short banner exchange on open ports.
      for (Ipv4 target : targets) {
        for (std::uint16_t port : profile.target_ports) {
          t += gap_us(rng, profile.rate_pps);
          std::uint16_t sport =
              static_cast<std::uint16_t>(1024 + rng.below(65536 - 1024));
          out.push_back(tcp_packet(t, scanner, sport, target, port, tcpflag::kSyn, 0));
          if (rng.uniform() < profile.open_port_prob) {
            std::int64_t ts = t + rtt_us(rng);
            out.push_back(tcp_packet(ts, target, port, scanner, sport,
                                     tcpflag::kSyn | tcpflag::kAck, 0));
            ts += rtt_us(rng);
            out.push_back(tcp_packet(ts, scanner, sport, target, port, tcpflag::kAck, 0));
            int banner_pkts = 2 + static_cast<int>(rng.below(3));  // 2..4
            for (int i = 0; i < banner_pkts; ++i) {
              ts += rtt_us(rng);
              std::uint32_t size = 20 + static_cast<std::uint32_t>(rng.below(100));
              bool from_target = (i % 2) == 0;  // banner first, probe second
              if (from_target)
                out.push_back(tcp_packet(ts, target, port, scanner, sport,
                                         tcpflag::kPsh | tcpflag::kAck, size));
              else
                out.push_back(tcp_packet(ts, scanner, sport, target, port,
                                         tcpflag::kPsh | tcpflag::kAck, size));
            }
            ts += rtt_us(rng);
            out.push_back(tcp_packet(ts, scanner, sport, target, port,
                                     tcpflag::kFin | tcpflag::kAck, 0));
            out.push_back(tcp_packet(ts + rtt_us(rng), target, port, scanner, sport,
                                     tcpflag::kFin | tcpflag::kAck, 0));
          } else if (rng.uniform() >= profile.filtered_prob) {
            out.push_back(tcp_packet(t + rtt_us(rng), target, port, scanner, sport,
                                     tcpflag::kRst | tcpflag::kAck, 0));
          }
        }
      }
      break;
    }
  }

  sort_by_time(out);
  return out;
}

std::vector<PacketRecord> simulate_benign(int n_flows, const Subnet& subnet,
                                          Rng64& rng, std::int64_t start_us) {
  if (n_flows < 0) throw Error("simulate_benign: n_flows must be >= 0");
  std::vector<PacketRecord> out;
  if (n_flows == 0) return out;

  struct Service {
    std::uint16_t port;
    bool tcp;
  };
  // http, https, mqtt, dns
  const Service services[4] = {{80, true}, {443, true}, {1883, true}, {53, false}};

  std::uint32_t span = subnet.host_span();
  if (span < 16) throw Error("simulate_benign: subnet too small");
  // A small pool of server hosts; clients come from the rest of the prefix.
  const int kServerCount = 8;
  auto server_ip = [&](int i) { return subnet.base + 1 + static_cast<Ipv4>(i); };
  auto random_client = [&] {
    for (;;) {
      Ipv4 host = subnet.base + 1 + static_cast<Ipv4>(rng.below(span - 2));
      if (host > subnet.base + kServerCount) return host;
    }
  };

  std::set<std::tuple<Ipv4, std::uint16_t, Ipv4, std::uint16_t, bool>> used;
  std::int64_t session_start = start_us;

  for (int n = 0; n < n_flows; ++n) {
    session_start += gap_us(rng, 40.0);  // ~40 new sessions per second

    const Service& svc = services[rng.below(4)];
    Ipv4 server = server_ip(static_cast<int>(rng.below(kServerCount)));
    Ipv4 client = 0;
    std::uint16_t cport = 0;
    for (;;) {  // unique 5-tuple per session
      client = random_client();
      cport = static_cast<std::uint16_t>(1024 + rng.below(65536 - 1024));
      if (used.insert({client, cport, server, svc.port, svc.tcp}).second) break;
    }

    std::int64_t ts = session_start;
    int data_pkts = 5 + static_cast<int>(rng.below(46));  // 5..50
    auto next_gap = [&] { return static_cast<std::int64_t>(1 + rng.exponential(50'000.0)); };

    if (svc.tcp) {
      out.push_back(tcp_packet(ts, client, cport, server, svc.port, tcpflag::kSyn, 0));
      ts += rtt_us(rng);
      out.push_back(tcp_packet(ts, server, svc.port, client, cport,
                               tcpflag::kSyn | tcpflag::kAck, 0));
      ts += rtt_us(rng);
      out.push_back(tcp_packet(ts, client, cport, server, svc.port, tcpflag::kAck, 0));
      for (int i = 0; i < data_pkts; ++i) {
        ts += next_gap();
        bool from_client = (i % 2) == 0;
        std::uint32_t size = benign_payload(rng);
        if (from_client)
          out.push_back(tcp_packet(ts, client, cport, server, svc.port,
                                   tcpflag::kPsh | tcpflag::kAck, size));
        else
          out.push_back(tcp_packet(ts, server, svc.port, client, cport,
                                   tcpflag::kPsh | tcpflag::kAck, size));
      }
      // Orderly close; the flow ends at the second FIN.
      ts += next_gap();
      out.push_back(tcp_packet(ts, client, cport, server, svc.port,
                               tcpflag::kFin | tcpflag::kAck, 0));
      ts += rtt_us(rng);
      out.push_back(tcp_packet(ts, server, svc.port, client, cport,
                               tcpflag::kFin | tcpflag::kAck, 0));
    } else {
      for (int i = 0; i < data_pkts; ++i) {
        ts += (i == 0) ? 0 : next_gap();
        bool from_client = (i % 2) == 0;
        std::uint32_t size = benign_payload(rng);
        if (from_client)
          out.push_back(udp_packet(ts, client, cport, server, svc.port, size));
        else
          out.push_back(udp_packet(ts, server, svc.port, client, cport, size));
      }
    }
  }

  sort_by_time(out);
  return out;
}

std::vector<FlowRecord> label_flows(std::vector<FlowRecord> flows,
                                    const std::set<Ipv4>& attacker_ips) {
  for (auto& f : flows) {
    f.label = (attacker_ips.count(f.src_ip) || attacker_ips.count(f.dst_ip)) ? 1 : 0;
    f.label_source = LabelSource::kAttackerIpList;
  }
  return flows;
}

}  // namespace flowsentry
