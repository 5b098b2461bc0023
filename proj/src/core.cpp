#include "flowsentry/core.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace flowsentry {

std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kTcp:
      return "tcp";
    case Protocol::kUdp:
      return "udp";
    case Protocol::kIcmp:
      return "icmp";
    case Protocol::kOther:
      return "other";
  }
  return "other";
}

Protocol protocol_from_name(std::string_view name) {
  if (name == "tcp") return Protocol::kTcp;
  if (name == "udp") return Protocol::kUdp;
  if (name == "icmp") return Protocol::kIcmp;
  if (name == "other") return Protocol::kOther;
  throw Error("unknown protocol name: " + std::string(name));
}

Ipv4 ipv4_from_string(std::string_view dotted) {
  std::uint32_t out = 0;
  const char* p = dotted.data();
  const char* end = p + dotted.size();
  for (int octet = 0; octet < 4; ++octet) {
    unsigned value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || value > 255)
      throw Error("bad IPv4 address: " + std::string(dotted));
    out = (out << 8) | value;
    p = next;
    if (octet < 3) {
      if (p == end || *p != '.')
        throw Error("bad IPv4 address: " + std::string(dotted));
      ++p;
    }
  }
  if (p != end) throw Error("bad IPv4 address: " + std::string(dotted));
  return out;
}

std::string ipv4_to_string(Ipv4 addr) {
  std::string out;
  out.reserve(15);
  for (int shift = 24; shift >= 0; shift -= 8) {
    out += std::to_string((addr >> shift) & 0xff);
    if (shift > 0) out += '.';
  }
  return out;
}

std::uint32_t Subnet::host_span() const {
  if (prefix_len >= 32) return 1;
  return static_cast<std::uint32_t>(1ull << (32 - prefix_len));
}

bool Subnet::contains(Ipv4 addr) const {
  if (prefix_len == 0) return true;
  std::uint32_t mask = ~std::uint32_t{0} << (32 - prefix_len);
  return (addr & mask) == (base & mask);
}

Subnet subnet_from_string(std::string_view cidr) {
  auto slash = cidr.find('/');
  if (slash == std::string_view::npos)
    throw Error("bad subnet (expected a.b.c.d/len): " + std::string(cidr));
  Subnet s;
  s.base = ipv4_from_string(cidr.substr(0, slash));
  auto len_text = cidr.substr(slash + 1);
  int len = 0;
  auto [next, ec] =
      std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
  if (ec != std::errc{} || next != len_text.data() + len_text.size() ||
      len < 0 || len > 32)
    throw Error("bad subnet prefix length: " + std::string(cidr));
  s.prefix_len = len;
  return s;
}

std::string subnet_to_string(const Subnet& s) {
  return ipv4_to_string(s.base) + "/" + std::to_string(s.prefix_len);
}

FlowKey canonical_key(Ipv4 src_ip, std::uint16_t src_port, Ipv4 dst_ip,
                      std::uint16_t dst_port, Protocol protocol) {
  FlowKey key;
  key.protocol = protocol;
  if (std::pair{src_ip, src_port} <= std::pair{dst_ip, dst_port}) {
    key.ip_a = src_ip;
    key.port_a = src_port;
    key.ip_b = dst_ip;
    key.port_b = dst_port;
  } else {
    key.ip_a = dst_ip;
    key.port_a = dst_port;
    key.ip_b = src_ip;
    key.port_b = src_port;
  }
  return key;
}

FlowKey canonical_key(const PacketRecord& pkt) {
  return canonical_key(pkt.src_ip, pkt.src_port, pkt.dst_ip, pkt.dst_port,
                       pkt.protocol);
}

std::string flow_key_to_string(const FlowKey& key) {
  std::string out(protocol_name(key.protocol));
  out += ':';
  out += ipv4_to_string(key.ip_a);
  out += ':';
  out += std::to_string(key.port_a);
  out += '-';
  out += ipv4_to_string(key.ip_b);
  out += ':';
  out += std::to_string(key.port_b);
  return out;
}

FlowKey flow_key_from_string(std::string_view text) {
  auto bad = [&] { return Error("bad flow key: " + std::string(text)); };
  auto proto_end = text.find(':');
  if (proto_end == std::string_view::npos) throw bad();
  FlowKey key;
  key.protocol = protocol_from_name(text.substr(0, proto_end));
  auto rest = text.substr(proto_end + 1);
  auto dash = rest.find('-');
  if (dash == std::string_view::npos) throw bad();
  auto parse_endpoint = [&](std::string_view ep, Ipv4& ip,
                            std::uint16_t& port) {
    auto colon = ep.rfind(':');
    if (colon == std::string_view::npos) throw bad();
    ip = ipv4_from_string(ep.substr(0, colon));
    auto ptext = ep.substr(colon + 1);
    unsigned value = 0;
    auto [next, ec] =
        std::from_chars(ptext.data(), ptext.data() + ptext.size(), value);
    if (ec != std::errc{} || next != ptext.data() + ptext.size() ||
        value > 65535)
      throw bad();
    port = static_cast<std::uint16_t>(value);
  };
  parse_endpoint(rest.substr(0, dash), key.ip_a, key.port_a);
  parse_endpoint(rest.substr(dash + 1), key.ip_b, key.port_b);
  return key;
}

std::string_view label_source_name(LabelSource s) {
  switch (s) {
    case LabelSource::kSimulatorGroundTruth:
      return "simulator_ground_truth";
    case LabelSource::kAttackerIpList:
      return "attacker_ip_list";
    case LabelSource::kUnlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

LabelSource label_source_from_name(std::string_view name) {
  if (name == "simulator_ground_truth") return LabelSource::kSimulatorGroundTruth;
  if (name == "attacker_ip_list") return LabelSource::kAttackerIpList;
  if (name == "unlabeled") return LabelSource::kUnlabeled;
  throw Error("unknown label source: " + std::string(name));
}

FlowKey FlowRecord::key() const {
  return canonical_key(src_ip, src_port, dst_ip, dst_port, protocol);
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("format_double failed");
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [next, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || next != text.data() + text.size())
    throw Error("bad real number: " + std::string(text));
  return value;
}

const char* const kFlowCsvHeader =
    "src_ip,src_port,dst_ip,dst_port,protocol,first_seen_us,last_seen_us,"
    "fwd_pkts,bwd_pkts,fwd_bytes,bwd_bytes,syn_cnt,ack_cnt,rst_cnt,fin_cnt,"
    "fwd_iat_mean_us,label,label_source";

std::string flow_to_csv_row(const FlowRecord& f) {
  std::string out;
  out.reserve(160);
  out += ipv4_to_string(f.src_ip);
  out += ',';
  out += std::to_string(f.src_port);
  out += ',';
  out += ipv4_to_string(f.dst_ip);
  out += ',';
  out += std::to_string(f.dst_port);
  out += ',';
  out += protocol_name(f.protocol);
  out += ',';
  out += std::to_string(f.first_seen_us);
  out += ',';
  out += std::to_string(f.last_seen_us);
  out += ',';
  out += std::to_string(f.fwd_pkts);
  out += ',';
  out += std::to_string(f.bwd_pkts);
  out += ',';
  out += std::to_string(f.fwd_bytes);
  out += ',';
  out += std::to_string(f.bwd_bytes);
  out += ',';
  out += std::to_string(f.syn_cnt);
  out += ',';
  out += std::to_string(f.ack_cnt);
  out += ',';
  out += std::to_string(f.rst_cnt);
  out += ',';
  out += std::to_string(f.fin_cnt);
  out += ',';
  out += format_double(f.fwd_iat_mean_us);
  out += ',';
  out += std::to_string(f.label);
  out += ',';
  out += label_source_name(f.label_source);
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view row, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = row.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(row.substr(start));
      break;
    }
    fields.push_back(row.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::int64_t parse_i64(std::string_view text) {
  std::int64_t value = 0;
  auto [next, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || next != text.data() + text.size())
    throw Error("bad integer field: " + std::string(text));
  return value;
}

std::uint16_t parse_port(std::string_view text) {
  auto v = parse_i64(text);
  if (v < 0 || v > 65535) throw Error("port out of range: " + std::string(text));
  return static_cast<std::uint16_t>(v);
}

}  // namespace

FlowRecord flow_from_csv_row(std::string_view row) {
  auto fields = split_fields(row, ',');
  if (fields.size() != 18)
    throw Error("flow CSV row has " + std::to_string(fields.size()) +
                " fields, expected 18");
  FlowRecord f;
  f.src_ip = ipv4_from_string(fields[0]);
  f.src_port = parse_port(fields[1]);
  f.dst_ip = ipv4_from_string(fields[2]);
  f.dst_port = parse_port(fields[3]);
  f.protocol = protocol_from_name(fields[4]);
  f.first_seen_us = parse_i64(fields[5]);
  f.last_seen_us = parse_i64(fields[6]);
  f.fwd_pkts = parse_i64(fields[7]);
  f.bwd_pkts = parse_i64(fields[8]);
  f.fwd_bytes = parse_i64(fields[9]);
  f.bwd_bytes = parse_i64(fields[10]);
  f.syn_cnt = parse_i64(fields[11]);
  f.ack_cnt = parse_i64(fields[12]);
  f.rst_cnt = parse_i64(fields[13]);
  f.fin_cnt = parse_i64(fields[14]);
  f.fwd_iat_mean_us = parse_double(fields[15]);
  f.label = static_cast<int>(parse_i64(fields[16]));
  f.label_source = label_source_from_name(fields[17]);
  return f;
}

void write_flow_csv(const std::filesystem::path& path,
                    std::span<const FlowRecord> flows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for write: " + path.string());
  out << kFlowCsvHeader << '\n';
  for (const auto& f : flows) out << flow_to_csv_row(f) << '\n';
  if (!out) throw IoFailure("write failed: " + path.string());
}

std::vector<FlowRecord> read_flow_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open for read: " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw Error("flow CSV is empty (missing header): " + path.string());
  if (line != kFlowCsvHeader)
    throw Error("flow CSV header mismatch in " + path.string());
  std::vector<FlowRecord> flows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    flows.push_back(flow_from_csv_row(line));
  }
  return flows;
}

}  // namespace flowsentry
