#include "flowsentry/flow.hpp"

#include <algorithm>
#include <map>

namespace flowsentry {

namespace {

struct ActiveFlow {
  FlowRecord rec;
  bool fin_fwd = false;
  bool fin_bwd = false;
  std::int64_t last_fwd_us = 0;
  std::int64_t fwd_gap_sum_us = 0;

  bool is_forward(const PacketRecord& pkt) const {
    return pkt.src_ip == rec.src_ip && pkt.src_port == rec.src_port;
  }
};

ActiveFlow start_flow(const PacketRecord& pkt) {
  ActiveFlow f;
  f.rec.src_ip = pkt.src_ip;
  f.rec.src_port = pkt.src_port;
  f.rec.dst_ip = pkt.dst_ip;
  f.rec.dst_port = pkt.dst_port;
  f.rec.protocol = pkt.protocol;
  f.rec.first_seen_us = pkt.timestamp_us;
  f.rec.last_seen_us = pkt.timestamp_us;
  return f;
}

void finish(ActiveFlow& f, std::vector<FlowRecord>& out) {
  f.rec.fwd_iat_mean_us =
      f.rec.fwd_pkts >= 2
          ? static_cast<double>(f.fwd_gap_sum_us) / static_cast<double>(f.rec.fwd_pkts - 1)
          : 0.0;
  out.push_back(f.rec);
}

}  // namespace

std::vector<FlowRecord> flow_assemble(std::span<const PacketRecord> packets,
                                      std::int64_t idle_timeout_us) {
  std::map<FlowKey, ActiveFlow> active;
  std::vector<FlowRecord> completed;
  std::int64_t max_ts = std::numeric_limits<std::int64_t>::min();

  for (const auto& pkt : packets) {
    if (max_ts != std::numeric_limits<std::int64_t>::min() &&
        pkt.timestamp_us < max_ts - 1'000'000)
      throw UnorderedInput("packet timestamp regresses by more than 1 s");
    max_ts = std::max(max_ts, pkt.timestamp_us);

    if (pkt.protocol == Protocol::kOther) continue;

    FlowKey key = canonical_key(pkt);
    auto it = active.find(key);
    if (it != active.end() &&
        pkt.timestamp_us - it->second.rec.last_seen_us > idle_timeout_us) {
      finish(it->second, completed);
      active.erase(it);
      it = active.end();
    }
    if (it == active.end())
      it = active.emplace(key, start_flow(pkt)).first;

    ActiveFlow& f = it->second;
    bool fwd = f.is_forward(pkt);
    if (fwd) {
      if (f.rec.fwd_pkts >= 1) {
        // Small reorderings within the 1 s tolerance clamp to a zero gap.
        f.fwd_gap_sum_us += std::max<std::int64_t>(0, pkt.timestamp_us - f.last_fwd_us);
      }
      f.last_fwd_us = pkt.timestamp_us;
      f.rec.fwd_pkts += 1;
      f.rec.fwd_bytes += pkt.wire_len;
    } else {
      f.rec.bwd_pkts += 1;
      f.rec.bwd_bytes += pkt.wire_len;
    }
    f.rec.last_seen_us = std::max(f.rec.last_seen_us, pkt.timestamp_us);

    bool rst = false;
    if (pkt.protocol == Protocol::kTcp) {
      if (pkt.tcp_flags & tcpflag::kSyn) f.rec.syn_cnt += 1;
      if (pkt.tcp_flags & tcpflag::kAck) f.rec.ack_cnt += 1;
      if (pkt.tcp_flags & tcpflag::kRst) {
        f.rec.rst_cnt += 1;
        rst = true;
      }
      if (pkt.tcp_flags & tcpflag::kFin) {
        f.rec.fin_cnt += 1;
        (fwd ? f.fin_fwd : f.fin_bwd) = true;
      }
    }

    if (rst || (f.fin_fwd && f.fin_bwd)) {
      finish(f, completed);
      active.erase(it);
    }
  }

  for (auto& [key, f] : active) finish(f, completed);

  std::stable_sort(completed.begin(), completed.end(),
                   [](const FlowRecord& a, const FlowRecord& b) {
                     if (a.first_seen_us != b.first_seen_us)
                       return a.first_seen_us < b.first_seen_us;
                     return a.key() < b.key();
                   });
  return completed;
}

}  // namespace flowsentry
