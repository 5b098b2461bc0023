#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flowsentry/core.hpp"

namespace flowsentry {

inline constexpr std::int64_t kDefaultIdleTimeoutUs = 60'000'000;

// Groups a timestamp-ordered packet stream into bidirectional flows keyed by
// the canonical 5-tuple. The first packet of a flow defines the forward
// direction. A flow closes when the idle gap exceeds idle_timeout_us, when
// both directions have sent FIN, on RST, or at end of stream. Packets with
// protocol OTHER are ignored (they never form flows).
//
// Output is ordered by (first_seen_us, canonical key) and is a pure function
// of the input. Throws UnorderedInput if a timestamp regresses by more than
// one second against the stream's running maximum.
std::vector<FlowRecord> flow_assemble(std::span<const PacketRecord> packets,
                                      std::int64_t idle_timeout_us = kDefaultIdleTimeoutUs);

}  // namespace flowsentry
