#pragma once

#include <cstdint>
#include <optional>

#include "ccgym/sim_time.hpp"

namespace ccgym {

enum class PacketKind : std::uint8_t { Data, RttProbe, Cnp, Nack };

inline const char* packet_kind_name(PacketKind k) {
    switch (k) {
        case PacketKind::Data: return "data";
        case PacketKind::RttProbe: return "probe";
        case PacketKind::Cnp: return "cnp";
        case PacketKind::Nack: return "nack";
    }
    return "?";
}

// Switch state snapshot stamped onto probe packets when the switch has
// telemetry enabled.
struct Telemetry {
    std::uint64_t queue_bytes = 0;
    std::uint64_t tx_bytes_cum = 0;
    std::uint64_t port_rate_bps = 0;
    SimTime ts = 0;
};

struct Packet {
    std::uint32_t flow_id = 0;
    PacketKind kind = PacketKind::Data;
    std::uint32_t size_bytes = 0;
    bool ecn_marked = false;
    SimTime send_time = 0;  // tx start at the source; probes use it for RTT
    std::uint64_t pkt_id = 0;
    std::optional<Telemetry> telemetry;
};

}  // namespace ccgym
