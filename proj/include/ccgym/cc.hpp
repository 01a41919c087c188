#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>

#include "ccgym/packet.hpp"
#include "ccgym/sim_time.hpp"

namespace ccgym {

enum class CcEventKind : std::uint8_t {
    ProbeReturned,
    CnpReceived,
    NackReceived,
    TimerFired,
};

struct CcEvent {
    CcEventKind kind = CcEventKind::ProbeReturned;
    SimTime now = 0;
    std::uint32_t flow_id = 0;
    std::uint64_t rtt_ns = 0;                  // ProbeReturned
    std::uint64_t cnp_since_last = 0;          // ProbeReturned
    std::uint64_t nack_since_last = 0;         // ProbeReturned
    std::optional<Telemetry> telemetry;        // ProbeReturned, if stamped
};

// Read-only view of the controlled flow, provided by the simulation.
struct CcContext {
    SimTime now = 0;
    std::uint64_t rate_bps = 0;
    std::uint64_t base_rtt_ns = 0;
    std::uint64_t link_rate_bps = 0;
    std::uint64_t min_rate_bps = 0;
};

struct CcDecision {
    double new_rate_bps = 0;
};

// The clamp is owned by the driver, not by individual algorithms.
inline std::uint64_t clamp_rate(double bps, const CcContext& ctx) {
    double lo = double(ctx.min_rate_bps);
    double hi = double(ctx.link_rate_bps);
    double r = std::min(std::max(bps, lo), hi);
    return static_cast<std::uint64_t>(r + 0.5);
}

// One instance per simulation; per-flow state lives inside the algorithm,
// indexed by flow id. Updates must be pure in (state, event, context).
class CcAlgorithm {
  public:
    virtual ~CcAlgorithm() = default;
    virtual void bind(std::size_t flow_count) = 0;
    virtual CcDecision on_event(const CcContext& ctx, const CcEvent& ev) = 0;
    virtual SimTime timer_period(std::uint32_t /*flow_id*/) const { return 0; }
    virtual bool wants_telemetry() const { return false; }
};

}  // namespace ccgym
