#pragma once

#include <cstdint>
#include <vector>

#include "ccgym/sim_time.hpp"

namespace ccgym {

// Per-flow transmission state. Rates are integer bits per second; the byte
// credit is kept in units of bit-nanoseconds-per-second (rate_bps * ns), so
// whole bytes = credit_num / 8e9 and accrual is exact integer arithmetic.
struct FlowState {
    std::uint32_t flow_id = 0;
    std::uint32_t src_host = 0;
    std::uint32_t dst_port = 0;  // congestion port index; also identifies the receiver

    std::uint64_t rate_bps = 0;
    std::uint64_t base_rtt_ns = 0;
    std::uint64_t last_rtt_ns = 0;

    std::uint64_t cnp_count = 0;   // since last decision
    std::uint64_t nack_count = 0;  // since last decision

    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_delivered = 0;
    std::uint64_t bytes_dropped = 0;
    std::uint64_t bytes_in_flight = 0;

    std::uint64_t size_bytes = 0;  // 0 = infinite backlog
    SimTime start_ns = 0;
    SimTime done_ns = 0;  // finite flows: time the last byte left the network

    std::uint64_t credit_num = 0;
    SimTime last_accrue_ns = 0;
    std::uint64_t probe_drops = 0;

    bool started(SimTime now) const { return now >= start_ns; }
    bool sending_done() const { return size_bytes != 0 && bytes_sent >= size_bytes; }
    bool active(SimTime now) const { return started(now) && !sending_done(); }

    std::uint64_t credit_bytes() const { return credit_num / 8'000'000'000ull; }

    void accrue(SimTime now, std::uint64_t credit_cap_num) {
        if (now <= last_accrue_ns) {
            last_accrue_ns = now > last_accrue_ns ? now : last_accrue_ns;
            return;
        }
        unsigned __int128 gain =
            (unsigned __int128)rate_bps * (now - last_accrue_ns) + credit_num;
        credit_num = gain > credit_cap_num ? credit_cap_num
                                           : static_cast<std::uint64_t>(gain);
        last_accrue_ns = now;
    }

    void debit_bytes(std::uint64_t bytes) { credit_num -= bytes * 8'000'000'000ull; }

    // Time until the accrued credit covers a packet of pkt_bytes.
    SimTime ns_until_credit(std::uint64_t pkt_bytes) const {
        std::uint64_t need = pkt_bytes * 8'000'000'000ull;
        if (credit_num >= need) return 0;
        if (rate_bps == 0) return ~SimTime(0);
        unsigned __int128 gap = need - credit_num;
        return static_cast<SimTime>((gap + rate_bps - 1) / rate_bps);
    }
};

// Round-robin burst scheduler for the flows of one host.
struct HostSched {
    std::vector<std::uint32_t> flow_ids;
    std::size_t cursor = 0;
    std::uint64_t link_rate_bps = 100'000'000'000ull;
    std::uint32_t max_burst_bytes = 16 * 1024;
    SimTime link_free_ns = 0;
    bool sched_pending = false;
    RateCarry carry;
};

}  // namespace ccgym
