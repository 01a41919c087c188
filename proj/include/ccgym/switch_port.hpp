#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>

#include "ccgym/packet.hpp"
#include "ccgym/sim_time.hpp"

namespace ccgym {

// One switch egress port: a FIFO buffer with RED-style ECN marking and a
// fixed service rate. Packets are dropped iff they do not fit in the buffer.
struct SwitchPort {
    std::uint64_t capacity_bytes = 5'000'000;
    std::uint64_t occupancy_bytes = 0;
    std::uint64_t service_rate_bps = 100'000'000'000ull;
    std::uint64_t ecn_kmin_bytes = 100'000;
    std::uint64_t ecn_kmax_bytes = 1'000'000;
    double ecn_pmax = 0.8;

    std::uint64_t drop_count = 0;
    std::uint64_t drop_bytes = 0;
    std::uint64_t tx_bytes = 0;
    std::uint64_t marked_count = 0;

    struct Queued {
        Packet pkt;
        SimTime arrive_ns = 0;
    };
    std::deque<Queued> fifo;
    bool serving = false;
    RateCarry carry;

    enum class Enqueue : std::uint8_t { Accepted, AcceptedMarked, Dropped };

    double mark_probability(std::uint64_t occupancy) const {
        if (occupancy < ecn_kmin_bytes) return 0.0;
        if (occupancy > ecn_kmax_bytes) return 1.0;
        double span = double(ecn_kmax_bytes - ecn_kmin_bytes);
        return ecn_pmax * double(occupancy - ecn_kmin_bytes) / span;
    }

    // Drop decision uses occupancy at arrival; the mark coin uses the
    // pre-enqueue occupancy.
    Enqueue enqueue(Packet pkt, SimTime now, std::mt19937_64& rng) {
        if (occupancy_bytes + pkt.size_bytes > capacity_bytes) {
            drop_count++;
            drop_bytes += pkt.size_bytes;
            return Enqueue::Dropped;
        }
        bool marked = u01(rng) < mark_probability(occupancy_bytes);
        if (marked) {
            pkt.ecn_marked = true;
            marked_count++;
        }
        occupancy_bytes += pkt.size_bytes;
        fifo.push_back(Queued{pkt, now});
        return marked ? Enqueue::AcceptedMarked : Enqueue::Accepted;
    }

    const Queued& head() const {
        if (fifo.empty()) throw std::logic_error("SwitchPort: head() on empty port");
        return fifo.front();
    }

    SimTime service_ns(std::uint32_t size_bytes) {
        return carry.advance(std::uint64_t(size_bytes) * 8, service_rate_bps);
    }

    // Completes service of the head packet.
    Queued dequeue() {
        if (fifo.empty()) throw std::logic_error("SwitchPort: dequeue on empty port");
        Queued q = fifo.front();
        fifo.pop_front();
        if (occupancy_bytes < q.pkt.size_bytes)
            throw std::logic_error("SwitchPort: occupancy underflow");
        occupancy_bytes -= q.pkt.size_bytes;
        tx_bytes += q.pkt.size_bytes;
        return q;
    }
};

}  // namespace ccgym
