#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ccgym/packet.hpp"
#include "ccgym/sim_time.hpp"

namespace ccgym {

enum class EventKind : std::uint8_t {
    FlowScheduled,
    PacketArriveSwitch,
    PacketDepartSwitch,
    PacketArriveDest,
    ProbeReturn,
    TimerFire,
};

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::FlowScheduled: return "sched";
        case EventKind::PacketArriveSwitch: return "arrive_sw";
        case EventKind::PacketDepartSwitch: return "depart_sw";
        case EventKind::PacketArriveDest: return "arrive_dst";
        case EventKind::ProbeReturn: return "probe_ret";
        case EventKind::TimerFire: return "timer";
    }
    return "?";
}

struct SimEvent {
    SimTime time = 0;
    std::uint64_t seq = 0;  // insertion order; total order with time
    EventKind kind = EventKind::FlowScheduled;
    Packet pkt;             // packet events
    std::int32_t host = -1;  // FlowScheduled
    std::int32_t flow = -1;  // TimerFire
    std::int32_t port = -1;  // PacketDepartSwitch
};

// Deterministic event queue: pop order is strictly ascending (time, seq).
class EventQueue {
  public:
    void push(SimEvent ev) {
        if (ev.time < now_)
            throw std::logic_error("EventQueue: event scheduled in the past");
        ev.seq = next_seq_++;
        heap_.push(ev);
    }

    std::optional<SimEvent> pop() {
        if (heap_.empty()) return std::nullopt;
        SimEvent ev = heap_.top();
        heap_.pop();
        now_ = ev.time;
        return ev;
    }

    std::optional<SimTime> peek_time() const {
        if (heap_.empty()) return std::nullopt;
        return heap_.top().time;
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    SimTime now() const { return now_; }

  private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0;
};

}  // namespace ccgym
