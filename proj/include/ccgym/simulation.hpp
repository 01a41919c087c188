#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccgym/cc.hpp"
#include "ccgym/event_queue.hpp"
#include "ccgym/flow.hpp"
#include "ccgym/packet.hpp"
#include "ccgym/sim_time.hpp"
#include "ccgym/switch_port.hpp"

namespace ccgym {

// Fabric and protocol parameters shared by every element of an instance.
struct SimParams {
    std::uint64_t link_rate_bps = 100'000'000'000ull;  // 100 Gbit/s line rate
    std::uint32_t mtu_bytes = 1024;
    std::uint32_t probe_bytes = 64;
    std::uint32_t max_burst_bytes = 16 * 1024;
    SimTime hop_prop_ns = 1 * kMicrosecond;
    std::uint64_t port_capacity_bytes = 5'000'000;
    std::uint64_t ecn_kmin_bytes = 100'000;
    std::uint64_t ecn_kmax_bytes = 1'000'000;
    double ecn_pmax = 0.8;
    bool telemetry = false;
    double min_rate_fraction = 1e-4;
    double initial_rate_fraction = 1.0;
    std::uint64_t seed = 1;

    std::uint64_t min_rate_bps() const {
        std::uint64_t r = static_cast<std::uint64_t>(double(link_rate_bps) * min_rate_fraction);
        return r > 0 ? r : 1;
    }
};

struct FlowSetup {
    std::uint32_t src_host = 0;
    std::uint32_t dst_port = 0;
    std::uint64_t size_bytes = 0;  // 0 = infinite backlog
    SimTime start_ns = 0;
    double initial_rate_fraction = 0;  // 0 = use SimParams default
};

struct InstanceSetup {
    SimParams params;
    std::uint32_t hosts = 0;
    std::uint32_t ports = 0;
    std::vector<FlowSetup> flows;
};

// Test instrumentation; unset hooks cost one branch per site.
struct TestHooks {
    std::function<void(std::uint32_t port, const Packet&, std::uint64_t occupancy_before,
                       bool dropped)>
        on_switch_arrival;
    std::function<void(std::uint32_t port, const Packet&, SimTime wait_ns)> on_service_start;
    std::function<void(std::uint32_t flow, SimTime now, std::uint64_t new_rate_bps)> on_decision;
    std::function<void(std::uint32_t flow, SimTime now, std::uint64_t rtt_ns)> on_rtt_sample;
    std::function<void(const Packet&, SimTime now)> on_deliver;
};

// Counters accumulated inside the configured measurement window.
struct RunCollector {
    SimTime window_begin = 0;
    SimTime window_end = 0;
    static constexpr std::size_t kDropSlices = 20;

    std::vector<std::uint64_t> flow_delivered_bytes;  // per flow, in window
    struct PortWindow {
        std::uint64_t wait_sum_ns = 0;
        std::uint64_t wait_count = 0;
        std::uint64_t dropped_bytes = 0;
    };
    std::vector<PortWindow> ports;
    std::vector<std::uint64_t> drop_slice_bytes;  // kDropSlices slices of the window

    bool collect_rtt = false;
    std::vector<std::vector<std::uint64_t>> rtt_samples_ns;  // per flow, in window

    std::int64_t tracked_flow = -1;
    std::vector<std::pair<SimTime, std::uint64_t>> rate_samples;  // (time, rate) whole run

    bool in_window(SimTime t) const { return t >= window_begin && t < window_end; }
    SimTime window_ns() const { return window_end - window_begin; }
};

// Deterministic single-threaded event loop over one star fabric: hosts feed
// switch ports through fixed one-hop paths; probes reflect at the receiver,
// congestion notifications return to the source on a propagation-only path.
class Simulation {
  public:
    explicit Simulation(InstanceSetup setup)
        : params_(setup.params), rng_(setup.params.seed) {
        if (setup.hosts == 0 || setup.ports == 0)
            throw std::runtime_error("simulation: needs at least one host and one port");
        if (!(params_.initial_rate_fraction > 0) || params_.initial_rate_fraction > 1.0)
            throw std::runtime_error("simulation: initial rate fraction outside (0,1]");
        hosts_.resize(setup.hosts);
        for (auto& h : hosts_) {
            h.link_rate_bps = params_.link_rate_bps;
            h.max_burst_bytes = params_.max_burst_bytes;
        }
        ports_.resize(setup.ports);
        for (auto& p : ports_) {
            p.capacity_bytes = params_.port_capacity_bytes;
            p.service_rate_bps = params_.link_rate_bps;
            p.ecn_kmin_bytes = params_.ecn_kmin_bytes;
            p.ecn_kmax_bytes = params_.ecn_kmax_bytes;
            p.ecn_pmax = params_.ecn_pmax;
        }
        flows_.reserve(setup.flows.size());
        for (std::uint32_t i = 0; i < setup.flows.size(); ++i) {
            const FlowSetup& fs = setup.flows[i];
            if (fs.src_host >= setup.hosts || fs.dst_port >= setup.ports)
                throw std::runtime_error("simulation: flow is not routable");
            FlowState f;
            f.flow_id = i;
            f.src_host = fs.src_host;
            f.dst_port = fs.dst_port;
            double frac = fs.initial_rate_fraction > 0 ? fs.initial_rate_fraction
                                                       : params_.initial_rate_fraction;
            if (frac > 1.0) throw std::runtime_error("simulation: flow rate above link rate");
            f.rate_bps = static_cast<std::uint64_t>(double(params_.link_rate_bps) * frac);
            if (f.rate_bps == 0) f.rate_bps = params_.min_rate_bps();
            f.size_bytes = fs.size_bytes;
            f.start_ns = fs.start_ns;
            f.last_accrue_ns = fs.start_ns;
            f.base_rtt_ns = compute_base_rtt(params_);
            flows_.push_back(f);
            hosts_[fs.src_host].flow_ids.push_back(i);
        }
        host_rt_.resize(hosts_.size());
        decide_counts_.assign(flows_.size(), 0);
        collector_.flow_delivered_bytes.assign(flows_.size(), 0);
        collector_.ports.assign(ports_.size(), {});
        collector_.drop_slice_bytes.assign(RunCollector::kDropSlices, 0);
        collector_.rtt_samples_ns.resize(flows_.size());
        for (std::uint32_t h = 0; h < hosts_.size(); ++h) {
            SimTime first = std::numeric_limits<SimTime>::max();
            for (auto id : hosts_[h].flow_ids)
                first = std::min(first, flows_[id].start_ns);
            if (first != std::numeric_limits<SimTime>::max()) push_sched(h, first);
        }
    }

    // Empty-system round trip of one probe: serialization at the host link and
    // at the switch port plus per-hop propagation forward, propagation-only
    // return path.
    static std::uint64_t compute_base_rtt(const SimParams& p) {
        std::uint64_t probe_bits = std::uint64_t(p.probe_bytes) * 8;
        return serialization_ns_ceil(probe_bits, p.link_rate_bps) + p.hop_prop_ns +
               serialization_ns_ceil(probe_bits, p.link_rate_bps) + p.hop_prop_ns +
               2 * p.hop_prop_ns;
    }

    void set_cc(std::shared_ptr<CcAlgorithm> cc) {
        if (now_ != 0) throw std::logic_error("simulation: set_cc after run start");
        cc_ = std::move(cc);
        if (!cc_) return;
        cc_->bind(flows_.size());
        params_.telemetry = params_.telemetry || cc_->wants_telemetry();
        for (auto& f : flows_) {
            SimTime period = cc_->timer_period(f.flow_id);
            if (period > 0) push_timer(f.flow_id, f.start_ns + period);
        }
    }

    void set_trace(std::ostream* os) { trace_ = os; }
    TestHooks& hooks() { return hooks_; }

    void set_measure_window(SimTime begin, SimTime end) {
        if (end <= begin) throw std::runtime_error("simulation: empty measurement window");
        collector_.window_begin = begin;
        collector_.window_end = end;
    }
    void enable_rtt_collection() { collector_.collect_rtt = true; }
    void track_flow_rate(std::uint32_t flow) {
        collector_.tracked_flow = flow;
        collector_.rate_samples.emplace_back(flows_[flow].start_ns, flows_[flow].rate_bps);
    }

    void run_until(SimTime t) {
        while (auto next = queue_.peek_time()) {
            if (*next > t) break;
            step();
        }
        now_ = std::max(now_, t);
    }

    // Advances until every flow has made at least `steps` new probe-return
    // decisions since the previous call, or the time cap is hit. Returns true
    // if the target was met.
    bool run_until_min_decisions(std::uint64_t steps, SimTime time_cap) {
        if (decide_floor_.size() != flows_.size()) decide_floor_ = decide_counts_;
        auto met = [&] {
            for (std::uint32_t i = 0; i < flows_.size(); ++i)
                if (decide_counts_[i] < decide_floor_[i] + steps) return false;
            return true;
        };
        bool ok = met();
        while (!ok) {
            auto next = queue_.peek_time();
            if (!next || *next > time_cap) break;
            if (step()) ok = met();
        }
        decide_floor_ = decide_counts_;
        return ok;
    }

    // Stops all sources and processes what is left in the network.
    void drain(SimTime cap = ~SimTime(0)) {
        draining_ = true;
        while (auto next = queue_.peek_time()) {
            if (*next > cap) break;
            step();
        }
    }

    SimTime now() const { return now_; }
    const SimParams& params() const { return params_; }
    const std::vector<FlowState>& flows() const { return flows_; }
    const std::vector<SwitchPort>& ports() const { return ports_; }
    const std::vector<HostSched>& host_state() const { return hosts_; }
    const RunCollector& collector() const { return collector_; }
    std::uint64_t decisions(std::uint32_t flow) const { return decide_counts_[flow]; }
    std::uint64_t total_decisions() const {
        std::uint64_t s = 0;
        for (auto d : decide_counts_) s += d;
        return s;
    }
    bool queue_empty() const { return queue_.empty(); }

  private:
    static constexpr SimTime kNever = ~SimTime(0);

    struct HostRt {
        SimTime pending_time = 0;
        std::uint64_t gen = 0;
        bool pending = false;
    };

    std::uint64_t credit_cap_num() const {
        return std::uint64_t(params_.max_burst_bytes) * 8'000'000'000ull;
    }

    void push_sched(std::uint32_t host, SimTime t) {
        HostRt& rt = host_rt(host);
        if (rt.pending && t >= rt.pending_time) return;
        rt.pending = true;
        rt.pending_time = t;
        rt.gen++;
        SimEvent ev;
        ev.time = t;
        ev.kind = EventKind::FlowScheduled;
        ev.host = std::int32_t(host);
        ev.flow = std::int32_t(rt.gen);  // wake generation; stale wakes are ignored
        queue_.push(ev);
    }

    void push_timer(std::uint32_t flow, SimTime t) {
        SimEvent ev;
        ev.time = t;
        ev.kind = EventKind::TimerFire;
        ev.flow = std::int32_t(flow);
        queue_.push(ev);
    }

    void push_packet(EventKind kind, Packet pkt, SimTime t, std::int32_t port = -1) {
        SimEvent ev;
        ev.time = t;
        ev.kind = kind;
        ev.pkt = std::move(pkt);
        ev.port = port;
        queue_.push(ev);
    }

    HostRt& host_rt(std::uint32_t h) { return host_rt_[h]; }

    // Returns true if the event produced a probe-return decision.
    bool step() {
        auto evo = queue_.pop();
        if (!evo) return false;
        SimEvent& ev = *evo;
        if (ev.time < now_) throw std::logic_error("simulation: time went backwards");
        now_ = ev.time;
        bool decision = false;
        switch (ev.kind) {
            case EventKind::FlowScheduled: handle_flow_scheduled(ev); break;
            case EventKind::PacketArriveSwitch: handle_arrive_switch(ev); break;
            case EventKind::PacketDepartSwitch: handle_depart_switch(ev); break;
            case EventKind::PacketArriveDest: handle_arrive_dest(ev); break;
            case EventKind::ProbeReturn:
                handle_probe_return(ev);
                decision = true;
                break;
            case EventKind::TimerFire: handle_timer(ev); break;
        }
        if (trace_) emit_trace(ev);
        return decision;
    }

    void emit_trace(const SimEvent& ev) {
        std::int32_t flow = -1;
        std::int32_t port = -1;
        switch (ev.kind) {
            case EventKind::FlowScheduled: break;
            case EventKind::TimerFire: flow = ev.flow; break;
            default:
                flow = std::int32_t(ev.pkt.flow_id);
                port = std::int32_t(flows_[ev.pkt.flow_id].dst_port);
                break;
        }
        std::uint64_t occ = port >= 0 ? ports_[port].occupancy_bytes : 0;
        (*trace_) << now_ << ' ' << event_kind_name(ev.kind) << ' ' << flow << ' ' << port
                  << ' ' << occ << '\n';
    }

    void handle_flow_scheduled(const SimEvent& ev) {
        std::uint32_t h = std::uint32_t(ev.host);
        HostRt& rt = host_rt(h);
        if (std::uint64_t(ev.flow) != rt.gen) return;  // superseded wake
        rt.pending = false;
        if (draining_) return;
        HostSched& H = hosts_[h];
        if (now_ < H.link_free_ns) {
            push_sched(h, H.link_free_ns);
            return;
        }
        // Round-robin pick of the next flow that may transmit now.
        std::size_t n = H.flow_ids.size();
        std::size_t chosen = n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t idx = (H.cursor + i) % n;
            if (flows_[H.flow_ids[idx]].active(now_)) {
                chosen = idx;
                break;
            }
        }
        if (chosen == n) {
            schedule_next_turn(h);
            return;
        }
        H.cursor = (chosen + 1) % n;
        FlowState& f = flows_[H.flow_ids[chosen]];
        f.accrue(now_, credit_cap_num());

        std::uint64_t burst_bytes = 0;
        std::vector<std::uint32_t> sizes;
        while (true) {
            std::uint64_t left = f.size_bytes == 0
                                     ? std::uint64_t(params_.mtu_bytes)
                                     : f.size_bytes - f.bytes_sent - burst_bytes;
            if (left == 0) break;
            std::uint32_t pkt_bytes =
                std::uint32_t(std::min<std::uint64_t>(params_.mtu_bytes, left));
            if (burst_bytes + pkt_bytes > params_.max_burst_bytes) break;
            if (f.credit_num < std::uint64_t(pkt_bytes) * 8'000'000'000ull) break;
            f.debit_bytes(pkt_bytes);
            sizes.push_back(pkt_bytes);
            burst_bytes += pkt_bytes;
        }

        if (!sizes.empty()) {
            SimTime tx = now_;
            for (std::uint32_t sz : sizes) {
                Packet pkt;
                pkt.flow_id = f.flow_id;
                pkt.kind = PacketKind::Data;
                pkt.size_bytes = sz;
                pkt.send_time = tx;
                pkt.pkt_id = next_pkt_id_++;
                tx += H.carry.advance(std::uint64_t(sz) * 8, H.link_rate_bps);
                f.bytes_sent += sz;
                f.bytes_in_flight += sz;
                push_packet(EventKind::PacketArriveSwitch, pkt, tx + params_.hop_prop_ns);
            }
            // Every data burst ends with one RTT probe.
            Packet probe;
            probe.flow_id = f.flow_id;
            probe.kind = PacketKind::RttProbe;
            probe.size_bytes = params_.probe_bytes;
            probe.send_time = tx;
            probe.pkt_id = next_pkt_id_++;
            tx += H.carry.advance(std::uint64_t(params_.probe_bytes) * 8, H.link_rate_bps);
            push_packet(EventKind::PacketArriveSwitch, probe, tx + params_.hop_prop_ns);
            H.link_free_ns = tx;
        }
        schedule_next_turn(h);
    }

    std::uint64_t burst_quantum(const FlowState& f) const {
        if (f.size_bytes == 0) return params_.max_burst_bytes;
        return std::min<std::uint64_t>(params_.max_burst_bytes,
                                       f.size_bytes - f.bytes_sent);
    }

    // Next turn comes when the link is free and some flow has accrued a full
    // burst (keeps probe overhead amortized over whole bursts), or when a
    // future flow starts.
    void schedule_next_turn(std::uint32_t h) {
        const HostSched& H = hosts_[h];
        SimTime wake = kNever;
        for (auto id : H.flow_ids) {
            const FlowState& g = flows_[id];
            if (g.active(now_)) {
                SimTime at = g.last_accrue_ns + g.ns_until_credit(burst_quantum(g));
                wake = std::min(wake, std::max({at, now_, H.link_free_ns}));
            } else if (!g.started(now_)) {
                wake = std::min(wake, std::max(g.start_ns, H.link_free_ns));
            }
        }
        if (wake != kNever) push_sched(h, wake);
    }

    void handle_arrive_switch(const SimEvent& ev) {
        const Packet& pkt = ev.pkt;
        FlowState& f = flows_[pkt.flow_id];
        SwitchPort& P = ports_[f.dst_port];
        std::uint64_t occ_before = P.occupancy_bytes;
        auto res = P.enqueue(pkt, now_, rng_);
        bool dropped = res == SwitchPort::Enqueue::Dropped;
        if (hooks_.on_switch_arrival)
            hooks_.on_switch_arrival(f.dst_port, pkt, occ_before, dropped);
        if (dropped) {
            if (collector_.in_window(now_)) record_drop(f.dst_port, pkt.size_bytes);
            if (pkt.kind == PacketKind::Data) {
                f.bytes_dropped += pkt.size_bytes;
                f.bytes_in_flight -= pkt.size_bytes;
                note_flow_drained(f);
                Packet nack;
                nack.flow_id = pkt.flow_id;
                nack.kind = PacketKind::Nack;
                nack.size_bytes = params_.probe_bytes;
                nack.send_time = now_;
                nack.pkt_id = next_pkt_id_++;
                push_packet(EventKind::PacketArriveDest, nack, now_ + params_.hop_prop_ns);
            } else if (pkt.kind == PacketKind::RttProbe) {
                f.probe_drops++;
            }
            return;
        }
        if (!P.serving) {
            P.serving = true;
            begin_service(f.dst_port);
        }
    }

    void begin_service(std::uint32_t port) {
        SwitchPort& P = ports_[port];
        const SwitchPort::Queued& q = P.head();
        SimTime wait = now_ - q.arrive_ns;
        if (collector_.in_window(now_)) {
            collector_.ports[port].wait_sum_ns += wait;
            collector_.ports[port].wait_count++;
        }
        if (hooks_.on_service_start) hooks_.on_service_start(port, q.pkt, wait);
        SimTime dur = P.service_ns(q.pkt.size_bytes);
        SimEvent ev;
        ev.time = now_ + dur;
        ev.kind = EventKind::PacketDepartSwitch;
        ev.port = std::int32_t(port);
        queue_.push(ev);
    }

    void handle_depart_switch(const SimEvent& ev) {
        SwitchPort& P = ports_[ev.port];
        SwitchPort::Queued q = P.dequeue();
        if (params_.telemetry && q.pkt.kind == PacketKind::RttProbe) {
            q.pkt.telemetry = Telemetry{P.occupancy_bytes, P.tx_bytes, P.service_rate_bps, now_};
        }
        push_packet(EventKind::PacketArriveDest, q.pkt, now_ + params_.hop_prop_ns);
        if (!P.fifo.empty())
            begin_service(std::uint32_t(ev.port));
        else
            P.serving = false;
    }

    void handle_arrive_dest(const SimEvent& ev) {
        const Packet& pkt = ev.pkt;
        FlowState& f = flows_[pkt.flow_id];
        if (hooks_.on_deliver) hooks_.on_deliver(pkt, now_);
        switch (pkt.kind) {
            case PacketKind::Data: {
                f.bytes_delivered += pkt.size_bytes;
                f.bytes_in_flight -= pkt.size_bytes;
                if (collector_.in_window(now_))
                    collector_.flow_delivered_bytes[pkt.flow_id] += pkt.size_bytes;
                note_flow_drained(f);
                if (pkt.ecn_marked) {
                    Packet cnp;
                    cnp.flow_id = pkt.flow_id;
                    cnp.kind = PacketKind::Cnp;
                    cnp.size_bytes = params_.probe_bytes;
                    cnp.send_time = now_;
                    cnp.pkt_id = next_pkt_id_++;
                    push_packet(EventKind::PacketArriveDest, cnp,
                                now_ + 2 * params_.hop_prop_ns);
                }
                break;
            }
            case PacketKind::RttProbe: {
                Packet back = pkt;
                push_packet(EventKind::ProbeReturn, back, now_ + 2 * params_.hop_prop_ns);
                break;
            }
            case PacketKind::Cnp: {
                f.cnp_count++;
                dispatch_cc(f, CcEventKind::CnpReceived, 0, std::nullopt);
                break;
            }
            case PacketKind::Nack: {
                f.nack_count++;
                dispatch_cc(f, CcEventKind::NackReceived, 0, std::nullopt);
                break;
            }
        }
    }

    void handle_probe_return(const SimEvent& ev) {
        FlowState& f = flows_[ev.pkt.flow_id];
        std::uint64_t rtt = now_ - ev.pkt.send_time;
        f.last_rtt_ns = rtt;
        if (collector_.collect_rtt && collector_.in_window(now_))
            collector_.rtt_samples_ns[f.flow_id].push_back(rtt);
        if (hooks_.on_rtt_sample) hooks_.on_rtt_sample(f.flow_id, now_, rtt);
        decide_counts_[f.flow_id]++;
        dispatch_cc(f, CcEventKind::ProbeReturned, rtt, ev.pkt.telemetry);
    }

    void handle_timer(const SimEvent& ev) {
        if (draining_) return;
        FlowState& f = flows_[std::uint32_t(ev.flow)];
        if (!f.sending_done()) dispatch_cc(f, CcEventKind::TimerFired, 0, std::nullopt);
        if (cc_) {
            SimTime period = cc_->timer_period(f.flow_id);
            if (period > 0 && !f.sending_done()) push_timer(f.flow_id, now_ + period);
        }
    }

    void dispatch_cc(FlowState& f, CcEventKind kind, std::uint64_t rtt,
                     std::optional<Telemetry> telemetry) {
        if (!cc_) return;
        CcEvent ev;
        ev.kind = kind;
        ev.now = now_;
        ev.flow_id = f.flow_id;
        ev.rtt_ns = rtt;
        ev.telemetry = std::move(telemetry);
        if (kind == CcEventKind::ProbeReturned) {
            ev.cnp_since_last = f.cnp_count;
            ev.nack_since_last = f.nack_count;
        }
        CcContext ctx{now_, f.rate_bps, f.base_rtt_ns, params_.link_rate_bps,
                      params_.min_rate_bps()};
        CcDecision d = cc_->on_event(ctx, ev);
        if (kind == CcEventKind::ProbeReturned) {
            f.cnp_count = 0;
            f.nack_count = 0;
        }
        f.accrue(now_, credit_cap_num());  // settle credit at the old rate first
        f.rate_bps = clamp_rate(d.new_rate_bps, ctx);
        if (collector_.tracked_flow == std::int64_t(f.flow_id))
            collector_.rate_samples.emplace_back(now_, f.rate_bps);
        if (hooks_.on_decision) hooks_.on_decision(f.flow_id, now_, f.rate_bps);
        if (f.active(now_)) {
            // A rate change moves the flow's next-burst time; re-arm the host.
            SimTime at = std::max(f.last_accrue_ns + f.ns_until_credit(burst_quantum(f)),
                                  hosts_[f.src_host].link_free_ns);
            push_sched(f.src_host, std::max(at, now_));
        }
    }

    void record_drop(std::uint32_t port, std::uint32_t bytes) {
        collector_.ports[port].dropped_bytes += bytes;
        SimTime span = collector_.window_ns();
        if (span > 0) {
            std::size_t idx = std::size_t(((now_ - collector_.window_begin) *
                                           RunCollector::kDropSlices) /
                                          span);
            if (idx >= RunCollector::kDropSlices) idx = RunCollector::kDropSlices - 1;
            collector_.drop_slice_bytes[idx] += bytes;
        }
    }

    void note_flow_drained(FlowState& f) {
        if (f.size_bytes != 0 && f.sending_done() && f.bytes_in_flight == 0 &&
            f.done_ns == 0)
            f.done_ns = now_;
    }

    SimParams params_;
    std::vector<HostSched> hosts_;
    std::vector<HostRt> host_rt_;
    std::vector<SwitchPort> ports_;
    std::vector<FlowState> flows_;
    EventQueue queue_;
    std::mt19937_64 rng_;
    std::shared_ptr<CcAlgorithm> cc_;
    std::ostream* trace_ = nullptr;
    TestHooks hooks_;
    RunCollector collector_;
    std::vector<std::uint64_t> decide_counts_;
    std::vector<std::uint64_t> decide_floor_;
    SimTime now_ = 0;
    std::uint64_t next_pkt_id_ = 0;
    bool draining_ = false;
};

}  // namespace ccgym
