#pragma once

#include <cstdint>
#include <vector>

#include "ccgym/cc.hpp"

namespace ccgym {

// Simplified, behavior-faithful rule-based baselines. Parameters are exposed
// through the config file; defaults are tuned to be stable on the small
// many-to-one smoke tests.

// ----------------------------------------------------------------- DCQCN --

struct DcqcnParams {
    double alpha_gain = 1.0 / 16.0;      // EWMA gain g
    SimTime increase_timer_ns = 55 * kMicrosecond;
    std::uint32_t fast_recovery_stages = 5;
    double additive_increase_bps = 0.5e9;
    SimTime cut_min_gap_ns = 50 * kMicrosecond;
};

struct DcqcnState {
    double alpha = 1.0;
    double target_rate_bps = 0;  // 0 until the first cut; treated as link rate
    std::uint32_t stage = 0;
    SimTime last_cut_ns = 0;
    bool cut_seen = false;
    bool cnp_since_timer = false;
};

inline CcDecision dcqcn_update(DcqcnState& st, const CcContext& ctx,
                               const CcEvent& ev, const DcqcnParams& p) {
    double rate = double(ctx.rate_bps);
    switch (ev.kind) {
        case CcEventKind::CnpReceived: {
            st.cnp_since_timer = true;
            bool may_cut = !st.cut_seen || ev.now - st.last_cut_ns >= p.cut_min_gap_ns;
            if (may_cut) {
                st.target_rate_bps = rate;
                rate *= 1.0 - st.alpha / 2.0;
                st.alpha = (1.0 - p.alpha_gain) * st.alpha + p.alpha_gain;
                st.stage = 0;
                st.last_cut_ns = ev.now;
                st.cut_seen = true;
            }
            return {rate};
        }
        case CcEventKind::TimerFired: {
            if (!st.cnp_since_timer) st.alpha *= 1.0 - p.alpha_gain;
            st.cnp_since_timer = false;
            double target = st.target_rate_bps > 0 ? st.target_rate_bps
                                                   : double(ctx.link_rate_bps);
            if (st.stage < p.fast_recovery_stages) {
                st.stage++;
                rate = 0.5 * (target + rate);
            } else {
                rate += p.additive_increase_bps;
            }
            return {rate};
        }
        default:
            return {rate};
    }
}

// ------------------------------------------------------------------ HPCC --

struct HpccParams {
    double eta = 0.95;                 // target utilization band floor
    double additive_increase_bps = 0.6e9;
    std::uint32_t max_stage = 5;       // additive steps before fast ramp
    double queue_term_cap = 1.0;       // bounds the per-RTT cut on deep queues
    double cut_floor = 0.1;
    SimTime update_period_ns = 20 * kMicrosecond;  // uniform decision cadence
};

struct HpccState {
    bool has_prev = false;
    std::uint64_t prev_tx_bytes = 0;
    SimTime prev_ts = 0;
    std::uint32_t stage = 0;
    bool has_estimate = false;
    double last_u = 0;        // cached utilization, refreshed per probe
    std::uint64_t last_rtt_ns = 0;
    SimTime last_mult_ns = 0;
    bool mult_acted = false;
};

// Utilization from telemetry: queue backlog normalized by the path BDP plus
// the measured port throughput share.
inline double hpcc_utilization(const HpccState& st, const CcContext& ctx,
                               const Telemetry& t, const HpccParams& p) {
    double u = 0;
    double bdp_bits = double(ctx.link_rate_bps) * double(ctx.base_rtt_ns) / 1e9;
    if (bdp_bits > 0)
        u += std::min(double(t.queue_bytes) * 8.0 / bdp_bits, p.queue_term_cap);
    if (st.has_prev && t.ts > st.prev_ts) {
        double bits = double(t.tx_bytes_cum - st.prev_tx_bytes) * 8.0;
        double tx_rate = bits * 1e9 / double(t.ts - st.prev_ts);
        u += tx_rate / double(t.port_rate_bps);
    }
    return u;
}

// Probes refresh the utilization estimate; the rate update runs on the
// fixed-period timer so every flow adjusts at the same cadence. One update:
// rate' = rate * g(U) + ai, with g = 1/U above full utilization, 1 inside
// the [eta, 1] band, and a catch-up factor toward eta after max_stage
// consecutive under-utilized updates. Multiplicative moves are additionally
// gated to once per measured RTT.
inline CcDecision hpcc_update(HpccState& st, const CcContext& ctx,
                              const CcEvent& ev, const HpccParams& p) {
    double rate = double(ctx.rate_bps);
    if (ev.kind == CcEventKind::ProbeReturned && ev.telemetry.has_value()) {
        const Telemetry& t = *ev.telemetry;
        double u = hpcc_utilization(st, ctx, t, p);
        bool first = !st.has_prev;
        st.has_prev = true;
        st.prev_tx_bytes = t.tx_bytes_cum;
        st.prev_ts = t.ts;
        if (!first) {  // need two samples for a throughput estimate
            st.last_u = u;
            st.last_rtt_ns = ev.rtt_ns;
            st.has_estimate = true;
        }
        return {rate};
    }
    if (ev.kind != CcEventKind::TimerFired || !st.has_estimate) return {rate};
    double u = st.last_u;
    if (st.mult_acted && ev.now - st.last_mult_ns < st.last_rtt_ns) return {rate};
    st.last_mult_ns = ev.now;
    st.mult_acted = true;
    double factor = 1.0;
    if (u > 1.0) {
        st.stage = 0;
        factor = std::max(1.0 / u, p.cut_floor);
    } else if (u < p.eta) {
        st.stage++;
        if (st.stage >= p.max_stage)
            factor = std::min(p.eta / std::max(u, 1e-3), 2.0);
    } else {
        st.stage = 0;
    }
    return {rate * factor + p.additive_increase_bps};
}

// ----------------------------------------------------------------- SWIFT --

struct SwiftParams {
    double target_delay_base_rtts = 2.0;
    double additive_increase_bps = 0.5e9;
    double md_factor = 0.7;
    double md_floor = 0.2;
};

struct SwiftState {
    SimTime last_increase_ns = 0;
    SimTime last_decrease_ns = 0;
    bool acted = false;
};

inline CcDecision swift_update(SwiftState& st, const CcContext& ctx,
                               const CcEvent& ev, const SwiftParams& p) {
    double rate = double(ctx.rate_bps);
    if (ev.kind != CcEventKind::ProbeReturned) return {rate};
    double target_ns = p.target_delay_base_rtts * double(ctx.base_rtt_ns);
    double rtt = double(ev.rtt_ns);
    if (rtt <= target_ns) {
        // Additive increase, at most once per RTT window.
        if (!st.acted || ev.now - st.last_increase_ns >= ev.rtt_ns) {
            rate += p.additive_increase_bps;
            st.last_increase_ns = ev.now;
            st.acted = true;
        }
    } else {
        // Multiplicative decrease, at most once per RTT window.
        if (!st.acted || ev.now - st.last_decrease_ns >= ev.rtt_ns) {
            double cut = 1.0 - p.md_factor * (rtt - target_ns) / rtt;
            rate *= std::max(cut, p.md_floor);
            st.last_decrease_ns = ev.now;
            st.acted = true;
        }
    }
    return {rate};
}

// ------------------------------------------------------- driver wrappers --

class DcqcnCc final : public CcAlgorithm {
  public:
    explicit DcqcnCc(DcqcnParams p = {}) : params_(p) {}
    void bind(std::size_t n) override { states_.assign(n, DcqcnState{}); }
    CcDecision on_event(const CcContext& ctx, const CcEvent& ev) override {
        return dcqcn_update(states_[ev.flow_id], ctx, ev, params_);
    }
    SimTime timer_period(std::uint32_t) const override {
        return params_.increase_timer_ns;
    }
    const DcqcnParams& params() const { return params_; }

  private:
    DcqcnParams params_;
    std::vector<DcqcnState> states_;
};

class HpccCc final : public CcAlgorithm {
  public:
    explicit HpccCc(HpccParams p = {}) : params_(p) {}
    void bind(std::size_t n) override { states_.assign(n, HpccState{}); }
    CcDecision on_event(const CcContext& ctx, const CcEvent& ev) override {
        return hpcc_update(states_[ev.flow_id], ctx, ev, params_);
    }
    SimTime timer_period(std::uint32_t) const override { return params_.update_period_ns; }
    bool wants_telemetry() const override { return true; }

  private:
    HpccParams params_;
    std::vector<HpccState> states_;
};

class SwiftCc final : public CcAlgorithm {
  public:
    explicit SwiftCc(SwiftParams p = {}) : params_(p) {}
    void bind(std::size_t n) override { states_.assign(n, SwiftState{}); }
    CcDecision on_event(const CcContext& ctx, const CcEvent& ev) override {
        return swift_update(states_[ev.flow_id], ctx, ev, params_);
    }

  private:
    SwiftParams params_;
    std::vector<SwiftState> states_;
};

// Holds every flow at its initial rate; used by fixed-rate experiments.
class FixedRateCc final : public CcAlgorithm {
  public:
    void bind(std::size_t) override {}
    CcDecision on_event(const CcContext& ctx, const CcEvent&) override {
        return {double(ctx.rate_bps)};
    }
};

}  // namespace ccgym
