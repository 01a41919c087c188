#pragma once

// Shared helpers for the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccgym/adpg.hpp"
#include "ccgym/baselines.hpp"
#include "ccgym/scenarios.hpp"
#include "ccgym/simulation.hpp"

namespace ccgym::testing {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Random small scenario for the property suite: 2-8 flows, one of the three
// benchmark families, a short run.
inline ScenarioSpec random_scenario(std::mt19937_64& rng) {
    ScenarioSpec spec;
    std::uint32_t flows = 2 + std::uint32_t(rng() % 7);
    switch (rng() % 3) {
        case 0:
            spec.kind = ScenarioKind::ManyToOne;
            spec.total_flows = flows;
            break;
        case 1:
            spec.kind = ScenarioKind::AllToAll;
            spec.hosts = 2 + std::uint32_t(rng() % 3);
            break;
        default:
            spec.kind = ScenarioKind::LongShort;
            spec.total_flows = flows;
            spec.interrupt.short_bytes = 64 * 1024;
            break;
    }
    spec.duration_ns = 100 * kMicrosecond + rng() % (100 * kMicrosecond);
    spec.seed = rng();
    spec.name = "prop";
    // Occasionally oversubscribe to exercise drops.
    if (rng() % 3 == 0) spec.initial_rate_fraction = 0.5 + 0.5 * u01(rng);
    if (rng() % 4 == 0) spec.sim.port_capacity_bytes = 100'000 + rng() % 400'000;
    return spec;
}

inline std::shared_ptr<CcAlgorithm> random_algorithm(std::mt19937_64& rng) {
    switch (rng() % 4) {
        case 0: return std::make_shared<FixedRateCc>();
        case 1: return std::make_shared<DcqcnCc>();
        case 2: return std::make_shared<SwiftCc>();
        default: return std::make_shared<HpccCc>();
    }
}

struct PropertyRun {
    std::uint64_t trace_hash = 0;
    std::uint64_t delivered = 0, dropped = 0, sent = 0;
    bool fifo_ok = true;
    bool drop_law_ok = true;
    bool bounds_ok = true;
    bool conserved = true;
};

// Runs one randomized case with every structural check attached.
inline PropertyRun run_with_checks(const ScenarioSpec& spec, std::uint64_t algo_pick) {
    PropertyRun out;
    Simulation sim(build_instance(spec));
    std::mt19937_64 algo_rng(algo_pick);
    sim.set_cc(random_algorithm(algo_rng));
    std::ostringstream trace;
    sim.set_trace(&trace);

    std::uint64_t capacity = spec.sim.port_capacity_bytes;
    std::vector<std::vector<std::uint64_t>> enq(sim.ports().size());
    std::vector<std::size_t> served(sim.ports().size(), 0);
    sim.hooks().on_switch_arrival = [&](std::uint32_t port, const Packet& pkt,
                                        std::uint64_t occ_before, bool dropped) {
        bool should_drop = occ_before + pkt.size_bytes > capacity;
        if (dropped != should_drop) out.drop_law_ok = false;
        if (occ_before > capacity) out.bounds_ok = false;
        if (!dropped) enq[port].push_back(pkt.pkt_id);
    };
    sim.hooks().on_service_start = [&](std::uint32_t port, const Packet& pkt, SimTime) {
        if (served[port] >= enq[port].size() ||
            enq[port][served[port]] != pkt.pkt_id)
            out.fifo_ok = false;
        served[port]++;
    };
    sim.run_until(spec.duration_ns);
    for (const FlowState& f : sim.flows()) {
        if (f.bytes_sent != f.bytes_delivered + f.bytes_dropped + f.bytes_in_flight)
            out.conserved = false;
    }
    sim.drain();
    for (const FlowState& f : sim.flows()) {
        if (f.bytes_in_flight != 0 ||
            f.bytes_sent != f.bytes_delivered + f.bytes_dropped)
            out.conserved = false;
        out.delivered += f.bytes_delivered;
        out.dropped += f.bytes_dropped;
        out.sent += f.bytes_sent;
    }
    for (const SwitchPort& p : sim.ports())
        if (p.occupancy_bytes != 0) out.bounds_ok = false;
    out.trace_hash = fnv1a(trace.str());
    return out;
}

// Differentiable single-flow toy: inflation responds smoothly to the rate, so
// the exact action-derivative of the reward is available in closed form.
// rate' = clamp(a * rate); inflation(rate) = 1 + beta * (rate/C)^2;
// x(rate) = inflation(rate) * sqrt(rate/C).
struct ToyEnv {
    double beta = 4.0;
    double target = 2.0;

    double x_of(double rn) const { return (1.0 + beta * rn * rn) * std::sqrt(rn); }
    // d x(a * rn) / d a evaluated at a = 1 (chain rule through the rate map).
    double dx_da(double rn) const {
        return (0.5 / std::sqrt(rn) + 2.5 * beta * rn * std::sqrt(rn)) * rn;
    }
};

// Worst relative error between the chained analytic backward pass and central
// finite differences of sum_t w_t * action_t over every parameter.
template <typename S>
double policy_fd_worst_error(std::uint64_t seed, int steps, int window) {
    std::mt19937_64 rng(seed);
    int in = 4;
    auto params = PolicyParams<S>::init(in, seed * 31 + 1, 0.3);
    PolicyState<S> start;
    for (int i = 0; i < kLstm; ++i) {
        start.h[i] = S(u01(rng) - 0.5);
        start.c[i] = S(u01(rng) - 0.5);
    }
    std::vector<Eigen::Matrix<S, Eigen::Dynamic, 1>> obs;
    std::vector<S> weights;
    for (int t = 0; t < steps; ++t) {
        Eigen::Matrix<S, Eigen::Dynamic, 1> o(in);
        for (int i = 0; i < in; ++i) o[i] = S(u01(rng) * 2.0);
        obs.push_back(o);
        weights.push_back(S(u01(rng) * 2.0 - 1.0));
    }
    auto objective = [&](const PolicyParams<S>& p) {
        PolicyState<S> st = start;
        S total = 0;
        for (int t = 0; t < steps; ++t)
            total += weights[std::size_t(t)] *
                     action_map(policy_forward(p, st, obs[std::size_t(t)]).raw);
        return double(total);
    };
    PolicyParams<S> grads = PolicyParams<S>::zeros(in);
    std::vector<StepTape<S>> tapes;
    {
        PolicyState<S> st = start;
        for (int t = 0; t < steps; ++t)
            tapes.push_back(policy_forward(params, st, obs[std::size_t(t)]).tape);
    }
    for (int t = 0; t < steps; ++t) {
        BackCarry<S> carry;
        int stop = std::max(0, t - window + 1);
        for (int k = t; k >= stop; --k)
            policy_backward_step(params, tapes[std::size_t(k)],
                                 k == t ? weights[std::size_t(t)] : S(0), carry, grads);
    }
    // Denominator floor 1e-5: below it the check is absolute, which keeps
    // finite-difference round-off (~1e-10 at h=1e-6 on an O(1) objective)
    // from masquerading as relative error on numerically-zero gradients.
    double h = 1e-6, worst = 0;
    auto check_tensor = [&](auto& m, const auto& g) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                S orig = m(r, c);
                m(r, c) = orig + S(h);
                double up = objective(params);
                m(r, c) = orig - S(h);
                double dn = objective(params);
                m(r, c) = orig;
                double fd = (up - dn) / (2 * h);
                double an = double(g(r, c));
                double denom = std::max({std::abs(fd), std::abs(an), 1e-5});
                worst = std::max(worst, std::abs(fd - an) / denom);
            }
    };
    check_tensor(params.w1, grads.w1);
    check_tensor(params.b1, grads.b1);
    check_tensor(params.w2, grads.w2);
    check_tensor(params.b2, grads.b2);
    check_tensor(params.wx, grads.wx);
    check_tensor(params.wh, grads.wh);
    check_tensor(params.bl, grads.bl);
    check_tensor(params.w3, grads.w3);
    check_tensor(params.b3, grads.b3);
    return worst;
}

}  // namespace ccgym::testing
