#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccgym/simulation.hpp"

namespace ccgym {

// Aggregate metrics of one run over its measurement window. SU and FR are
// percentages; QL is the mean queueing wait at the congested ports; DR is
// dropped traffic. recovery_s / long_bw_percent are long-short only
// (negative recovery means the long flow never re-attained line rate).
struct MetricsReport {
    double su_percent = 0;
    double fr = 0;
    double ql_us = 0;
    double dr_gbps = 0;
    double recovery_s = std::numeric_limits<double>::quiet_NaN();
    double long_bw_percent = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;

    bool has_recovery() const { return !std::isnan(recovery_s); }
};

// Fairness over the flows sharing each congested port: 100 * min/max of the
// per-flow delivered throughput, worst port reported.
inline double fairness_percent(const Simulation& sim,
                               const std::vector<std::uint64_t>& delivered,
                               const std::vector<bool>& counted) {
    double worst = 100.0;
    bool any = false;
    for (std::uint32_t port = 0; port < sim.ports().size(); ++port) {
        double mn = -1, mx = 0;
        for (const FlowState& f : sim.flows()) {
            if (f.dst_port != port || !counted[f.flow_id]) continue;
            double bits = double(delivered[f.flow_id]) * 8;
            if (mn < 0 || bits < mn) mn = bits;
            if (bits > mx) mx = bits;
        }
        if (mn < 0) continue;
        any = true;
        worst = std::min(worst, mx > 0 ? 100.0 * mn / mx : 0.0);
    }
    return any ? worst : 0.0;
}

// Time from the first short-flow start until the long flow's smoothed rate
// first re-attains 95% of the line rate and holds it for 10 consecutive
// probe intervals; the hold-window close ends the recovery. Returns 0 when
// no short flow ever starts and -1 when the flow never recovers.
inline double recovery_time_s(const std::vector<std::pair<SimTime, std::uint64_t>>& samples,
                              SimTime shorts_start_ns, std::uint64_t link_rate_bps,
                              double threshold = 0.95, int hold = 10,
                              double ewma_alpha = 0.2) {
    if (shorts_start_ns == 0) return 0.0;
    double smoothed = 0;
    bool first = true;
    int run = 0;
    for (const auto& [t, rate] : samples) {
        if (first) {
            smoothed = double(rate);
            first = false;
        } else {
            smoothed = (1.0 - ewma_alpha) * smoothed + ewma_alpha * double(rate);
        }
        if (t < shorts_start_ns) continue;
        if (smoothed >= threshold * double(link_rate_bps)) {
            if (++run >= hold) return double(t - shorts_start_ns) / 1e9;
        } else {
            run = 0;
        }
    }
    return -1.0;
}

// window must match the collector window configured before the run.
// long_flow < 0 for scenarios without a long flow. In long-short runs the
// fairness is computed over the long-lived flows only.
inline MetricsReport compute_metrics(const Simulation& sim, std::int64_t long_flow = -1,
                                     SimTime shorts_start_ns = 0) {
    const RunCollector& col = sim.collector();
    if (col.window_end <= col.window_begin)
        throw std::runtime_error("metrics: empty measurement window");
    double window_s = double(col.window_ns()) / 1e9;

    MetricsReport r;
    double link_bits = double(sim.params().link_rate_bps) * window_s;
    double delivered_bits = 0;
    for (std::uint32_t f = 0; f < sim.flows().size(); ++f)
        delivered_bits += double(col.flow_delivered_bytes[f]) * 8;
    r.su_percent = 100.0 * delivered_bits / (link_bits * double(sim.ports().size()));

    std::vector<bool> counted(sim.flows().size(), true);
    if (long_flow >= 0) {
        for (const FlowState& f : sim.flows())
            counted[f.flow_id] = f.size_bytes == 0;  // long-lived flows only
    }
    r.fr = fairness_percent(sim, col.flow_delivered_bytes, counted);

    std::uint64_t wait_sum = 0, wait_count = 0, dropped = 0;
    for (const auto& p : col.ports) {
        wait_sum += p.wait_sum_ns;
        wait_count += p.wait_count;
        dropped += p.dropped_bytes;
    }
    r.ql_us = wait_count > 0 ? double(wait_sum) / double(wait_count) / 1e3 : 0.0;
    r.dr_gbps = double(dropped) * 8 / window_s / 1e9;

    // A run fails when drops cover more than 10% of the window slices.
    std::size_t slices_with_drops = 0;
    for (auto b : col.drop_slice_bytes)
        if (b > 0) slices_with_drops++;
    r.failed = slices_with_drops * 10 > RunCollector::kDropSlices;

    if (long_flow >= 0) {
        r.long_bw_percent = 100.0 *
                            double(col.flow_delivered_bytes[std::size_t(long_flow)]) * 8 /
                            link_bits;
        r.recovery_s = recovery_time_s(col.rate_samples, shorts_start_ns,
                                       sim.params().link_rate_bps);
        if (r.recovery_s < 0) r.failed = true;
    }
    return r;
}

enum class Pareto : std::uint8_t { ADominatesB, BDominatesA, Incomparable };

// Domination with a similarity band: results within `band` points are
// considered equal; A dominates B when no metric is worse by more than the
// band and at least one is better by more than it. Directions: SU and FR up,
// QL, DR and recovery down.
inline Pareto pareto_compare(const MetricsReport& a, const MetricsReport& b,
                             double band = 5.0) {
    std::vector<double> adv;  // advantage of A per metric, positive = better
    adv.push_back(a.su_percent - b.su_percent);
    adv.push_back(a.fr - b.fr);
    adv.push_back(b.ql_us - a.ql_us);
    adv.push_back(b.dr_gbps - a.dr_gbps);
    if (a.has_recovery() && b.has_recovery())
        adv.push_back((b.recovery_s - a.recovery_s) * 1e3);  // milliseconds
    bool a_wins = false, b_wins = false;
    for (double d : adv) {
        if (d > band) a_wins = true;
        if (d < -band) b_wins = true;
    }
    if (a_wins && !b_wins) return Pareto::ADominatesB;
    if (b_wins && !a_wins) return Pareto::BDominatesA;
    return Pareto::Incomparable;
}

// Spearman rank correlation; returns 0 for degenerate inputs.
inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman: need matched samples");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> rank(v.size());
        for (std::size_t i = 0; i < order.size();) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            double mean = 0.5 * (double(i) + double(j));
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mean;
            i = j + 1;
        }
        return rank;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= double(rx.size());
    my /= double(ry.size());
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0 || dy == 0) return 0;
    return num / std::sqrt(dx * dy);
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty");
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace ccgym
