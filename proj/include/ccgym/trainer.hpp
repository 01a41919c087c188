#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "ccgym/adpg.hpp"
#include "ccgym/scenarios.hpp"
#include "ccgym/simulation.hpp"

namespace ccgym {

enum class Optimizer : std::uint8_t { Ascent, Adam };

struct TrainConfig {
    double target = 2.0;  // operating point; 1 strict, 2 standard, 20 loose
    double lr = 1e-3;
    int rollout_len = 256;  // decision events per flow per iteration
    int iterations = 40;
    int bptt_window = 16;
    CoeffMode coeff_mode = CoeffMode::TrajectoryMean;
    Optimizer optimizer = Optimizer::Ascent;  // adaptive step is opt-in
    double adam_beta1 = 0.9, adam_beta2 = 0.999, adam_eps = 1e-8;
    FeatureConfig features;
    std::uint64_t seed = 1;
    std::vector<ScenarioSpec> scenarios;  // empty = many-to-one {2, 4, 8}
    SimTime chunk_time_cap_ns = 200 * kMillisecond;
    double init_range = 0.05;
    std::uint64_t max_total_steps = 0;  // 0 = no budget
    // Exploring restarts: every iteration rebuilds the scenarios with
    // per-flow initial rates drawn log-uniformly from fair/spread to
    // fair*spread, runs unrecorded for warmup_ns so the queue develops, then
    // records the rollout window. Guarantees each update sees states on both
    // sides of the operating point. start_spread = 1 disables the draw.
    double start_spread = 2.0;
    SimTime warmup_ns = 20 * kMicrosecond;
};

// Adam moments over the policy's tensors; produces an ascent step.
struct AdamState {
    PolicyParams<float> m, v;
    long t = 0;

    explicit AdamState(int features)
        : m(PolicyParams<float>::zeros(features)), v(PolicyParams<float>::zeros(features)) {}

    PolicyParams<float> step(const PolicyParams<float>& grads, const TrainConfig& cfg) {
        t++;
        PolicyParams<float> out = PolicyParams<float>::zeros(grads.features());
        float b1 = float(cfg.adam_beta1), b2 = float(cfg.adam_beta2);
        float corr1 = 1.0f / (1.0f - std::pow(b1, float(t)));
        float corr2 = 1.0f / (1.0f - std::pow(b2, float(t)));
        auto upd = [&](auto& mm, auto& vv, const auto& g, auto& o) {
            mm = b1 * mm + (1.0f - b1) * g;
            vv = b2 * vv.array().matrix() +
                 (1.0f - b2) * g.array().square().matrix();
            o = ((mm.array() * corr1) /
                 ((vv.array() * corr2).sqrt() + float(cfg.adam_eps)))
                    .matrix();
        };
        upd(m.w1, v.w1, grads.w1, out.w1);
        upd(m.b1, v.b1, grads.b1, out.b1);
        upd(m.w2, v.w2, grads.w2, out.w2);
        upd(m.b2, v.b2, grads.b2, out.b2);
        upd(m.wx, v.wx, grads.wx, out.wx);
        upd(m.wh, v.wh, grads.wh, out.wh);
        upd(m.bl, v.bl, grads.bl, out.bl);
        upd(m.w3, v.w3, grads.w3, out.w3);
        upd(m.b3, v.b3, grads.b3, out.b3);
        return out;
    }
};

struct CurveRow {
    int iteration = 0;
    double mean_reward = 0;
    double mean_abs_coeff = 0;
    double su = 0;
    double fr = 0;
};

struct TrainResult {
    PolicyParams<float> params;
    std::vector<CurveRow> curve;
    std::uint64_t total_steps = 0;
    bool diverged = false;
};

inline std::vector<ScenarioSpec> default_train_scenarios(const TrainConfig& cfg) {
    // The agents train only in the many-to-one domain, on 2->1, 4->1, 8->1.
    std::vector<ScenarioSpec> out;
    for (std::uint32_t n : {2u, 4u, 8u}) {
        ScenarioSpec s;
        s.name = "m2o:" + std::to_string(n);
        s.kind = ScenarioKind::ManyToOne;
        s.total_flows = n;
        s.seed = cfg.seed * 1000 + n;
        out.push_back(s);
    }
    return out;
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& curve) {
    os << "iteration,mean_reward,mean_abs_coeff,su,fr\n";
    char buf[160];
    for (const CurveRow& r : curve) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.3f,%.3f\n", r.iteration,
                      r.mean_reward, r.mean_abs_coeff, r.su, r.fr);
        os << buf;
    }
}

// On-policy training loop with exploring restarts. Each iteration rebuilds
// every training scenario from a randomized rate state, collects one rollout
// window per flow, applies the replay-wide gradient and logs utilization and
// fairness snapshots of the recorded window. All probe-return decisions,
// including unrecorded warmup ones, count against the step budget.
inline TrainResult train(const TrainConfig& cfg, std::ostream* log = nullptr) {
    std::vector<ScenarioSpec> scenarios =
        cfg.scenarios.empty() ? default_train_scenarios(cfg) : cfg.scenarios;

    auto params = std::make_shared<PolicyParams<float>>(
        PolicyParams<float>::init(cfg.features.count(), cfg.seed, cfg.init_range));

    TrainResult result;
    AdamState adam(cfg.features.count());
    KeySeparatedReplay replay;
    std::mt19937_64 draw_rng(cfg.seed ^ 0xd1b54a32d192ed03ull);

    for (int iter = 1; iter <= cfg.iterations; ++iter) {
        replay.clear();
        double su_sum = 0, fr_sum = 0;
        std::uint64_t iter_decisions = 0;
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            ScenarioSpec spec = scenarios[i];
            spec.seed = spec.seed + std::uint64_t(iter) * 7919;
            InstanceSetup setup = build_instance(spec);
            if (cfg.start_spread > 1.0) {
                double ln_s = std::log(cfg.start_spread);
                for (FlowSetup& fs : setup.flows) {
                    double base = fs.initial_rate_fraction > 0
                                      ? fs.initial_rate_fraction
                                      : setup.params.initial_rate_fraction;
                    double draw = std::exp((2.0 * u01(draw_rng) - 1.0) * ln_s);
                    fs.initial_rate_fraction = std::min(
                        1.0, std::max(setup.params.min_rate_fraction, base * draw));
                }
            }
            Simulation sim(setup);
            auto agent = std::make_shared<AdpgAgent>(params, cfg.target, cfg.features,
                                                     &replay, std::uint64_t(i) << 32);
            agent->set_record_after(cfg.warmup_ns);
            sim.set_cc(agent);
            sim.run_until(cfg.warmup_ns);
            std::vector<std::uint64_t> delivered_mark(sim.flows().size());
            for (std::uint32_t f = 0; f < sim.flows().size(); ++f)
                delivered_mark[f] = sim.flows()[f].bytes_delivered;
            SimTime mark_ns = sim.now();
            sim.run_until_min_decisions(std::uint64_t(cfg.rollout_len),
                                        mark_ns + cfg.chunk_time_cap_ns);
            iter_decisions += sim.total_decisions();
            SimTime dt = sim.now() - mark_ns;
            if (dt > 0) {
                double window_bits = double(sim.params().link_rate_bps) * double(dt) / 1e9;
                double delivered_bits = 0;
                double min_tp = -1, max_tp = 0;
                for (std::uint32_t f = 0; f < sim.flows().size(); ++f) {
                    double bits =
                        double(sim.flows()[f].bytes_delivered - delivered_mark[f]) * 8;
                    delivered_bits += bits;
                    if (min_tp < 0 || bits < min_tp) min_tp = bits;
                    if (bits > max_tp) max_tp = bits;
                }
                su_sum += 100.0 * delivered_bits / (window_bits * double(sim.ports().size()));
                fr_sum += max_tp > 0 ? 100.0 * min_tp / max_tp : 0.0;
            }
        }

        CurveRow row;
        row.iteration = iter;
        std::size_t n = replay.total_steps();
        for (const auto& [key, rollout] : replay.rollouts()) {
            for (const RolloutStep& s : rollout.steps) {
                row.mean_reward += -s.coeff * s.coeff;
                row.mean_abs_coeff += std::abs(s.coeff);
            }
        }
        if (n > 0) {
            row.mean_reward /= double(n);
            row.mean_abs_coeff /= double(n);
        }
        row.su = su_sum / double(scenarios.size());
        row.fr = fr_sum / double(scenarios.size());
        result.total_steps += iter_decisions;

        PolicyParams<float> grads =
            adpg_gradient(replay, *params, cfg.coeff_mode, cfg.bptt_window);
        if (cfg.optimizer == Optimizer::Adam) grads = adam.step(grads, cfg);
        PolicyParams<float> before = *params;
        if (!apply_update(*params, grads, cfg.lr)) {
            *params = before;  // keep the last good parameters
            result.diverged = true;
            result.curve.push_back(row);
            break;
        }
        result.curve.push_back(row);
        if (log) {
            (*log) << "iter " << iter << "  steps " << n << "  mean|coeff| "
                   << row.mean_abs_coeff << "  reward " << row.mean_reward << "  su "
                   << row.su << "  fr " << row.fr << "\n";
        }
        if (cfg.max_total_steps != 0 && result.total_steps + iter_decisions * 5 / 4 >
                                            cfg.max_total_steps)
            break;  // the next iteration would likely exceed the budget
    }

    result.params = *params;
    return result;
}

// Mean |coefficient| of a policy over fixed fair-start probe rollouts of the
// given scenarios. Comparing this for the initial and the trained parameters
// measures how much closer training brought the system to the reward's
// operating point, independent of the exploration schedule.
inline double probe_mean_abs_coeff(const PolicyParams<float>& params,
                                   const std::vector<ScenarioSpec>& scenarios,
                                   double target, const FeatureConfig& features,
                                   std::uint64_t steps_per_flow = 192,
                                   SimTime time_cap = 50 * kMillisecond) {
    auto shared = std::make_shared<PolicyParams<float>>(params);
    KeySeparatedReplay replay;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        Simulation sim(build_instance(scenarios[i]));
        auto agent = std::make_shared<AdpgAgent>(shared, target, features, &replay,
                                                 std::uint64_t(i) << 32);
        sim.set_cc(agent);
        sim.run_until_min_decisions(steps_per_flow, time_cap);
    }
    double sum = 0;
    std::size_t n = 0;
    for (const auto& [key, rollout] : replay.rollouts()) {
        for (const RolloutStep& s : rollout.steps) {
            sum += std::abs(s.coeff);
            n++;
        }
    }
    return n > 0 ? sum / double(n) : 0.0;
}

}  // namespace ccgym
