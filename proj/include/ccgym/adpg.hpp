#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "ccgym/cc.hpp"
#include "ccgym/policy.hpp"
#include "ccgym/quantize.hpp"
#include "ccgym/replay.hpp"
#include "ccgym/reward.hpp"

namespace ccgym {

// Observation features fed to the policy. Counts are squashed to [0,1).
struct FeatureConfig {
    bool use_rate = true;
    bool use_rtt_inflation = true;
    bool use_cnp = true;
    bool use_nack = true;
    double inflation_scale = 1.0;

    int count() const {
        return int(use_rate) + int(use_rtt_inflation) + int(use_cnp) + int(use_nack);
    }
};

inline Eigen::VectorXf build_observation(const FeatureConfig& fc, double rate_norm,
                                         double rtt_inflation, std::uint64_t cnps,
                                         std::uint64_t nacks) {
    Eigen::VectorXf obs(fc.count());
    int i = 0;
    if (fc.use_rate) obs[i++] = float(rate_norm);
    if (fc.use_rtt_inflation) obs[i++] = float(rtt_inflation / fc.inflation_scale);
    if (fc.use_cnp) obs[i++] = float(double(cnps) / (1.0 + double(cnps)));
    if (fc.use_nack) obs[i++] = float(double(nacks) / (1.0 + double(nacks)));
    return obs;
}

// Learned rate controller. Acts on probe returns only: builds the
// observation, runs the policy, multiplies the rate by the squashed action,
// and (when training) records the step under the flow's replay key.
class AdpgAgent final : public CcAlgorithm {
  public:
    AdpgAgent(std::shared_ptr<const PolicyParams<float>> params, double target,
              FeatureConfig features = {}, KeySeparatedReplay* replay = nullptr,
              std::uint64_t key_base = 0)
        : params_(std::move(params)),
          target_(target),
          features_(features),
          replay_(replay),
          key_base_(key_base) {
        if (params_->features() != features_.count())
            throw std::invalid_argument("adpg: feature count does not match policy");
    }

    void bind(std::size_t n) override {
        states_.assign(n, PolicyState<float>{});  // fresh recurrent state per flow
    }

    // Steps earlier than this are still acted on but not recorded (rollout
    // warm-up after an environment restart).
    void set_record_after(SimTime t) { record_after_ns_ = t; }

    CcDecision on_event(const CcContext& ctx, const CcEvent& ev) override {
        double rate = double(ctx.rate_bps);
        if (ev.kind != CcEventKind::ProbeReturned) return {rate};
        if (ctx.base_rtt_ns == 0) throw std::logic_error("adpg: flow has no base RTT");
        double rate_norm = rate / double(ctx.link_rate_bps);
        double inflation = double(ev.rtt_ns) / double(ctx.base_rtt_ns);
        Eigen::VectorXf obs = build_observation(features_, rate_norm, inflation,
                                                ev.cnp_since_last, ev.nack_since_last);
        auto fwd = policy_forward(*params_, states_[ev.flow_id], obs);
        float a = action_map(fwd.raw);
        if (replay_ && ev.now >= record_after_ns_) {
            RolloutStep step;
            step.obs = obs;
            step.raw = fwd.raw;
            step.coeff = reward_coefficient({target_, inflation, rate_norm});
            step.time = ev.now;
            step.tape = std::move(fwd.tape);
            replay_->append(key_base_ + ev.flow_id, std::move(step));
        }
        return {double(a) * rate};
    }

    double target() const { return target_; }
    const FeatureConfig& features() const { return features_; }

  private:
    std::shared_ptr<const PolicyParams<float>> params_;
    double target_;
    FeatureConfig features_;
    KeySeparatedReplay* replay_;
    std::uint64_t key_base_;
    SimTime record_after_ns_ = 0;
    std::vector<PolicyState<float>> states_;
};

// Same controller over the int8 policy; evaluation only.
class QuantizedAdpgAgent final : public CcAlgorithm {
  public:
    QuantizedAdpgAgent(std::shared_ptr<const QuantizedPolicy> policy,
                       FeatureConfig features = {})
        : policy_(std::move(policy)), features_(features) {
        if (policy_->features != features_.count())
            throw std::invalid_argument("adpg: feature count does not match policy");
    }

    void bind(std::size_t n) override { states_.assign(n, QuantizedState{}); }

    CcDecision on_event(const CcContext& ctx, const CcEvent& ev) override {
        double rate = double(ctx.rate_bps);
        if (ev.kind != CcEventKind::ProbeReturned) return {rate};
        double rate_norm = rate / double(ctx.link_rate_bps);
        double inflation = double(ev.rtt_ns) / double(ctx.base_rtt_ns);
        Eigen::VectorXf obs = build_observation(features_, rate_norm, inflation,
                                                ev.cnp_since_last, ev.nack_since_last);
        float raw = qforward(*policy_, states_[ev.flow_id], obs);
        return {double(action_map(raw)) * rate};
    }

  private:
    std::shared_ptr<const QuantizedPolicy> policy_;
    FeatureConfig features_;
    std::vector<QuantizedState> states_;
};

enum class CoeffMode : std::uint8_t { TrajectoryMean, PerStep };

// Replay-wide policy gradient: each flow contributes its steps' action
// gradients weighted by the flow's trajectory-mean coefficient (or the
// per-step coefficient), backpropagated through at most `bptt_window`
// preceding steps and normalized by the total step count.
inline PolicyParams<float> adpg_gradient(const KeySeparatedReplay& replay,
                                         const PolicyParams<float>& params,
                                         CoeffMode mode = CoeffMode::TrajectoryMean,
                                         int bptt_window = 16) {
    PolicyParams<float> grads = PolicyParams<float>::zeros(params.features());
    std::size_t total = replay.total_steps();
    if (total == 0) return grads;
    for (const auto& [key, rollout] : replay.rollouts()) {
        const auto& steps = rollout.steps;
        if (steps.empty()) continue;
        double mean_coeff = 0;
        for (const RolloutStep& s : steps) mean_coeff += s.coeff;
        mean_coeff /= double(steps.size());
        for (std::size_t t = 0; t < steps.size(); ++t) {
            float upstream = float(mode == CoeffMode::TrajectoryMean ? mean_coeff
                                                                     : steps[t].coeff);
            if (upstream == 0.0f) continue;
            BackCarry<float> carry;
            std::size_t stop = t + 1 >= std::size_t(bptt_window) ? t + 1 - bptt_window : 0;
            for (std::size_t k = t + 1; k-- > stop;) {
                policy_backward_step(params, steps[k].tape,
                                     k == t ? upstream : 0.0f, carry, grads);
            }
        }
    }
    float inv = 1.0f / float(total);
    grads.for_each_tensor([&](const char*, auto& m) { m *= inv; });
    return grads;
}

}  // namespace ccgym
