#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ccgym/policy.hpp"
#include "ccgym/sim_time.hpp"

namespace ccgym {

// One recorded decision of one flow.
struct RolloutStep {
    Eigen::VectorXf obs;
    float raw = 0;
    double coeff = 0;  // target - rtt_inflation * sqrt(rate_norm)
    SimTime time = 0;
    StepTape<float> tape;
};

struct FlowRollout {
    std::vector<RolloutStep> steps;
};

// Asynchronous per-flow trajectories stored strictly separated by key, so
// flows with different decision cadences never interleave.
class KeySeparatedReplay {
  public:
    void append(std::uint64_t key, RolloutStep step) {
        FlowRollout& r = rollouts_[key];
        if (!r.steps.empty() && step.time < r.steps.back().time)
            throw std::logic_error("replay: steps must be time-ordered within a key");
        r.steps.push_back(std::move(step));
    }

    const std::map<std::uint64_t, FlowRollout>& rollouts() const { return rollouts_; }

    std::size_t total_steps() const {
        std::size_t n = 0;
        for (const auto& [k, r] : rollouts_) n += r.steps.size();
        return n;
    }

    std::size_t key_count() const { return rollouts_.size(); }
    bool empty() const { return rollouts_.empty(); }
    void clear() { rollouts_.clear(); }

  private:
    std::map<std::uint64_t, FlowRollout> rollouts_;
};

}  // namespace ccgym
