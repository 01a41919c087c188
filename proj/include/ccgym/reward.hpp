#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace ccgym {

// Reward terms of one decision. rate_norm is rate / link_rate so the target
// is topology-agnostic; the fixed point for N flows sharing a congested path
// is then rate_norm = 1/N.
struct RewardTerms {
    double target = 2.0;
    double rtt_inflation = 1.0;  // rtt / base_rtt
    double rate_norm = 1.0;      // in (0, 1]
};

// target minus inflation * sqrt(rate_norm): positive below the operating
// point, zero at it, negative above.
inline double reward_coefficient(const RewardTerms& t) {
    if (!(t.rate_norm > 0))
        throw std::invalid_argument("reward: rate_norm must be positive");
    return t.target - t.rtt_inflation * std::sqrt(t.rate_norm);
}

// Nonpositive everywhere; zero exactly at the operating point.
inline double reward(const RewardTerms& t) {
    double c = reward_coefficient(t);
    return -c * c;
}

// Validates the two stationary cases for N flows sharing one congested path:
// either all flows saturate the line while still below the target, or every
// flow sits on the target, which under equal inflations forces equal rates
// of link_rate / N.
inline bool fixed_point_check(std::span<const double> rates_bps,
                              std::span<const double> inflations, double target,
                              double link_rate_bps, double rel_tol = 1e-9) {
    if (rates_bps.empty() || rates_bps.size() != inflations.size())
        throw std::invalid_argument("fixed_point_check: mismatched inputs");
    bool all_at_line = true, all_below_target = true, all_on_target = true;
    for (std::size_t i = 0; i < rates_bps.size(); ++i) {
        double rate_norm = rates_bps[i] / link_rate_bps;
        if (!(rate_norm > 0)) throw std::invalid_argument("fixed_point_check: bad rate");
        double x = inflations[i] * std::sqrt(rate_norm);
        if (std::abs(rates_bps[i] - link_rate_bps) > rel_tol * link_rate_bps)
            all_at_line = false;
        if (!(x < target)) all_below_target = false;
        if (std::abs(x - target) > rel_tol * target) all_on_target = false;
    }
    return (all_at_line && all_below_target) || all_on_target;
}

}  // namespace ccgym
