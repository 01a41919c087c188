#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ccgym {

// Rate-control policy network: FC(in -> 32), ReLU, FC(32 -> 16), ReLU,
// LSTM(16 -> 16), FC(16 -> 1). The forward pass records a tape from which
// the parameter gradient of the squashed action is computed analytically.

inline constexpr int kFc1Out = 32;
inline constexpr int kFc2Out = 16;
inline constexpr int kLstm = 16;

template <typename S>
struct PolicyParams {
    using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

    Mat w1, w2;      // (32 x in), (16 x 32)
    Vec b1, b2;      // 32, 16
    Mat wx, wh;      // (64 x 16) each; gate rows ordered i, f, g, o
    Vec bl;          // 64
    Mat w3;          // (1 x 16)
    Vec b3;          // 1

    int features() const { return int(w1.cols()); }

    static PolicyParams zeros(int in) {
        PolicyParams p;
        p.w1 = Mat::Zero(kFc1Out, in);
        p.b1 = Vec::Zero(kFc1Out);
        p.w2 = Mat::Zero(kFc2Out, kFc1Out);
        p.b2 = Vec::Zero(kFc2Out);
        p.wx = Mat::Zero(4 * kLstm, kFc2Out);
        p.wh = Mat::Zero(4 * kLstm, kLstm);
        p.bl = Vec::Zero(4 * kLstm);
        p.w3 = Mat::Zero(1, kLstm);
        p.b3 = Vec::Zero(1);
        return p;
    }

    // Small uniform init keeps the initial action close to 1 (hold rate).
    static PolicyParams init(int in, std::uint64_t seed, double range = 0.05) {
        PolicyParams p = zeros(in);
        std::mt19937_64 rng(seed);
        auto fill = [&](auto& m) {
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                for (Eigen::Index r = 0; r < m.rows(); ++r)
                    m(r, c) = S((u01_(rng) * 2.0 - 1.0) * range);
        };
        fill(p.w1); fill(p.b1); fill(p.w2); fill(p.b2);
        fill(p.wx); fill(p.wh); fill(p.bl); fill(p.w3); fill(p.b3);
        return p;
    }

    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        fn("w1", w1); fn("b1", b1); fn("w2", w2); fn("b2", b2);
        fn("wx", wx); fn("wh", wh); fn("bl", bl); fn("w3", w3); fn("b3", b3);
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const {
        fn("w1", w1); fn("b1", b1); fn("w2", w2); fn("b2", b2);
        fn("wx", wx); fn("wh", wh); fn("bl", bl); fn("w3", w3); fn("b3", b3);
    }

    bool all_finite() const {
        bool ok = true;
        for_each_tensor([&](const char*, const auto& m) { ok = ok && m.allFinite(); });
        return ok;
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for_each_tensor([&](const char*, const auto& m) { n += std::size_t(m.size()); });
        return n;
    }

    template <typename T>
    PolicyParams<T> cast() const {
        PolicyParams<T> out;
        out.w1 = w1.template cast<T>(); out.b1 = b1.template cast<T>();
        out.w2 = w2.template cast<T>(); out.b2 = b2.template cast<T>();
        out.wx = wx.template cast<T>(); out.wh = wh.template cast<T>();
        out.bl = bl.template cast<T>();
        out.w3 = w3.template cast<T>(); out.b3 = b3.template cast<T>();
        return out;
    }

  private:
    static double u01_(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }
};

template <typename S>
struct PolicyState {
    using Vec = typename PolicyParams<S>::Vec;
    Vec h = Vec::Zero(kLstm);
    Vec c = Vec::Zero(kLstm);
    void reset() {
        h.setZero(kLstm);
        c.setZero(kLstm);
    }
};

// Intermediates of one forward step, sufficient for the backward pass.
template <typename S>
struct StepTape {
    using Vec = typename PolicyParams<S>::Vec;
    Vec x;               // input features
    Vec pre1, act1;      // FC1 pre-activation / ReLU output
    Vec pre2, act2;      // FC2 pre-activation / ReLU output
    Vec h_prev, c_prev;  // recurrent state entering the step
    Vec gi, gf, gg, go;  // gate activations (post sigmoid / tanh)
    Vec c_new, tanh_c;
    Vec h_new;
    S raw = S(0);
};

template <typename S>
inline S sigmoid(S x) {
    return S(1) / (S(1) + std::exp(-x));
}

template <typename S>
struct ForwardResult {
    S raw;
    StepTape<S> tape;
};

template <typename S>
ForwardResult<S> policy_forward(const PolicyParams<S>& p, PolicyState<S>& state,
                                const typename PolicyParams<S>::Vec& obs) {
    if (obs.size() != p.w1.cols())
        throw std::invalid_argument("policy: observation width mismatch");
    if (!obs.allFinite()) throw std::invalid_argument("policy: non-finite observation");

    StepTape<S> t;
    t.x = obs;
    t.pre1 = p.w1 * obs + p.b1;
    t.act1 = t.pre1.cwiseMax(S(0));
    t.pre2 = p.w2 * t.act1 + p.b2;
    t.act2 = t.pre2.cwiseMax(S(0));
    t.h_prev = state.h;
    t.c_prev = state.c;

    typename PolicyParams<S>::Vec z = p.wx * t.act2 + p.wh * state.h + p.bl;
    t.gi.resize(kLstm); t.gf.resize(kLstm); t.gg.resize(kLstm); t.go.resize(kLstm);
    for (int k = 0; k < kLstm; ++k) {
        t.gi[k] = sigmoid(z[k]);
        t.gf[k] = sigmoid(z[kLstm + k]);
        t.gg[k] = std::tanh(z[2 * kLstm + k]);
        t.go[k] = sigmoid(z[3 * kLstm + k]);
    }
    t.c_new = t.gf.cwiseProduct(t.c_prev) + t.gi.cwiseProduct(t.gg);
    t.tanh_c = t.c_new.array().tanh().matrix();
    t.h_new = t.go.cwiseProduct(t.tanh_c);
    t.raw = (p.w3 * t.h_new)(0) + p.b3(0);

    state.h = t.h_new;
    state.c = t.c_new;
    return {t.raw, std::move(t)};
}

// Multiplicative rate action in (0.8, 1.2), centered so raw = 0 holds the
// current rate.
template <typename S>
inline S action_map(S raw) {
    return S(1) + S(0.2) * std::tanh(raw);
}

template <typename S>
inline S action_map_derivative(S raw) {
    S th = std::tanh(raw);
    return S(0.2) * (S(1) - th * th);
}

// Gradient carried backwards through the recurrent state.
template <typename S>
struct BackCarry {
    using Vec = typename PolicyParams<S>::Vec;
    Vec dh = Vec::Zero(kLstm);
    Vec dc = Vec::Zero(kLstm);
    void reset() {
        dh.setZero(kLstm);
        dc.setZero(kLstm);
    }
};

// One backward step: adds `upstream * d action / d theta` for this step into
// `grads`, consuming the carry from the following step and producing the
// carry for the preceding one. With upstream = 0 it only propagates the
// carry (earlier steps of a truncated window).
template <typename S>
void policy_backward_step(const PolicyParams<S>& p, const StepTape<S>& t, S upstream,
                          BackCarry<S>& carry, PolicyParams<S>& grads) {
    using Vec = typename PolicyParams<S>::Vec;

    Vec dh = carry.dh;
    Vec dc = carry.dc;
    if (upstream != S(0)) {
        S draw = upstream * action_map_derivative(t.raw);
        grads.b3(0) += draw;
        grads.w3 += draw * t.h_new.transpose();
        dh += p.w3.transpose() * draw;
    }

    Vec dgo = dh.cwiseProduct(t.tanh_c);
    dc += dh.cwiseProduct(t.go).cwiseProduct(
        (Vec::Ones(kLstm) - t.tanh_c.cwiseProduct(t.tanh_c)));
    Vec dgf = dc.cwiseProduct(t.c_prev);
    Vec dgi = dc.cwiseProduct(t.gg);
    Vec dgg = dc.cwiseProduct(t.gi);
    Vec dc_prev = dc.cwiseProduct(t.gf);

    Vec dz(4 * kLstm);
    for (int k = 0; k < kLstm; ++k) {
        dz[k] = dgi[k] * t.gi[k] * (S(1) - t.gi[k]);
        dz[kLstm + k] = dgf[k] * t.gf[k] * (S(1) - t.gf[k]);
        dz[2 * kLstm + k] = dgg[k] * (S(1) - t.gg[k] * t.gg[k]);
        dz[3 * kLstm + k] = dgo[k] * t.go[k] * (S(1) - t.go[k]);
    }

    grads.wx += dz * t.act2.transpose();
    grads.wh += dz * t.h_prev.transpose();
    grads.bl += dz;

    Vec dact2 = p.wx.transpose() * dz;
    Vec dpre2 = (t.pre2.array() > S(0)).select(dact2, Vec::Zero(kFc2Out));
    grads.w2 += dpre2 * t.act1.transpose();
    grads.b2 += dpre2;

    Vec dact1 = p.w2.transpose() * dpre2;
    Vec dpre1 = (t.pre1.array() > S(0)).select(dact1, Vec::Zero(kFc1Out));
    grads.w1 += dpre1 * t.x.transpose();
    grads.b1 += dpre1;

    carry.dh = p.wh.transpose() * dz;
    carry.dc = dc_prev;
}

// Single-step contract: gradient of the action wrt every parameter, with the
// entering recurrent state held fixed.
template <typename S>
PolicyParams<S> policy_backward(const PolicyParams<S>& p, const StepTape<S>& t, S upstream) {
    PolicyParams<S> grads = PolicyParams<S>::zeros(p.features());
    BackCarry<S> carry;
    policy_backward_step(p, t, upstream, carry, grads);
    return grads;
}

// Gradient-ascent update. Non-finite gradients reject the update.
template <typename S>
bool apply_update(PolicyParams<S>& params, const PolicyParams<S>& grads, double lr) {
    if (!(lr >= 0)) throw std::invalid_argument("policy: negative learning rate");
    if (!grads.all_finite()) return false;
    params.w1 += S(lr) * grads.w1;
    params.b1 += S(lr) * grads.b1;
    params.w2 += S(lr) * grads.w2;
    params.b2 += S(lr) * grads.b2;
    params.wx += S(lr) * grads.wx;
    params.wh += S(lr) * grads.wh;
    params.bl += S(lr) * grads.bl;
    params.w3 += S(lr) * grads.w3;
    params.b3 += S(lr) * grads.b3;
    return params.all_finite();
}

}  // namespace ccgym
