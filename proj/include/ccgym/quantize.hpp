#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ccgym/policy.hpp"

namespace ccgym {

// Per-tensor symmetric int8 weight quantization. Matmuls run int8 x int8
// with int32 accumulation, then dequantize to float for the bias add and
// nonlinearity; activations are requantized per layer with a dynamic scale.

struct QTensor {
    int rows = 0, cols = 0;
    float scale = 1.0f;
    std::int8_t zero_point = 0;  // symmetric by convention
    std::vector<std::int8_t> q;  // row-major

    std::int8_t at(int r, int c) const { return q[std::size_t(r) * cols + c]; }
};

inline QTensor quantize_tensor(const Eigen::MatrixXf& w) {
    QTensor t;
    t.rows = int(w.rows());
    t.cols = int(w.cols());
    float max_abs = 0.0f;
    for (Eigen::Index c = 0; c < w.cols(); ++c)
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            max_abs = std::max(max_abs, std::abs(w(r, c)));
    t.scale = max_abs > 0.0f ? max_abs / 127.0f : 1.0f;  // all-zero tensor: scale 1
    t.q.resize(std::size_t(t.rows) * t.cols);
    for (int r = 0; r < t.rows; ++r)
        for (int c = 0; c < t.cols; ++c) {
            int v = int(std::lround(w(r, c) / t.scale));
            v = std::min(127, std::max(-127, v));
            t.q[std::size_t(r) * t.cols + c] = std::int8_t(v);
        }
    return t;
}

inline Eigen::MatrixXf dequantize_tensor(const QTensor& t) {
    Eigen::MatrixXf w(t.rows, t.cols);
    for (int r = 0; r < t.rows; ++r)
        for (int c = 0; c < t.cols; ++c) w(r, c) = float(t.at(r, c)) * t.scale;
    return w;
}

struct QuantizedPolicy {
    int features = 0;
    QTensor w1, w2, wx, wh, w3;
    Eigen::VectorXf b1, b2, bl, b3;  // biases stay float
};

inline QuantizedPolicy quantize(const PolicyParams<float>& p) {
    if (!p.all_finite()) throw std::invalid_argument("quantize: non-finite parameters");
    QuantizedPolicy qp;
    qp.features = p.features();
    qp.w1 = quantize_tensor(p.w1);
    qp.w2 = quantize_tensor(p.w2);
    qp.wx = quantize_tensor(p.wx);
    qp.wh = quantize_tensor(p.wh);
    qp.w3 = quantize_tensor(p.w3);
    qp.b1 = p.b1;
    qp.b2 = p.b2;
    qp.bl = p.bl;
    qp.b3 = p.b3;
    return qp;
}

namespace qdetail {

struct QVec {
    std::vector<std::int8_t> q;
    float scale = 1.0f;
};

inline QVec quantize_vec(const Eigen::VectorXf& v) {
    QVec out;
    float max_abs = 0.0f;
    for (Eigen::Index i = 0; i < v.size(); ++i) max_abs = std::max(max_abs, std::abs(v[i]));
    out.scale = max_abs > 0.0f ? max_abs / 127.0f : 1.0f;
    out.q.resize(std::size_t(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        int x = int(std::lround(v[i] / out.scale));
        out.q[std::size_t(i)] = std::int8_t(std::min(127, std::max(-127, x)));
    }
    return out;
}

// int8 x int8 -> int32 accumulate, dequantized into float.
inline Eigen::VectorXf matvec(const QTensor& w, const QVec& x) {
    Eigen::VectorXf y(w.rows);
    for (int r = 0; r < w.rows; ++r) {
        std::int32_t acc = 0;
        const std::int8_t* row = &w.q[std::size_t(r) * w.cols];
        for (int c = 0; c < w.cols; ++c) acc += std::int32_t(row[c]) * std::int32_t(x.q[c]);
        y[r] = float(acc) * w.scale * x.scale;
    }
    return y;
}

}  // namespace qdetail

struct QuantizedState {
    Eigen::VectorXf h = Eigen::VectorXf::Zero(kLstm);
    Eigen::VectorXf c = Eigen::VectorXf::Zero(kLstm);
    void reset() {
        h.setZero(kLstm);
        c.setZero(kLstm);
    }
};

inline float qforward(const QuantizedPolicy& p, QuantizedState& state,
                      const Eigen::VectorXf& obs) {
    if (obs.size() != p.features)
        throw std::invalid_argument("qforward: observation width mismatch");
    using qdetail::matvec;
    using qdetail::quantize_vec;

    Eigen::VectorXf a1 = (matvec(p.w1, quantize_vec(obs)) + p.b1).cwiseMax(0.0f);
    Eigen::VectorXf a2 = (matvec(p.w2, quantize_vec(a1)) + p.b2).cwiseMax(0.0f);

    Eigen::VectorXf z = matvec(p.wx, quantize_vec(a2)) + matvec(p.wh, quantize_vec(state.h)) + p.bl;
    Eigen::VectorXf c_new(kLstm), h_new(kLstm);
    for (int k = 0; k < kLstm; ++k) {
        float gi = sigmoid(z[k]);
        float gf = sigmoid(z[kLstm + k]);
        float gg = std::tanh(z[2 * kLstm + k]);
        float go = sigmoid(z[3 * kLstm + k]);
        c_new[k] = gf * state.c[k] + gi * gg;
        h_new[k] = go * std::tanh(c_new[k]);
    }
    state.c = c_new;
    state.h = h_new;

    qdetail::QVec qh = quantize_vec(h_new);
    std::int32_t acc = 0;
    for (int c = 0; c < p.w3.cols; ++c) acc += std::int32_t(p.w3.q[c]) * std::int32_t(qh.q[c]);
    return float(acc) * p.w3.scale * qh.scale + p.b3[0];
}

}  // namespace ccgym
