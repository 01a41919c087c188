#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ccgym/policy.hpp"
#include "ccgym/quantize.hpp"

namespace ccgym {

// Checkpoint container, little-endian:
//   header: magic (8 bytes), u32 version, u32 feature_count
//   float checkpoints ("CCGYMPOL"): tensors as raw f32 in declaration order
//     w1 b1 w2 b2 wx wh bl w3 b3
//   quantized checkpoints ("CCGYMPQ8"): weight tensors as f32 scale + int8
//     data in the same order, biases as raw f32

inline constexpr char kFloatMagic[8] = {'C', 'C', 'G', 'Y', 'M', 'P', 'O', 'L'};
inline constexpr char kQuantMagic[8] = {'C', 'C', 'G', 'Y', 'M', 'P', 'Q', '8'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace ckptdetail {

inline void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {(unsigned char)(v), (unsigned char)(v >> 8),
                          (unsigned char)(v >> 16), (unsigned char)(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("checkpoint: truncated header");
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

inline void write_f32(std::ostream& os, float f) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    write_u32(os, v);
}

inline float read_f32(std::istream& is) {
    std::uint32_t v = read_u32(is);
    float f;
    std::memcpy(&f, &v, 4);
    return f;
}

template <typename M>
void write_tensor(std::ostream& os, const M& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) write_f32(os, float(m(r, c)));
}

template <typename M>
void read_tensor(std::istream& is, M& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = read_f32(is);
}

}  // namespace ckptdetail

inline void save_checkpoint(std::ostream& os, const PolicyParams<float>& p) {
    os.write(kFloatMagic, 8);
    ckptdetail::write_u32(os, kCheckpointVersion);
    ckptdetail::write_u32(os, std::uint32_t(p.features()));
    p.for_each_tensor([&](const char*, const auto& m) { ckptdetail::write_tensor(os, m); });
}

inline void save_checkpoint_file(const std::string& path, const PolicyParams<float>& p) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot write " + path);
    save_checkpoint(os, p);
}

inline void save_quantized(std::ostream& os, const QuantizedPolicy& qp) {
    os.write(kQuantMagic, 8);
    ckptdetail::write_u32(os, kCheckpointVersion);
    ckptdetail::write_u32(os, std::uint32_t(qp.features));
    auto wq = [&](const QTensor& t) {
        ckptdetail::write_f32(os, t.scale);
        os.write(reinterpret_cast<const char*>(t.q.data()), std::streamsize(t.q.size()));
    };
    auto wb = [&](const Eigen::VectorXf& b) { ckptdetail::write_tensor(os, b); };
    wq(qp.w1); wb(qp.b1);
    wq(qp.w2); wb(qp.b2);
    wq(qp.wx); wq(qp.wh); wb(qp.bl);
    wq(qp.w3); wb(qp.b3);
}

inline void save_quantized_file(const std::string& path, const QuantizedPolicy& qp) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot write " + path);
    save_quantized(os, qp);
}

enum class CheckpointKind { Float32, Int8 };

inline CheckpointKind peek_checkpoint_kind(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is) throw std::runtime_error("checkpoint: truncated magic");
    if (std::memcmp(magic, kFloatMagic, 8) == 0) return CheckpointKind::Float32;
    if (std::memcmp(magic, kQuantMagic, 8) == 0) return CheckpointKind::Int8;
    throw std::runtime_error("checkpoint: unrecognized magic");
}

inline PolicyParams<float> load_checkpoint(std::istream& is) {
    if (peek_checkpoint_kind(is) != CheckpointKind::Float32)
        throw std::runtime_error("checkpoint: expected a float checkpoint");
    std::uint32_t version = ckptdetail::read_u32(is);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version");
    std::uint32_t in = ckptdetail::read_u32(is);
    PolicyParams<float> p = PolicyParams<float>::zeros(int(in));
    p.for_each_tensor([&](const char*, auto& m) { ckptdetail::read_tensor(is, m); });
    if (!is) throw std::runtime_error("checkpoint: truncated tensors");
    return p;
}

inline PolicyParams<float> load_checkpoint_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    return load_checkpoint(is);
}

inline QuantizedPolicy load_quantized(std::istream& is) {
    if (peek_checkpoint_kind(is) != CheckpointKind::Int8)
        throw std::runtime_error("checkpoint: expected a quantized checkpoint");
    std::uint32_t version = ckptdetail::read_u32(is);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version");
    std::uint32_t in = ckptdetail::read_u32(is);
    QuantizedPolicy qp;
    qp.features = int(in);
    auto rq = [&](QTensor& t, int rows, int cols) {
        t.rows = rows;
        t.cols = cols;
        t.scale = ckptdetail::read_f32(is);
        t.q.resize(std::size_t(rows) * cols);
        is.read(reinterpret_cast<char*>(t.q.data()), std::streamsize(t.q.size()));
    };
    auto rb = [&](Eigen::VectorXf& b, int n) {
        b.resize(n);
        ckptdetail::read_tensor(is, b);
    };
    rq(qp.w1, kFc1Out, int(in)); rb(qp.b1, kFc1Out);
    rq(qp.w2, kFc2Out, kFc1Out); rb(qp.b2, kFc2Out);
    rq(qp.wx, 4 * kLstm, kFc2Out);
    rq(qp.wh, 4 * kLstm, kLstm);
    rb(qp.bl, 4 * kLstm);
    rq(qp.w3, 1, kLstm); rb(qp.b3, 1);
    if (!is) throw std::runtime_error("checkpoint: truncated tensors");
    return qp;
}

inline QuantizedPolicy load_quantized_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    return load_quantized(is);
}

inline CheckpointKind checkpoint_kind_of_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    return peek_checkpoint_kind(is);
}

// Shapes and L2 norms, one line per tensor.
inline std::string inspect_checkpoint_file(const std::string& path) {
    std::ostringstream out;
    if (checkpoint_kind_of_file(path) == CheckpointKind::Float32) {
        PolicyParams<float> p = load_checkpoint_file(path);
        out << "float32 policy, features=" << p.features() << "\n";
        p.for_each_tensor([&](const char* name, const auto& m) {
            out << "  " << name << "  [" << m.rows() << " x " << m.cols()
                << "]  l2=" << m.norm() << "\n";
        });
    } else {
        QuantizedPolicy qp = load_quantized_file(path);
        out << "int8 policy, features=" << qp.features << "\n";
        auto wq = [&](const char* name, const QTensor& t) {
            out << "  " << name << "  [" << t.rows << " x " << t.cols
                << "]  scale=" << t.scale << "  l2=" << dequantize_tensor(t).norm() << "\n";
        };
        auto wb = [&](const char* name, const Eigen::VectorXf& b) {
            out << "  " << name << "  [" << b.size() << "]  l2=" << b.norm() << "\n";
        };
        wq("w1", qp.w1); wb("b1", qp.b1);
        wq("w2", qp.w2); wb("b2", qp.b2);
        wq("wx", qp.wx); wq("wh", qp.wh); wb("bl", qp.bl);
        wq("w3", qp.w3); wb("b3", qp.b3);
    }
    return out.str();
}

}  // namespace ccgym
