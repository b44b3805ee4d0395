#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pklb/errors.hpp"
#include "pklb/ring.hpp"

namespace pklb {

enum class QuantKind : uint8_t {
    KyberCompress = 0, // round-to-scaled-index, ties up
    Mmse = 1,          // discrete Lloyd-Max fixed point, circular metric
};

inline const char* quant_kind_name(QuantKind k) {
    return k == QuantKind::KyberCompress ? "kyber" : "mmse";
}

// round(2^d * x / q) mod 2^d with ties rounding up; x in [0, q).
inline uint16_t kyber_compress(int x, int d, int q = kQ) {
    long long num = (static_cast<long long>(x) << (d + 1)) + q;
    return static_cast<uint16_t>((num / (2LL * q)) & ((1 << d) - 1));
}

// round(q * i / 2^d) with ties rounding up; i in [0, 2^d).
inline int kyber_decompress(int i, int d, int q = kQ) {
    long long num = 2LL * q * i + (1LL << d);
    return static_cast<int>(num >> (d + 1));
}

// A d-bit scalar quantizer for Z_q under the centered mod-q metric.
// KyberCompress reproduces the compress/decompress pair exactly; Mmse runs
// discrete Lloyd-Max from the KyberCompress codebook to a fixed point, so
// both sides of the channel can rebuild the identical codebook from (q, d).
class Quantizer {
public:
    Quantizer(int q, int d, QuantKind kind) : q_(q), d_(d), kind_(kind) {
        require(d >= 1 && d < 16 && (1 << d) < q, Err::BadArgument,
                "quantizer needs 1 <= d and 2^d < q");
        codebook_.resize(static_cast<size_t>(1) << d);
        for (size_t i = 0; i < codebook_.size(); ++i)
            codebook_[i] = kyber_decompress(static_cast<int>(i), d, q);
        if (kind == QuantKind::KyberCompress) {
            lut_.resize(q);
            for (int x = 0; x < q; ++x) lut_[x] = kyber_compress(x, d, q);
        } else {
            lloyd_max();
        }
    }

    int q() const { return q_; }
    int d() const { return d_; }
    QuantKind kind() const { return kind_; }
    const std::vector<int>& codebook() const { return codebook_; }

    uint16_t assign(int x) const { return lut_[x]; }
    int reconstruct(uint16_t idx) const { return codebook_[idx]; }

    // Exact distribution of centered(reconstruct(assign(x)) - x) for x
    // uniform on Z_q, as integer counts out of q.
    std::map<int, long> noise_counts() const {
        std::map<int, long> counts;
        for (int x = 0; x < q_; ++x)
            ++counts[centered(codebook_[lut_[x]] - x, q_)];
        return counts;
    }

    // q * MSE as an exact integer, for loss comparisons without rounding.
    long long mse_numerator() const {
        long long sum = 0;
        for (int x = 0; x < q_; ++x) {
            long long e = centered(codebook_[lut_[x]] - x, q_);
            sum += e * e;
        }
        return sum;
    }

private:
    int circ_dist2(int x, int c) const {
        long long e = centered(x - c, q_);
        return static_cast<int>(e * e);
    }

    // Nearest codeword in the circular metric, ties to the smaller index.
    void build_lut_nearest() {
        lut_.assign(q_, 0);
        for (int x = 0; x < q_; ++x) {
            int best = 0, best_d = circ_dist2(x, codebook_[0]);
            for (size_t i = 1; i < codebook_.size(); ++i) {
                int dd = circ_dist2(x, codebook_[i]);
                if (dd < best_d) {
                    best_d = dd;
                    best = static_cast<int>(i);
                }
            }
            lut_[x] = static_cast<uint16_t>(best);
        }
    }

    void lloyd_max() {
        for (int iter = 0; iter < 1000; ++iter) {
            build_lut_nearest();
            std::vector<int> next = codebook_;
            for (size_t i = 0; i < codebook_.size(); ++i) {
                // Unwrap the cell around its current codeword; cells are
                // circular arcs much narrower than q/2, so ordinary squared
                // distance on the unwrapped values is the circular one.
                std::vector<int> pts;
                for (int x = 0; x < q_; ++x)
                    if (lut_[x] == i) pts.push_back(codebook_[i] + centered(x - codebook_[i], q_));
                auto [lo_it, hi_it] = std::minmax_element(pts.begin(), pts.end());
                long long best_sse = -1;
                int best_v = 0;
                for (int v = *lo_it; v <= *hi_it; ++v) {
                    long long sse = 0;
                    for (int x : pts) {
                        long long e = x - v;
                        sse += e * e;
                    }
                    if (best_sse < 0 || sse < best_sse) {  // ties keep smaller v
                        best_sse = sse;
                        best_v = v;
                    }
                }
                next[i] = ((best_v % q_) + q_) % q_;
            }
            std::sort(next.begin(), next.end());
            for (size_t i = 0; i + 1 < next.size(); ++i)
                require(next[i] != next[i + 1], Err::NonConvergence,
                        "lloyd-max collapsed two codewords");
            if (next == codebook_) return;  // fixed point
            codebook_ = next;
        }
        raise(Err::NonConvergence, "lloyd-max did not reach a fixed point");
    }

    int q_;
    int d_;
    QuantKind kind_;
    std::vector<int> codebook_;
    std::vector<uint16_t> lut_;
};

// Quantizers are pure functions of (q, d, kind); cache them since Lloyd-Max
// construction scans Z_q repeatedly.
inline const Quantizer& quantizer(int q, int d, QuantKind kind) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<Quantizer>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(q, d, static_cast<int>(kind));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Quantizer>(q, d, kind)).first;
    return *it->second;
}

} // namespace pklb
