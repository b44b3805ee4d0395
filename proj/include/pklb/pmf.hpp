#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "pklb/bigfloat.hpp"
#include "pklb/errors.hpp"

namespace pklb {

// Dense probability mass function on a contiguous integer range
// [lo, lo + w.size()).  Weights are 256-bit floats; exactness of the
// failure-rate pipeline rests on never leaving this representation.
struct Pmf {
    long lo = 0;
    std::vector<BigFloat> w;

    long hi() const { return lo + static_cast<long>(w.size()) - 1; }

    BigFloat at(long x) const {
        if (x < lo || x > hi()) return BigFloat(0L);
        return w[static_cast<size_t>(x - lo)];
    }

    BigFloat total() const {
        // Smallest-first so tiny tail weights are not absorbed by rounding.
        std::vector<BigFloat> s(w.begin(), w.end());
        std::sort(s.begin(), s.end());
        BigFloat acc(0L);
        for (const auto& v : s) acc = acc + v;
        return acc;
    }

    void trim() {
        size_t a = 0, b = w.size();
        while (a < b && w[a].is_zero()) ++a;
        while (b > a && w[b - 1].is_zero()) --b;
        lo += static_cast<long>(a);
        w.assign(w.begin() + static_cast<long>(a), w.begin() + static_cast<long>(b));
        if (w.empty()) {
            lo = 0;
            w.assign(1, BigFloat(0L));
        }
    }
};

inline Pmf pmf_point(long x) {
    Pmf p;
    p.lo = x;
    p.w.assign(1, BigFloat(1L));
    return p;
}

// Centered binomial: sum of eta fair bits minus eta fair bits.
inline Pmf pmf_of_cbd(int eta) {
    require(eta >= 1, Err::BadArgument, "cbd width");
    // Binomial(2*eta, 1/2) coefficients.
    std::vector<long> binom(static_cast<size_t>(2 * eta) + 1, 0);
    binom[0] = 1;
    for (int row = 1; row <= 2 * eta; ++row)
        for (int j = row; j >= 1; --j) binom[static_cast<size_t>(j)] += binom[static_cast<size_t>(j - 1)];
    Pmf p;
    p.lo = -eta;
    p.w.reserve(binom.size());
    for (long c : binom) p.w.push_back(BigFloat::ratio(c, 1L << (2 * eta)));
    return p;
}

// From integer occurrence counts (e.g. quantization noise over all of Z_q).
inline Pmf pmf_from_counts(const std::map<int, long>& counts, long denom) {
    require(!counts.empty() && denom > 0, Err::BadArgument, "empty count table");
    Pmf p;
    p.lo = counts.begin()->first;
    long hi = counts.rbegin()->first;
    p.w.assign(static_cast<size_t>(hi - p.lo) + 1, BigFloat(0L));
    for (auto [x, c] : counts) p.w[static_cast<size_t>(x - p.lo)] = BigFloat::ratio(c, denom);
    return p;
}

// Distribution of X*Y for independent X ~ a, Y ~ b.
inline Pmf pmf_product(const Pmf& a, const Pmf& b) {
    long candidates[4] = {a.lo * b.lo, a.lo * b.hi(), a.hi() * b.lo, a.hi() * b.hi()};
    long lo = *std::min_element(candidates, candidates + 4);
    long hi = *std::max_element(candidates, candidates + 4);
    if (lo > 0) lo = 0;  // zero is always reachable unless a support excludes it; harmless slack
    if (hi < 0) hi = 0;
    Pmf p;
    p.lo = lo;
    p.w.assign(static_cast<size_t>(hi - lo) + 1, BigFloat(0L));
    for (size_t i = 0; i < a.w.size(); ++i) {
        if (a.w[i].is_zero()) continue;
        long x = a.lo + static_cast<long>(i);
        for (size_t j = 0; j < b.w.size(); ++j) {
            if (b.w[j].is_zero()) continue;
            long y = b.lo + static_cast<long>(j);
            p.w[static_cast<size_t>(x * y - lo)].add_mul(a.w[i], b.w[j]);
        }
    }
    p.trim();
    return p;
}

// Fold a wide pmf back onto centered residues (-q/2, q/2].
inline Pmf pmf_wrap_centered(const Pmf& a, long q) {
    const long half_lo = -(q - 1) / 2;  // odd q: (-(q-1)/2 .. (q-1)/2], symmetric
    const long half_hi = q / 2;
    if (a.lo >= half_lo && a.hi() <= half_hi) return a;
    Pmf p;
    p.lo = half_lo;
    p.w.assign(static_cast<size_t>(q), BigFloat(0L));
    for (size_t i = 0; i < a.w.size(); ++i) {
        if (a.w[i].is_zero()) continue;
        long x = a.lo + static_cast<long>(i);
        long r = x % q;
        if (r < half_lo) r += q;
        if (r > half_hi) r -= q;
        p.w[static_cast<size_t>(r - half_lo)] = p.w[static_cast<size_t>(r - half_lo)] + a.w[i];
    }
    p.trim();
    return p;
}

inline Pmf pmf_convolve(const Pmf& a, const Pmf& b, long mod_q = 0) {
    Pmf p;
    p.lo = a.lo + b.lo;
    p.w.assign(a.w.size() + b.w.size() - 1, BigFloat(0L));
    for (size_t i = 0; i < a.w.size(); ++i) {
        if (a.w[i].is_zero()) continue;
        for (size_t j = 0; j < b.w.size(); ++j) {
            if (b.w[j].is_zero()) continue;
            p.w[i + j].add_mul(a.w[i], b.w[j]);
        }
    }
    p.trim();
    if (mod_q > 0) p = pmf_wrap_centered(p, mod_q);
    return p;
}

// m-fold additive convolution by square-and-multiply; with mod_q set, each
// intermediate is folded so widths stay bounded by ~2q.
inline Pmf pmf_convolve_power(const Pmf& a, long m, long mod_q = 0) {
    require(m >= 1, Err::BadArgument, "convolution power");
    Pmf base = a;
    Pmf acc = pmf_point(0);
    bool acc_set = false;
    while (m > 0) {
        if (m & 1) {
            acc = acc_set ? pmf_convolve(acc, base, mod_q) : base;
            acc_set = true;
        }
        m >>= 1;
        if (m > 0) base = pmf_convolve(base, base, mod_q);
    }
    return acc;
}

// (w(x) + w(-x)) / 2.
inline Pmf pmf_symmetrize(const Pmf& a) {
    long m = std::max(std::abs(a.lo), std::abs(a.hi()));
    Pmf p;
    p.lo = -m;
    p.w.assign(static_cast<size_t>(2 * m) + 1, BigFloat(0L));
    BigFloat half = BigFloat::ratio(1, 2);
    for (long x = -m; x <= m; ++x) {
        BigFloat v = (a.at(x) + a.at(-x)) * half;
        p.w[static_cast<size_t>(x + m)] = v;
    }
    p.trim();
    return p;
}

// Distribution of X^2.
inline Pmf pmf_square(const Pmf& a) {
    long m = std::max(std::abs(a.lo), std::abs(a.hi()));
    Pmf p;
    p.lo = 0;
    p.w.assign(static_cast<size_t>(m) * m + 1, BigFloat(0L));
    for (size_t i = 0; i < a.w.size(); ++i) {
        if (a.w[i].is_zero()) continue;
        long x = a.lo + static_cast<long>(i);
        p.w[static_cast<size_t>(x * x)] = p.w[static_cast<size_t>(x * x)] + a.w[i];
    }
    p.trim();
    return p;
}

// P(|X| >= thresh), smallest weights first.
inline BigFloat pmf_tail_ge(const Pmf& a, long thresh) {
    std::vector<BigFloat> parts;
    for (size_t i = 0; i < a.w.size(); ++i) {
        long x = a.lo + static_cast<long>(i);
        if (std::abs(x) >= thresh && !a.w[i].is_zero()) parts.push_back(a.w[i]);
    }
    std::sort(parts.begin(), parts.end());
    BigFloat acc(0L);
    for (const auto& v : parts) acc = acc + v;
    return acc;
}

inline double pmf_mean(const Pmf& a) {
    BigFloat acc(0L);
    for (size_t i = 0; i < a.w.size(); ++i) {
        long x = a.lo + static_cast<long>(i);
        acc.add_mul(a.w[i], BigFloat(x));
    }
    return acc.to_double();
}

// E[exp(theta * X)] for a non-negative-support pmf (squared noise).
inline BigFloat pmf_mgf(const Pmf& a, const BigFloat& theta) {
    require(a.lo >= 0, Err::BadArgument, "mgf expects non-negative support");
    BigFloat acc(0L);
    for (size_t i = 0; i < a.w.size(); ++i) {
        if (a.w[i].is_zero()) continue;
        long x = a.lo + static_cast<long>(i);
        acc.add_mul(a.w[i], exp(theta * BigFloat(x)));
    }
    return acc;
}

} // namespace pklb
