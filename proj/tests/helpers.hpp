#pragma once

// Shared test utilities: deterministic randomness and independently coded
// reference computations ("oracles") that the library is checked against.

#include <cstdint>
#include <random>
#include <vector>

#include "pklb/ring.hpp"

namespace testutil {

// One fixed-seed engine per test file keeps runs reproducible.
inline std::mt19937_64& rng() {
    static std::mt19937_64 eng(0x5eed5eed5eedULL);
    return eng;
}

inline int rand_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng());
}

inline pklb::Bytes rand_bytes(size_t n) {
    pklb::Bytes b(n);
    for (auto& x : b) x = static_cast<uint8_t>(rand_int(0, 255));
    return b;
}

inline pklb::Poly rand_poly() {
    pklb::Poly p;
    for (auto& c : p.c) c = static_cast<uint16_t>(rand_int(0, pklb::kQ - 1));
    return p;
}

// Schoolbook negacyclic product in Z_q[X]/(X^256 + 1): the O(n^2) reference
// the transform-based multiplication must match.
inline pklb::Poly ref_ring_mul(const pklb::Poly& a, const pklb::Poly& b) {
    pklb::Poly r;
    std::vector<int64_t> acc(pklb::kN, 0);
    for (int i = 0; i < pklb::kN; ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; j < pklb::kN; ++j) {
            int idx = i + j;
            int64_t term = static_cast<int64_t>(a.c[i]) * b.c[j];
            if (idx < pklb::kN)
                acc[idx] += term;
            else
                acc[idx - pklb::kN] -= term;
        }
    }
    for (int i = 0; i < pklb::kN; ++i) {
        int64_t v = acc[i] % pklb::kQ;
        if (v < 0) v += pklb::kQ;
        r.c[i] = static_cast<uint16_t>(v);
    }
    return r;
}

} // namespace testutil
