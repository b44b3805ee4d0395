#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pklb/errors.hpp"
#include "pklb/intlattice.hpp"
#include "pklb/ring.hpp"

namespace pklb {

enum class LatticeId : uint8_t {
    Uncoded = 0,  // Z^ell, one bit per row
    E8 = 1,
    BW16 = 2,
    Leech24 = 3,
};

inline const char* lattice_name(LatticeId id) {
    switch (id) {
        case LatticeId::Uncoded: return "uncoded";
        case LatticeId::E8:      return "e8";
        case LatticeId::BW16:    return "bw16";
        case LatticeId::Leech24: return "leech24";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Binary codes used by the coset decoders (coordinates = bit positions).
// ---------------------------------------------------------------------------

namespace codes {

// First-order Reed-Muller code of length 16: all-ones plus the four
// coordinate functions; 32 words, weights {0, 8, 16}.
inline std::vector<uint32_t> rm14_basis() {
    std::vector<uint32_t> b{0xffffu};
    for (int bit = 0; bit < 4; ++bit) {
        uint32_t w = 0;
        for (int j = 0; j < 16; ++j)
            if ((j >> bit) & 1) w |= 1u << j;
        b.push_back(w);
    }
    return b;
}

// Extended binary Golay code [24,12,8]: the length-23 quadratic-residue
// cyclic code generated by x^11+x^10+x^6+x^5+x^4+x^2+1, plus a parity bit.
inline std::vector<uint32_t> golay_basis() {
    const uint32_t g = 0b1100'0111'0101u;  // degrees {0,2,4,5,6,10,11}
    std::vector<uint32_t> b;
    for (int i = 0; i < 12; ++i)
        b.push_back((g << i) | (1u << 23));  // odd generator weight => parity 1
    return b;
}

inline std::vector<uint32_t> span_words(const std::vector<uint32_t>& basis) {
    std::vector<uint32_t> words(size_t(1) << basis.size(), 0);
    for (size_t t = 1; t < words.size(); ++t)
        words[t] = words[t - 1] ^ basis[std::countr_zero(t)];  // Gray order
    return words;
}

} // namespace codes

// ---------------------------------------------------------------------------
// A block lattice code: integer generator in Smith form for encoding and
// message recovery, plus a coset-decoder description for fast exact CVP.
// ---------------------------------------------------------------------------

struct LatticeCode {
    LatticeId id;
    int ell = 0;  // block length (rows packed per ciphertext symbol)
    int p = 0;    // codeword alphabet modulus

    IMat bhat;                 // ell x ell; codeword x = bhat * m (column convention)
    IMat pmat;                 // bhat^{-1} = diag(1/pi) * pmat, pmat integer
    std::vector<long long> pi; // invariant factors, ascending divisibility chain
    std::vector<int> sym_mod;  // per-row message alphabet p / pi_i
    std::vector<int> sym_bits; // log2 of sym_mod
    int kbits = 0;             // message bits per column

    // Coset decoder: the lattice is the union over an outer bit m and a
    // binary codeword g of { c + scale*z : c_i = m*m_coef + g_i*g_coef,
    // sum(z) even (or congruent to m when parity_is_m) }.
    int dec_scale = 0;
    int dec_m_coef = 0;
    int dec_g_coef = 0;
    std::vector<int> dec_m_list;
    bool dec_parity_is_m = false;
    std::vector<uint32_t> dec_basis;

    mutable std::once_flag min_once;
    mutable long long min_norm2 = 0;
};

namespace latdetail {

inline IMat transpose(const IMat& m) {
    IMat r(m.cols, m.rows);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
    return r;
}

// D_n basis rows: e0+e1 and e_i - e_{i+1}; index 2 in Z^n (even coordinate sum).
inline std::vector<std::vector<long long>> dn_rows(int n, long long s) {
    std::vector<std::vector<long long>> rows;
    std::vector<long long> r0(n, 0);
    r0[0] = s;
    r0[1] = s;
    rows.push_back(r0);
    for (int i = 0; i + 1 < n; ++i) {
        std::vector<long long> r(n, 0);
        r[i] = s;
        r[i + 1] = -s;
        rows.push_back(r);
    }
    return rows;
}

inline IMat rows_to_mat(const std::vector<std::vector<long long>>& rows) {
    IMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

inline void finish_smith(LatticeCode& lc, const IMat& generators) {
    // Rows generate the lattice; switch to a column basis for encoding.
    IMat basis_rows = intlat::hnf_basis(generators);
    IMat b = transpose(basis_rows);
    intlat::Snf s = intlat::snf(b);
    for (size_t i = 0; i + 1 < s.pi.size(); ++i)
        require(s.pi[i + 1] % s.pi[i] == 0, Err::Singular, "invariant factors out of order");

    IMat d(s.pi.size(), s.pi.size());
    for (size_t i = 0; i < s.pi.size(); ++i) d(i, i) = s.pi[i];
    lc.bhat = intlat::mul(s.u, d);
    lc.pmat = std::move(s.p);
    lc.pi = std::move(s.pi);

    lc.sym_mod.resize(lc.pi.size());
    lc.sym_bits.resize(lc.pi.size());
    lc.kbits = 0;
    for (size_t i = 0; i < lc.pi.size(); ++i) {
        require(lc.p % lc.pi[i] == 0, Err::BadT, "alphabet modulus not a multiple of pi_i");
        long long m = lc.p / lc.pi[i];
        require((m & (m - 1)) == 0, Err::BadT, "message alphabet size not a power of two");
        lc.sym_mod[i] = static_cast<int>(m);
        lc.sym_bits[i] = std::countr_zero(static_cast<unsigned long long>(m));
        lc.kbits += lc.sym_bits[i];
    }
}

} // namespace latdetail

inline std::unique_ptr<LatticeCode> make_lattice_code(LatticeId id, int ell) {
    auto lc = std::make_unique<LatticeCode>();
    lc->id = id;
    lc->ell = ell;

    if (id == LatticeId::Uncoded) {
        require(ell >= 1, Err::BadArgument, "uncoded block length");
        lc->p = 2;
        lc->bhat = IMat::identity(ell);
        lc->pmat = IMat::identity(ell);
        lc->pi.assign(ell, 1);
        lc->sym_mod.assign(ell, 2);
        lc->sym_bits.assign(ell, 1);
        lc->kbits = ell;
        lc->min_norm2 = 1;  // Z^ell
        return lc;
    }

    if (id == LatticeId::E8) {
        require(ell == 8, Err::MismatchedCode, "E8 packs 8 rows");
        lc->p = 4;
        // Even-coordinate-system basis scaled by 2: min length 2*sqrt(2).
        std::vector<std::vector<long long>> rows = {
            {4, 0, 0, 0, 0, 0, 0, 0},
            {-2, 2, 0, 0, 0, 0, 0, 0},
            {0, -2, 2, 0, 0, 0, 0, 0},
            {0, 0, -2, 2, 0, 0, 0, 0},
            {0, 0, 0, -2, 2, 0, 0, 0},
            {0, 0, 0, 0, -2, 2, 0, 0},
            {0, 0, 0, 0, 0, -2, 2, 0},
            {1, 1, 1, 1, 1, 1, 1, 1},
        };
        latdetail::finish_smith(*lc, latdetail::rows_to_mat(rows));
        // 2*E8 = 2*D8 union (2*D8 + all-ones).
        lc->dec_scale = 2;
        lc->dec_m_coef = 1;
        lc->dec_g_coef = 0;
        lc->dec_m_list = {0, 1};
        lc->dec_parity_is_m = false;
        return lc;
    }

    if (id == LatticeId::BW16) {
        require(ell == 16, Err::MismatchedCode, "BW16 packs 16 rows");
        lc->p = 4;
        // Barnes-Wall as RM(1,4) + 2*D16: min length 2*sqrt(2), det 2^12.
        std::vector<std::vector<long long>> rows;
        for (uint32_t w : codes::rm14_basis()) {
            std::vector<long long> r(16, 0);
            for (int j = 0; j < 16; ++j) r[j] = (w >> j) & 1;
            rows.push_back(r);
        }
        for (auto& r : latdetail::dn_rows(16, 2)) rows.push_back(r);
        latdetail::finish_smith(*lc, latdetail::rows_to_mat(rows));
        lc->dec_scale = 2;
        lc->dec_m_coef = 0;
        lc->dec_g_coef = 1;
        lc->dec_m_list = {0};
        lc->dec_parity_is_m = false;
        lc->dec_basis = codes::rm14_basis();
        return lc;
    }

    require(id == LatticeId::Leech24 && ell == 24, Err::MismatchedCode, "Leech packs 24 rows");
    lc->p = 8;
    // Integer Leech lattice (the sqrt(8)-scaled form): even part
    // 2*Golay + 4*D24, odd coset reached through (-3, 1, ..., 1).
    std::vector<std::vector<long long>> rows;
    for (uint32_t w : codes::golay_basis()) {
        std::vector<long long> r(24, 0);
        for (int j = 0; j < 24; ++j) r[j] = 2 * ((w >> j) & 1);
        rows.push_back(r);
    }
    for (auto& r : latdetail::dn_rows(24, 4)) rows.push_back(r);
    std::vector<long long> odd(24, 1);
    odd[0] = -3;
    rows.push_back(odd);
    latdetail::finish_smith(*lc, latdetail::rows_to_mat(rows));
    lc->dec_scale = 4;
    lc->dec_m_coef = 1;
    lc->dec_g_coef = 2;
    lc->dec_m_list = {0, 1};
    lc->dec_parity_is_m = true;
    lc->dec_basis = codes::golay_basis();
    return lc;
}

inline const LatticeCode& lattice_code(LatticeId id, int ell) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<LatticeCode>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(id), ell);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_lattice_code(id, ell)).first;
    return *it->second;
}

// ---------------------------------------------------------------------------
// Encoding / message recovery.
// ---------------------------------------------------------------------------

inline std::vector<int> hs_encode(const LatticeCode& lc, const std::vector<int>& m) {
    require(m.size() == static_cast<size_t>(lc.ell), Err::DimensionMismatch,
            "message length != block length");
    for (int i = 0; i < lc.ell; ++i)
        require(m[i] >= 0 && m[i] < lc.sym_mod[i], Err::SymbolOutOfRange,
                "message symbol outside its alphabet");
    std::vector<int> x(lc.ell);
    for (int r = 0; r < lc.ell; ++r) {
        long long acc = 0;
        for (int c = 0; c < lc.ell; ++c) acc += lc.bhat(r, c) * m[c];
        x[r] = static_cast<int>(((acc % lc.p) + lc.p) % lc.p);
    }
    return x;
}

// True for x in L(bhat): diag(1/pi) * pmat * x integral.
inline bool is_lattice_point(const LatticeCode& lc, const std::vector<long long>& x) {
    for (int i = 0; i < lc.ell; ++i) {
        long long acc = 0;
        for (int j = 0; j < lc.ell; ++j) acc += lc.pmat(i, j) * x[j];
        if (acc % lc.pi[i] != 0) return false;
    }
    return true;
}

inline std::vector<int> coords_to_message(const LatticeCode& lc,
                                          const std::vector<long long>& x) {
    std::vector<int> m(lc.ell);
    for (int i = 0; i < lc.ell; ++i) {
        long long acc = 0;
        for (int j = 0; j < lc.ell; ++j) acc += lc.pmat(i, j) * x[j];
        require(acc % lc.pi[i] == 0, Err::MismatchedCode, "point not in the code lattice");
        long long v = (acc / lc.pi[i]) % lc.sym_mod[i];
        if (v < 0) v += lc.sym_mod[i];
        m[i] = static_cast<int>(v);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Exact CVP.  Uncoded rounds per coordinate; the block lattices scan their
// cosets of a scaled parity lattice, walking the binary code in Gray order
// with incremental cost and parity updates.
// ---------------------------------------------------------------------------

inline long long round_half_up(double v) { return static_cast<long long>(std::floor(v + 0.5)); }

namespace latdetail {

struct CoordTab {
    double cost[2];   // best rounding cost per code bit value
    double delta[2];  // extra cost of flipping z_i to its second-best value
    int zpar[2];      // parity of the best z_i
};

inline std::vector<long long> coset_decode(const LatticeCode& lc,
                                           const std::vector<double>& y) {
    const int n = lc.ell;
    const double s = lc.dec_scale;
    const size_t nwords = size_t(1) << lc.dec_basis.size();

    double best = std::numeric_limits<double>::infinity();
    int best_m = 0;
    uint32_t best_g = 0;
    bool best_fix = false;

    std::vector<CoordTab> tab(n);
    for (int m : lc.dec_m_list) {
        for (int i = 0; i < n; ++i) {
            for (int a = 0; a < 2; ++a) {
                double c = m * lc.dec_m_coef + a * lc.dec_g_coef;
                double w = (y[i] - c) / s;
                long long z = round_half_up(w);
                double e = w - static_cast<double>(z);
                tab[i].cost[a] = e * e;
                tab[i].delta[a] = 1.0 - 2.0 * std::abs(e);
                tab[i].zpar[a] = static_cast<int>(z & 1);
            }
        }
        const int target = lc.dec_parity_is_m ? (m & 1) : 0;

        double S = 0;
        int P = 0;
        for (int i = 0; i < n; ++i) {
            S += tab[i].cost[0];
            P ^= tab[i].zpar[0];
        }
        // Per-row constants for the Gray walk.
        std::vector<int> row_par(lc.dec_basis.size(), 0);
        for (size_t r = 0; r < lc.dec_basis.size(); ++r)
            for (int i = 0; i < n; ++i)
                if ((lc.dec_basis[r] >> i) & 1)
                    row_par[r] ^= tab[i].zpar[0] ^ tab[i].zpar[1];

        uint32_t g = 0;
        for (size_t t = 0;; ++t) {
            if (S < best) {
                double cand = S;
                bool fix = ((P ^ target) & 1) != 0;
                if (fix) {
                    double dmin = std::numeric_limits<double>::infinity();
                    for (int i = 0; i < n; ++i) {
                        int a = (g >> i) & 1;
                        if (tab[i].delta[a] < dmin) dmin = tab[i].delta[a];
                    }
                    cand += dmin;
                }
                if (cand < best) {
                    best = cand;
                    best_m = m;
                    best_g = g;
                    best_fix = fix;
                }
            }
            if (t + 1 == nwords) break;
            size_t r = std::countr_zero(t + 1);
            g ^= lc.dec_basis[r];
            P ^= row_par[r];
            for (int i = 0; i < n; ++i)
                if ((lc.dec_basis[r] >> i) & 1) {
                    int a = (g >> i) & 1;
                    S += a ? tab[i].cost[1] - tab[i].cost[0]
                           : tab[i].cost[0] - tab[i].cost[1];
                }
        }
    }

    // Rebuild the winning point.
    std::vector<long long> x(n);
    std::vector<long long> z(n);
    std::vector<double> err(n);
    for (int i = 0; i < n; ++i) {
        int a = (best_g >> i) & 1;
        double c = best_m * lc.dec_m_coef + a * lc.dec_g_coef;
        double w = (y[i] - c) / s;
        z[i] = round_half_up(w);
        err[i] = w - static_cast<double>(z[i]);
        x[i] = static_cast<long long>(c) + lc.dec_scale * z[i];
    }
    if (best_fix) {
        int arg = 0;
        double dmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double d = 1.0 - 2.0 * std::abs(err[i]);
            if (d < dmin) {
                dmin = d;
                arg = i;
            }
        }
        z[arg] += err[arg] >= 0 ? 1 : -1;
        int a = (best_g >> arg) & 1;
        double c = best_m * lc.dec_m_coef + a * lc.dec_g_coef;
        x[arg] = static_cast<long long>(c) + lc.dec_scale * z[arg];
    }
    return x;
}

} // namespace latdetail

inline std::vector<long long> cvp(const LatticeCode& lc, const std::vector<double>& y) {
    require(y.size() == static_cast<size_t>(lc.ell), Err::DimensionMismatch, "cvp input width");
    if (lc.id == LatticeId::Uncoded) {
        std::vector<long long> x(lc.ell);
        for (int i = 0; i < lc.ell; ++i) x[i] = round_half_up(y[i]);
        return x;
    }
    return latdetail::coset_decode(lc, y);
}

inline std::vector<int> hs_cvp_decode(const LatticeCode& lc, const std::vector<double>& y) {
    return coords_to_message(lc, cvp(lc, y));
}

// ---------------------------------------------------------------------------
// Column-wise vector forms used by encryption / decryption.
// ---------------------------------------------------------------------------

// round(q/p), ties up: the scaling between codeword alphabet and Z_q.
inline int code_scale(int q, int p) {
    return static_cast<int>((2LL * q + p) / (2LL * p));
}

inline U16Mat lv_encode(const LatticeCode& lc, const U16Mat& msg) {
    require(msg.rows == static_cast<size_t>(lc.ell), Err::DimensionMismatch,
            "message matrix row count");
    U16Mat x(msg.rows, msg.cols);
    std::vector<int> col(lc.ell);
    for (size_t j = 0; j < msg.cols; ++j) {
        for (int i = 0; i < lc.ell; ++i) col[i] = msg(i, j);
        std::vector<int> enc = hs_encode(lc, col);
        for (int i = 0; i < lc.ell; ++i) x(i, j) = static_cast<uint16_t>(enc[i]);
    }
    return x;
}

// y holds centered residuals (v - S^T u rows); decoding divides out the code
// scale and searches the unscaled lattice, so mod-q wraps only perturb the
// effective noise by at most |q - p*scale| / scale.
inline U16Mat lv_decode(const LatticeCode& lc, const I32Mat& y, int q) {
    require(y.rows == static_cast<size_t>(lc.ell), Err::DimensionMismatch,
            "residual matrix row count");
    const double s = code_scale(q, lc.p);
    U16Mat out(y.rows, y.cols);
    std::vector<double> col(lc.ell);
    for (size_t j = 0; j < y.cols; ++j) {
        for (int i = 0; i < lc.ell; ++i) col[i] = static_cast<double>(y(i, j)) / s;
        std::vector<int> m = hs_cvp_decode(lc, col);
        for (int i = 0; i < lc.ell; ++i) out(i, j) = static_cast<uint16_t>(m[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shortest-vector length (exact, by enumeration) and the scaled minimum
// distance of the q-embedded code.
// ---------------------------------------------------------------------------

inline long long min_norm2(const LatticeCode& lc) {
    std::call_once(lc.min_once, [&] {
        if (lc.min_norm2 == 0)
            lc.min_norm2 = intlat::shortest_norm2(latdetail::transpose(lc.bhat));
    });
    return lc.min_norm2;
}

inline double lambda_p(const LatticeCode& lc, int q) {
    return code_scale(q, lc.p) * std::sqrt(static_cast<double>(min_norm2(lc)));
}

} // namespace pklb
