#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pklb/errors.hpp"

namespace pklb {

// R_q = Z_q[X]/(X^256 + 1) with q = 3329.  Storage is 16 bits per
// coefficient, canonical representatives in [0, q).
inline constexpr int kN = 256;
inline constexpr int kQ = 3329;

namespace detail {

constexpr int modpow(int base, int e, int m) {
    long long r = 1, b = base % m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return static_cast<int>(r);
}

constexpr int bitrev7(int i) {
    int r = 0;
    for (int b = 0; b < 7; ++b) r |= ((i >> b) & 1) << (6 - b);
    return r;
}

// zetas[i] = 17^bitrev7(i) mod q; 17 is a primitive 256th root of unity, so
// the transform splits X^256+1 into 128 quadratics X^2 - zeta.
constexpr std::array<int32_t, 128> make_zetas() {
    std::array<int32_t, 128> z{};
    for (int i = 0; i < 128; ++i) z[i] = modpow(17, bitrev7(i), kQ);
    return z;
}

inline constexpr std::array<int32_t, 128> kZetas = make_zetas();
inline constexpr int32_t kInv128 = modpow(128, kQ - 2, kQ);

inline int32_t modq(int32_t x) {
    x %= kQ;
    return x < 0 ? x + kQ : x;
}

inline int32_t mulq(int32_t a, int32_t b) { return static_cast<int32_t>((a * b) % kQ); }

} // namespace detail

struct Poly {
    std::array<uint16_t, kN> c{};

    bool operator==(const Poly&) const = default;
};

// x mod q mapped into (-q/2, q/2].
inline int centered(int x, int q = kQ) {
    int r = x % q;
    if (r < 0) r += q;
    if (r > q / 2) r -= q;  // q odd: q/2 truncates to (q-1)/2
    return r;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r;
    for (int i = 0; i < kN; ++i) r.c[i] = static_cast<uint16_t>(detail::modq(a.c[i] + b.c[i]));
    return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) {
    Poly r;
    for (int i = 0; i < kN; ++i) r.c[i] = static_cast<uint16_t>(detail::modq(a.c[i] - b.c[i]));
    return r;
}

// Seven-layer incomplete number-theoretic transform (the 128 quadratic
// residues remain uninverted); layout and traversal follow the usual
// decimation-in-time form.
inline Poly ntt(const Poly& in) {
    Poly r = in;
    int k = 1;
    for (int len = 128; len >= 2; len >>= 1) {
        for (int start = 0; start < kN; start += 2 * len) {
            int32_t zeta = detail::kZetas[k++];
            for (int j = start; j < start + len; ++j) {
                int32_t t = detail::mulq(zeta, r.c[j + len]);
                r.c[j + len] = static_cast<uint16_t>(detail::modq(r.c[j] - t));
                r.c[j] = static_cast<uint16_t>(detail::modq(r.c[j] + t));
            }
        }
    }
    return r;
}

inline Poly invntt(const Poly& in) {
    Poly r = in;
    int k = 127;
    for (int len = 2; len <= 128; len <<= 1) {
        for (int start = 0; start < kN; start += 2 * len) {
            int32_t zeta = detail::kZetas[k--];
            for (int j = start; j < start + len; ++j) {
                int32_t t = r.c[j];
                r.c[j] = static_cast<uint16_t>(detail::modq(t + r.c[j + len]));
                r.c[j + len] =
                    static_cast<uint16_t>(detail::modq(detail::mulq(zeta, r.c[j + len] - t)));
            }
        }
    }
    for (auto& x : r.c)
        x = static_cast<uint16_t>(detail::mulq(x, detail::kInv128));
    return r;
}

// Pointwise product in the transform domain: 128 products modulo X^2 - zeta.
inline Poly ntt_pointwise(const Poly& a, const Poly& b) {
    Poly r;
    for (int i = 0; i < 64; ++i) {
        int32_t z = detail::kZetas[64 + i];
        for (int half = 0; half < 2; ++half) {
            int idx = 4 * i + 2 * half;
            int32_t zz = half ? detail::modq(-z) : z;
            int32_t a0 = a.c[idx], a1 = a.c[idx + 1];
            int32_t b0 = b.c[idx], b1 = b.c[idx + 1];
            r.c[idx] = static_cast<uint16_t>(
                detail::modq(detail::mulq(a0, b0) + detail::mulq(detail::mulq(a1, b1), zz)));
            r.c[idx + 1] = static_cast<uint16_t>(
                detail::modq(detail::mulq(a0, b1) + detail::mulq(a1, b0)));
        }
    }
    return r;
}

// Negacyclic product via the transform; the workhorse for all matrix algebra.
inline Poly ring_mul(const Poly& a, const Poly& b) {
    return invntt(ntt_pointwise(ntt(a), ntt(b)));
}

// ---------------------------------------------------------------------------
// Matrices of ring elements and of plain scalars.
// ---------------------------------------------------------------------------

template <class T>
struct Mat {
    size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}

    T& operator()(size_t r, size_t c) { return a[r * cols + c]; }
    const T& operator()(size_t r, size_t c) const { return a[r * cols + c]; }

    bool operator==(const Mat&) const = default;
};

using U16Mat = Mat<uint16_t>;
using I32Mat = Mat<int32_t>;

struct PolyMat {
    size_t rows = 0, cols = 0;
    std::vector<Poly> a;

    PolyMat() = default;
    PolyMat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}

    Poly& operator()(size_t r, size_t c) { return a[r * cols + c]; }
    const Poly& operator()(size_t r, size_t c) const { return a[r * cols + c]; }

    bool operator==(const PolyMat&) const = default;
};

inline PolyMat mat_ntt(const PolyMat& m) {
    PolyMat r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = ntt(m.a[i]);
    return r;
}

inline PolyMat mat_invntt(const PolyMat& m) {
    PolyMat r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = invntt(m.a[i]);
    return r;
}

inline PolyMat mat_transpose(const PolyMat& m) {
    PolyMat r(m.cols, m.rows);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
    return r;
}

// Product of two matrices already in the transform domain; the result stays
// in the transform domain.
inline PolyMat mat_mul_ntt(const PolyMat& x, const PolyMat& y) {
    require(x.cols == y.rows, Err::DimensionMismatch, "ring matrix product shape");
    PolyMat r(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; ++i) {
        for (size_t j = 0; j < y.cols; ++j) {
            Poly acc;
            for (size_t m = 0; m < x.cols; ++m)
                acc = poly_add(acc, ntt_pointwise(x(i, m), y(m, j)));
            r(i, j) = acc;
        }
    }
    return r;
}

inline PolyMat mat_add(const PolyMat& x, const PolyMat& y) {
    require(x.rows == y.rows && x.cols == y.cols, Err::DimensionMismatch, "ring matrix sum shape");
    PolyMat r(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = poly_add(x.a[i], y.a[i]);
    return r;
}

// ---------------------------------------------------------------------------
// Coefficient-matrix view: phi maps a vector of ring elements to the matrix
// whose row i holds the coefficients of element i.
// ---------------------------------------------------------------------------

inline U16Mat phi(const std::vector<Poly>& v) {
    U16Mat m(v.size(), kN);
    for (size_t i = 0; i < v.size(); ++i)
        for (int j = 0; j < kN; ++j) m(i, j) = v[i].c[j];
    return m;
}

inline std::vector<Poly> phi_inv(const U16Mat& m) {
    require(m.cols == static_cast<size_t>(kN), Err::DimensionMismatch,
            "phi_inv needs full-width coefficient rows");
    std::vector<Poly> v(m.rows);
    for (size_t i = 0; i < m.rows; ++i)
        for (int j = 0; j < kN; ++j) v[i].c[j] = m(i, j);
    return v;
}

// Keep the first t columns (the low-degree coefficients of each row).
template <class T>
inline Mat<T> trunc_columns(const Mat<T>& m, size_t t) {
    require(t <= m.cols, Err::DimensionMismatch, "truncation wider than matrix");
    Mat<T> r(m.rows, t);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < t; ++j) r(i, j) = m(i, j);
    return r;
}

} // namespace pklb
