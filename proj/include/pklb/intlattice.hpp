#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pklb/errors.hpp"

namespace pklb {

// Exact integer matrices and classic lattice algorithms at the small sizes
// used by the block codes (dimension <= 24, tiny entries).  All arithmetic is
// int64 with __int128 intermediates; anything that could overflow asserts.

struct IMat {
    size_t rows = 0, cols = 0;
    std::vector<long long> a;

    IMat() = default;
    IMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

    long long& operator()(size_t r, size_t c) { return a[r * cols + c]; }
    const long long& operator()(size_t r, size_t c) const { return a[r * cols + c]; }

    static IMat identity(size_t n) {
        IMat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
};

namespace intlat {

inline long long checked(__int128 v) {
    require(v < (__int128(1) << 62) && v > -(__int128(1) << 62), Err::ValueTooLarge,
            "integer lattice arithmetic overflow");
    return static_cast<long long>(v);
}

inline IMat mul(const IMat& x, const IMat& y) {
    require(x.cols == y.rows, Err::DimensionMismatch, "integer matrix product shape");
    IMat r(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t j = 0; j < y.cols; ++j) {
            __int128 acc = 0;
            for (size_t m = 0; m < x.cols; ++m)
                acc += static_cast<__int128>(x(i, m)) * y(m, j);
            r(i, j) = checked(acc);
        }
    return r;
}

// Row-style Hermite elimination: returns a square basis whose rows span the
// same lattice as the rows of g.  Requires full column rank.
inline IMat hnf_basis(IMat g) {
    size_t r = 0;
    for (size_t col = 0; col < g.cols && r < g.rows; ++col) {
        for (;;) {
            size_t piv = g.rows;
            for (size_t i = r; i < g.rows; ++i)
                if (g(i, col) != 0 && (piv == g.rows || std::abs(g(i, col)) < std::abs(g(piv, col))))
                    piv = i;
            if (piv == g.rows) break;  // column already clear below r
            bool clean = true;
            for (size_t i = r; i < g.rows; ++i) {
                if (i == piv || g(i, col) == 0) continue;
                long long q = g(i, col) / g(piv, col);
                for (size_t j = 0; j < g.cols; ++j)
                    g(i, j) = checked(static_cast<__int128>(g(i, j)) -
                                      static_cast<__int128>(q) * g(piv, j));
                if (g(i, col) != 0) clean = false;
            }
            if (clean) {
                for (size_t j = 0; j < g.cols; ++j) std::swap(g(r, j), g(piv, j));
                if (g(r, col) < 0)
                    for (size_t j = 0; j < g.cols; ++j) g(r, j) = -g(r, j);
                ++r;
                break;
            }
        }
    }
    require(r == g.cols, Err::Singular, "generators do not span a full-rank lattice");
    IMat basis(g.cols, g.cols);
    for (size_t i = 0; i < g.cols; ++i)
        for (size_t j = 0; j < g.cols; ++j) basis(i, j) = g(i, j);
    return basis;
}

// Smith decomposition B = U * diag(pi) * V with U, V unimodular.  V is not
// materialized; alongside U we maintain P = U^{-1}, which is what decoding
// actually needs.  Row operations on the working matrix update P on the left
// and U on the right with the inverse operation.
struct Snf {
    std::vector<long long> pi;
    IMat u;  // B = u * diag(pi) * V
    IMat p;  // p = u^{-1}
};

inline Snf snf(IMat w) {
    require(w.rows == w.cols, Err::DimensionMismatch, "smith form needs a square matrix");
    const size_t n = w.rows;
    IMat u = IMat::identity(n), p = IMat::identity(n);

    auto row_addmul = [&](size_t dst, size_t src, long long f) {
        // w <- R w where R adds f*row_src to row_dst; U <- U R^{-1}, P <- R P.
        for (size_t j = 0; j < n; ++j) {
            w(dst, j) = checked(static_cast<__int128>(w(dst, j)) + static_cast<__int128>(f) * w(src, j));
            p(dst, j) = checked(static_cast<__int128>(p(dst, j)) + static_cast<__int128>(f) * p(src, j));
        }
        for (size_t i = 0; i < n; ++i)
            u(i, src) = checked(static_cast<__int128>(u(i, src)) - static_cast<__int128>(f) * u(i, dst));
    };
    auto row_swap = [&](size_t i1, size_t i2) {
        if (i1 == i2) return;
        for (size_t j = 0; j < n; ++j) {
            std::swap(w(i1, j), w(i2, j));
            std::swap(p(i1, j), p(i2, j));
        }
        for (size_t i = 0; i < n; ++i) std::swap(u(i, i1), u(i, i2));
    };
    auto row_negate = [&](size_t i1) {
        for (size_t j = 0; j < n; ++j) {
            w(i1, j) = -w(i1, j);
            p(i1, j) = -p(i1, j);
        }
        for (size_t i = 0; i < n; ++i) u(i, i1) = -u(i, i1);
    };
    auto col_addmul = [&](size_t dst, size_t src, long long f) {
        for (size_t i = 0; i < n; ++i)
            w(i, dst) = checked(static_cast<__int128>(w(i, dst)) + static_cast<__int128>(f) * w(i, src));
    };
    auto col_swap = [&](size_t j1, size_t j2) {
        if (j1 == j2) return;
        for (size_t i = 0; i < n; ++i) std::swap(w(i, j1), w(i, j2));
    };

    for (size_t t = 0; t < n; ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block to (t, t).
            size_t bi = n, bj = n;
            for (size_t i = t; i < n; ++i)
                for (size_t j = t; j < n; ++j)
                    if (w(i, j) != 0 &&
                        (bi == n || std::abs(w(i, j)) < std::abs(w(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            require(bi != n, Err::Singular, "smith form of a singular matrix");
            row_swap(t, bi);
            col_swap(t, bj);
            if (w(t, t) < 0) row_negate(t);

            bool again = false;
            for (size_t i = t + 1; i < n; ++i)
                if (w(i, t) != 0) {
                    row_addmul(i, t, -(w(i, t) / w(t, t)));
                    if (w(i, t) != 0) again = true;
                }
            for (size_t j = t + 1; j < n; ++j)
                if (w(t, j) != 0) {
                    col_addmul(j, t, -(w(t, j) / w(t, t)));
                    if (w(t, j) != 0) again = true;
                }
            if (again) continue;

            // Divisibility: pi_t must divide everything that remains.
            bool fixed = false;
            for (size_t i = t + 1; i < n && !fixed; ++i)
                for (size_t j = t + 1; j < n && !fixed; ++j)
                    if (w(i, j) % w(t, t) != 0) {
                        row_addmul(t, i, 1);
                        fixed = true;
                    }
            if (!fixed) break;
        }
    }

    Snf out;
    out.pi.resize(n);
    for (size_t i = 0; i < n; ++i) out.pi[i] = w(i, i);
    out.u = std::move(u);
    out.p = std::move(p);
    return out;
}

inline long long det(const IMat& m) {
    require(m.rows == m.cols, Err::DimensionMismatch, "determinant of non-square matrix");
    // Fraction-free Bareiss elimination.
    size_t n = m.rows;
    std::vector<__int128> w(m.a.begin(), m.a.end());
    auto at = [&](size_t i, size_t j) -> __int128& { return w[i * n + j]; };
    __int128 prev = 1;
    int sign = 1;
    for (size_t t = 0; t < n; ++t) {
        size_t piv = t;
        while (piv < n && at(piv, t) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != t) {
            for (size_t j = 0; j < n; ++j) std::swap(at(t, j), at(piv, j));
            sign = -sign;
        }
        for (size_t i = t + 1; i < n; ++i)
            for (size_t j = t + 1; j < n; ++j)
                at(i, j) = (at(i, j) * at(t, t) - at(i, t) * at(t, j)) / prev;
        prev = at(t, t);
    }
    return checked(sign > 0 ? at(n - 1, n - 1) : -at(n - 1, n - 1));
}

// ---------------------------------------------------------------------------
// Floating Gram-Schmidt, LLL, and Schnorr-Euchner enumeration.  Enumeration
// prunes with doubles but re-checks candidates exactly, so results are exact
// for these integer lattices.
// ---------------------------------------------------------------------------

struct Gso {
    std::vector<std::vector<double>> mu;
    std::vector<double> bstar2;
};

inline Gso gram_schmidt(const IMat& b) {
    size_t n = b.rows, m = b.cols;
    std::vector<std::vector<double>> star(n, std::vector<double>(m));
    Gso g;
    g.mu.assign(n, std::vector<double>(n, 0.0));
    g.bstar2.assign(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) star[i][j] = static_cast<double>(b(i, j));
        for (size_t k = 0; k < i; ++k) {
            double dot = 0;
            for (size_t j = 0; j < m; ++j) dot += static_cast<double>(b(i, j)) * star[k][j];
            g.mu[i][k] = dot / g.bstar2[k];
            for (size_t j = 0; j < m; ++j) star[i][j] -= g.mu[i][k] * star[k][j];
        }
        double n2 = 0;
        for (size_t j = 0; j < m; ++j) n2 += star[i][j] * star[i][j];
        g.bstar2[i] = n2;
    }
    return g;
}

inline void lll_reduce(IMat& b, double delta = 0.99) {
    size_t n = b.rows;
    Gso g = gram_schmidt(b);
    size_t k = 1;
    int guard = 0;
    while (k < n) {
        require(++guard < 100000, Err::NonConvergence, "lll did not terminate");
        for (size_t j = k; j-- > 0;) {
            long long r = std::llround(g.mu[k][j]);
            if (r != 0) {
                for (size_t t = 0; t < b.cols; ++t)
                    b(k, t) = checked(static_cast<__int128>(b(k, t)) -
                                      static_cast<__int128>(r) * b(j, t));
                g = gram_schmidt(b);
            }
        }
        if (g.bstar2[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.bstar2[k - 1]) {
            ++k;
        } else {
            for (size_t t = 0; t < b.cols; ++t) std::swap(b(k, t), b(k - 1, t));
            g = gram_schmidt(b);
            k = k > 1 ? k - 1 : 1;
        }
    }
}

// Minimize ||sum_i x_i b_i - t||^2 over nonzero-or-any integer combinations.
// Returns coefficient vector; dist2_out gets the achieved squared distance.
inline std::vector<long long> enumerate_closest(const IMat& b, const std::vector<double>& target,
                                                bool exclude_zero, double initial_bound,
                                                long double* dist2_out = nullptr) {
    const size_t n = b.rows, m = b.cols;
    require(target.size() == m, Err::DimensionMismatch, "enumeration target width");
    Gso g = gram_schmidt(b);

    // Target coordinates along the Gram-Schmidt directions.
    std::vector<std::vector<double>> star(n, std::vector<double>(m));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) star[i][j] = static_cast<double>(b(i, j));
        for (size_t k = 0; k < i; ++k)
            for (size_t j = 0; j < m; ++j) star[i][j] -= g.mu[i][k] * star[k][j];
    }
    std::vector<double> tc(n);
    for (size_t i = 0; i < n; ++i) {
        double dot = 0;
        for (size_t j = 0; j < m; ++j) dot += target[j] * star[i][j];
        tc[i] = dot / g.bstar2[i];
    }

    std::vector<long long> x(n, 0), best;
    long double best_d2 = initial_bound;
    bool found = false;

    auto exact_leaf = [&]() {
        if (exclude_zero) {
            bool zero = true;
            for (long long v : x) zero = zero && v == 0;
            if (zero) return;
        }
        std::vector<long double> pt(m, 0.0L);
        for (size_t i = 0; i < n; ++i)
            if (x[i] != 0)
                for (size_t j = 0; j < m; ++j)
                    pt[j] += static_cast<long double>(x[i]) * b(i, j);
        long double d2 = 0;
        for (size_t j = 0; j < m; ++j) {
            long double dj = pt[j] - static_cast<long double>(target[j]);
            d2 += dj * dj;
        }
        if (!found || d2 < best_d2) {
            found = true;
            best_d2 = d2;
            best = x;
        }
    };

    // Depth-first zigzag enumeration from the last Gram-Schmidt level down.
    auto rec = [&](auto&& self, size_t lvl, double partial) -> void {
        size_t i = lvl - 1;
        double ci = tc[i];
        for (size_t j = lvl; j < n; ++j) ci -= x[j] * g.mu[j][i];
        long long x0 = std::llround(ci);
        long long lo = x0, hi = x0;
        for (bool first = true;; first = false) {
            long long cand;
            if (first) {
                cand = x0;
            } else {
                double dl = ci - static_cast<double>(lo - 1);
                double dh = static_cast<double>(hi + 1) - ci;
                cand = dl <= dh ? --lo : ++hi;
            }
            double diff = static_cast<double>(cand) - ci;
            double contrib = diff * diff * g.bstar2[i];
            // Candidates come out in order of |cand - ci|; once over budget
            // every later one is too.
            if (partial + contrib > static_cast<double>(best_d2) * (1 + 1e-12) + 1e-9) {
                if (!first) break;
                continue;
            }
            x[i] = cand;
            if (i == 0)
                exact_leaf();
            else
                self(self, i, partial + contrib);
        }
        x[i] = 0;
    };
    if (n > 0) rec(rec, n, 0.0);

    require(found, Err::NonConvergence, "enumeration found no lattice point in bound");
    if (dist2_out) *dist2_out = best_d2;
    return best;
}

// Exact shortest nonzero squared length of the row lattice.
inline long long shortest_norm2(IMat b) {
    lll_reduce(b);
    double bound = 0;
    for (size_t i = 0; i < b.rows; ++i) {
        double n2 = 0;
        for (size_t j = 0; j < b.cols; ++j)
            n2 += static_cast<double>(b(i, j)) * b(i, j);
        if (i == 0 || n2 < bound) bound = n2;
    }
    std::vector<double> origin(b.cols, 0.0);
    long double d2 = 0;
    enumerate_closest(b, origin, /*exclude_zero=*/true, bound + 0.5, &d2);
    return static_cast<long long>(std::llround(static_cast<double>(d2)));
}

// Exact closest lattice point (row lattice) to a real target.  The basis
// should already be LLL-reduced (callers doing many queries reduce once).
// Starts from the Babai nearest-plane bound so enumeration always has a point.
inline std::vector<long long> closest_point(const IMat& b, const std::vector<double>& target) {
    Gso g = gram_schmidt(b);
    std::vector<std::vector<double>> star(b.rows, std::vector<double>(b.cols));
    for (size_t r = 0; r < b.rows; ++r) {
        for (size_t j = 0; j < b.cols; ++j) star[r][j] = static_cast<double>(b(r, j));
        for (size_t k = 0; k < r; ++k)
            for (size_t j = 0; j < b.cols; ++j) star[r][j] -= g.mu[r][k] * star[k][j];
    }

    std::vector<double> rem(target);
    for (size_t i = b.rows; i-- > 0;) {
        double dot = 0;
        for (size_t j = 0; j < b.cols; ++j) dot += rem[j] * star[i][j];
        long long c = std::llround(dot / g.bstar2[i]);
        for (size_t j = 0; j < b.cols; ++j) rem[j] -= static_cast<double>(c) * b(i, j);
    }
    double babai2 = 0;
    for (size_t j = 0; j < b.cols; ++j) babai2 += rem[j] * rem[j];

    std::vector<long long> coeff =
        enumerate_closest(b, target, /*exclude_zero=*/false, babai2 + 0.5, nullptr);
    std::vector<long long> pt(b.cols, 0);
    for (size_t i = 0; i < b.rows; ++i)
        for (size_t j = 0; j < b.cols; ++j)
            pt[j] = checked(static_cast<__int128>(pt[j]) +
                            static_cast<__int128>(coeff[i]) * b(i, j));
    return pt;
}

} // namespace intlat
} // namespace pklb
