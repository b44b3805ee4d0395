#pragma once

#include <vector>

#include "pklb/latticecode.hpp"
#include "pklb/params.hpp"
#include "pklb/quantize.hpp"
#include "pklb/ring.hpp"
#include "pklb/symmetric.hpp"

namespace pklb {

// Keys hold ring elements in the plain coefficient domain; transforms happen
// at use sites.  T and S are k x ell (one column per packed plaintext row).
struct PkePublicKey {
    PolyMat t;
    Bytes psi;
};

struct PkeSecretKey {
    PolyMat s;
};

// Quantizer index streams, exactly what goes on the wire.
struct PkeCiphertext {
    std::vector<uint16_t> u;  // k*n values < 2^du
    U16Mat v;                 // ell x t values < 2^dv
};

// A plaintext is an ell x t matrix of message symbols; row i lives in
// [0, p/pi_i).  Uncoded parameter sets make that one bit per row.
using Plaintext = U16Mat;

namespace pkedetail {

inline Poly from_centered(const std::array<int8_t, 256>& c) {
    Poly p;
    for (int i = 0; i < kN; ++i) p.c[i] = static_cast<uint16_t>((c[i] + kQ) % kQ);
    return p;
}

inline PolyMat expand_a(ByteView psi, int k) {
    PolyMat a(static_cast<size_t>(k), static_cast<size_t>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            auto coeffs = sam_poly(psi, static_cast<uint8_t>(j), static_cast<uint8_t>(i));
            for (int c = 0; c < kN; ++c) a(i, j).c[c] = coeffs[c];
        }
    return a;
}

// Column-major nonce order: entry (i, j) uses nonce0 + j*rows + i.
inline PolyMat cbd_mat(ByteView seed, int rows, int cols, int eta, int nonce0) {
    PolyMat m(static_cast<size_t>(rows), static_cast<size_t>(cols));
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = from_centered(
                cbd_coeffs(seed, static_cast<uint8_t>(nonce0 + j * rows + i), eta));
    return m;
}

inline std::vector<uint16_t> quantize_indices(const ParamSet& ps, const PolyMat& vec, int d) {
    const Quantizer& qz = quantizer(ps.q, d, ps.quant);
    std::vector<uint16_t> idx;
    idx.reserve(vec.a.size() * kN);
    for (const Poly& p : vec.a)
        for (int c = 0; c < kN; ++c) idx.push_back(qz.assign(p.c[c]));
    return idx;
}

} // namespace pkedetail

inline void keygen_from_seeds(const ParamSet& ps, ByteView psi, ByteView sigma,
                              PkePublicKey& pk, PkeSecretKey& sk) {
    require(psi.size() == 32 && sigma.size() == 32, Err::BadArgument, "seed length");
    const int k = ps.k, ell = ps.ell;
    PolyMat a = pkedetail::expand_a(psi, k);
    PolyMat s = pkedetail::cbd_mat(sigma, k, ell, ps.eta1, 0);
    PolyMat e = pkedetail::cbd_mat(sigma, k, ell, ps.eta1, k * ell);
    PolyMat t = mat_add(mat_invntt(mat_mul_ntt(mat_ntt(a), mat_ntt(s))), e);
    pk.t = std::move(t);
    pk.psi.assign(psi.begin(), psi.end());
    sk.s = std::move(s);
}

inline void keygen(const ParamSet& ps, RandomSource& rng, PkePublicKey& pk, PkeSecretKey& sk) {
    Bytes psi = rng.bytes(32), sigma = rng.bytes(32);
    keygen_from_seeds(ps, psi, sigma, pk, sk);
}

// Everything encryption derives on the way to the ciphertext; decryption
// analysis and failure attribution read these back.
struct EncryptTranscript {
    PolyMat r, e1, e2;  // column vectors (k, k, ell)
    PolyMat u_pre;      // A^T r + e1 before quantization (k x 1)
    U16Mat v_pre;       // truncated message-carrying rows before quantization (ell x t)
    U16Mat codeword;    // scaled-down lattice codeword, entries in [0, p)
};

inline PkeCiphertext encrypt_core(const ParamSet& ps, const PkePublicKey& pk,
                                  const Plaintext& m, ByteView rseed,
                                  EncryptTranscript* tr = nullptr) {
    require(rseed.size() == 32, Err::BadArgument, "seed length");
    require(pk.t.rows == static_cast<size_t>(ps.k) && pk.t.cols == static_cast<size_t>(ps.ell),
            Err::ModeMismatch, "public key shape");
    require(m.rows == static_cast<size_t>(ps.ell) && m.cols == static_cast<size_t>(ps.t),
            Err::ModeMismatch, "plaintext shape");
    const int k = ps.k, ell = ps.ell;
    const LatticeCode& lc = ps.code();

    PolyMat a = pkedetail::expand_a(pk.psi, k);
    PolyMat r = pkedetail::cbd_mat(rseed, k, 1, ps.eta1, 0);
    PolyMat e1 = pkedetail::cbd_mat(rseed, k, 1, ps.eta2, k);
    PolyMat e2 = pkedetail::cbd_mat(rseed, ell, 1, ps.eta2, 2 * k);

    PolyMat r_hat = mat_ntt(r);
    PolyMat u_pre = mat_add(mat_invntt(mat_mul_ntt(mat_ntt(mat_transpose(a)), r_hat)), e1);
    PolyMat w = mat_add(mat_invntt(mat_mul_ntt(mat_ntt(mat_transpose(pk.t)), r_hat)), e2);

    U16Mat wt = trunc_columns(phi(w.a), static_cast<size_t>(ps.t));
    U16Mat x = lv_encode(lc, m);
    const int scale = code_scale(ps.q, lc.p);
    const Quantizer& qv = quantizer(ps.q, ps.dv, ps.quant);

    PkeCiphertext ct;
    ct.u = pkedetail::quantize_indices(ps, u_pre, ps.du);
    ct.v = U16Mat(static_cast<size_t>(ell), static_cast<size_t>(ps.t));
    U16Mat v_pre(ct.v.rows, ct.v.cols);
    for (size_t i = 0; i < ct.v.rows; ++i)
        for (size_t j = 0; j < ct.v.cols; ++j) {
            int val = (wt(i, j) + scale * x(i, j)) % ps.q;
            v_pre(i, j) = static_cast<uint16_t>(val);
            ct.v(i, j) = qv.assign(val);
        }

    if (tr) {
        tr->r = std::move(r);
        tr->e1 = std::move(e1);
        tr->e2 = std::move(e2);
        tr->u_pre = std::move(u_pre);
        tr->v_pre = std::move(v_pre);
        tr->codeword = std::move(x);
    }
    return ct;
}

inline PkeCiphertext encrypt(const ParamSet& ps, const PkePublicKey& pk, const Plaintext& m,
                             ByteView rseed) {
    return encrypt_core(ps, pk, m, rseed);
}

// Reconstructed u as ring elements, and v as coefficients (both still in Z_q).
inline std::vector<Poly> reconstruct_u(const ParamSet& ps, const PkeCiphertext& ct) {
    require(ct.u.size() == static_cast<size_t>(ps.k) * kN, Err::MalformedCiphertext,
            "u index count");
    const Quantizer& qu = quantizer(ps.q, ps.du, ps.quant);
    std::vector<Poly> u(static_cast<size_t>(ps.k));
    for (int i = 0; i < ps.k; ++i)
        for (int c = 0; c < kN; ++c)
            u[static_cast<size_t>(i)].c[c] =
                static_cast<uint16_t>(qu.reconstruct(ct.u[static_cast<size_t>(i) * kN + c]));
    return u;
}

inline U16Mat reconstruct_v(const ParamSet& ps, const PkeCiphertext& ct) {
    require(ct.v.rows == static_cast<size_t>(ps.ell) && ct.v.cols == static_cast<size_t>(ps.t),
            Err::MalformedCiphertext, "v index shape");
    const Quantizer& qv = quantizer(ps.q, ps.dv, ps.quant);
    U16Mat v(ct.v.rows, ct.v.cols);
    for (size_t i = 0; i < v.rows; ++i)
        for (size_t j = 0; j < v.cols; ++j)
            v(i, j) = static_cast<uint16_t>(qv.reconstruct(ct.v(i, j)));
    return v;
}

// Centered residual matrix v - S^T u that the lattice decoder works on.
inline I32Mat decrypt_residual(const ParamSet& ps, const PkeSecretKey& sk,
                               const PkeCiphertext& ct) {
    require(sk.s.rows == static_cast<size_t>(ps.k) && sk.s.cols == static_cast<size_t>(ps.ell),
            Err::ModeMismatch, "secret key shape");
    std::vector<Poly> u = reconstruct_u(ps, ct);
    U16Mat v = reconstruct_v(ps, ct);

    PolyMat u_mat(static_cast<size_t>(ps.k), 1);
    u_mat.a = std::move(u);
    PolyMat w = mat_invntt(mat_mul_ntt(mat_ntt(mat_transpose(sk.s)), mat_ntt(u_mat)));
    U16Mat wt = trunc_columns(phi(w.a), static_cast<size_t>(ps.t));

    I32Mat y(v.rows, v.cols);
    for (size_t i = 0; i < y.rows; ++i)
        for (size_t j = 0; j < y.cols; ++j)
            y(i, j) = centered((v(i, j) + ps.q - wt(i, j)) % ps.q, ps.q);
    return y;
}

inline Plaintext decrypt(const ParamSet& ps, const PkeSecretKey& sk, const PkeCiphertext& ct) {
    return lv_decode(ps.code(), decrypt_residual(ps, sk, ct), ps.q);
}

// Realized decoding noise of one transcript: the centered difference between
// the decoder input and the scaled codeword, i.e. E^T r + e2 + c_v - S^T (e1 + c_u)
// reduced to centered residues.
inline I32Mat noise_sample(const ParamSet& ps, const PkeSecretKey& sk, const PkePublicKey& pk,
                           const Plaintext& m, ByteView rseed) {
    EncryptTranscript tr;
    PkeCiphertext ct = encrypt_core(ps, pk, m, rseed, &tr);
    I32Mat y = decrypt_residual(ps, sk, ct);
    const int scale = code_scale(ps.q, ps.code().p);
    I32Mat noise(y.rows, y.cols);
    for (size_t i = 0; i < y.rows; ++i)
        for (size_t j = 0; j < y.cols; ++j) {
            int d = y(i, j) - scale * static_cast<int>(tr.codeword(i, j));
            noise(i, j) = centered(((d % ps.q) + ps.q) % ps.q, ps.q);
        }
    return noise;
}

// ---------------------------------------------------------------------------
// Message packing: column-major symbol stream with per-row bit widths.
// ---------------------------------------------------------------------------

inline Bytes pack_message(const LatticeCode& lc, const Plaintext& m) {
    require(m.rows == static_cast<size_t>(lc.ell), Err::DimensionMismatch, "message rows");
    BitWriter bw;
    for (size_t j = 0; j < m.cols; ++j)
        for (size_t i = 0; i < m.rows; ++i) bw.put(m(i, j), lc.sym_bits[i]);
    return bw.take();
}

// Reads t columns of symbols; surplus bits in the final byte are ignored so
// uniformly random bytes are a valid message source.
inline Plaintext unpack_message(const LatticeCode& lc, ByteView bytes, int t) {
    BitReader br(bytes);
    Plaintext m(static_cast<size_t>(lc.ell), static_cast<size_t>(t));
    for (int j = 0; j < t; ++j)
        for (int i = 0; i < lc.ell; ++i)
            m(static_cast<size_t>(i), static_cast<size_t>(j)) =
                static_cast<uint16_t>(br.get(lc.sym_bits[static_cast<size_t>(i)]));
    return m;
}

// ---------------------------------------------------------------------------
// Wire formats.  pk = psi || 12-bit T; sk = 12-bit S; ct = du-bit u || dv-bit v.
// ---------------------------------------------------------------------------

inline Bytes serialize_pk(const ParamSet& ps, const PkePublicKey& pk) {
    std::vector<uint16_t> coeffs;
    coeffs.reserve(pk.t.a.size() * kN);
    for (const Poly& p : pk.t.a) coeffs.insert(coeffs.end(), p.c.begin(), p.c.end());
    Bytes out = pk.psi;
    Bytes body = byte_encode(coeffs, 12);
    out.insert(out.end(), body.begin(), body.end());
    require(out.size() == static_cast<size_t>(sizes(ps).pk_bytes), Err::LengthMismatch,
            "pk serialization size");
    return out;
}

inline PkePublicKey parse_pk(const ParamSet& ps, ByteView bytes) {
    size_t body = packed_bytes(static_cast<size_t>(ps.k) * ps.ell * kN, 12);
    require(bytes.size() == 32 + body, Err::MalformedCiphertext, "pk length");
    PkePublicKey pk;
    pk.psi.assign(bytes.begin(), bytes.begin() + 32);
    auto coeffs = byte_decode(bytes.subspan(32), static_cast<size_t>(ps.k) * ps.ell * kN, 12);
    pk.t = PolyMat(static_cast<size_t>(ps.k), static_cast<size_t>(ps.ell));
    for (size_t e = 0; e < pk.t.a.size(); ++e)
        for (int c = 0; c < kN; ++c) {
            uint16_t v = coeffs[e * kN + static_cast<size_t>(c)];
            require(v < ps.q, Err::MalformedCiphertext, "pk coefficient out of range");
            pk.t.a[e].c[c] = v;
        }
    return pk;
}

inline Bytes serialize_sk(const ParamSet& ps, const PkeSecretKey& sk) {
    std::vector<uint16_t> coeffs;
    coeffs.reserve(sk.s.a.size() * kN);
    for (const Poly& p : sk.s.a) coeffs.insert(coeffs.end(), p.c.begin(), p.c.end());
    (void)ps;
    return byte_encode(coeffs, 12);
}

inline PkeSecretKey parse_sk(const ParamSet& ps, ByteView bytes) {
    auto coeffs = byte_decode(bytes, static_cast<size_t>(ps.k) * ps.ell * kN, 12);
    PkeSecretKey sk;
    sk.s = PolyMat(static_cast<size_t>(ps.k), static_cast<size_t>(ps.ell));
    for (size_t e = 0; e < sk.s.a.size(); ++e)
        for (int c = 0; c < kN; ++c) {
            uint16_t v = coeffs[e * kN + static_cast<size_t>(c)];
            require(v < ps.q, Err::MalformedCiphertext, "sk coefficient out of range");
            sk.s.a[e].c[c] = v;
        }
    return sk;
}

inline Bytes serialize_ct(const ParamSet& ps, const PkeCiphertext& ct) {
    Bytes out = byte_encode(ct.u, ps.du);
    std::vector<uint16_t> vvals;
    vvals.reserve(ct.v.a.size());
    for (uint16_t x : ct.v.a) vvals.push_back(x);
    Bytes tail = byte_encode(vvals, ps.dv);
    out.insert(out.end(), tail.begin(), tail.end());
    require(out.size() == static_cast<size_t>(sizes(ps).ct_bytes), Err::LengthMismatch,
            "ct serialization size");
    return out;
}

inline PkeCiphertext parse_ct(const ParamSet& ps, ByteView bytes) {
    size_t u_count = static_cast<size_t>(ps.k) * kN;
    size_t v_count = static_cast<size_t>(ps.ell) * ps.t;
    size_t u_bytes = packed_bytes(u_count, ps.du);
    require(bytes.size() == u_bytes + packed_bytes(v_count, ps.dv), Err::MalformedCiphertext,
            "ciphertext length");
    PkeCiphertext ct;
    ct.u = byte_decode(bytes.subspan(0, u_bytes), u_count, ps.du);
    auto vvals = byte_decode(bytes.subspan(u_bytes), v_count, ps.dv);
    ct.v = U16Mat(static_cast<size_t>(ps.ell), static_cast<size_t>(ps.t));
    std::copy(vvals.begin(), vvals.end(), ct.v.a.begin());
    return ct;
}

} // namespace pklb
