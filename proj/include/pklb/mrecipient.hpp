#pragma once

#include <vector>

#include "pklb/kem.hpp"
#include "pklb/pke.hpp"

namespace pklb {

// One shared u plus a per-recipient v block.  Decomposes into ordinary
// ciphertexts, so a recipient never learns how many others were addressed.
struct MultiCiphertext {
    std::vector<uint16_t> u;
    std::vector<U16Mat> vs;
};

inline size_t mct_recipients(const MultiCiphertext& mc) { return mc.vs.size(); }

// All recipients must share the matrix seed psi; the batching trick reuses
// one A^T r + e1 across the group.
inline MultiCiphertext mpke_menc(const ParamSet& ps, const std::vector<PkePublicKey>& pks,
                                 const Plaintext& m, ByteView rseed) {
    require(!pks.empty(), Err::BadArgument, "need at least one recipient");
    require(rseed.size() == 32, Err::BadArgument, "seed length");
    require(m.rows == static_cast<size_t>(ps.ell) && m.cols == static_cast<size_t>(ps.t),
            Err::ModeMismatch, "plaintext shape");
    for (const PkePublicKey& pk : pks) {
        require(pk.psi == pks.front().psi, Err::SeedMismatch, "recipients use different seeds");
        require(pk.t.rows == static_cast<size_t>(ps.k) &&
                    pk.t.cols == static_cast<size_t>(ps.ell),
                Err::ModeMismatch, "public key shape");
    }
    const int k = ps.k, ell = ps.ell;
    const LatticeCode& lc = ps.code();

    PolyMat a = pkedetail::expand_a(pks.front().psi, k);
    PolyMat r = pkedetail::cbd_mat(rseed, k, 1, ps.eta1, 0);
    PolyMat e1 = pkedetail::cbd_mat(rseed, k, 1, ps.eta2, k);
    PolyMat e2 = pkedetail::cbd_mat(rseed, ell, 1, ps.eta2, 2 * k);
    PolyMat r_hat = mat_ntt(r);
    PolyMat u_pre = mat_add(mat_invntt(mat_mul_ntt(mat_ntt(mat_transpose(a)), r_hat)), e1);

    U16Mat x = lv_encode(lc, m);
    const int scale = code_scale(ps.q, lc.p);
    const Quantizer& qv = quantizer(ps.q, ps.dv, ps.quant);

    MultiCiphertext mc;
    mc.u = pkedetail::quantize_indices(ps, u_pre, ps.du);
    mc.vs.reserve(pks.size());
    for (const PkePublicKey& pk : pks) {
        PolyMat w = mat_add(mat_invntt(mat_mul_ntt(mat_ntt(mat_transpose(pk.t)), r_hat)), e2);
        U16Mat wt = trunc_columns(phi(w.a), static_cast<size_t>(ps.t));
        U16Mat v(static_cast<size_t>(ell), static_cast<size_t>(ps.t));
        for (size_t i = 0; i < v.rows; ++i)
            for (size_t j = 0; j < v.cols; ++j)
                v(i, j) = qv.assign((wt(i, j) + scale * x(i, j)) % ps.q);
        mc.vs.push_back(std::move(v));
    }
    return mc;
}

inline PkeCiphertext mpke_ext(const MultiCiphertext& mc, size_t index) {
    require(index < mc.vs.size(), Err::IndexOutOfRange, "recipient index");
    return PkeCiphertext{mc.u, mc.vs[index]};
}

inline Bytes serialize_mct(const ParamSet& ps, const MultiCiphertext& mc) {
    Bytes out = byte_encode(mc.u, ps.du);
    for (const U16Mat& v : mc.vs) {
        std::vector<uint16_t> vvals(v.a.begin(), v.a.end());
        Bytes block = byte_encode(vvals, ps.dv);
        out.insert(out.end(), block.begin(), block.end());
    }
    require(out.size() ==
                static_cast<size_t>(mpke_ct_bytes(ps, static_cast<int>(mc.vs.size()))),
            Err::LengthMismatch, "mct serialization size");
    return out;
}

inline MultiCiphertext parse_mct(const ParamSet& ps, ByteView bytes, size_t recipients) {
    require(recipients >= 1, Err::BadArgument, "recipient count");
    size_t u_count = static_cast<size_t>(ps.k) * kN;
    size_t v_count = static_cast<size_t>(ps.ell) * ps.t;
    size_t u_bytes = packed_bytes(u_count, ps.du);
    size_t v_bytes = packed_bytes(v_count, ps.dv);
    require(bytes.size() == u_bytes + recipients * v_bytes, Err::MalformedCiphertext,
            "multi-recipient ciphertext length");
    MultiCiphertext mc;
    mc.u = byte_decode(bytes.subspan(0, u_bytes), u_count, ps.du);
    for (size_t r = 0; r < recipients; ++r) {
        auto vvals = byte_decode(bytes.subspan(u_bytes + r * v_bytes, v_bytes), v_count, ps.dv);
        U16Mat v(static_cast<size_t>(ps.ell), static_cast<size_t>(ps.t));
        std::copy(vvals.begin(), vvals.end(), v.a.begin());
        mc.vs.push_back(std::move(v));
    }
    return mc;
}

// ---------------------------------------------------------------------------
// Multi-recipient KEM.  Keys are generated against a group-wide matrix seed.
// ---------------------------------------------------------------------------

struct MkemSecretKey {
    PkeSecretKey sk;
    Bytes seed;  // implicit-rejection secret, 32 bytes
    PkePublicKey pk;
};

inline void mkem_keygen(const ParamSet& ps, ByteView psi, RandomSource& rng, PkePublicKey& pk,
                        MkemSecretKey& msk) {
    Bytes sigma = rng.bytes(32);
    keygen_from_seeds(ps, psi, sigma, pk, msk.sk);
    msk.seed = rng.bytes(32);
    msk.pk = pk;
}

// Wire layout: 12-bit S || seed || serialized pk.  Shorter than the
// single-target KEM secret key (the rejection secret is 32 bytes, not
// 32*ell), which is how a reader tells the two payloads apart.
inline Bytes serialize_mkem_sk(const ParamSet& ps, const MkemSecretKey& msk) {
    Bytes out = serialize_sk(ps, msk.sk);
    require(msk.seed.size() == 32, Err::LengthMismatch, "rejection seed length");
    out.insert(out.end(), msk.seed.begin(), msk.seed.end());
    Bytes pkb = serialize_pk(ps, msk.pk);
    out.insert(out.end(), pkb.begin(), pkb.end());
    return out;
}

inline MkemSecretKey parse_mkem_sk(const ParamSet& ps, ByteView bytes) {
    size_t s_bytes = packed_bytes(static_cast<size_t>(ps.k) * ps.ell * kN, 12);
    size_t pk_bytes = static_cast<size_t>(sizes(ps).pk_bytes);
    require(bytes.size() == s_bytes + 32 + pk_bytes, Err::MalformedCiphertext,
            "mkem sk length");
    MkemSecretKey msk;
    msk.sk = parse_sk(ps, bytes.subspan(0, s_bytes));
    msk.seed.assign(bytes.begin() + s_bytes, bytes.begin() + s_bytes + 32);
    msk.pk = parse_pk(ps, bytes.subspan(s_bytes + 32));
    return msk;
}

struct MkemEncapsResult {
    MultiCiphertext ct;
    Bytes key;
    // Per-recipient coin hashes, derived but not consumed: the batched
    // encryption spends only the shared coins, which is exactly what makes
    // the extracted ciphertexts agree with single-recipient re-encryption.
    std::vector<Bytes> recipient_coins;
};

inline MkemEncapsResult mkem_encaps(const ParamSet& ps, const std::vector<PkePublicKey>& pks,
                                    RandomSource& rng) {
    require(!pks.empty(), Err::BadArgument, "need at least one recipient");
    const LatticeCode& lc = ps.code();
    Bytes raw = rng.bytes(static_cast<size_t>(ps.msg_bytes()));
    Plaintext m = unpack_message(lc, raw, ps.t);
    Bytes msg = pack_message(lc, m);

    Bytes shared_coins = mkem_hash(kDomMkemG1, 32, {msg});
    MkemEncapsResult out;
    out.recipient_coins.reserve(pks.size());
    for (const PkePublicKey& pk : pks)
        out.recipient_coins.push_back(mkem_hash(kDomMkemG2, 32, {serialize_pk(ps, pk), msg}));

    out.ct = mpke_menc(ps, pks, m, shared_coins);
    out.key = mkem_hash(kDomMkemH, static_cast<size_t>(ps.kem_key_bytes()), {msg});
    return out;
}

// Works on the recipient's extracted ciphertext.  Re-encrypts under the
// shared coins and falls back to a key bound to (seed, ct) on mismatch.
inline Bytes mkem_decaps(const ParamSet& ps, const MkemSecretKey& msk,
                         const PkeCiphertext& ct) {
    const LatticeCode& lc = ps.code();
    Plaintext m = decrypt(ps, msk.sk, ct);
    Bytes msg = pack_message(lc, m);
    Bytes shared_coins = mkem_hash(kDomMkemG1, 32, {msg});

    PkeCiphertext ct2 = encrypt(ps, msk.pk, m, shared_coins);
    Bytes ctb = serialize_ct(ps, ct);
    bool ok = kemdetail::bytes_equal_ct(ctb, serialize_ct(ps, ct2));

    size_t key_bytes = static_cast<size_t>(ps.kem_key_bytes());
    Bytes key_acc = mkem_hash(kDomMkemH, key_bytes, {msg});
    Bytes key_rej = mkem_hash(kDomMkemHPrime, key_bytes, {msk.seed, ctb});
    return kemdetail::select_bytes(ok, key_acc, key_rej);
}

} // namespace pklb
