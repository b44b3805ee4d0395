#pragma once

#include <vector>

#include "pklb/pke.hpp"

namespace pklb {

// Decapsulation needs the public key for re-encryption, so it travels inside
// the secret key blob: 12-bit S || z || serialized pk.
struct KemSecretKey {
    PkeSecretKey sk;
    Bytes z;  // implicit-rejection secret, 32*ell bytes
    PkePublicKey pk;
};

struct KemEncapsResult {
    PkeCiphertext ct;
    Bytes key;
};

inline void kem_keygen(const ParamSet& ps, RandomSource& rng, PkePublicKey& pk,
                       KemSecretKey& ksk) {
    keygen(ps, rng, pk, ksk.sk);
    ksk.z = rng.bytes(32 * static_cast<size_t>(ps.ell));
    ksk.pk = pk;
}

inline Bytes serialize_kem_sk(const ParamSet& ps, const KemSecretKey& ksk) {
    Bytes out = serialize_sk(ps, ksk.sk);
    out.insert(out.end(), ksk.z.begin(), ksk.z.end());
    Bytes pkb = serialize_pk(ps, ksk.pk);
    out.insert(out.end(), pkb.begin(), pkb.end());
    require(out.size() == static_cast<size_t>(sizes(ps).sk_bytes), Err::LengthMismatch,
            "kem sk serialization size");
    return out;
}

inline KemSecretKey parse_kem_sk(const ParamSet& ps, ByteView bytes) {
    size_t s_bytes = packed_bytes(static_cast<size_t>(ps.k) * ps.ell * kN, 12);
    size_t z_bytes = 32 * static_cast<size_t>(ps.ell);
    require(bytes.size() == static_cast<size_t>(sizes(ps).sk_bytes), Err::MalformedCiphertext,
            "kem sk length");
    KemSecretKey ksk;
    ksk.sk = parse_sk(ps, bytes.subspan(0, s_bytes));
    ksk.z.assign(bytes.begin() + s_bytes, bytes.begin() + s_bytes + z_bytes);
    ksk.pk = parse_pk(ps, bytes.subspan(s_bytes + z_bytes));
    return ksk;
}

namespace kemdetail {

// Select between two equal-length byte strings without branching on the
// secret comparison outcome.
inline Bytes select_bytes(bool accept, const Bytes& yes, const Bytes& no) {
    uint8_t mask = static_cast<uint8_t>(-static_cast<int8_t>(accept));
    Bytes out(yes.size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>((yes[i] & mask) | (no[i] & static_cast<uint8_t>(~mask)));
    return out;
}

inline bool bytes_equal_ct(const Bytes& a, const Bytes& b) {
    if (a.size() != b.size()) return false;
    uint32_t diff = 0;
    for (size_t i = 0; i < a.size(); ++i) diff |= static_cast<uint32_t>(a[i] ^ b[i]);
    return diff == 0;
}

struct SplitG {
    Bytes khat;   // 32*ell bytes
    Bytes rseed;  // 32 bytes
};

inline SplitG derive_g(const ParamSet& ps, const Bytes& pk_digest, const Bytes& msg) {
    Bytes g = hash_g(pk_digest, msg, ps.ell);
    SplitG out;
    out.khat.assign(g.begin(), g.end() - 32);
    out.rseed.assign(g.end() - 32, g.end());
    return out;
}

} // namespace kemdetail

inline Bytes pk_digest(const ParamSet& ps, const PkePublicKey& pk) {
    return hash_h(32, {serialize_pk(ps, pk)});
}

// Random message drawn as bytes, then canonicalized through the symbol grid
// so that decrypt -> pack round-trips to the exact G input.
inline KemEncapsResult kem_encaps(const ParamSet& ps, const PkePublicKey& pk,
                                  RandomSource& rng) {
    const LatticeCode& lc = ps.code();
    Bytes raw = rng.bytes(static_cast<size_t>(ps.msg_bytes()));
    Plaintext m = unpack_message(lc, raw, ps.t);
    Bytes msg = pack_message(lc, m);

    kemdetail::SplitG g = kemdetail::derive_g(ps, pk_digest(ps, pk), msg);
    KemEncapsResult out;
    out.ct = encrypt(ps, pk, m, g.rseed);
    Bytes ctb = serialize_ct(ps, out.ct);
    out.key = hash_h(static_cast<size_t>(ps.kem_key_bytes()), {g.khat, hash_h(32, {ctb})});
    return out;
}

inline Bytes kem_decaps(const ParamSet& ps, const KemSecretKey& ksk, const PkeCiphertext& ct) {
    const LatticeCode& lc = ps.code();
    Plaintext m = decrypt(ps, ksk.sk, ct);
    Bytes msg = pack_message(lc, m);
    kemdetail::SplitG g = kemdetail::derive_g(ps, pk_digest(ps, ksk.pk), msg);

    PkeCiphertext ct2 = encrypt(ps, ksk.pk, m, g.rseed);
    Bytes ctb = serialize_ct(ps, ct);
    bool ok = kemdetail::bytes_equal_ct(ctb, serialize_ct(ps, ct2));

    Bytes ct_digest = hash_h(32, {ctb});
    Bytes key_acc = hash_h(static_cast<size_t>(ps.kem_key_bytes()), {g.khat, ct_digest});
    Bytes key_rej = hash_h(static_cast<size_t>(ps.kem_key_bytes()), {ksk.z, ct_digest});
    return kemdetail::select_bytes(ok, key_acc, key_rej);
}

} // namespace pklb
