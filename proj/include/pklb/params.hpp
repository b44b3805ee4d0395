#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pklb/errors.hpp"
#include "pklb/latticecode.hpp"
#include "pklb/quantize.hpp"

namespace pklb {

struct ParamSet {
    std::string name;
    uint8_t id = 0;  // stable byte id used in file headers
    int k = 0;
    int q = 3329;
    int n = 256;
    int eta1 = 0;
    int eta2 = 0;
    int du = 0;
    int dv = 0;
    int ell = 1;
    int t = 256;
    LatticeId lattice = LatticeId::Uncoded;
    int p = 2;
    QuantKind quant = QuantKind::KyberCompress;

    bool coded() const { return lattice != LatticeId::Uncoded; }
    const LatticeCode& code() const { return lattice_code(lattice, ell); }

    // Per-column message bits; uncoded blocks carry one bit per row.
    int kbits() const { return code().kbits; }
    // Message bits / bytes carried by one ciphertext.
    long msg_bits() const { return static_cast<long>(t) * kbits(); }
    long msg_bytes() const { return (msg_bits() + 7) / 8; }
    // Shared-secret length: capped by what the plaintext can carry.
    long kem_key_bytes() const { return std::min<long>(ell * 256L, msg_bits()) / 8; }
};

struct SizeReport {
    long pk_bytes = 0;
    long sk_bytes = 0;   // KEM secret key: S, z, and the embedded pk
    long ct_bytes = 0;
    long ct_bits = 0;
    long plaintext_bits = 0;
    double cer = 0;
};

inline SizeReport sizes(const ParamSet& ps) {
    SizeReport r;
    long kn = static_cast<long>(ps.k) * ps.n;
    r.pk_bytes = 12 * kn * ps.ell / 8 + 32;
    r.sk_bytes = 24 * kn * ps.ell / 8 + 32L * ps.ell + 32;
    r.ct_bits = kn * ps.du + static_cast<long>(ps.t) * ps.ell * ps.dv;
    r.ct_bytes = (r.ct_bits + 7) / 8;
    r.plaintext_bits = ps.msg_bits();
    r.cer = static_cast<double>(r.ct_bytes * 8) / static_cast<double>(r.plaintext_bits);
    return r;
}

// One shared u block plus L per-recipient v blocks.
inline long mpke_ct_bytes(const ParamSet& ps, long recipients) {
    require(recipients >= 1, Err::BadArgument, "recipient count");
    long u_bytes = (static_cast<long>(ps.k) * ps.n * ps.du + 7) / 8;
    long v_bytes = (static_cast<long>(ps.t) * ps.ell * ps.dv + 7) / 8;
    return u_bytes + recipients * v_bytes;
}

// Bandwidth of L standalone ciphertexts over one multi-recipient ciphertext.
inline double compact_ratio(const ParamSet& ps, long recipients) {
    require(recipients >= 1, Err::BadArgument, "recipient count");
    double u = static_cast<double>(ps.k) * ps.n * ps.du;
    double v = static_cast<double>(ps.t) * ps.ell * ps.dv;
    return (recipients * (u + v)) / (u + recipients * v);
}

inline double compact_ratio_limit(const ParamSet& ps) {
    double u = static_cast<double>(ps.k) * ps.n * ps.du;
    double v = static_cast<double>(ps.t) * ps.ell * ps.dv;
    return 1.0 + u / v;
}

namespace detail {

inline std::vector<ParamSet> build_registry() {
    std::vector<ParamSet> v;
    uint8_t id = 1;
    auto add = [&](std::string name, int k, int e1, int e2, int du, int dv, int ell, int t,
                   LatticeId lat, int p, QuantKind qk) {
        ParamSet ps;
        ps.name = std::move(name);
        ps.id = id++;
        ps.k = k;
        ps.eta1 = e1;
        ps.eta2 = e2;
        ps.du = du;
        ps.dv = dv;
        ps.ell = ell;
        ps.t = t;
        ps.lattice = lat;
        ps.p = p;
        ps.quant = qk;
        v.push_back(std::move(ps));
    };
    const auto U = LatticeId::Uncoded;
    const auto KC = QuantKind::KyberCompress;
    const auto MM = QuantKind::Mmse;

    // Standard parameter triples (k, eta1, eta2, du, dv).
    add("KYBER512", 2, 3, 2, 10, 4, 1, 256, U, 2, KC);
    add("KYBER768", 3, 2, 2, 10, 4, 1, 256, U, 2, KC);
    add("KYBER1024", 4, 2, 2, 11, 5, 1, 256, U, 2, KC);
    // Same triples with the MMSE codebooks.
    add("KYBER512-MMSE", 2, 3, 2, 10, 4, 1, 256, U, 2, MM);
    add("KYBER768-MMSE", 3, 2, 2, 10, 4, 1, 256, U, 2, MM);
    add("KYBER1024-MMSE", 4, 2, 2, 11, 5, 1, 256, U, 2, MM);
    // Packed, uncoded.
    add("P2-KYBER1024", 4, 2, 2, 11, 5, 2, 256, U, 2, MM);
    add("P8-KYBER512", 2, 3, 2, 10, 4, 8, 256, U, 2, MM);
    add("P8-KYBER768", 3, 2, 2, 10, 4, 8, 256, U, 2, MM);
    add("P8-KYBER1024", 4, 2, 2, 11, 5, 8, 256, U, 2, MM);
    // Packed, lattice-coded, full column count.
    add("P8-KYBER512-E8", 2, 3, 2, 10, 4, 8, 256, LatticeId::E8, 4, MM);
    add("P16-KYBER512-BW16", 2, 3, 2, 10, 4, 16, 256, LatticeId::BW16, 4, MM);
    add("P24-KYBER512-Leech", 2, 3, 2, 10, 4, 24, 256, LatticeId::Leech24, 8, MM);
    add("P8-KYBER768-E8", 3, 2, 2, 10, 4, 8, 256, LatticeId::E8, 4, MM);
    add("P16-KYBER768-BW16", 3, 2, 2, 10, 4, 16, 256, LatticeId::BW16, 4, MM);
    add("P24-KYBER768-Leech", 3, 2, 2, 10, 4, 24, 256, LatticeId::Leech24, 8, MM);
    add("P8-KYBER1024-E8", 4, 2, 2, 11, 5, 8, 256, LatticeId::E8, 4, MM);
    add("P16-KYBER1024-BW16", 4, 2, 2, 11, 5, 16, 256, LatticeId::BW16, 4, MM);
    add("P24-KYBER1024-Leech", 4, 2, 2, 11, 5, 24, 256, LatticeId::Leech24, 8, MM);
    // Truncated coded variants (one or two 256-bit payloads).
    add("Pt-KYBER1024-E8-du10dv4", 4, 2, 2, 10, 4, 8, 32, LatticeId::E8, 4, MM);
    add("Pt-KYBER1024-E8-du9dv6", 4, 2, 2, 9, 6, 8, 32, LatticeId::E8, 4, MM);
    add("Pt-KYBER1024-E8-du9dv5", 4, 2, 2, 9, 5, 8, 32, LatticeId::E8, 4, MM);
    add("Pt64-KYBER1024-E8-du10dv4", 4, 2, 2, 10, 4, 8, 64, LatticeId::E8, 4, MM);
    return v;
}

} // namespace detail

inline const std::vector<ParamSet>& preset_registry() {
    static const std::vector<ParamSet> reg = detail::build_registry();
    return reg;
}

inline const ParamSet& preset(std::string_view name) {
    for (const auto& ps : preset_registry())
        if (ps.name == name) return ps;
    raise(Err::UnknownPreset, std::string(name));
}

inline const ParamSet& preset_by_id(uint8_t id) {
    for (const auto& ps : preset_registry())
        if (ps.id == id) return ps;
    raise(Err::UnknownPreset, "id " + std::to_string(id));
}

} // namespace pklb
