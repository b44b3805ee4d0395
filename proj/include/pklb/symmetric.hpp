#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <span>
#include <vector>

#include <sys/random.h>

#include "pklb/errors.hpp"

namespace pklb {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

// ---------------------------------------------------------------------------
// Keccak-f[1600] and the SHA-3 / SHAKE sponges.
// ---------------------------------------------------------------------------

namespace detail {

inline uint64_t rotl64(uint64_t x, int n) { return (x << n) | (x >> (64 - n)); }

inline constexpr uint64_t kKeccakRc[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// Rotation offsets indexed by lane position x + 5y.
inline constexpr int kRho[25] = {
    0,  1,  62, 28, 27,
    36, 44, 6,  55, 20,
    3,  10, 43, 25, 39,
    41, 45, 15, 21, 8,
    18, 2,  61, 56, 14,
};

inline void keccak_f1600(uint64_t s[25]) {
    uint64_t b[25], c[5], d[5];
    for (int round = 0; round < 24; ++round) {
        // theta
        for (int x = 0; x < 5; ++x)
            c[x] = s[x] ^ s[x + 5] ^ s[x + 10] ^ s[x + 15] ^ s[x + 20];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1);
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y) s[x + 5 * y] ^= d[x];
        // rho + pi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl64(s[x + 5 * y], kRho[x + 5 * y]);
        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                s[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
        // iota
        s[0] ^= kKeccakRc[round];
    }
}

} // namespace detail

// Incremental sponge; `ds` is the FIPS-202 padding byte (0x06 for SHA-3,
// 0x1f for SHAKE), unrelated to this library's leading domain bytes below.
class Sponge {
public:
    Sponge(size_t rate_bytes, uint8_t ds) : rate_(rate_bytes), ds_(ds) {}

    void absorb(ByteView in) {
        for (uint8_t byte : in) {
            xor_byte(pos_++, byte);
            if (pos_ == rate_) {
                detail::keccak_f1600(st_);
                pos_ = 0;
            }
        }
    }

    void finalize() {
        xor_byte(pos_, ds_);
        xor_byte(rate_ - 1, 0x80);
        detail::keccak_f1600(st_);
        pos_ = 0;
    }

    // Only valid after finalize().
    void squeeze(uint8_t* out, size_t n) {
        for (size_t i = 0; i < n; ++i) {
            if (pos_ == rate_) {
                detail::keccak_f1600(st_);
                pos_ = 0;
            }
            out[i] = static_cast<uint8_t>(st_[pos_ / 8] >> (8 * (pos_ % 8)));
            ++pos_;
        }
    }

private:
    void xor_byte(size_t i, uint8_t b) {
        st_[i / 8] ^= static_cast<uint64_t>(b) << (8 * (i % 8));
    }

    uint64_t st_[25] = {};
    size_t rate_;
    size_t pos_ = 0;
    uint8_t ds_;
};

inline constexpr size_t kShake128Rate = 168;
inline constexpr size_t kShake256Rate = 136;

inline Bytes shake128(size_t out_len, std::initializer_list<ByteView> parts) {
    Sponge sp(kShake128Rate, 0x1f);
    for (auto p : parts) sp.absorb(p);
    sp.finalize();
    Bytes out(out_len);
    sp.squeeze(out.data(), out_len);
    return out;
}

inline Bytes shake256(size_t out_len, std::initializer_list<ByteView> parts) {
    Sponge sp(kShake256Rate, 0x1f);
    for (auto p : parts) sp.absorb(p);
    sp.finalize();
    Bytes out(out_len);
    sp.squeeze(out.data(), out_len);
    return out;
}

inline std::array<uint8_t, 32> sha3_256(std::initializer_list<ByteView> parts) {
    Sponge sp(kShake256Rate, 0x06);
    for (auto p : parts) sp.absorb(p);
    sp.finalize();
    std::array<uint8_t, 32> out{};
    sp.squeeze(out.data(), out.size());
    return out;
}

// ---------------------------------------------------------------------------
// Scheme-level symmetric primitives.  Every use of SHAKE/SHA-3 inside the
// scheme is separated by a distinct leading byte so transcripts can never be
// confused across roles.
// ---------------------------------------------------------------------------

inline constexpr uint8_t kDomSeedStream = 0x00; // deterministic RNG for --seed
inline constexpr uint8_t kDomMatrix     = 0x01; // public matrix expansion
inline constexpr uint8_t kDomCbd        = 0x02; // binomial noise PRF
inline constexpr uint8_t kDomG          = 0x03; // key/coins derivation G
inline constexpr uint8_t kDomH          = 0x04; // hashing H
inline constexpr uint8_t kDomHPrime     = 0x05; // reserved for single-target rejection
inline constexpr uint8_t kDomMkemG1     = 0x11; // multi-recipient coin hash G1
inline constexpr uint8_t kDomMkemG2     = 0x12; // multi-recipient per-key hash G2
inline constexpr uint8_t kDomMkemH      = 0x13; // multi-recipient key hash H
inline constexpr uint8_t kDomMkemHPrime = 0x14; // multi-recipient rejection H'

// Uniform ring element from SHAKE-128(0x01 || seed || col || row) with
// 12-bit rejection sampling: each 3-byte group yields two candidates.
inline std::array<uint16_t, 256> sam_poly(ByteView seed, uint8_t col, uint8_t row,
                                          int q = 3329) {
    Sponge sp(kShake128Rate, 0x1f);
    const uint8_t pre[1] = {kDomMatrix};
    const uint8_t idx[2] = {col, row};
    sp.absorb(pre);
    sp.absorb(seed);
    sp.absorb(idx);
    sp.finalize();

    std::array<uint16_t, 256> out{};
    size_t filled = 0;
    uint8_t buf[kShake128Rate];
    while (filled < out.size()) {
        sp.squeeze(buf, sizeof(buf));
        for (size_t i = 0; i + 2 < sizeof(buf) && filled < out.size(); i += 3) {
            uint16_t d1 = static_cast<uint16_t>(buf[i] | ((buf[i + 1] & 0x0f) << 8));
            uint16_t d2 = static_cast<uint16_t>((buf[i + 1] >> 4) | (buf[i + 2] << 4));
            if (d1 < q) out[filled++] = d1;
            if (d2 < q && filled < out.size()) out[filled++] = d2;
        }
    }
    return out;
}

// Centered binomial sample of width eta from SHAKE-256(0x02 || seed || nonce).
inline std::array<int8_t, 256> cbd_coeffs(ByteView seed, uint8_t nonce, int eta) {
    require(eta >= 1 && eta <= 3, Err::BadArgument, "cbd eta out of range");
    Bytes buf = shake256(static_cast<size_t>(64 * eta),
                         {ByteView(&kDomCbd, 1), seed, ByteView(&nonce, 1)});
    std::array<int8_t, 256> out{};
    size_t bit = 0;
    auto next_bit = [&]() -> int {
        int b = (buf[bit >> 3] >> (bit & 7)) & 1;
        ++bit;
        return b;
    };
    for (auto& c : out) {
        int a = 0, b = 0;
        for (int j = 0; j < eta; ++j) a += next_bit();
        for (int j = 0; j < eta; ++j) b += next_bit();
        c = static_cast<int8_t>(a - b);
    }
    return out;
}

// G(pk_hash, m) -> (ell+1)*32 bytes: the first ell*32 are the pre-key, the
// final 32 are the encryption coins.
inline Bytes hash_g(ByteView pk_hash, ByteView m, int ell) {
    return shake256(static_cast<size_t>(ell + 1) * 32,
                    {ByteView(&kDomG, 1), pk_hash, m});
}

// H with a caller-chosen output width: SHA3-256 when 32 bytes suffice,
// otherwise SHAKE-256 at the requested length.
inline Bytes hash_h(size_t out_bytes, std::initializer_list<ByteView> parts) {
    Bytes out;
    if (out_bytes == 32) {
        Sponge sp(kShake256Rate, 0x06);
        const uint8_t pre[1] = {kDomH};
        sp.absorb(pre);
        for (auto p : parts) sp.absorb(p);
        sp.finalize();
        out.resize(32);
        sp.squeeze(out.data(), 32);
    } else {
        Sponge sp(kShake256Rate, 0x1f);
        const uint8_t pre[1] = {kDomH};
        sp.absorb(pre);
        for (auto p : parts) sp.absorb(p);
        sp.finalize();
        out.resize(out_bytes);
        sp.squeeze(out.data(), out_bytes);
    }
    return out;
}

// Domain-separated SHAKE-256 for the multi-recipient transform hashes.
inline Bytes mkem_hash(uint8_t domain, size_t out_bytes,
                       std::initializer_list<ByteView> parts) {
    Sponge sp(kShake256Rate, 0x1f);
    sp.absorb(ByteView(&domain, 1));
    for (auto p : parts) sp.absorb(p);
    sp.finalize();
    Bytes out(out_bytes);
    sp.squeeze(out.data(), out_bytes);
    return out;
}

// ---------------------------------------------------------------------------
// Bit packing.  Values are written d bits each, least significant bit first,
// and the final partial byte (if any) is zero-padded; decoders reject inputs
// whose padding bits are not zero.
// ---------------------------------------------------------------------------

inline size_t packed_bytes(size_t count, int d) { return (count * d + 7) / 8; }

inline Bytes byte_encode(const uint16_t* vals, size_t count, int d) {
    require(d >= 1 && d <= 16, Err::BadArgument, "bit width out of range");
    Bytes out(packed_bytes(count, d), 0);
    size_t bit = 0;
    for (size_t i = 0; i < count; ++i) {
        uint32_t v = vals[i];
        require(d == 16 || v < (1u << d), Err::ValueTooLarge, "value does not fit bit width");
        for (int b = 0; b < d; ++b, ++bit)
            out[bit >> 3] |= ((v >> b) & 1u) << (bit & 7);
    }
    return out;
}

inline Bytes byte_encode(const std::vector<uint16_t>& vals, int d) {
    return byte_encode(vals.data(), vals.size(), d);
}

inline std::vector<uint16_t> byte_decode(ByteView bytes, size_t count, int d) {
    require(d >= 1 && d <= 16, Err::BadArgument, "bit width out of range");
    require(bytes.size() == packed_bytes(count, d), Err::LengthMismatch,
            "packed stream has wrong length");
    std::vector<uint16_t> out(count, 0);
    size_t bit = 0;
    for (size_t i = 0; i < count; ++i) {
        uint32_t v = 0;
        for (int b = 0; b < d; ++b, ++bit)
            v |= static_cast<uint32_t>((bytes[bit >> 3] >> (bit & 7)) & 1u) << b;
        out[i] = static_cast<uint16_t>(v);
    }
    // Padding bits after the last value must be zero.
    for (; bit < bytes.size() * 8; ++bit)
        require(((bytes[bit >> 3] >> (bit & 7)) & 1u) == 0, Err::MalformedCiphertext,
                "nonzero padding bits");
    return out;
}

// Bit-granular writer/reader for streams whose field widths vary per value
// (message symbols of a lattice code have per-row alphabets).  Same LSB-first
// bit order as byte_encode.
class BitWriter {
public:
    // A zero-width field is legal (an alphabet of size one) and writes nothing.
    void put(uint32_t v, int bits) {
        require(bits >= 0 && bits <= 16, Err::BadArgument, "bit width out of range");
        require(bits == 16 || v < (1u << bits), Err::ValueTooLarge,
                "value does not fit bit width");
        for (int b = 0; b < bits; ++b, ++bit_) {
            if ((bit_ & 7) == 0) out_.push_back(0);
            out_[bit_ >> 3] |= ((v >> b) & 1u) << (bit_ & 7);
        }
    }

    // Pads the final partial byte with zeros.
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
    size_t bit_ = 0;
};

class BitReader {
public:
    explicit BitReader(ByteView in) : in_(in) {}

    uint32_t get(int bits) {
        require(bits >= 0 && bits <= 16, Err::BadArgument, "bit width out of range");
        require(bit_ + static_cast<size_t>(bits) <= in_.size() * 8, Err::LengthMismatch,
                "bit stream exhausted");
        uint32_t v = 0;
        for (int b = 0; b < bits; ++b, ++bit_)
            v |= static_cast<uint32_t>((in_[bit_ >> 3] >> (bit_ & 7)) & 1u) << b;
        return v;
    }

    // Remaining padding bits must be zero.
    void finish() {
        for (; bit_ < in_.size() * 8; ++bit_)
            require(((in_[bit_ >> 3] >> (bit_ & 7)) & 1u) == 0, Err::MalformedCiphertext,
                    "nonzero padding bits");
    }

private:
    ByteView in_;
    size_t bit_ = 0;
};

// ---------------------------------------------------------------------------
// Randomness sources: the OS pool by default, or a deterministic SHAKE-256
// stream when reproducibility is requested.
// ---------------------------------------------------------------------------

class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(uint8_t* out, size_t n) = 0;

    Bytes bytes(size_t n) {
        Bytes b(n);
        fill(b.data(), n);
        return b;
    }
};

class OsRandom final : public RandomSource {
public:
    void fill(uint8_t* out, size_t n) override {
        size_t got = 0;
        while (got < n) {
            ssize_t r = getrandom(out + got, n - got, 0);
            require(r >= 0, Err::IO, "getrandom failed");
            got += static_cast<size_t>(r);
        }
    }
};

class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(ByteView seed) : sponge_(kShake256Rate, 0x1f) {
        sponge_.absorb(ByteView(&kDomSeedStream, 1));
        sponge_.absorb(seed);
        sponge_.finalize();
    }

    void fill(uint8_t* out, size_t n) override { sponge_.squeeze(out, n); }

private:
    Sponge sponge_;
};

} // namespace pklb
