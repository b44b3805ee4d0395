#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include "pklb/errors.hpp"
#include "pklb/params.hpp"
#include "pklb/symmetric.hpp"

namespace pklb {

// Self-describing container for anything the CLI writes to disk:
//   "PKLB" | version byte | preset id byte | kind byte | [u32le recipients] | payload
// The recipient-count field appears only for multi-recipient ciphertexts.

enum class ObjKind : uint8_t {
    PublicKey = 1,
    SecretKey = 2,  // bare PKE secret key
    Ciphertext = 3,
    MultiCiphertext = 4,
    KemSecretKey = 5,
};

inline constexpr uint8_t kIoVersion = 1;

inline const char* obj_kind_name(ObjKind k) {
    switch (k) {
        case ObjKind::PublicKey:       return "public key";
        case ObjKind::SecretKey:       return "secret key";
        case ObjKind::Ciphertext:      return "ciphertext";
        case ObjKind::MultiCiphertext: return "multi-recipient ciphertext";
        case ObjKind::KemSecretKey:    return "kem secret key";
    }
    return "unknown";
}

struct StoredObject {
    ObjKind kind;
    int preset_id;
    uint32_t recipients;  // meaningful only for MultiCiphertext
    Bytes payload;
};

inline Bytes wrap_object(const ParamSet& ps, ObjKind kind, ByteView payload,
                         uint32_t recipients = 0) {
    Bytes out;
    out.reserve(payload.size() + 11);
    out.insert(out.end(), {'P', 'K', 'L', 'B'});
    out.push_back(kIoVersion);
    require(ps.id > 0, Err::BadArgument, "preset without a registry id");
    out.push_back(ps.id);
    out.push_back(static_cast<uint8_t>(kind));
    if (kind == ObjKind::MultiCiphertext) {
        require(recipients >= 1, Err::BadArgument, "recipient count");
        for (int b = 0; b < 4; ++b)
            out.push_back(static_cast<uint8_t>((recipients >> (8 * b)) & 0xff));
    }
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline StoredObject unwrap_object(ByteView bytes) {
    require(bytes.size() >= 7, Err::HeaderMismatch, "object too short for header");
    require(bytes[0] == 'P' && bytes[1] == 'K' && bytes[2] == 'L' && bytes[3] == 'B',
            Err::HeaderMismatch, "bad magic");
    require(bytes[4] == kIoVersion, Err::HeaderMismatch, "unsupported version");
    StoredObject obj;
    obj.preset_id = bytes[5];
    uint8_t kind = bytes[6];
    require(kind >= 1 && kind <= 5, Err::HeaderMismatch, "unknown object kind");
    obj.kind = static_cast<ObjKind>(kind);
    size_t off = 7;
    obj.recipients = 0;
    if (obj.kind == ObjKind::MultiCiphertext) {
        require(bytes.size() >= 11, Err::HeaderMismatch, "truncated recipient count");
        for (int b = 0; b < 4; ++b)
            obj.recipients |= static_cast<uint32_t>(bytes[7 + b]) << (8 * b);
        require(obj.recipients >= 1, Err::HeaderMismatch, "recipient count");
        off = 11;
    }
    obj.payload.assign(bytes.begin() + off, bytes.end());
    return obj;
}

// Unwrap plus the checks callers always want: right kind, right preset.
inline Bytes expect_object(ByteView bytes, const ParamSet& ps, ObjKind kind,
                           uint32_t* recipients = nullptr) {
    StoredObject obj = unwrap_object(bytes);
    require(obj.kind == kind, Err::HeaderMismatch,
            std::string("expected ") + obj_kind_name(kind) + ", found " +
                obj_kind_name(obj.kind));
    require(obj.preset_id == ps.id, Err::ModeMismatch,
            "object was created under preset '" + preset_by_id(obj.preset_id).name +
                "', not '" + ps.name + "'");
    if (recipients) *recipients = obj.recipients;
    return obj.payload;
}

inline void write_file(const std::string& path, ByteView bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require(f.good(), Err::IO, "cannot open '" + path + "' for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    f.flush();
    require(f.good(), Err::IO, "short write to '" + path + "'");
}

inline Bytes read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    require(f.good(), Err::IO, "cannot open '" + path + "'");
    std::streamsize len = f.tellg();
    f.seekg(0);
    Bytes out(static_cast<size_t>(len));
    if (len > 0) f.read(reinterpret_cast<char*>(out.data()), len);
    require(f.good(), Err::IO, "short read from '" + path + "'");
    return out;
}

inline std::string to_hex(ByteView bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

inline Bytes from_hex(const std::string& s) {
    require(s.size() % 2 == 0, Err::BadArgument, "hex string has odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        raise(Err::BadArgument, std::string("bad hex digit '") + c + "'");
    };
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>((nibble(s[2 * i]) << 4) | nibble(s[2 * i + 1]));
    return out;
}

} // namespace pklb
