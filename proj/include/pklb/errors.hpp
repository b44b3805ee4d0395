#pragma once

#include <stdexcept>
#include <string>

namespace pklb {

// Every failure the library reports, so callers (and the CLI) can map an
// exception to a stable one-word code instead of parsing message text.
enum class Err {
    UnknownPreset,
    MismatchedCode,
    DimensionMismatch,
    BadT,
    ValueTooLarge,
    LengthMismatch,
    ModeMismatch,
    MalformedCiphertext,
    IndexOutOfRange,
    SeedMismatch,
    HeaderMismatch,
    Singular,
    SymbolOutOfRange,
    NonConvergence,
    BadArgument,
    IO,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::UnknownPreset:       return "UnknownPreset";
        case Err::MismatchedCode:      return "MismatchedCode";
        case Err::DimensionMismatch:   return "DimensionMismatch";
        case Err::BadT:                return "BadT";
        case Err::ValueTooLarge:       return "ValueTooLarge";
        case Err::LengthMismatch:      return "LengthMismatch";
        case Err::ModeMismatch:        return "ModeMismatch";
        case Err::MalformedCiphertext: return "MalformedCiphertext";
        case Err::IndexOutOfRange:     return "IndexOutOfRange";
        case Err::SeedMismatch:        return "SeedMismatch";
        case Err::HeaderMismatch:      return "HeaderMismatch";
        case Err::Singular:            return "Singular";
        case Err::SymbolOutOfRange:    return "SymbolOutOfRange";
        case Err::NonConvergence:      return "NonConvergence";
        case Err::BadArgument:         return "BadArgument";
        case Err::IO:                  return "IO";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void raise(Err code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool ok, Err code, const std::string& what) {
    if (!ok) raise(code, what);
}

} // namespace pklb
