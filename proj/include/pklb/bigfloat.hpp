#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <mpfr.h>

namespace pklb {

// Value-semantics wrapper around a 256-bit MPFR float.  The failure-rate
// engine works with probabilities down around 2^-11000 and moment values up
// around e^520, so doubles are out of the question; 256 bits of mantissa keep
// every convolution step far below the reporting tolerance.
class BigFloat {
public:
    static constexpr mpfr_prec_t kPrec = 256;

    BigFloat() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    explicit BigFloat(double d) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, d, MPFR_RNDN); }
    explicit BigFloat(long i) { mpfr_init2(v_, kPrec); mpfr_set_si(v_, i, MPFR_RNDN); }
    explicit BigFloat(int i) : BigFloat(static_cast<long>(i)) {}

    BigFloat(const BigFloat& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, kPrec); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    // Exact rational n/d (both fit in long); used for probability weights.
    static BigFloat ratio(long num, long den) {
        BigFloat r(num);
        mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
        return r;
    }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(long s) { mpfr_mul_si(v_, v_, s, MPFR_RNDN); return *this; }
    BigFloat& operator/=(long s) { mpfr_div_si(v_, v_, s, MPFR_RNDN); return *this; }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { a += b; return a; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { a -= b; return a; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { a *= b; return a; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { a /= b; return a; }
    friend BigFloat operator*(BigFloat a, long s) { a *= s; return a; }
    friend BigFloat operator/(BigFloat a, long s) { a /= s; return a; }

    BigFloat operator-() const {
        BigFloat r(*this);
        mpfr_neg(r.v_, r.v_, MPFR_RNDN);
        return r;
    }

    // this += a*b in one rounding (the convolution inner loop lives on this).
    void add_mul(const BigFloat& a, const BigFloat& b) {
        mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
    }

    int cmp(const BigFloat& o) const { return mpfr_cmp(v_, o.v_); }
    bool operator<(const BigFloat& o) const { return cmp(o) < 0; }
    bool operator>(const BigFloat& o) const { return cmp(o) > 0; }
    bool operator<=(const BigFloat& o) const { return cmp(o) <= 0; }
    bool operator>=(const BigFloat& o) const { return cmp(o) >= 0; }
    bool operator==(const BigFloat& o) const { return cmp(o) == 0; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend BigFloat exp(const BigFloat& x) {
        BigFloat r;
        mpfr_exp(r.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat log(const BigFloat& x) {
        BigFloat r;
        mpfr_log(r.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat log2(const BigFloat& x) {
        BigFloat r;
        mpfr_log2(r.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat abs(const BigFloat& x) {
        BigFloat r;
        mpfr_abs(r.v_, x.v_, MPFR_RNDN);
        return r;
    }

    std::string str(int digits = 20) const {
        char* s = nullptr;
        if (mpfr_asprintf(&s, "%.*Rg", digits, v_) < 0) return "?";
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

private:
    mpfr_t v_;
};

} // namespace pklb
