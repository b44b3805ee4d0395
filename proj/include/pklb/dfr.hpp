#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>

#include "pklb/params.hpp"
#include "pklb/pmf.hpp"
#include "pklb/quantize.hpp"

namespace pklb {

// The per-coefficient decryption noise model: everything that determines the
// law of one entry of  E^T r + e2 + c_v - S^T (e1 + c_u).
struct NoiseModel {
    int q = 3329;
    int n = 256;
    int k = 0;
    int eta1 = 0;
    int eta2 = 0;
    int du = 0;
    int dv = 0;
    QuantKind quant = QuantKind::KyberCompress;

    static NoiseModel from(const ParamSet& ps) {
        return {ps.q, ps.n, ps.k, ps.eta1, ps.eta2, ps.du, ps.dv, ps.quant};
    }

    auto key() const { return std::tie(q, n, k, eta1, eta2, du, dv, quant); }
    bool operator<(const NoiseModel& o) const { return key() < o.key(); }
};

inline Pmf quant_noise_pmf(int q, int d, QuantKind kind) {
    const Quantizer& qz = quantizer(q, d, kind);
    return pmf_from_counts(qz.noise_counts(), q);
}

// Exact law of one noise coefficient.  Both quantization noises are
// symmetrized (averaged with their reflection); the CBD factors are already
// symmetric, which also makes every product term symmetric, so the sign
// pattern of the negacyclic convolution and the minus on S^T(e1 + c_u)
// leave the law unchanged.
inline Pmf compute_noise_coeff_pmf(const NoiseModel& m) {
    const long q = m.q;
    const long kn = static_cast<long>(m.k) * m.n;
    Pmf beta1 = pmf_of_cbd(m.eta1);
    Pmf beta2 = pmf_of_cbd(m.eta2);
    Pmf cu = pmf_symmetrize(quant_noise_pmf(m.q, m.du, m.quant));
    Pmf cv = pmf_symmetrize(quant_noise_pmf(m.q, m.dv, m.quant));

    Pmf term_er = pmf_product(beta1, beta1);                    // e * r pairs
    Pmf term_s = pmf_product(beta1, pmf_convolve(beta2, cu));   // s * (e1 + c_u) pairs

    Pmf acc = pmf_convolve_power(term_er, kn, q);
    acc = pmf_convolve(acc, pmf_convolve_power(term_s, kn, q), q);
    acc = pmf_convolve(acc, beta2, q);
    acc = pmf_convolve(acc, cv, q);
    return acc;
}

inline const Pmf& noise_coeff_pmf(const NoiseModel& m) {
    static std::mutex mu;
    static std::map<NoiseModel, Pmf> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, compute_noise_coeff_pmf(m)).first;
    return it->second;
}

inline const Pmf& noise_coeff_pmf(const ParamSet& ps) {
    return noise_coeff_pmf(NoiseModel::from(ps));
}

// round(q/4), ties up: the uncoded per-coefficient failure threshold.
inline long failure_threshold(long q) { return (q + 2) / 4; }

struct DfrReport {
    std::string preset;
    std::string lattice;
    int ell = 0;
    int t = 0;
    int du = 0;
    int dv = 0;
    QuantKind quant = QuantKind::KyberCompress;
    std::string bound;   // "union" or "chernoff"
    double log2_dfr = 0;
    double theta = 0;    // optimal Chernoff parameter; 0 for union bounds
    double cer = 0;
    std::string caveat;
};

// ln of the single-column Chernoff bound exp(-theta*lambda^2/4 + ell*ln M(theta)).
inline BigFloat chernoff_ln_bound(const Pmf& nsq, const BigFloat& theta, long long lambda2,
                                  int ell) {
    BigFloat m = pmf_mgf(nsq, theta);
    return log(m) * static_cast<long>(ell) - theta * BigFloat::ratio(lambda2, 4);
}

struct ChernoffResult {
    double log2_per_column = 0;
    double theta = 0;
};

// Minimize the log-bound over theta = 10^x, x in [-6, -2], by golden section.
inline ChernoffResult chernoff_optimize(const Pmf& nsq, long long lambda2, int ell) {
    const double gr = 0.6180339887498949;
    double a = -6.0, b = -2.0;
    auto eval = [&](double x) {
        return chernoff_ln_bound(nsq, BigFloat(std::pow(10.0, x)), lambda2, ell).to_double();
    };
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    int iters = 0;
    while (b - a > 4e-3) {
        require(++iters <= 200, Err::NonConvergence, "theta search");
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = eval(x2);
        }
    }
    double xm = (a + b) / 2, fm = std::min(f1, f2);
    // The objective must look unimodal around the minimizer.
    require(eval(xm - 0.2) >= fm && eval(xm + 0.2) >= fm, Err::NonConvergence,
            "bound not unimodal around the optimum");
    ChernoffResult r;
    r.theta = std::pow(10.0, xm);
    r.log2_per_column = fm / std::log(2.0);
    return r;
}

// Full analysis of one parameter set: union bound over t*ell coefficients for
// uncoded blocks, Chernoff + union over t columns for coded ones.
inline DfrReport analyze(const ParamSet& ps) {
    DfrReport r;
    r.preset = ps.name;
    r.lattice = lattice_name(ps.lattice);
    r.ell = ps.ell;
    r.t = ps.t;
    r.du = ps.du;
    r.dv = ps.dv;
    r.quant = ps.quant;
    r.cer = sizes(ps).cer;

    const Pmf& noise = noise_coeff_pmf(ps);
    if (!ps.coded()) {
        BigFloat tail = pmf_tail_ge(noise, failure_threshold(ps.q));
        BigFloat delta = tail * (static_cast<long>(ps.t) * ps.ell);
        r.bound = "union";
        r.log2_dfr = log2(delta).to_double();
        return r;
    }

    const LatticeCode& lc = ps.code();
    long long s = code_scale(ps.q, lc.p);
    long long lambda2 = s * s * min_norm2(lc);  // exact squared minimum distance
    Pmf nsq = pmf_square(noise);
    ChernoffResult c = chernoff_optimize(nsq, lambda2, ps.ell);
    r.bound = "chernoff";
    r.theta = c.theta;
    r.log2_dfr = c.log2_per_column + std::log2(static_cast<double>(ps.t));
    long wrap_residual = std::abs(ps.q - static_cast<long>(lc.p) * s);
    r.caveat = "mod-q wraps add an unmodeled residual of up to " +
               std::to_string(wrap_residual) + "/" + std::to_string(s) +
               " per wrapped coordinate";
    return r;
}

// ---------------------------------------------------------------------------
// CSV reports reproducing the headline tables.
// ---------------------------------------------------------------------------

inline std::string dfr_csv_header() {
    return "preset,lattice,ell,t,du,dv,quantizer,log2_dfr,theta,cer";
}

inline std::string dfr_csv_row(const DfrReport& r) {
    std::ostringstream os;
    os << r.preset << ',' << r.lattice << ',' << r.ell << ',' << r.t << ',' << r.du << ','
       << r.dv << ',' << quant_kind_name(r.quant) << ',';
    os.precision(6);
    os << r.log2_dfr << ',' << r.theta << ',' << r.cer;
    return os.str();
}

inline std::string report_tables(const std::string& which) {
    std::ostringstream os;
    auto emit = [&](const char* name) { os << dfr_csv_row(analyze(preset(name))) << '\n'; };
    os << dfr_csv_header() << '\n';
    if (which == "t1") {
        // KYBER1024 packing variants, one to eight 256-bit payloads.
        emit("KYBER1024");
        emit("KYBER1024-MMSE");
        emit("Pt-KYBER1024-E8-du10dv4");
        emit("P2-KYBER1024");
        emit("Pt64-KYBER1024-E8-du10dv4");
        emit("P8-KYBER1024");
        emit("P8-KYBER1024-E8");
    } else if (which == "t2") {
        // Quantizer comparison on the standard parameter triples.
        for (const char* n : {"KYBER512", "KYBER768", "KYBER1024", "KYBER512-MMSE",
                              "KYBER768-MMSE", "KYBER1024-MMSE"})
            emit(n);
    } else if (which == "t5") {
        // Full-length packed variants, uncoded and coded.
        for (const char* n :
             {"P8-KYBER512", "P8-KYBER512-E8", "P16-KYBER512-BW16", "P24-KYBER512-Leech",
              "P8-KYBER768", "P8-KYBER768-E8", "P16-KYBER768-BW16", "P24-KYBER768-Leech",
              "P8-KYBER1024", "P8-KYBER1024-E8", "P16-KYBER1024-BW16", "P24-KYBER1024-Leech"})
            emit(n);
    } else if (which == "t6") {
        // Truncated coded variants against the KYBER1024 baseline.
        for (const char* n : {"KYBER1024", "Pt-KYBER1024-E8-du10dv4", "Pt-KYBER1024-E8-du9dv6",
                              "Pt-KYBER1024-E8-du9dv5"})
            emit(n);
    } else if (which == "t9") {
        // Multi-recipient size laws and compact ratios.
        for (const char* n : {"KYBER1024", "Pt-KYBER1024-E8-du10dv4"}) {
            const ParamSet& ps = preset(n);
            long u = (static_cast<long>(ps.k) * ps.n * ps.du + 7) / 8;
            long v = (static_cast<long>(ps.t) * ps.ell * ps.dv + 7) / 8;
            os << ps.name << ",ct_bytes=" << u << "+" << v << "L,mu_limit="
               << compact_ratio_limit(ps) << '\n';
        }
    } else {
        raise(Err::BadArgument, "unknown table " + which);
    }
    return os.str();
}

} // namespace pklb
