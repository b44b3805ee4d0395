#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "pklb/latticecode.hpp"

#include "helpers.hpp"

using namespace pklb;

namespace {

const std::vector<std::pair<LatticeId, int>> kBlockCodes = {
    {LatticeId::E8, 8}, {LatticeId::BW16, 16}, {LatticeId::Leech24, 24}};

int block_ell(LatticeId id) {
    switch (id) {
        case LatticeId::E8:      return 8;
        case LatticeId::BW16:    return 16;
        case LatticeId::Leech24: return 24;
        default:                 return 8;  // uncoded: any length works, pick one
    }
}

std::vector<int> random_message(const LatticeCode& lc, std::mt19937_64& rng) {
    std::vector<int> m(lc.ell);
    for (int i = 0; i < lc.ell; ++i) m[i] = testutil::rand_int(rng, 0, lc.sym_mod[i] - 1);
    return m;
}

std::vector<long long> lift(const std::vector<int>& x) {
    return std::vector<long long>(x.begin(), x.end());
}

// Noise of Euclidean length exactly `radius`, in a uniformly random direction.
std::vector<double> random_noise(int n, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> d(n);
    double norm2 = 0;
    do {
        norm2 = 0;
        for (auto& v : d) {
            v = gauss(rng);
            norm2 += v * v;
        }
    } while (norm2 < 1e-12);
    double f = radius / std::sqrt(norm2);
    for (auto& v : d) v *= f;
    return d;
}

} // namespace

TEST_CASE("binary code weight enumerators match the published tables") {
    {
        std::map<int, long> weights;
        for (uint32_t w : codes::span_words(codes::rm14_basis())) ++weights[std::popcount(w)];
        std::map<int, long> expect{{0, 1}, {8, 30}, {16, 1}};
        CHECK(weights == expect);
    }
    {
        std::map<int, long> weights;
        for (uint32_t w : codes::span_words(codes::golay_basis())) ++weights[std::popcount(w)];
        std::map<int, long> expect{{0, 1}, {8, 759}, {12, 2576}, {16, 759}, {24, 1}};
        CHECK(weights == expect);
    }
}

TEST_CASE("message alphabets and rates") {
    const LatticeCode& e8 = lattice_code(LatticeId::E8, 8);
    CHECK(e8.p == 4);
    CHECK(e8.kbits == 8);
    for (int i = 0; i < 8; ++i) CHECK(e8.pi[i] == 2);

    const LatticeCode& bw = lattice_code(LatticeId::BW16, 16);
    CHECK(bw.p == 4);
    CHECK(bw.kbits == 20);

    const LatticeCode& leech = lattice_code(LatticeId::Leech24, 24);
    CHECK(leech.p == 8);
    CHECK(leech.kbits == 36);

    const LatticeCode& flat = lattice_code(LatticeId::Uncoded, 8);
    CHECK(flat.p == 2);
    CHECK(flat.kbits == 8);

    // Rows with pi_i = p carry zero message bits; everything must still add up
    // to det(bhat) = prod(pi) and kbits = sum log2(p/pi).
    for (auto [id, ell] : kBlockCodes) {
        const LatticeCode& lc = lattice_code(id, ell);
        long long prod = 1;
        int bits = 0;
        for (int i = 0; i < ell; ++i) {
            CHECK(lc.sym_mod[i] == lc.p / lc.pi[i]);
            CHECK(1 << lc.sym_bits[i] == lc.sym_mod[i]);
            prod *= lc.pi[i];
            bits += lc.sym_bits[i];
        }
        CHECK(prod == std::llabs(intlat::det(lc.bhat)));
        CHECK(bits == lc.kbits);
    }
}

TEST_CASE("smith encodings round-trip for every code") {
    auto& rng = testutil::rng();
    for (auto id : {LatticeId::Uncoded, LatticeId::E8, LatticeId::BW16, LatticeId::Leech24}) {
        const LatticeCode& lc = lattice_code(id, block_ell(id));
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<int> m = random_message(lc, rng);
            std::vector<int> x = hs_encode(lc, m);
            for (int v : x) {
                CHECK(v >= 0);
                CHECK(v < lc.p);
            }
            CHECK(is_lattice_point(lc, lift(x)));
            CHECK(coords_to_message(lc, lift(x)) == m);
        }
    }
}

TEST_CASE("hs_encode validates input") {
    const LatticeCode& lc = lattice_code(LatticeId::BW16, 16);
    CHECK_THROWS_AS(hs_encode(lc, std::vector<int>(15, 0)), Error);
    // BW16 has a row with a one-symbol alphabet; 1 is out of range there.
    std::vector<int> m(16, 0);
    for (int i = 0; i < 16; ++i)
        if (lc.sym_mod[i] == 1) m[i] = 1;
    REQUIRE(m != std::vector<int>(16, 0));
    try {
        hs_encode(lc, m);
        FAIL("expected SymbolOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == Err::SymbolOutOfRange);
    }
}

TEST_CASE("membership rejects unit offsets from codewords") {
    // All three block lattices have uniform coordinate parity, so bumping one
    // coordinate always leaves the lattice (minimum distance is >= 8 anyway).
    auto& rng = testutil::rng();
    for (auto [id, ell] : kBlockCodes) {
        const LatticeCode& lc = lattice_code(id, ell);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<long long> x = lift(hs_encode(lc, random_message(lc, rng)));
            int at = testutil::rand_int(rng, 0, ell - 1);
            x[at] += 1;
            CHECK_FALSE(is_lattice_point(lc, x));
            CHECK_THROWS_AS(coords_to_message(lc, x), Error);
        }
    }
}

TEST_CASE("block cvp agrees with exact enumeration on random targets") {
    auto& rng = testutil::rng();
    std::uniform_real_distribution<double> coord(-8.0, 8.0);
    for (auto [id, ell] : kBlockCodes) {
        const LatticeCode& lc = lattice_code(id, ell);
        IMat basis = latdetail::transpose(lc.bhat);
        intlat::lll_reduce(basis);
        int trials = id == LatticeId::Leech24 ? 40 : 150;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<double> y(ell);
            for (auto& v : y) v = coord(rng);

            std::vector<long long> got = cvp(lc, y);
            CHECK(is_lattice_point(lc, got));

            std::vector<long long> ref = intlat::closest_point(basis, y);
            double got_d2 = 0, ref_d2 = 0;
            for (int i = 0; i < ell; ++i) {
                got_d2 += (got[i] - y[i]) * (got[i] - y[i]);
                ref_d2 += (ref[i] - y[i]) * (ref[i] - y[i]);
            }
            // Ties may pick different points; the achieved distance must match.
            CHECK(got_d2 == Catch::Approx(ref_d2).margin(1e-6));
        }
    }
}

TEST_CASE("block cvp decodes exactly within the packing radius") {
    auto& rng = testutil::rng();
    std::uniform_real_distribution<double> frac(0.55, 1.0);
    for (auto [id, ell] : kBlockCodes) {
        const LatticeCode& lc = lattice_code(id, ell);
        double lam = std::sqrt(static_cast<double>(min_norm2(lc)));
        for (int trial = 0; trial < 150; ++trial) {
            std::vector<int> m = random_message(lc, rng);
            std::vector<int> x = hs_encode(lc, m);
            std::vector<double> noise = random_noise(ell, 0.49 * lam * frac(rng), rng);
            std::vector<double> y(ell);
            for (int i = 0; i < ell; ++i) y[i] = x[i] + noise[i];
            CHECK(hs_cvp_decode(lc, y) == m);
        }
    }
}

TEST_CASE("uncoded cvp is per-coordinate rounding with half-up ties") {
    const LatticeCode& lc = lattice_code(LatticeId::Uncoded, 4);
    std::vector<long long> got = cvp(lc, {0.4, -0.5, 0.5, 2.51});
    CHECK(got == std::vector<long long>{0, 0, 1, 3});
}

TEST_CASE("scale constants and minimum distances") {
    CHECK(code_scale(3329, 2) == 1665);
    CHECK(code_scale(3329, 4) == 832);
    CHECK(code_scale(3329, 8) == 416);
    CHECK(code_scale(17, 2) == 9);

    // All three block codes land on the same scaled squared minimum distance.
    for (auto [id, ell] : kBlockCodes) {
        const LatticeCode& lc = lattice_code(id, ell);
        long long s = code_scale(3329, lc.p);
        CHECK(s * s * min_norm2(lc) == 5537792LL);
    }

    // Normalized against the plain one-bit channel (decision distance 2*1665).
    double denom = 2.0 * code_scale(3329, 2);
    CHECK(lambda_p(lattice_code(LatticeId::Uncoded, 8), 3329) / denom == 0.5);
    for (auto [id, ell] : kBlockCodes) {
        double r = lambda_p(lattice_code(id, ell), 3329) / denom;
        CHECK(r == Catch::Approx(0.706682).margin(1e-4));
    }
}

TEST_CASE("column codec round-trips under bounded noise") {
    auto& rng = testutil::rng();
    const int q = 3329;
    for (auto id : {LatticeId::Uncoded, LatticeId::E8, LatticeId::Leech24}) {
        const int ell = block_ell(id);
        const LatticeCode& lc = lattice_code(id, ell);
        const int s = code_scale(q, lc.p);
        const double lam = s * std::sqrt(static_cast<double>(min_norm2(lc)));
        const size_t cols = 16;

        U16Mat msg(static_cast<size_t>(ell), cols);
        for (size_t j = 0; j < cols; ++j)
            for (int i = 0; i < ell; ++i)
                msg(static_cast<size_t>(i), j) =
                    static_cast<uint16_t>(testutil::rand_int(rng, 0, lc.sym_mod[i] - 1));

        U16Mat x = lv_encode(lc, msg);
        I32Mat resid(x.rows, x.cols);
        for (size_t j = 0; j < cols; ++j) {
            std::vector<double> noise = random_noise(ell, 0.45 * lam, rng);
            for (int i = 0; i < ell; ++i) {
                // Real decryption hands over centered mod-q residuals.
                long v = s * x(static_cast<size_t>(i), j) +
                         static_cast<long>(std::lround(noise[static_cast<size_t>(i)]));
                resid(static_cast<size_t>(i), j) = static_cast<int32_t>(centered(
                    static_cast<int>(((v % q) + q) % q), q));
            }
        }
        CHECK(lv_decode(lc, resid, q) == msg);
    }
}

TEST_CASE("bit channel decision boundary sits at 833") {
    // The failure model counts |n| >= 832 as lost, one step inside the true
    // decoder boundary, so the reported rate upper-bounds the real one.
    const LatticeCode& lc = lattice_code(LatticeId::Uncoded, 1);
    auto decode_bit = [&](int32_t n) {
        I32Mat y(1, 1);
        y(0, 0) = n;
        return lv_decode(lc, y, 3329)(0, 0);
    };
    CHECK(decode_bit(832) == 0);
    CHECK(decode_bit(-832) == 0);
    CHECK(decode_bit(833) == 1);
    CHECK(decode_bit(-833) == 1);

    auto decode_toy = [&](int32_t n) {
        I32Mat y(1, 1);
        y(0, 0) = n;
        return lv_decode(lc, y, 17)(0, 0);
    };
    CHECK(decode_toy(4) == 0);
    CHECK(decode_toy(-4) == 0);
    CHECK(decode_toy(5) == 1);
    CHECK(decode_toy(-5) == 1);
}
