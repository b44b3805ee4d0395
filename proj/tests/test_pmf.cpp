#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "pklb/pmf.hpp"

#include "helpers.hpp"

using namespace pklb;

namespace {

// Brute-force reference distributions as integer counts over a power-of-two
// denominator.  With dyadic weights this small, every BigFloat operation is
// exact, so the pipeline results can be compared with operator== directly.
using Counts = std::map<long, long>;

Pmf from_dyadic(const Counts& c, long denom) {
    Pmf p;
    p.lo = c.begin()->first;
    p.w.assign(static_cast<size_t>(c.rbegin()->first - p.lo) + 1, BigFloat(0L));
    for (auto [x, n] : c) p.w[static_cast<size_t>(x - p.lo)] = BigFloat::ratio(n, denom);
    return p;
}

void check_equals(const Pmf& got, const Counts& want, long denom) {
    long lo = want.begin()->first, hi = want.rbegin()->first;
    CHECK(got.lo >= lo);
    CHECK(got.hi() <= hi);
    for (long x = lo; x <= hi; ++x) {
        auto it = want.find(x);
        long n = it == want.end() ? 0 : it->second;
        CHECK(got.at(x) == BigFloat::ratio(n, denom));
    }
}

} // namespace

TEST_CASE("centered binomial masses are the exact binomial coefficients") {
    check_equals(pmf_of_cbd(1), {{-1, 1}, {0, 2}, {1, 1}}, 4);
    check_equals(pmf_of_cbd(2), {{-2, 1}, {-1, 4}, {0, 6}, {1, 4}, {2, 1}}, 16);
    check_equals(pmf_of_cbd(3),
                 {{-3, 1}, {-2, 6}, {-1, 15}, {0, 20}, {1, 15}, {2, 6}, {3, 1}}, 64);
    CHECK(pmf_of_cbd(2).total() == BigFloat(1L));
    CHECK(pmf_of_cbd(3).total() == BigFloat(1L));
    CHECK_THROWS_AS(pmf_of_cbd(0), Error);
}

TEST_CASE("point mass and counts constructors") {
    Pmf p = pmf_point(-7);
    CHECK(p.lo == -7);
    CHECK(p.at(-7) == BigFloat(1L));
    CHECK(p.at(0).is_zero());

    Pmf c = pmf_from_counts({{-2, 3}, {0, 1}, {5, 4}}, 8);
    CHECK(c.at(-2) == BigFloat::ratio(3, 8));
    CHECK(c.at(-1).is_zero());
    CHECK(c.at(0) == BigFloat::ratio(1, 8));
    CHECK(c.at(5) == BigFloat::ratio(4, 8));
    CHECK(c.total() == BigFloat(1L));
}

TEST_CASE("product distribution matches brute force") {
    // Independent oracle: tally x*y over all weighted pairs.
    Counts wa{{-2, 1}, {-1, 3}, {0, 2}, {1, 1}, {2, 1}};
    Counts wb{{-1, 2}, {0, 1}, {3, 5}};
    Counts want;
    for (auto [x, cx] : wa)
        for (auto [y, cy] : wb) want[x * y] += cx * cy;

    Pmf got = pmf_product(from_dyadic(wa, 8), from_dyadic(wb, 8));
    check_equals(got, want, 64);
}

TEST_CASE("product of two width-2 binomials puts 156/256 at zero") {
    Pmf prod = pmf_product(pmf_of_cbd(2), pmf_of_cbd(2));
    CHECK(prod.at(0) == BigFloat::ratio(156, 256));
    CHECK(prod.at(4) == BigFloat::ratio(2, 256));   // (2,2) and (-2,-2)
    CHECK(prod.at(-4) == BigFloat::ratio(2, 256));
    CHECK(prod.at(3).is_zero());                    // 3 has no factorization in range
    CHECK(prod.lo == -4);
    CHECK(prod.hi() == 4);
    CHECK(prod.total() == BigFloat(1L));
}

TEST_CASE("convolution matches brute force, with and without folding") {
    Counts wa{{-2, 1}, {0, 3}, {1, 2}, {4, 2}};
    Counts wb{{-3, 1}, {-1, 1}, {2, 6}};
    Counts plain;
    for (auto [x, cx] : wa)
        for (auto [y, cy] : wb) plain[x + y] += cx * cy;
    check_equals(pmf_convolve(from_dyadic(wa, 8), from_dyadic(wb, 8)), plain, 64);

    const long q = 7;  // centered residues -3..3
    Counts folded;
    for (auto [x, n] : plain) {
        long r = ((x % q) + q) % q;
        if (r > q / 2) r -= q;
        folded[r] += n;
    }
    check_equals(pmf_convolve(from_dyadic(wa, 8), from_dyadic(wb, 8), q), folded, 64);
}

TEST_CASE("convolution power equals repeated convolution") {
    Pmf base = pmf_of_cbd(2);
    Pmf manual = base;
    for (int i = 1; i < 5; ++i) manual = pmf_convolve(manual, base);
    Pmf fast = pmf_convolve_power(base, 5);
    CHECK(fast.lo == manual.lo);
    CHECK(fast.hi() == manual.hi());
    for (long x = fast.lo; x <= fast.hi(); ++x) CHECK(fast.at(x) == manual.at(x));

    Pmf manual_q = base;
    for (int i = 1; i < 5; ++i) manual_q = pmf_convolve(manual_q, base, 17);
    Pmf fast_q = pmf_convolve_power(base, 5, 17);
    for (long x = -8; x <= 8; ++x) CHECK(fast_q.at(x) == manual_q.at(x));

    CHECK_THROWS_AS(pmf_convolve_power(base, 0), Error);
}

TEST_CASE("centered wrap maps representatives to (-q/2, q/2]") {
    Pmf p = pmf_wrap_centered(pmf_point(4), 7);
    CHECK(p.at(-3) == BigFloat(1L));
    CHECK(pmf_wrap_centered(pmf_point(-4), 7).at(3) == BigFloat(1L));
    CHECK(pmf_wrap_centered(pmf_point(10), 7).at(3) == BigFloat(1L));
    CHECK(pmf_wrap_centered(pmf_point(-7), 7).at(0) == BigFloat(1L));

    // Already-narrow input passes through with support untouched.
    Pmf narrow = pmf_of_cbd(2);
    Pmf same = pmf_wrap_centered(narrow, 17);
    CHECK(same.lo == narrow.lo);
    CHECK(same.hi() == narrow.hi());
}

TEST_CASE("symmetrize averages a distribution with its mirror") {
    Pmf p = from_dyadic({{-1, 2}, {2, 6}}, 8);
    Pmf s = pmf_symmetrize(p);
    CHECK(s.at(-2) == BigFloat::ratio(3, 8));
    CHECK(s.at(2) == BigFloat::ratio(3, 8));
    CHECK(s.at(-1) == BigFloat::ratio(1, 8));
    CHECK(s.at(1) == BigFloat::ratio(1, 8));
    CHECK(s.at(0).is_zero());
    CHECK(s.total() == BigFloat(1L));

    // Symmetric input is a fixed point.
    Pmf cbd = pmf_of_cbd(2);
    Pmf cbd_s = pmf_symmetrize(cbd);
    for (long x = -2; x <= 2; ++x) CHECK(cbd_s.at(x) == cbd.at(x));
}

TEST_CASE("squared distribution collects both signs") {
    Pmf p = from_dyadic({{-2, 1}, {-1, 2}, {0, 1}, {1, 1}, {2, 3}}, 8);
    Pmf s = pmf_square(p);
    CHECK(s.lo == 0);
    CHECK(s.at(0) == BigFloat::ratio(1, 8));
    CHECK(s.at(1) == BigFloat::ratio(3, 8));
    CHECK(s.at(4) == BigFloat::ratio(4, 8));
    CHECK(s.at(2).is_zero());
    CHECK(s.at(3).is_zero());
}

TEST_CASE("two-sided tail probabilities") {
    Pmf p = pmf_of_cbd(2);
    CHECK(pmf_tail_ge(p, 0) == BigFloat(1L));
    CHECK(pmf_tail_ge(p, 1) == BigFloat::ratio(10, 16));
    CHECK(pmf_tail_ge(p, 2) == BigFloat::ratio(2, 16));
    CHECK(pmf_tail_ge(p, 3).is_zero());
}

TEST_CASE("mean of symmetric and shifted distributions") {
    CHECK(pmf_mean(pmf_of_cbd(3)) == 0.0);
    CHECK(pmf_mean(pmf_point(42)) == 42.0);
    CHECK(pmf_mean(from_dyadic({{1, 1}, {3, 1}}, 2)) == 2.0);
}

TEST_CASE("moment generating function on squared noise") {
    // Point mass: M(theta) = exp(theta * k) exactly (dyadic theta).
    BigFloat theta(0.25);
    CHECK(pmf_mgf(pmf_point(3), theta) == exp(theta * BigFloat(3L)));

    // theta = 0 recovers the total mass.
    Pmf sq = pmf_square(pmf_of_cbd(2));
    CHECK(pmf_mgf(sq, BigFloat(0L)) == sq.total());

    // Monotone in theta for nonnegative support with mass above zero.
    CHECK(pmf_mgf(sq, BigFloat(0.5)) > pmf_mgf(sq, BigFloat(0.25)));

    CHECK_THROWS_AS(pmf_mgf(pmf_of_cbd(2), theta), Error);
}

TEST_CASE("bigfloat survives the scales the analyzer needs") {
    // Probabilities near 2^-11000 and moments near e^520 must round-trip.
    BigFloat tiny = exp(BigFloat(-11000.0 * std::log(2.0)));
    CHECK(!tiny.is_zero());
    CHECK(log2(tiny).to_double() == Catch::Approx(-11000.0).epsilon(1e-12));

    BigFloat big = exp(BigFloat(520L));
    CHECK(log(big).to_double() == Catch::Approx(520.0).epsilon(1e-12));

    // add_mul is fused: the result matches a two-step multiply-add here.
    BigFloat acc = BigFloat::ratio(1, 8);
    acc.add_mul(BigFloat::ratio(3, 4), BigFloat::ratio(1, 2));
    CHECK(acc == BigFloat::ratio(1, 8) + BigFloat::ratio(3, 8));

    CHECK(log2(BigFloat(1024L)) == BigFloat(10L));
    CHECK(BigFloat::ratio(1, 3) < BigFloat::ratio(1, 2));
    CHECK((BigFloat::ratio(1, 3) * 3L - BigFloat(1L)).to_double() ==
          Catch::Approx(0.0).margin(1e-70));
}
