#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <vector>

#include "pklb/intlattice.hpp"
#include "pklb/latticecode.hpp"

#include "helpers.hpp"

using namespace pklb;

namespace {

IMat from_rows(const std::vector<std::vector<long long>>& rows) {
    IMat m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

// Membership via exact CVP: v is in the row lattice iff its closest lattice
// point is v itself.
bool in_row_lattice(IMat basis, const std::vector<long long>& v) {
    intlat::lll_reduce(basis);
    std::vector<double> target(v.begin(), v.end());
    std::vector<long long> nearest = intlat::closest_point(basis, target);
    return nearest == v;
}

// Validate a Smith decomposition of b without materializing V: we need
// p = u^{-1} exactly, ascending divisibility, and V = diag(pi)^{-1} p b to be
// integral and unimodular.
void check_snf(const IMat& b) {
    intlat::Snf s = intlat::snf(b);
    const size_t n = b.rows;

    IMat pu = intlat::mul(s.p, s.u);
    IMat up = intlat::mul(s.u, s.p);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            CHECK(pu(i, j) == (i == j ? 1 : 0));
            CHECK(up(i, j) == (i == j ? 1 : 0));
        }

    for (size_t i = 0; i < n; ++i) CHECK(s.pi[i] >= 1);
    for (size_t i = 0; i + 1 < n; ++i) CHECK(s.pi[i + 1] % s.pi[i] == 0);

    IMat pb = intlat::mul(s.p, b);
    IMat v(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            REQUIRE(pb(i, j) % s.pi[i] == 0);
            v(i, j) = pb(i, j) / s.pi[i];
        }
    CHECK(std::llabs(intlat::det(v)) == 1);
    CHECK(std::llabs(intlat::det(s.u)) == 1);
}

} // namespace

TEST_CASE("hermite elimination squares up redundant generators") {
    // (2,0), (0,2), (1,1) generate the checkerboard {(a,b) : a+b even}.
    IMat g = from_rows({{2, 0}, {0, 2}, {1, 1}});
    IMat basis = intlat::hnf_basis(g);
    REQUIRE(basis.rows == 2);
    REQUIRE(basis.cols == 2);
    CHECK(std::llabs(intlat::det(basis)) == 2);
    CHECK(in_row_lattice(basis, {2, 0}));
    CHECK(in_row_lattice(basis, {0, 2}));
    CHECK(in_row_lattice(basis, {1, 1}));
    CHECK_FALSE(in_row_lattice(basis, {1, 0}));
    CHECK(intlat::shortest_norm2(basis) == 2);
}

TEST_CASE("hermite elimination rejects rank-deficient generators") {
    IMat g = from_rows({{1, 0}, {2, 0}, {3, 0}});
    CHECK_THROWS_AS(intlat::hnf_basis(g), Error);
    try {
        intlat::hnf_basis(g);
    } catch (const Error& e) {
        CHECK(e.code() == Err::Singular);
    }
}

TEST_CASE("smith form invariant factors on known matrices") {
    {
        intlat::Snf s = intlat::snf(from_rows({{2, 0}, {0, 4}}));
        CHECK(s.pi == std::vector<long long>{2, 4});
    }
    {
        // Entry gcd 1 forces pi_0 = 1 even though the diagonal is even.
        intlat::Snf s = intlat::snf(from_rows({{2, 1}, {0, 2}}));
        CHECK(s.pi == std::vector<long long>{1, 4});
    }
    {
        // diag(2,3,6): gcd 1, 2x2-minor gcd 6, det 36.
        intlat::Snf s = intlat::snf(from_rows({{2, 0, 0}, {0, 3, 0}, {0, 0, 6}}));
        CHECK(s.pi == std::vector<long long>{1, 6, 6});
    }
}

TEST_CASE("smith decomposition is internally consistent") {
    check_snf(from_rows({{2, 0}, {0, 4}}));
    check_snf(from_rows({{2, 1}, {0, 2}}));
    check_snf(from_rows({{4, -2, 7}, {0, 3, 1}, {-5, 0, 2}}));
    // The three block-code bases exercised for real.
    check_snf(lattice_code(LatticeId::E8, 8).bhat);
    check_snf(lattice_code(LatticeId::BW16, 16).bhat);
    check_snf(lattice_code(LatticeId::Leech24, 24).bhat);
}

TEST_CASE("smith form rejects singular input") {
    CHECK_THROWS_AS(intlat::snf(from_rows({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("determinants of known matrices") {
    CHECK(intlat::det(IMat::identity(5)) == 1);
    CHECK(intlat::det(from_rows({{2, 1}, {0, 2}})) == 4);
    CHECK(intlat::det(from_rows({{0, 1}, {1, 0}})) == -1);
    CHECK(intlat::det(from_rows({{1, 2}, {2, 4}})) == 0);
    CHECK_THROWS_AS(intlat::det(IMat(2, 3)), Error);

    // Generator volumes of the integer code lattices: the scaled forms have
    // determinant 2^8, 2^12, and 8^12.
    CHECK(std::llabs(intlat::det(lattice_code(LatticeId::E8, 8).bhat)) == 256);
    CHECK(std::llabs(intlat::det(lattice_code(LatticeId::BW16, 16).bhat)) == 4096);
    CHECK(std::llabs(intlat::det(lattice_code(LatticeId::Leech24, 24).bhat)) == 68719476736LL);
}

TEST_CASE("lll preserves the lattice") {
    IMat b = from_rows({{1, 0, 0}, {4, 1, 0}, {27, 9, 1}});
    long long d0 = intlat::det(b);
    IMat reduced = b;
    intlat::lll_reduce(reduced);
    CHECK(std::llabs(intlat::det(reduced)) == std::llabs(d0));
    for (size_t i = 0; i < b.rows; ++i)
        CHECK(in_row_lattice(reduced, {b(i, 0), b(i, 1), b(i, 2)}));
}

TEST_CASE("shortest vector lengths of the code lattices") {
    // Scaled minima: 2*sqrt(2), 2*sqrt(2), and 4*sqrt(2).
    CHECK(intlat::shortest_norm2(latdetail::transpose(lattice_code(LatticeId::E8, 8).bhat)) == 8);
    CHECK(intlat::shortest_norm2(latdetail::transpose(lattice_code(LatticeId::BW16, 16).bhat)) ==
          8);
    CHECK(min_norm2(lattice_code(LatticeId::Leech24, 24)) == 32);
    CHECK(min_norm2(lattice_code(LatticeId::Uncoded, 8)) == 1);
}

TEST_CASE("enumeration finds the shortest nonzero vector") {
    // Norm form 10a^2 + 12ab + 10b^2 has minimum 8 at (a,b) = (1,-1).
    IMat b = from_rows({{3, 1}, {1, 3}});
    long double d2 = 0;
    std::vector<long long> c =
        intlat::enumerate_closest(b, {0.0, 0.0}, /*exclude_zero=*/true, 100.0, &d2);
    CHECK(static_cast<double>(d2) == 8.0);
    // Coefficients (1,-1) or (-1,1).
    CHECK(std::llabs(c[0]) == 1);
    CHECK(c[0] == -c[1]);
}

TEST_CASE("closest point matches brute force in two dimensions") {
    IMat b = from_rows({{2, 1}, {0, 3}});
    intlat::lll_reduce(b);
    auto& rng = testutil::rng();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> t = {testutil::rand_int(rng, -60, 60) / 10.0,
                                 testutil::rand_int(rng, -60, 60) / 10.0};
        std::vector<long long> got = intlat::closest_point(b, t);

        double best = 1e18;
        for (long long x = -15; x <= 15; ++x)
            for (long long y = -15; y <= 15; ++y) {
                double px = 2.0 * x, py = 1.0 * x + 3.0 * y;
                double d2 = (px - t[0]) * (px - t[0]) + (py - t[1]) * (py - t[1]);
                if (d2 < best) best = d2;
            }
        double got_d2 =
            (got[0] - t[0]) * (got[0] - t[0]) + (got[1] - t[1]) * (got[1] - t[1]);
        CHECK(got_d2 == Catch::Approx(best).margin(1e-9));
    }
}

TEST_CASE("closest point matches brute force in three dimensions") {
    IMat b = from_rows({{2, 0, 1}, {1, 3, 0}, {0, -1, 4}});
    intlat::lll_reduce(b);
    auto& rng = testutil::rng();
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> t(3);
        for (auto& v : t) v = testutil::rand_int(rng, -50, 50) / 10.0;
        std::vector<long long> got = intlat::closest_point(b, t);

        double best = 1e18;
        for (long long x = -10; x <= 10; ++x)
            for (long long y = -10; y <= 10; ++y)
                for (long long z = -10; z <= 10; ++z) {
                    double p[3] = {2.0 * x + 1.0 * y, 3.0 * y - 1.0 * z,
                                   1.0 * x + 4.0 * z};
                    double d2 = 0;
                    for (int i = 0; i < 3; ++i) d2 += (p[i] - t[i]) * (p[i] - t[i]);
                    if (d2 < best) best = d2;
                }
        double got_d2 = 0;
        for (int i = 0; i < 3; ++i) got_d2 += (got[i] - t[i]) * (got[i] - t[i]);
        CHECK(got_d2 == Catch::Approx(best).margin(1e-9));
    }
}
