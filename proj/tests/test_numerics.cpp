// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cranest/cvec.hpp"
#include "cranest/rng.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace cranest;

TEST_CASE("dft columns")
{
    const CVec c0 = dft_column(4, 0);
    for (const cxd& v : c0) {
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-15));
    }
    const CVec c2 = dft_column(4, 2);
    const double expected[] = {1.0, -1.0, 1.0, -1.0};
    for (std::size_t m = 0; m < 4; ++m) {
        CHECK(c2[m].real() == doctest::Approx(expected[m]).epsilon(1e-12));
        CHECK(std::abs(c2[m].imag()) < 1e-12);
    }
    CHECK(norm2(dft_column(8, 1)) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK_THROWS_AS(dft_column(8, 8), IndexOutOfRange);
}

TEST_CASE("inner product identities on random vectors")
{
    RngStream rng(7, 1);
    for (int rep = 0; rep < 50; ++rep) {
        const CVec x = complex_gaussian_vector(rng, 64, 1.0);
        const CVec y = complex_gaussian_vector(rng, 64, 2.0);
        CHECK(std::abs(inner(x, x).real() - norm2(x)) <= 1e-12 * norm2(x));
        CHECK(std::abs(inner(x, x).imag()) <= 1e-12 * norm2(x));
        const cxd xy = inner(x, y);
        const cxd yx = inner(y, x);
        CHECK(std::abs(xy - std::conj(yx)) <= 1e-12 * std::abs(xy));
    }
}

TEST_CASE("complex gaussian moments over 1e6 draws")
{
    const double variance = 2.5;
    RngStream rng(42, 99);
    CVec samples(1000000);
    for (cxd& v : samples) v = rng.complex_gaussian(variance);
    const auto m = oracles::complex_moments(samples);
    CHECK(std::abs(m.mean) < 5e-3 * std::sqrt(variance));
    CHECK(m.power == doctest::Approx(variance).epsilon(0.01));
}

TEST_CASE("streams are deterministic and distinct")
{
    RngStream a1(123, 5), a2(123, 5), b(123, 6);
    bool all_equal = true;
    bool any_diff_from_b = false;
    for (int i = 0; i < 1000; ++i) {
        const cxd va = a1.complex_gaussian(1.0);
        const cxd vb = a2.complex_gaussian(1.0);
        const cxd vc = b.complex_gaussian(1.0);
        all_equal = all_equal && va == vb;
        any_diff_from_b = any_diff_from_b || va != vc;
    }
    CHECK(all_equal);
    CHECK(any_diff_from_b);
}

TEST_CASE("uniform_int is exactly in range and roughly uniform")
{
    RngStream rng(1, 2);
    std::vector<int> counts(8, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const std::uint32_t v = rng.uniform_int(8);
        REQUIRE(v < 8);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(std::abs(c - n / 8) < n / 8 * 0.05);
    }
}

TEST_CASE("variance must be positive")
{
    RngStream rng(3, 4);
    CHECK_THROWS_AS(rng.complex_gaussian(0.0), std::invalid_argument);
    CHECK_THROWS_AS(complex_gaussian_vector(rng, 4, -1.0), std::invalid_argument);
}

TEST_CASE("all_finite flags non-finite entries")
{
    CVec good{{1.0, -2.0}, {0.0, 0.0}};
    CHECK(all_finite(good));
    good.push_back(cxd{std::nan(""), 0.0});
    CHECK(!all_finite(good));
}
