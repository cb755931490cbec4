// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cranest/config.hpp"
#include "cranest/testing.hpp"

#include <cmath>

using namespace cranest;

TEST_CASE("defaults validate with derived constants")
{
    const ValidatedParams p = validate(SystemParams{});
    CHECK(p.k == 100);
    CHECK(p.bem_size() == 5);
    // v_h = p_s = sigma_n2 = p_r = 1 -> alpha = sqrt(1/2)
    CHECK(p.alpha == doctest::Approx(0.70710678118654752).epsilon(1e-12));
    CHECK(p.v_q_profile.size() == 5);
    CHECK(p.v_q_profile[0] == doctest::Approx(0.2));
}

TEST_CASE("divisibility, order, power split, variance sum errors")
{
    SystemParams p;
    p.n_p = 7;
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("multiple"), ConfigError);
    try {
        validate(p);
    } catch (const ConfigError& e) {
        CHECK(e.kind == ConfigErrorKind::IntegerDivisibility);
    }

    p = SystemParams{};
    p.n_p = 800; // K = 1
    p.q_order = 1;
    try {
        validate(p);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.kind == ConfigErrorKind::OrderTooHigh);
    }

    p = SystemParams{};
    p.epsilon = 1.0;
    try {
        validate(p);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.kind == ConfigErrorKind::PowerSplit);
    }

    p = SystemParams{};
    p.v_q_profile = {0.1, 0.1, 0.1, 0.1, 0.1}; // sums to 0.5, v_h = 1
    try {
        validate(p);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.kind == ConfigErrorKind::VarianceMismatch);
    }
}

TEST_CASE("noise variance formula")
{
    // alpha^2 = 0.5, v_g = v_h = 1, eps = 0.5, p_s = 1, s2 = 1, K = 100
    SystemParams p;
    p.epsilon = 0.5;
    const ValidatedParams v = validate(p);
    CHECK(v.alpha * v.alpha == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(noise_variance_vn(v) == doctest::Approx(0.0175).epsilon(1e-14));
    CHECK(v.v_n == doctest::Approx(0.0175).epsilon(1e-14));
}

TEST_CASE("noise variance limits and scalings")
{
    // All-training, noiseless limit.
    SystemParams p;
    p.epsilon = 1.0 - 1e-13;
    p.sigma_n2 = 1e-13;
    const ValidatedParams v = testing::force_params(p);
    CHECK(noise_variance_vn(v) < 1e-12);

    // Doubling K halves v_n.
    SystemParams a;
    const ValidatedParams va = validate(a);
    SystemParams b = a;
    b.n_s = 1600;
    const ValidatedParams vb = validate(b);
    CHECK(vb.k == 2 * va.k);
    CHECK(vb.v_n == doctest::Approx(va.v_n / 2.0).epsilon(1e-14));
}

TEST_CASE("v_n monotone in K, v_g, sigma_n2 and (1-eps)")
{
    auto vn_of = [](auto mutate) {
        SystemParams p;
        mutate(p);
        return validate(p).v_n;
    };
    const double base = vn_of([](SystemParams&) {});
    CHECK(vn_of([](SystemParams& p) { p.n_p = 4; }) < base);            // K up
    CHECK(vn_of([](SystemParams& p) { p.v_g = 2.0; }) > base);          // v_g up
    CHECK(vn_of([](SystemParams& p) { p.sigma_n2 = 2.0; }) > base);     // noise up
    CHECK(vn_of([](SystemParams& p) { p.epsilon = 0.1; }) > base);      // (1-eps) up
}

TEST_CASE("validate is idempotent")
{
    const ValidatedParams once = validate(SystemParams{});
    const ValidatedParams twice = validate(once);
    CHECK(once.k == twice.k);
    CHECK(once.alpha == twice.alpha);
    CHECK(once.v_n == twice.v_n);
    CHECK(once.v_q_profile == twice.v_q_profile);
}

TEST_CASE("profiles sum to v_h")
{
    for (std::size_t q : {0u, 1u, 2u, 5u}) {
        for (double vh : {0.5, 1.0, 3.0}) {
            double her = 0.0;
            for (double v : jakes_profile(q, vh)) her += v;
            CHECK(her == doctest::Approx(vh).epsilon(1e-14));
            double uni = 0.0;
            for (double v : uniform_profile(q, vh)) uni += v;
            CHECK(uni == doctest::Approx(vh).epsilon(1e-14));
        }
    }
    // Jakes weights are symmetric and grow away from q = 0.
    const std::vector<double> jk = jakes_profile(2, 1.0);
    CHECK(jk[0] == doctest::Approx(jk[4]).epsilon(1e-14));
    CHECK(jk[0] > jk[2]);
}

TEST_CASE("config text parsing")
{
    const std::string text =
        "# comment line\n"
        "n_s = 400\n"
        "n_p = 4   # trailing comment\n"
        "epsilon = 0.25\n"
        "q_order = 1\n"
        "v_q_profile = jakes\n"
        "seed = 1234\n"
        "\n";
    const SystemParams p = params_from_kv(parse_config_text(text));
    CHECK(p.n_s == 400);
    CHECK(p.n_p == 4);
    CHECK(p.epsilon == doctest::Approx(0.25));
    CHECK(p.seed == 1234);
    CHECK(p.v_q_profile.size() == 3);
    const ValidatedParams v = validate(p);
    CHECK(v.k == 100);
}

TEST_CASE("unknown keys and bad values are errors")
{
    try {
        params_from_kv(parse_config_text("n_z = 4\n"));
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.kind == ConfigErrorKind::UnknownKey);
    }
    try {
        params_from_kv(parse_config_text("epsilon = zero\n"));
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.kind == ConfigErrorKind::BadValue);
    }
}

TEST_CASE("explicit profile list parses and validates")
{
    const SystemParams p =
        params_from_kv(parse_config_text("q_order = 1\nv_q_profile = 0.25, 0.5, 0.25\n"));
    const ValidatedParams v = validate(p);
    CHECK(v.v_q_profile == std::vector<double>{0.25, 0.5, 0.25});
}
