#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "gts/dynamics.hpp"

using namespace gts;

namespace {

// Digits of pi from a base-10000 spigot (Winter/Flammenkamp). Yields "31415926..." with 800
// correct digits; independent of the embedded table.
std::string spigot_pi_digits()
{
    constexpr int base = 10000;
    int c = 2800;
    std::vector<long long> f(2801, base / 5);
    long long e = 0;
    std::string out;
    while (c > 0) {
        long long d = 0;
        long long g = 2LL * c;
        for (int b = c;; ) {
            d += f[b] * base;
            --g;
            f[b] = d % g;
            d /= g;
            --g;
            --b;
            if (b == 0) {
                break;
            }
            d *= b;
        }
        char chunk[24];
        std::snprintf(chunk, sizeof chunk, "%04lld", e + d / base);
        out += chunk;
        e = d % base;
        c -= 14;
    }
    return out;
}

} // namespace

TEST_CASE("regular_time follows floor(tau / tau_t) / n_t")
{
    CHECK(regular_time(0, 10, 10) == 0.0);
    CHECK(regular_time(25, 10, 10) == 0.2);
    CHECK(regular_time(49, 5, 5) == 9.0 / 5.0);
    CHECK(regular_time(9, 10, 10) == 0.0);
    CHECK(regular_time(10, 10, 10) == 0.1);
}

TEST_CASE("regular_time rejects nonpositive divisors")
{
    CHECK_THROWS_AS(regular_time(3, 0, 10), std::domain_error);
    CHECK_THROWS_AS(regular_time(3, 10, 0), std::domain_error);
    CHECK_THROWS_AS(regular_time(-1, 10, 10), std::domain_error);
}

TEST_CASE("pi_digit table")
{
    CHECK(pi_digit(0) == 0);
    CHECK(pi_digit(1) == 1);
    CHECK(pi_digit(2) == 4);
    CHECK(pi_digit(5) == 9);
    CHECK_THROWS_AS(pi_digit(static_cast<std::int64_t>(kPiDigitCount) + 1), std::domain_error);
    CHECK_THROWS_AS(pi_digit(-1), std::domain_error);
    CHECK_NOTHROW(pi_digit(static_cast<std::int64_t>(kPiDigitCount)));
}

TEST_CASE("embedded digits agree with an independent spigot computation")
{
    const std::string digits = spigot_pi_digits();
    REQUIRE(digits.size() >= 800);
    REQUIRE(digits[0] == '3');
    // The spigot's final group can be off by a carry; compare the first 790 decimals.
    for (int k = 1; k <= 790; ++k) {
        INFO("digit " << k);
        CHECK(pi_digit(k) == digits[static_cast<std::size_t>(k)] - '0');
    }
}

TEST_CASE("irregular_time adds half a digit-scaled step")
{
    CHECK(irregular_time(5, 10, 10) == 0.0);
    CHECK(irregular_time(25, 10, 10) == doctest::Approx(0.2 + 0.1 * (0.5 * 4.0 / 9.0)).epsilon(1e-15));
    CHECK(irregular_time(10, 10, 5) == doctest::Approx(0.2 + 0.2 * (0.5 / 9.0)).epsilon(1e-15));
    CHECK(irregular_time(25, 10, 10) == doctest::Approx(0.222222).epsilon(1e-6));
    CHECK(irregular_time(10, 10, 5) == doctest::Approx(0.211111).epsilon(1e-6));
}

TEST_CASE("schedules are piecewise constant and irregular offsets stay within half a step")
{
    for (int n_t : {1, 5, 10}) {
        for (int tau_t : {1, 5, 10}) {
            for (int tau = 0; tau < 60 * tau_t; ++tau) {
                const std::int64_t k = tau / tau_t;
                const double base = static_cast<double>(k) / n_t;
                const double r = regular_time(tau, tau_t, n_t);
                const double irr = irregular_time(tau, tau_t, n_t);
                CHECK(r == base);
                CHECK(r == regular_time(k * tau_t, tau_t, n_t));
                CHECK(irr == irregular_time(k * tau_t, tau_t, n_t));
                CHECK(irr - base >= 0.0);
                CHECK(irr - base <= 0.5 / n_t + 1e-15);
                if (pi_digit(k) == 0) {
                    CHECK(irr == r);
                }
            }
        }
    }
}

TEST_CASE("environment_time matches the per-generation schedule")
{
    for (int k = 0; k < 30; ++k) {
        CHECK(environment_time(Schedule::Regular, k, 7, 5) == regular_time(7 * k + 3, 7, 5));
        CHECK(environment_time(Schedule::IrregularPi, k, 7, 5) == irregular_time(7 * k + 6, 7, 5));
    }
}

TEST_CASE("TimeContext tracks environments and boundaries")
{
    TimeContext ctx(5, 10, Schedule::Regular);
    int boundaries = 0;
    for (int tau = 0; tau < 5 * 4; ++tau) {
        CHECK(ctx.tau() == tau);
        CHECK(ctx.environment() == tau / 5);
        if (ctx.at_boundary()) {
            ++boundaries;
            CHECK(tau % 5 == 0);
        }
        ctx.advance();
    }
    CHECK(boundaries == 3);
    CHECK_THROWS_AS(TimeContext(0, 10, Schedule::Regular), std::domain_error);
}

TEST_CASE("schedule names round-trip")
{
    CHECK(parse_schedule("regular") == Schedule::Regular);
    CHECK(parse_schedule("irregular_pi") == Schedule::IrregularPi);
    CHECK(parse_schedule(to_string(Schedule::IrregularPi)) == Schedule::IrregularPi);
    CHECK_THROWS_AS(parse_schedule("random"), std::invalid_argument);
}

TEST_CASE("env_scalars at reference times")
{
    const auto e0 = env_scalars(0.0);
    CHECK(e0.G == 0.0);
    CHECK(e0.H == 1.5);
    CHECK(e0.alpha == 5.0);
    CHECK(e0.beta == doctest::Approx(0.2));
    CHECK(e0.omega == 0);
    CHECK(e0.a == 0.0);
    CHECK(e0.b == 2.0);

    const auto e1 = env_scalars(1.0);
    CHECK(e1.G == doctest::Approx(1.0));
    CHECK(e1.H == doctest::Approx(2.5));
    CHECK(e1.alpha == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e1.beta == doctest::Approx(3.0));
    CHECK(e1.omega == 10);
    CHECK(e1.a == doctest::Approx(1.0));
    CHECK(e1.b == doctest::Approx(1.0));

    const auto e2 = env_scalars(2.0);
    CHECK(std::abs(e2.G) < 1e-12);
    CHECK(e2.H == doctest::Approx(1.5));
    CHECK(e2.alpha == doctest::Approx(-5.0));
    CHECK(e2.beta == doctest::Approx(0.2));
    CHECK(e2.omega == 0);
    CHECK(e2.b == doctest::Approx(2.0));
}

TEST_CASE("env_scalars stay in their documented ranges")
{
    for (int i = 0; i <= 2000; ++i) {
        const auto e = env_scalars(i * 0.0037);
        CHECK(e.H >= 0.5);
        CHECK(e.H <= 2.5);
        CHECK(e.beta >= 0.2);
        CHECK(e.beta <= 3.0 + 1e-12);
        CHECK(e.b >= 1.0);
        CHECK(e.b <= 2.0);
        CHECK(e.omega >= -10);
        CHECK(e.omega <= 10);
    }
}

TEST_CASE("snapped_floor absorbs round-off below an integer")
{
    CHECK(snapped_floor(10.0 * std::sin(M_PI / 6.0)) == 5);
    CHECK(snapped_floor(4.999) == 4);
    CHECK(snapped_floor(-0.5) == -1);
}
