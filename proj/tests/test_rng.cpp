#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "mfp/rng.hpp"

using namespace mfp;

TEST_CASE("philox 4x32-10 known-answer vectors") {
    // reference vectors from the Random123 distribution
    const auto zero = Philox4x32::run_rounds({0, 0, 0, 0}, {0, 0});
    CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    const auto ones = Philox4x32::run_rounds({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                             {0xffffffffu, 0xffffffffu});
    CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    const auto pi = Philox4x32::run_rounds({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                           {0xa4093822u, 0x299f31d0u});
    CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are addressed by (seed, label, index)") {
    RngStream a1(7, "levy", 0), a2(7, "levy", 0);
    RngStream b(7, "levy", 1), c(7, "stationary", 0), d(8, "levy", 0);
    std::vector<std::uint64_t> sa1, sa2, sb, sc, sd;
    for (int i = 0; i < 16; ++i) {
        sa1.push_back(a1.next_u64());
        sa2.push_back(a2.next_u64());
        sb.push_back(b.next_u64());
        sc.push_back(c.next_u64());
        sd.push_back(d.next_u64());
    }
    CHECK(sa1 == sa2);
    CHECK(sa1 != sb);
    CHECK(sa1 != sc);
    CHECK(sa1 != sd);
    CHECK(sb != sc);
}

TEST_CASE("uniform lies in (0,1) with the right mean") {
    RngStream rng(11, "uniform", 0);
    const std::size_t n = 100000;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double se = 1.0 / std::sqrt(12.0 * static_cast<double>(n));
    CHECK(std::abs(sum / static_cast<double>(n) - 0.5) < 4.0 * se);
}

TEST_CASE("normal sampler moments") {
    RngStream rng(13, "normal", 0);
    const std::size_t n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    const double nd = static_cast<double>(n);
    CHECK(std::abs(sum / nd) < 4.0 / std::sqrt(nd));
    CHECK(std::abs(sum2 / nd - 1.0) < 4.0 * std::sqrt(2.0 / nd));
}

TEST_CASE("gamma sampler matches mean and variance") {
    for (const double shape : {0.7, 3.5}) {
        RngStream rng(17, "gamma", static_cast<std::uint64_t>(shape * 10));
        const std::size_t n = 200000;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double g = rng.gamma(shape);
            sum += g;
            sum2 += g * g;
        }
        const double nd = static_cast<double>(n);
        const double mean = sum / nd;
        const double var = sum2 / nd - mean * mean;
        // gamma(shape,1): mean = var = shape; se of the mean = sqrt(shape/n)
        CHECK(std::abs(mean - shape) < 4.0 * std::sqrt(shape / nd));
        CHECK(std::abs(var - shape) < 0.05 * shape);
    }
}

TEST_CASE("poisson sampler matches mean, including the chunked path") {
    for (const double mean : {3.2, 77.0}) {
        RngStream rng(19, "poisson", static_cast<std::uint64_t>(mean));
        const std::size_t n = 100000;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(mean));
        const double nd = static_cast<double>(n);
        CHECK(std::abs(sum / nd - mean) < 4.0 * std::sqrt(mean / nd));
    }
}

TEST_CASE("argument validation") {
    RngStream rng(1, "x", 0);
    CHECK_THROWS_AS(rng.gamma(0.0), std::invalid_argument);
    CHECK_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
}
