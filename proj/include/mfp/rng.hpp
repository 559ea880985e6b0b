#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace mfp {

// Philox-4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). The 128-bit counter is split into a 64-bit
// block index (words 0-1) and a 64-bit stream id (words 2-3), so distinct
// streams can never produce overlapping output.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t key, std::uint64_t stream_id) {
        key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
        counter_ = {0u, 0u,
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
    }

    std::uint64_t next_u64() {
        if (buffered_ == 0) {
            const auto block = run_rounds(counter_, key_);
            buffer_[0] = (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
            buffer_[1] = (static_cast<std::uint64_t>(block[3]) << 32) | block[2];
            buffered_ = 2;
            if (++counter_[0] == 0u) ++counter_[1];
        }
        return buffer_[2 - buffered_--];
    }

    static std::array<std::uint32_t, 4> run_rounds(std::array<std::uint32_t, 4> ctr,
                                                   std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }

private:
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

// One logical random stream, addressed as (master_seed, label, index).
// Streams with distinct addresses are independent and may be created in any
// order, which makes Monte Carlo results independent of evaluation order.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view label, std::uint64_t index)
        : engine_(splitmix64(master_seed),
                  splitmix64(splitmix64(master_seed ^ fnv1a64(label)) + index)) {}

    std::uint64_t next_u64() { return engine_.next_u64(); }

    // uniform on the open interval (0,1); safe as a log() argument
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted through
    // Gamma(shape+1) * U^(1/shape).
    double gamma(double shape) {
        if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be > 0");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double x = normal();
            const double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    // Exact Poisson draw. Large means are split by additivity so the product
    // method never underflows.
    std::int64_t poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
        std::int64_t total = 0;
        while (mean > 30.0) {
            total += poisson_product(30.0);
            mean -= 30.0;
        }
        return total + poisson_product(mean);
    }

private:
    std::int64_t poisson_product(double mean) {
        if (mean == 0.0) return 0;
        const double threshold = std::exp(-mean);
        std::int64_t k = 0;
        double prod = uniform();
        while (prod > threshold) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    Philox4x32 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mfp
