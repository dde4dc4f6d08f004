#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lzn {

// Counter-based Philox4x64-10 stream. Each (seed, stream) pair is an
// independent stream; draws depend only on (seed, stream, position), so
// results are reproducible regardless of scheduling.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{seed, stream}, counter_{0, 0, 0, 0}, avail_(0), have_cached_(false),
          cached_(0.0) {}

    std::uint64_t seed() const { return key_[0]; }
    std::uint64_t stream() const { return key_[1]; }

    std::uint64_t next_u64() {
        if (avail_ == 0)
            refill();
        return block_[4 - avail_--];
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const std::uint64_t x = next_u64();
        const std::uint64_t y = next_u64();
        // u1 in (0, 1] keeps the log finite.
        const double u1 = static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(y >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(th);
        have_cached_ = true;
        return r * std::cos(th);
    }

private:
    static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                        std::uint64_t& lo) {
        const unsigned __int128 prod =
            static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
        hi = static_cast<std::uint64_t>(prod >> 64);
        lo = static_cast<std::uint64_t>(prod);
    }

    void refill() {
        // Counter is bumped before each block, so the first block uses
        // counter value 1.
        if (++counter_[0] == 0)
            if (++counter_[1] == 0)
                if (++counter_[2] == 0)
                    ++counter_[3];

        constexpr std::uint64_t M0 = 0xD2E7470EE14C6C93ull;
        constexpr std::uint64_t M1 = 0xCA5A826395121157ull;
        constexpr std::uint64_t W0 = 0x9E3779B97F4A7C15ull;
        constexpr std::uint64_t W1 = 0xBB67AE8584CAA73Bull;

        std::uint64_t c0 = counter_[0], c1 = counter_[1], c2 = counter_[2],
                      c3 = counter_[3];
        std::uint64_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint64_t hi0, lo0, hi1, lo1;
            mulhilo(M0, c0, hi0, lo0);
            mulhilo(M1, c2, hi1, lo1);
            const std::uint64_t n0 = hi1 ^ c1 ^ k0;
            const std::uint64_t n1 = lo1;
            const std::uint64_t n2 = hi0 ^ c3 ^ k1;
            const std::uint64_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += W0;
            k1 += W1;
        }
        block_ = {c0, c1, c2, c3};
        avail_ = 4;
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> block_{};
    int avail_;
    bool have_cached_;
    double cached_;
};

}
