#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <complex>

namespace exitlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A draw is a pure function of (key, counter), so independent logical
// streams can be assigned to samples up front and the result of a run does
// not depend on how samples are scheduled across workers.
struct Philox4x32 {
    using ctr_t = std::array<std::uint32_t, 4>;
    using key_t = std::array<std::uint32_t, 2>;

    static ctr_t block(ctr_t ctr, key_t key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

// One logical random stream, keyed by (seed, stream id). The stream id is a
// 64-bit value, typically the global sample index (possibly salted with a
// purpose tag by the caller).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform double in the open interval (0,1); 53 random bits.
    double next_double() {
        const std::uint64_t r = next_u64() >> 11;
        return static_cast<double>(r) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal via Box-Muller; the pair partner is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_double();
        const double u2 = next_double();
        const double m = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = m * std::sin(a);
        have_spare_ = true;
        return m * std::cos(a);
    }

    std::complex<double> next_unit_circle() {
        const double a = 6.283185307179586476925286766559 * next_double();
        return {std::cos(a), std::sin(a)};
    }

private:
    void refill() {
        buf_ = Philox4x32::block({static_cast<std::uint32_t>(block_),
                                  static_cast<std::uint32_t>(block_ >> 32),
                                  stream_lo_, stream_hi_},
                                 key_);
        ++block_;
        pos_ = 0;
    }

    Philox4x32::key_t key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    Philox4x32::ctr_t buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream-id salts so that distinct uses of the same sample index do not
// collide (glue grids, bootstrap, point clouds, ...).
namespace stream_salt {
inline constexpr std::uint64_t kSampler = 0;
inline constexpr std::uint64_t kBootstrap = 0x626F6F74ull << 32;
inline constexpr std::uint64_t kCloud = 0x636C6F75ull << 32;
inline constexpr std::uint64_t kGlue = 0x676C7565ull << 32;
inline constexpr std::uint64_t kCheck = 0x6368656Bull << 32;
} // namespace stream_salt

} // namespace exitlab
