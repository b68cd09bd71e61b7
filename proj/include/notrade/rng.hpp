#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace notrade {

// Philox4x32-10 counter-based generator. Stateless block function: the
// 128-bit counter encodes (path, block) so every path owns an independent
// substream of a single seeded family, independent of thread scheduling.
struct Philox4x32 {
    static constexpr uint32_t M0 = 0xD2511F53u;
    static constexpr uint32_t M1 = 0xCD9E8D57u;
    static constexpr uint32_t W0 = 0x9E3779B9u;
    static constexpr uint32_t W1 = 0xBB67AE85u;

    static std::array<uint32_t, 4> block(uint64_t key, uint64_t path, uint64_t ctr) {
        uint32_t k0 = static_cast<uint32_t>(key);
        uint32_t k1 = static_cast<uint32_t>(key >> 32);
        std::array<uint32_t, 4> x = {static_cast<uint32_t>(ctr), static_cast<uint32_t>(ctr >> 32),
                                     static_cast<uint32_t>(path), static_cast<uint32_t>(path >> 32)};
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = static_cast<uint64_t>(M0) * x[0];
            const uint64_t p1 = static_cast<uint64_t>(M1) * x[2];
            x = {static_cast<uint32_t>(p1 >> 32) ^ x[1] ^ k0, static_cast<uint32_t>(p1),
                 static_cast<uint32_t>(p0 >> 32) ^ x[3] ^ k1, static_cast<uint32_t>(p0)};
            k0 += W0;
            k1 += W1;
        }
        return x;
    }
};

// Stream of standard normals for one path: Box-Muller on Philox uniforms.
class NormalStream {
  public:
    NormalStream(uint64_t seed, uint64_t path) : seed_(seed), path_(path) {}

    double next() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const auto b = Philox4x32::block(seed_, path_, ctr_++);
        const uint64_t u1 = (static_cast<uint64_t>(b[0]) << 32) | b[1];
        const uint64_t u2 = (static_cast<uint64_t>(b[2]) << 32) | b[3];
        // map to (0,1]; u1 must avoid 0 for the log
        const double v1 = (static_cast<double>(u1 >> 11) + 1.0) * 0x1.0p-53;
        const double v2 = static_cast<double>(u2 >> 11) * 0x1.0p-53;
        const double rad = std::sqrt(-2.0 * std::log(v1));
        const double ang = 2.0 * M_PI * v2;
        cached_ = rad * std::sin(ang);
        has_cached_ = true;
        return rad * std::cos(ang);
    }

  private:
    uint64_t seed_, path_;
    uint64_t ctr_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace notrade
