#pragma once

// Counter-based random number generation (Philox4x32-10).
//
// Every Monte-Carlo sample in this project owns an independent random
// stream addressed by (seed, stream): `seed` identifies the experiment,
// `stream` is the global sample index.  Streams can be created in any
// order on any thread and always produce the same values, which is what
// makes estimates reproducible independently of the worker count.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace isolab {

class Philox {
  public:
    Philox(uint64_t seed, uint64_t stream) {
        key_[0] = static_cast<uint32_t>(seed);
        key_[1] = static_cast<uint32_t>(seed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<uint32_t>(stream);
        ctr_[3] = static_cast<uint32_t>(stream >> 32);
    }

    uint32_t next_u32() {
        if (idx_ == 4) {
            block(ctr_, key_, out_);
            // 64-bit block counter in words 0..1; words 2..3 hold the
            // stream id and are never touched.
            if (++ctr_[0] == 0) ++ctr_[1];
            idx_ = 0;
        }
        return out_[idx_++];
    }

    uint64_t next_u64() {
        uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe to pass to log().
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        double t = 2.0 * std::numbers::pi * uniform();
        cached_ = r * std::sin(t);
        have_cached_ = true;
        return r * std::cos(t);
    }

    static void block(const uint32_t ctr[4], const uint32_t key[2], uint32_t out[4]) {
        uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
        uint32_t k0 = key[0], k1 = key[1];
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                k0 += kWeyl0;
                k1 += kWeyl1;
            }
            uint64_t p0 = static_cast<uint64_t>(kMult0) * c0;
            uint64_t p1 = static_cast<uint64_t>(kMult1) * c2;
            uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
            uint32_t lo0 = static_cast<uint32_t>(p0);
            uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
            uint32_t lo1 = static_cast<uint32_t>(p1);
            uint32_t n0 = hi1 ^ c1 ^ k0;
            uint32_t n1 = lo1;
            uint32_t n2 = hi0 ^ c3 ^ k1;
            uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
        }
        out[0] = c0;
        out[1] = c1;
        out[2] = c2;
        out[3] = c3;
    }

  private:
    static constexpr uint32_t kMult0 = 0xD2511F53u;
    static constexpr uint32_t kMult1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

    uint32_t ctr_[4];
    uint32_t key_[2];
    uint32_t out_[4];
    int idx_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace isolab
