#pragma once

#include <cmath>
#include <cstdint>
#include <string>

// Counter-based deterministic random generator. Every draw is a pure
// function of (seed, stream, counter), so check results are reproducible
// regardless of evaluation order or thread scheduling. Generator name
// recorded in output artifacts: "splitmix64-counter".

namespace rarita {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Rng {
  public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) : base_(splitmix64(seed) ^ stream) {}
    Rng(uint64_t seed, const std::string& stream_name) : Rng(seed, fnv1a(stream_name)) {}

    uint64_t next_u64() { return splitmix64(base_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    uint64_t counter() const { return counter_; }
    void set_counter(uint64_t c) {
        counter_ = c;
        have_spare_ = false;
    }

    static constexpr const char* kName = "splitmix64-counter";

  private:
    uint64_t base_;
    uint64_t counter_ = 0;
    double spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace rarita
