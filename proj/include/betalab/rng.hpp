#pragma once

#include <cmath>
#include <cstdint>

namespace betalab {

// Counter-based generator: every variate is a pure function of (key, counter),
// so random access and sequential access agree bit for bit.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream_id) {
        return mix(mix(seed) ^ mix(stream_id * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ ^ (counter * 0xda942042e4dd58b5ull + 0x452821e638d01377ull));
    }

    // uniform on (0,1), never returns an endpoint
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; consumes counters c and c+1
    double normal(std::uint64_t counter) const {
        double u1 = uniform(counter);
        double u2 = uniform(counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

// Sequential convenience wrapper over CounterRng.
class SeqRng {
public:
    explicit SeqRng(std::uint64_t key) : rng_(key) {}
    double uniform() { return rng_.uniform(ctr_++); }
    double normal() {
        double v = rng_.normal(ctr_);
        ctr_ += 2;
        return v;
    }
    std::uint64_t bits() { return rng_.bits(ctr_++); }

private:
    CounterRng rng_;
    std::uint64_t ctr_ = 0;
};

} // namespace betalab
