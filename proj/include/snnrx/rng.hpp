#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace snnrx {

// 64-bit FNV-1a, used for role-derived seeds and config hashes.
inline uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Hierarchical random streams: one master seed, split per role so toggling a
// component does not perturb the draws of the others. Streams are cheap to
// create; each owns an independent mt19937_64.
class RandomStream {
  public:
    explicit RandomStream(uint64_t seed) : eng_(seed) {}

    RandomStream(uint64_t master, std::string_view role, uint64_t index = 0)
        : eng_(splitmix64(fnv1a(role, master ^ 0x9e3779b97f4a7c15ull) + index)) {}

    std::mt19937_64& engine() { return eng_; }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }
    uint64_t integer(uint64_t n) {  // uniform in [0, n)
        return std::uniform_int_distribution<uint64_t>(0, n - 1)(eng_);
    }
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    std::string state_string() const;
    void restore_state(const std::string& s);

  private:
    std::mt19937_64 eng_;
};

}  // namespace snnrx
