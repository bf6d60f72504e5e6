#pragma once

#include <cstdint>
#include <random>

namespace vorgp {

// splitmix64; used to decorrelate derived stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Named sub-streams split off one root seed so that every stage of a run
// can be replayed independently.
enum class Stream : std::uint64_t {
    design = 1,
    chain = 2,
    optimizer = 3,
    sampler = 4,
};

inline std::uint64_t derive_seed(std::uint64_t root, Stream which) {
    return mix64(root ^ mix64(static_cast<std::uint64_t>(which)));
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    return mix64(root ^ mix64(index));
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return unit_(engine_); }

    double normal() { return normal_(engine_); }

    // uniform integer in [0, n)
    int uniform_int(int n) {
        return static_cast<int>(std::uniform_int_distribution<long>(0, n - 1)(engine_));
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace vorgp
