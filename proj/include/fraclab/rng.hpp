#pragma once

#include <cstdint>

namespace fraclab::detail {

/// splitmix64 step; used both as the generator and to derive batch substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic per-batch random stream. Same (seed, batch) gives the same
/// draws regardless of threading, so parallel reductions in batch order are
/// bit-reproducible.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t batch) {
        std::uint64_t s = seed;
        (void)splitmix64(s);
        state_ = s ^ (batch * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
        (void)splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in the open interval (0,1); never returns an exact endpoint.
    double uniform01() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::uint64_t state_ = 0;
};

}  // namespace fraclab::detail
