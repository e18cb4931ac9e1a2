#pragma once

#include <array>
#include <cstdint>

namespace mbm {

// Philox4x64-10 keyed counter block cipher (Random123 constants).
// Produces 4 output words per 256-bit counter; used as the stateless core
// of every random draw in the project.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// Deterministic Gaussian lattice eps_{j,k} ~ N(0,1), shared by X and Z.
//
// Counter scheme (fixed; caches and replays depend on it):
//   counter = { zigzag(j), zigzag(k), replicate, domain }
//   key     = { seed, 0x6d626d6c6162 }              ("mbmlab" tag)
//   zigzag(v) = (v << 1) ^ (v >> 63), mapping ...,-2,-1,0,1,2,... -> 3,1,0,2,4,...
// domain 0 is the synthesis lattice; domain 1 feeds the circulant oracle.
// The 4 output words give one N(0,1) deviate via Box-Muller on words 0,1.
class NoiseLattice {
public:
    explicit NoiseLattice(std::uint64_t seed, std::uint64_t replicate = 0, double scale = 1.0)
        : seed_(seed), replicate_(replicate), scale_(scale) {}

    double epsilon(std::int64_t j, std::int64_t k) const;

    // iid N(0,1) stream for the oracle path sampler, independent of epsilon().
    double oracle_normal(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t replicate() const { return replicate_; }
    double scale() const { return scale_; }

private:
    double gauss(std::uint64_t w0, std::uint64_t w1, std::uint64_t domain) const;

    std::uint64_t seed_;
    std::uint64_t replicate_;
    double scale_ = 1.0;  // amplitude hook; paths are linear in it
};

}  // namespace mbm
