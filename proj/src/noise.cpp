#include "mbm/noise.hpp"

#include <cmath>
#include <numbers>

namespace mbm {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> c = counter;
    std::uint64_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return c;
}

double NoiseLattice::gauss(std::uint64_t w0, std::uint64_t w1, std::uint64_t domain) const {
    auto out = philox4x64({w0, w1, replicate_, domain}, {seed_, 0x6d626d6c6162ULL});
    // (0,1)-open uniforms from the top 53 bits
    double u1 = (static_cast<double>(out[0] >> 11) + 0.5) * 0x1p-53;
    double u2 = (static_cast<double>(out[1] >> 11) + 0.5) * 0x1p-53;
    return scale_ * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseLattice::epsilon(std::int64_t j, std::int64_t k) const {
    return gauss(zigzag(j), zigzag(k), 0);
}

double NoiseLattice::oracle_normal(std::uint64_t index) const {
    return gauss(index, 0, 1);
}

}  // namespace mbm
