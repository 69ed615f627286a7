#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace photon {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

namespace detail {

// Pairwise summation: fixed tree shape, so results do not depend on how a
// caller later parallelizes the per-sample work.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    constexpr std::size_t leaf = 32;
    if (v.size() <= leaf) {
        T acc{};
        for (const auto& x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace detail
}  // namespace photon

namespace photon {

/// Photon helicity; doubles as the transverse polarization label.
enum class Helicity : int { negative = -1, positive = 1 };

inline int to_int(Helicity h) { return static_cast<int>(h); }

}  // namespace photon
