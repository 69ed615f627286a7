#pragma once

// Band-limited localized-basis densities: the 1D closed form, the 3D radial
// integral, and the mass measures used to contrast the real (summed)
// density with its nonlocal positive-frequency part.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "photon/density.hpp"
#include "photon/errors.hpp"
#include "photon/numeric.hpp"
#include "photon/units.hpp"

namespace photon {

/// Positive-frequency density rho+ sampled at positions; the physical
/// density is rho+ + conj(rho+).
struct SplitDensity {
    std::vector<double> positions;
    std::vector<cplx> rho_plus;

    std::vector<double> physical() const {
        std::vector<double> out(rho_plus.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * rho_plus[i].real();
        return out;
    }
};

enum class DensityPart { physical, positive_magnitude };

/// rho+(u) = int_0^k_max dk exp(-i k u) / (2 pi A), u = dx - c dt, in closed
/// form [sin(k u) - 2i sin^2(k u / 2)] / (2 pi A u). Its imaginary part is the
/// band-limited -P(1/u) / (2 pi A) tail.
inline cplx localized_density_1d(double u, double k_max, double area) {
    if (!(k_max > 0.0)) throw DomainError("k_max must be positive");
    if (!(area > 0.0)) throw DomainError("area must be positive");
    const double pref = 1.0 / (two_pi * area);
    if (u == 0.0) return {k_max * pref, 0.0};
    const double z = k_max * u;
    const double s = std::sin(0.5 * z);
    return cplx{std::sin(z), -2.0 * s * s} * (pref / u);
}

/// Same density as a discrete sum over box modes k_l = 2 pi l / L, l >= 1,
/// up to k_max. Converges to the continuum form as O(1/L).
inline cplx localized_density_1d_mode_sum(double u, double k_max, double area, double box_length) {
    if (!(box_length > 0.0)) throw DomainError("box length must be positive");
    if (!(k_max > 0.0) || !(area > 0.0)) throw DomainError("k_max and area must be positive");
    const double dk = two_pi / box_length;
    const auto modes = static_cast<std::size_t>(std::floor(k_max / dk + 1e-9));
    std::vector<cplx> terms(modes);
    for (std::size_t l = 0; l < modes; ++l) terms[l] = std::polar(1.0, -static_cast<double>(l + 1) * dk * u);
    return detail::pairwise_sum<cplx>(terms) * (dk / (two_pi * area));
}

/// Samples rho+ at `count` evenly spaced separations dx in [x_min, x_max]
/// for time separation dt.
inline SplitDensity sample_localized_1d(double k_max, double area, double dt, double x_min, double x_max,
                                        std::size_t count, const UnitsConfig& units = {}) {
    if (count < 2 || !(x_max > x_min)) throw DomainError("need at least two samples on a non-empty range");
    SplitDensity d;
    d.positions.resize(count);
    d.rho_plus.resize(count);
    const double step = (x_max - x_min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = x_min + step * static_cast<double>(i);
        d.positions[i] = x;
        d.rho_plus[i] = localized_density_1d(x - units.c * dt, k_max, area);
    }
    return d;
}

/// 3D band-limited rho+(r, dt) = 4 pi / (2 (2 pi)^3) int_0^k_max dk k^2
/// sinc(k r) exp(-i c k dt), by adaptive Gauss-Kronrod over panels of about
/// half an oscillation each.
inline cplx localized_density_3d(double r, double dt, double k_max, const UnitsConfig& units = {}) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    if (!(k_max > 0.0)) throw DomainError("k_max must be positive");
    const double tau = units.c * dt;
    auto integrand = [&](double k) { return k * std::sin(k * r) * std::polar(1.0, -k * tau); };
    const double span = k_max * (r + std::abs(tau)) / pi;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(span)));
    const double h = k_max / static_cast<double>(panels);
    cplx sum{};
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = h * static_cast<double>(p);
        const double b = p + 1 == panels ? k_max : a + h;
        sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, b, 4, 1e-10);
    }
    return sum / (4.0 * pi * pi * r);
}

namespace detail {

inline std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = 0.5 * (x[i + 1] - x[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

// |net mass outside centroid +- W| / |net mass|.
inline double tail_fraction(const std::vector<double>& x, const std::vector<double>& f, double halfwidth) {
    if (x.size() < 2) return 0.0;
    if (!(halfwidth > 0.0)) throw DomainError("window half-width must be positive");
    if (2.0 * halfwidth > x.back() - x.front()) throw DomainError("window is larger than the sampled domain");
    const auto w = trapezoid_weights(x);
    double total = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        total += f[i] * w[i];
        moment += x[i] * f[i] * w[i];
    }
    if (total == 0.0) return 0.0;
    const double centre = moment / total;
    double outside = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - centre) > halfwidth) outside += f[i] * w[i];
    return std::abs(outside / total);
}

}  // namespace detail

/// Fraction of the density's net mass lying outside a window of half-width
/// W about its centroid. For the magnitude |rho+| this is the ordinary mass
/// fraction. For the physical density the net (signed) mass is used: the
/// sharp-cutoff sinc has a log-divergent absolute mass.
inline double tail_mass(const SplitDensity& d, double halfwidth, DensityPart part) {
    std::vector<double> f(d.rho_plus.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = part == DensityPart::physical ? 2.0 * d.rho_plus[i].real() : std::abs(d.rho_plus[i]);
    return detail::tail_fraction(d.positions, f, halfwidth);
}

inline double tail_mass(const DensityField& d, double halfwidth) {
    std::vector<double> x(d.values.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = d.grid.x(i);
    return detail::tail_fraction(x, d.real(), halfwidth);
}

/// Centroid of the physical density seen through a Gaussian observation
/// window exp(-x^2 / 2 s^2) about the origin. With s >> 1/k_max the window
/// is smooth on the band-limit scale, so the sinc tails cancel and the
/// result tracks the true peak position.
inline double windowed_centroid(const SplitDensity& d, double window_sigma) {
    if (!(window_sigma > 0.0)) throw DomainError("window width must be positive");
    const auto w = detail::trapezoid_weights(d.positions);
    const auto rho = d.physical();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double x = d.positions[i];
        const double g = std::exp(-0.5 * x * x / (window_sigma * window_sigma)) * w[i] * rho[i];
        num += x * g;
        den += g;
    }
    return den != 0.0 ? num / den : 0.0;
}

namespace detail {

// 4 pi r^2 (rho+ + conj rho+)
inline double radial_mass_density(double r, double dt, double k_max, const UnitsConfig& u) {
    return 4.0 * pi * r * r * 2.0 * localized_density_3d(r, dt, k_max, u).real();
}

template <typename Weight>
double radial_integral(double r0, double r1, double dt, double k_max, const UnitsConfig& u, Weight weight) {
    const double panel = 0.5 * pi / k_max;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((r1 - r0) / panel)));
    const double h = (r1 - r0) / static_cast<double>(panels);
    auto f = [&](double r) { return r > 0.0 ? radial_mass_density(r, dt, k_max, u) * weight(r) : 0.0; };
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = r0 + h * static_cast<double>(p);
        sum += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, a + h, 0);
    }
    return sum;
}

}  // namespace detail

/// Total radial mass 4 pi int r^2 rho dr over [0, r_max], with a raised-cosine
/// taper over the outer half of the range. The sharp-cutoff density is a
/// ringing shell layer whose sharp-edged integral oscillates with r_max; the
/// taper removes that oscillation. Default r_max = 2 (c|dt| + 100 / k_max).
inline double total_radial_mass(double dt, double k_max, const UnitsConfig& units = {}, double r_max = 0.0) {
    if (!(k_max > 0.0)) throw DomainError("k_max must be positive");
    if (r_max <= 0.0) r_max = 2.0 * (units.c * std::abs(dt) + 100.0 / k_max);
    const double knee = 0.5 * r_max;
    auto taper = [&](double r) {
        if (r <= knee) return 1.0;
        const double c = std::cos(0.5 * pi * (r - knee) / (r_max - knee));
        return c * c;
    };
    return detail::radial_integral(0.0, r_max, dt, k_max, units, taper);
}

/// Radial mass on the shell |r - c dt| <= W, measured against the Hann
/// window cos^2(pi (r - c dt) / 2W) supported on that interval.
inline double shell_mass(double dt, double halfwidth, double k_max, const UnitsConfig& units = {}) {
    if (!(halfwidth > 0.0)) throw DomainError("shell half-width must be positive");
    const double tau = units.c * dt;
    auto hann = [&](double r) {
        const double c = std::cos(0.5 * pi * (r - tau) / halfwidth);
        return c * c;
    };
    return detail::radial_integral(std::max(0.0, tau - halfwidth), tau + halfwidth, dt, k_max, units, hann);
}

inline double shell_mass_fraction(double dt, double halfwidth, double k_max, const UnitsConfig& units = {}) {
    const double total = total_radial_mass(dt, k_max, units);
    return total != 0.0 ? shell_mass(dt, halfwidth, k_max, units) / total : 0.0;
}

}  // namespace photon
