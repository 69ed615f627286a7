#pragma once

// Photon density and current bilinears on the x-grid, and the continuity
// audit d(rho)/dt + dJ/dx = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "photon/errors.hpp"
#include "photon/numeric.hpp"
#include "photon/spectral.hpp"
#include "photon/units.hpp"

namespace photon {

/// Sampled bilinear with per-sample complex values. Diagonal densities
/// (c1 == c2) are real up to rounding; cross densities need not be.
struct SampledBilinear {
    XGrid1D grid;
    double t = 0.0;
    double area = 1.0;
    std::vector<cplx> values;

    std::vector<double> real() const {
        std::vector<double> out(values.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[i].real();
        return out;
    }

    double peak() const {
        double p = 0.0;
        for (const cplx& v : values) p = std::max(p, std::abs(v));
        return p;
    }

    double max_imag_residue() const {
        double r = 0.0;
        for (const cplx& v : values) r = std::max(r, std::abs(v.imag()));
        return r;
    }

    /// sum(values) * dx * area
    cplx integral() const { return detail::pairwise_sum<cplx>(values) * grid.dx * area; }
};

struct DensityField : SampledBilinear {};
struct CurrentField : SampledBilinear {};

inline DensityField density_field(const SpectralAmplitude& c1, const SpectralAmplitude& c2, double t,
                                  const UnitsConfig& units = {}) {
    require_same_grid(c1, c2);
    const FieldSet f1 = synthesize_fields(c1, t, units);
    const FieldSet f2 = synthesize_fields(c2, t, units);
    DensityField d;
    d.grid = f1.grid;
    d.t = t;
    d.area = c1.grid.area;
    d.values = detail::density_bilinear(f1, f2, units);
    return d;
}

inline DensityField density_field(const SpectralAmplitude& c, double t, const UnitsConfig& units = {}) {
    return density_field(c, c, t, units);
}

namespace detail {

// J = (i eps0 c^2 / 2 hbar)(A2+ B1- - B2+ A1-): c times the A x cB component
// of the four-current array (whose spatial part is J/c, like (1, e_k)), so
// that J carries flux units and J = c rho for forward waves.
inline std::vector<cplx> current_bilinear(const FieldSet& f1, const FieldSet& f2, const UnitsConfig& u) {
    std::vector<cplx> j(f1.a_plus.size());
    if (f1.helicity != f2.helicity) return j;
    const cplx pref{0.0, u.eps0 * u.c * u.c / (2.0 * u.hbar)};
    for (std::size_t i = 0; i < j.size(); ++i)
        j[i] = pref * (f2.a_plus[i] * std::conj(f1.b_plus[i]) - f2.b_plus[i] * std::conj(f1.a_plus[i]));
    return j;
}

}  // namespace detail

inline CurrentField current_field(const SpectralAmplitude& c1, const SpectralAmplitude& c2, double t,
                                  const UnitsConfig& units = {}) {
    require_same_grid(c1, c2);
    const FieldSet f1 = synthesize_fields(c1, t, units);
    const FieldSet f2 = synthesize_fields(c2, t, units);
    CurrentField cur;
    cur.grid = f1.grid;
    cur.t = t;
    cur.area = c1.grid.area;
    cur.values = detail::current_bilinear(f1, f2, units);
    return cur;
}

inline CurrentField current_field(const SpectralAmplitude& c, double t, const UnitsConfig& units = {}) {
    return current_field(c, c, t, units);
}

/// Exact spatial derivative of the diagonal current, by the product rule on
/// spectrally differentiated A+ and B+.
inline std::vector<double> current_divergence(const SpectralAmplitude& c, double t, const UnitsConfig& units = {}) {
    const auto spec = detail::potential_spectrum(c, t, units);
    const auto& g = c.grid;
    const auto a = detail::synthesize(g, spec, [](double) { return cplx{1.0, 0.0}; });
    const auto b = detail::synthesize(g, spec, [](double k) { return cplx{0.0, k}; });
    const auto da = detail::synthesize(g, spec, [](double k) { return cplx{0.0, k}; });
    const auto db = detail::synthesize(g, spec, [](double k) { return cplx{-k * k, 0.0}; });
    const cplx pref{0.0, units.eps0 * units.c * units.c / (2.0 * units.hbar)};
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const cplx z = a[i] * std::conj(db[i]) + da[i] * std::conj(b[i]);
        out[i] = (pref * (z - std::conj(z))).real();
    }
    return out;
}

/// max_x |d(rho)/dt + dJ/dx| with a centred time difference of step dt,
/// normalized by the peak of |dJ/dx|. The normalization is floored at
/// c * dk * peak(rho), the slowest resolvable rate, so uniform fields give
/// a rounding-level residual instead of 0/0.
inline double continuity_residual(const SpectralAmplitude& c, double t, double dt, const UnitsConfig& units = {}) {
    c.validate();
    const double dx = c.grid.dx();
    if (!(dt > 0.0)) throw StepSizeError("time step must be positive");
    if (!(units.c * dt < 0.25 * dx)) throw StepSizeError("time step too large: need c*dt < dx/4");

    const auto rho_plus = density_field(c, t + dt, units).real();
    const auto rho_minus = density_field(c, t - dt, units).real();
    const auto rho_now = density_field(c, t, units).real();
    const auto div_j = current_divergence(c, t, units);

    double worst = 0.0, scale = 0.0, rho_peak = 0.0;
    for (std::size_t i = 0; i < div_j.size(); ++i) {
        const double drho_dt = (rho_plus[i] - rho_minus[i]) / (2.0 * dt);
        worst = std::max(worst, std::abs(drho_dt + div_j[i]));
        scale = std::max(scale, std::abs(div_j[i]));
        rho_peak = std::max(rho_peak, std::abs(rho_now[i]));
    }
    scale = std::max(scale, units.c * c.grid.dk * rho_peak);
    return scale > 0.0 ? worst / scale : 0.0;
}

/// Net-mass centroid sum(x rho) / sum(rho) of the real density. Zero field -> 0.
inline double centroid(const SampledBilinear& d) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        num += d.grid.x(i) * d.values[i].real();
        den += d.values[i].real();
    }
    return den != 0.0 ? num / den : 0.0;
}

/// Most negative sample of the real density (reported, never asserted).
inline double min_density(const DensityField& d) {
    double m = 0.0;
    bool first = true;
    for (const cplx& v : d.values) {
        if (first || v.real() < m) m = v.real();
        first = false;
    }
    return m;
}

/// True when |rho| stays below rel_tol * peak within `guard` cells of both
/// ends of the periodic domain.
inline bool clear_of_wrap(const SampledBilinear& d, std::size_t guard = 10, double rel_tol = 1e-9) {
    const double peak = d.peak();
    if (peak == 0.0) return true;
    const std::size_t n = d.values.size();
    const std::size_t g = std::min(guard, n / 2);
    for (std::size_t i = 0; i < g; ++i) {
        if (std::abs(d.values[i]) > rel_tol * peak) return false;
        if (std::abs(d.values[n - 1 - i]) > rel_tol * peak) return false;
    }
    return true;
}

inline void require_clear_of_wrap(const SampledBilinear& d, std::size_t guard = 10, double rel_tol = 1e-9) {
    if (!clear_of_wrap(d, guard, rel_tol))
        throw DomainError("pulse support reaches the periodic wrap-around");
}

}  // namespace photon
