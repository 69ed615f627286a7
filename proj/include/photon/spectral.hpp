#pragma once

// One-photon states as spectral amplitudes c(k) on a forward-only k-grid,
// and synthesis of the positive-frequency potential and fields on the
// conjugate periodic x-grid.
//
// Grid conventions: k_j = j * dk for j = 1..N (stored at index j-1), and
// x_i = i * dx for i = 0..N-1 with dx = 2 pi / (N dk). The x-domain is
// periodic with length L = 2 pi / dk.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photon/errors.hpp"
#include "photon/fft.hpp"
#include "photon/numeric.hpp"
#include "photon/units.hpp"

namespace photon {

struct KGrid1D {
    std::size_t n = 4096;
    double dk = 1.0;
    double area = 1.0;

    double k(std::size_t j) const { return static_cast<double>(j + 1) * dk; }
    double k_max() const { return static_cast<double>(n) * dk; }
    double length() const { return two_pi / dk; }
    double dx() const { return two_pi / (static_cast<double>(n) * dk); }

    void validate() const {
        if (!detail::is_power_of_two(n)) throw DomainError("grid size must be a power of two");
        if (!(dk > 0.0) || !std::isfinite(dk)) throw DomainError("dk must be positive");
        if (!(area > 0.0) || !std::isfinite(area)) throw DomainError("transverse area must be positive");
    }

    bool operator==(const KGrid1D&) const = default;
};

struct XGrid1D {
    std::size_t n = 0;
    double dx = 0.0;

    static XGrid1D conjugate_to(const KGrid1D& g) { return {g.n, g.dx()}; }
    double x(std::size_t i) const { return static_cast<double>(i) * dx; }
    double length() const { return static_cast<double>(n) * dx; }
};

struct SpectralAmplitude {
    KGrid1D grid;
    Helicity helicity = Helicity::positive;
    std::vector<cplx> c;

    void validate() const {
        grid.validate();
        if (c.size() != grid.n) throw DimensionError("amplitude length does not match grid size");
        for (const cplx& v : c)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw DomainError("spectral amplitude has a non-finite entry");
    }
};

/// Positive-frequency A+, E+ = -dA+/dt and the transverse B+ amplitude
/// sampled on the x-grid at one time.
struct FieldSet {
    XGrid1D grid;
    double t = 0.0;
    Helicity helicity = Helicity::positive;
    std::vector<cplx> a_plus;
    std::vector<cplx> e_plus;
    std::vector<cplx> b_plus;
};

inline SpectralAmplitude zero_state(const KGrid1D& grid, Helicity h = Helicity::positive) {
    grid.validate();
    return {grid, h, std::vector<cplx>(grid.n)};
}

/// sum_j |c_j|^2 dk / 2pi.
inline double photon_number(const SpectralAmplitude& s) {
    std::vector<double> w(s.c.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::norm(s.c[j]);
    return detail::pairwise_sum<double>(w) * s.grid.dk / two_pi;
}

inline SpectralAmplitude scaled(SpectralAmplitude s, cplx factor) {
    for (auto& v : s.c) v *= factor;
    return s;
}

inline void require_same_grid(const SpectralAmplitude& a, const SpectralAmplitude& b) {
    if (!(a.grid == b.grid)) throw DimensionError("spectral amplitudes live on different grids");
}

/// w1 * s1 + w2 * s2; both must share grid and helicity.
inline SpectralAmplitude superpose(const SpectralAmplitude& s1, cplx w1, const SpectralAmplitude& s2, cplx w2) {
    require_same_grid(s1, s2);
    if (s1.helicity != s2.helicity) throw DimensionError("cannot superpose different helicities in one amplitude");
    SpectralAmplitude out = s1;
    for (std::size_t j = 0; j < out.c.size(); ++j) out.c[j] = w1 * s1.c[j] + w2 * s2.c[j];
    return out;
}

/// Gaussian pulse c(k) ~ exp(-(k-k0)^2 / 4 sigma^2) centred at x0 (default:
/// middle of the periodic domain), normalized to one photon.
inline SpectralAmplitude make_gaussian_state(double k0, double sigma, const KGrid1D& grid,
                                             Helicity h = Helicity::positive,
                                             std::optional<double> x0 = std::nullopt) {
    grid.validate();
    if (!(k0 > 0.0)) throw DomainError("gaussian centre k0 must be positive");
    if (!(sigma > 0.0)) throw DomainError("gaussian width sigma must be positive");
    const double centre = x0.value_or(0.5 * grid.length());
    SpectralAmplitude s{grid, h, std::vector<cplx>(grid.n)};
    double peak = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double k = grid.k(j);
        const double d = (k - k0) / sigma;
        const double mag = std::exp(-0.25 * d * d);
        s.c[j] = std::polar(mag, -k * centre);
        peak = std::max(peak, mag);
    }
    if (!(peak > 0.0)) throw GridCoverageError("gaussian spectrum underflows everywhere on the grid");
    const double edge = std::max(std::abs(s.c.front()), std::abs(s.c.back()));
    if (edge >= 1e-10 * peak)
        throw GridCoverageError("gaussian spectrum is not negligible at the grid edges (ratio " +
                                std::to_string(edge / peak) + ")");
    const double n = photon_number(s);
    return scaled(std::move(s), 1.0 / std::sqrt(n));
}

/// One photon in the single bin j (zero-based, k = (j+1) dk).
inline SpectralAmplitude make_single_mode_state(std::size_t bin, const KGrid1D& grid,
                                                Helicity h = Helicity::positive) {
    SpectralAmplitude s = zero_state(grid, h);
    if (bin >= grid.n) throw DomainError("bin index outside grid");
    s.c[bin] = std::sqrt(two_pi / grid.dk);
    return s;
}

/// Localized-basis state at x-grid node `node`: c_j = sqrt(dx) exp(-i k_j x_node).
/// States at distinct nodes are orthogonal and each carries one photon.
inline SpectralAmplitude make_localized_state(std::size_t node, const KGrid1D& grid,
                                              Helicity h = Helicity::positive) {
    SpectralAmplitude s = zero_state(grid, h);
    if (node >= grid.n) throw DomainError("node index outside grid");
    const double amp = std::sqrt(grid.dx());
    // k_j x_node = 2 pi (j+1) node / N, reduced mod N to keep the phase exact.
    for (std::size_t j = 0; j < grid.n; ++j) {
        const std::size_t m = ((j + 1) * node) % grid.n;
        s.c[j] = std::polar(amp, -two_pi * static_cast<double>(m) / static_cast<double>(grid.n));
    }
    return s;
}

inline double angular_frequency(const KGrid1D& grid, std::size_t j, const UnitsConfig& u) { return u.c * grid.k(j); }

/// c_j -> c_j exp(-i omega_j dt).
inline SpectralAmplitude evolve_free(SpectralAmplitude s, double dt, const UnitsConfig& units = {}) {
    for (std::size_t j = 0; j < s.c.size(); ++j) s.c[j] *= std::polar(1.0, -angular_frequency(s.grid, j, units) * dt);
    return s;
}

namespace detail {

/// Synthesis weight for bin j: i sqrt(hbar/eps0) dk / (2 pi sqrt(omega_j A)).
inline cplx potential_weight(const KGrid1D& g, std::size_t j, const UnitsConfig& u) {
    const double w = std::sqrt(u.hbar / u.eps0) * g.dk / (two_pi * std::sqrt(angular_frequency(g, j, u) * g.area));
    return {0.0, w};
}

/// Time-evolved potential spectrum a_j(t), placed at DFT index (j+1) mod N.
inline std::vector<cplx> potential_spectrum(const SpectralAmplitude& s, double t, const UnitsConfig& u) {
    const std::size_t n = s.grid.n;
    std::vector<cplx> a(n);
    for (std::size_t j = 0; j < n; ++j)
        a[(j + 1) % n] = potential_weight(s.grid, j, u) * s.c[j] * std::polar(1.0, -angular_frequency(s.grid, j, u) * t);
    return a;
}

/// Inverse DFT of spectrum(idx) * multiplier(k_j); idx = (j+1) mod N.
template <typename Multiplier>
std::vector<cplx> synthesize(const KGrid1D& g, const std::vector<cplx>& spectrum, Multiplier mult) {
    std::vector<cplx> tmp(spectrum.size());
    for (std::size_t j = 0; j < g.n; ++j) {
        const std::size_t idx = (j + 1) % g.n;
        tmp[idx] = spectrum[idx] * mult(g.k(j));
    }
    return dft(tmp, +1);
}

/// Pointwise sesquilinear density (i eps0 / 2 hbar)(A2+ E1- - E2+ A1-).
/// For f1 == f2 this is real and equals the usual one-photon density.
inline std::vector<cplx> density_bilinear(const FieldSet& f1, const FieldSet& f2, const UnitsConfig& u) {
    std::vector<cplx> rho(f1.a_plus.size());
    if (f1.helicity != f2.helicity) return rho;
    const cplx pref{0.0, u.eps0 / (2.0 * u.hbar)};
    for (std::size_t i = 0; i < rho.size(); ++i)
        rho[i] = pref * (f2.a_plus[i] * std::conj(f1.e_plus[i]) - f2.e_plus[i] * std::conj(f1.a_plus[i]));
    return rho;
}

}  // namespace detail

inline FieldSet synthesize_fields(const SpectralAmplitude& s, double t, const UnitsConfig& units = {}) {
    s.validate();
    const auto spec = detail::potential_spectrum(s, t, units);
    FieldSet f;
    f.grid = XGrid1D::conjugate_to(s.grid);
    f.t = t;
    f.helicity = s.helicity;
    f.a_plus = detail::synthesize(s.grid, spec, [](double) { return cplx{1.0, 0.0}; });
    f.e_plus = detail::synthesize(s.grid, spec, [&](double k) { return cplx{0.0, units.c * k}; });
    f.b_plus = detail::synthesize(s.grid, spec, [](double k) { return cplx{0.0, k}; });
    return f;
}

/// Inverse of synthesize_fields: forward transform of A+ back to c(k).
inline SpectralAmplitude extract_spectrum(const FieldSet& f, const KGrid1D& grid, const UnitsConfig& units = {}) {
    grid.validate();
    if (f.a_plus.size() != grid.n) throw DimensionError("field length does not match grid size");
    const auto raw = detail::dft(f.a_plus, -1);
    SpectralAmplitude s{grid, f.helicity, std::vector<cplx>(grid.n)};
    const double inv_n = 1.0 / static_cast<double>(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const cplx a = raw[(j + 1) % grid.n] * inv_n;
        s.c[j] = a / (detail::potential_weight(grid, j, units) *
                      std::polar(1.0, -angular_frequency(grid, j, units) * f.t));
    }
    return s;
}

enum class ScalarProductMethod { kspace, xspace };

/// <c1|c2>. The k-space route sums conj(c1) c2 dk / 2pi; the x-space route
/// integrates the field bilinear over the t hyperplane.
inline cplx scalar_product(const SpectralAmplitude& c1, const SpectralAmplitude& c2,
                           ScalarProductMethod method = ScalarProductMethod::kspace, double t = 0.0,
                           const UnitsConfig& units = {}) {
    require_same_grid(c1, c2);
    if (c1.c.size() != c2.c.size()) throw DimensionError("amplitude lengths differ");
    if (c1.helicity != c2.helicity) return {};
    std::vector<cplx> terms(c1.c.size());
    double measure = 0.0;
    if (method == ScalarProductMethod::kspace) {
        for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = std::conj(c1.c[j]) * c2.c[j];
        measure = c1.grid.dk / two_pi;
    } else {
        const FieldSet f1 = synthesize_fields(c1, t, units);
        const FieldSet f2 = synthesize_fields(c2, t, units);
        terms = detail::density_bilinear(f1, f2, units);
        measure = f1.grid.dx * c1.grid.area;
    }
    return detail::pairwise_sum<cplx>(terms) * measure;
}

}  // namespace photon
