#pragma once

// Material and circuit-element models: complex index, attenuated
// propagation, normal-incidence Fresnel coefficients, and momentum
// bookkeeping in a dielectric.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "photon/errors.hpp"
#include "photon/fock.hpp"
#include "photon/numeric.hpp"
#include "photon/spectral.hpp"
#include "photon/units.hpp"

namespace photon {

/// n = sqrt(1 + chi), principal branch. The cut is the closed negative real
/// axis of 1 + chi.
inline cplx refractive_index(cplx chi) {
    const cplx z = 1.0 + chi;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("susceptibility is not finite");
    if (z.imag() == 0.0 && z.real() <= 0.0) throw DomainError("1 + chi lies on the branch cut of the square root");
    return std::sqrt(z);
}

/// Susceptibility chi(omega): constant, or tabulated and linearly
/// interpolated (clamped to the end values outside the table).
class Medium {
public:
    static Medium constant(cplx chi) {
        Medium m;
        m.omega_ = {0.0};
        m.chi_ = {chi};
        m.validate();
        return m;
    }

    static Medium tabulated(std::vector<double> omega, std::vector<cplx> chi) {
        if (omega.empty() || omega.size() != chi.size()) throw DomainError("susceptibility table is empty or ragged");
        if (!std::is_sorted(omega.begin(), omega.end()) ||
            std::adjacent_find(omega.begin(), omega.end()) != omega.end())
            throw DomainError("susceptibility table frequencies must be strictly increasing");
        Medium m;
        m.omega_ = std::move(omega);
        m.chi_ = std::move(chi);
        m.validate();
        return m;
    }

    bool is_constant() const { return chi_.size() == 1; }
    const std::vector<double>& omegas() const { return omega_; }
    const std::vector<cplx>& table() const { return chi_; }

    cplx susceptibility(double omega) const {
        if (chi_.size() == 1 || omega <= omega_.front()) return chi_.front();
        if (omega >= omega_.back()) return chi_.back();
        const auto hi = static_cast<std::size_t>(std::upper_bound(omega_.begin(), omega_.end(), omega) - omega_.begin());
        const std::size_t lo = hi - 1;
        const double w = (omega - omega_[lo]) / (omega_[hi] - omega_[lo]);
        return (1.0 - w) * chi_[lo] + w * chi_[hi];
    }

    cplx index(double omega) const { return refractive_index(susceptibility(omega)); }

private:
    Medium() = default;

    // Linear interpolation between passive table points stays passive only
    // approximately; each node is checked and propagation re-checks n''.
    void validate() const {
        for (const cplx& chi : chi_) {
            const cplx n = refractive_index(chi);
            if (n.imag() < 0.0) throw PassivityError("medium has gain (n'' < 0)");
        }
    }

    std::vector<double> omega_;
    std::vector<cplx> chi_;
};

/// c_j -> c_j exp(-omega n'' L / c) exp(i omega n' L / c).
inline SpectralAmplitude propagate_in_medium(SpectralAmplitude s, const Medium& m, double length,
                                             const UnitsConfig& units = {}) {
    if (!(length >= 0.0)) throw DomainError("medium length must be non-negative");
    for (std::size_t j = 0; j < s.c.size(); ++j) {
        const double omega = angular_frequency(s.grid, j, units);
        const cplx n = m.index(omega);
        if (n.imag() < 0.0) throw PassivityError("medium has gain (n'' < 0) at omega = " + std::to_string(omega));
        const double phase = omega * length / units.c;
        s.c[j] *= std::exp(-phase * n.imag()) * std::polar(1.0, phase * n.real());
    }
    return s;
}

enum class FresnelConvention {
    flux_conserving,  ///< r = (n1-n2)/(n1+n2), t = 2 n1/(n1+n2)
    paper_literal,    ///< r = (n-1)/(n+1), t = 2n/(n+1) with n = n2/n1
};

struct FresnelCoefficients {
    cplx r;
    cplx t;
};

inline FresnelCoefficients fresnel_interface(cplx n1, cplx n2,
                                             FresnelConvention conv = FresnelConvention::flux_conserving) {
    auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    if (!finite(n1) || !finite(n2) || n1 == cplx{} || n2 == cplx{})
        throw DomainError("interface indices must be finite and nonzero");
    const cplx sum = n1 + n2;
    if (std::abs(sum) <= 1e-14 * (std::abs(n1) + std::abs(n2))) throw DomainError("degenerate interface: n1 + n2 = 0");
    if (conv == FresnelConvention::paper_literal) {
        const cplx n = n2 / n1;
        return {(n - 1.0) / (n + 1.0), 2.0 * n / (n + 1.0)};
    }
    return {(n1 - n2) / sum, 2.0 * n1 / sum};
}

/// |r|^2 + (Re n2 / Re n1) |t|^2; one for a lossless interface under the
/// flux-conserving convention.
inline double flux_balance(cplx n1, cplx n2, const FresnelCoefficients& f) {
    return std::norm(f.r) + n2.real() / n1.real() * std::norm(f.t);
}

using Vec3 = std::array<double, 3>;

enum class KickMode { reflect, absorb };

inline Vec3 mirror_momentum_kick(const Vec3& p_em, KickMode mode) {
    const double f = mode == KickMode::reflect ? 2.0 : 1.0;
    return {f * p_em[0], f * p_em[1], f * p_em[2]};
}

struct MomentumReport {
    Vec3 p_abraham{};
    std::optional<Vec3> p_minkowski;  ///< empty when chi is complex
    cplx chi{};
};

/// Abraham momentum hbar sum k |c|^2 dk / 2pi along +x, and the Minkowski
/// momentum (1 + chi) p_A for real chi.
inline MomentumReport momentum_report(const SpectralAmplitude& s, cplx chi, const UnitsConfig& units = {}) {
    std::vector<double> terms(s.c.size());
    for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = s.grid.k(j) * std::norm(s.c[j]);
    const double px = units.hbar * detail::pairwise_sum<double>(terms) * s.grid.dk / two_pi;
    MomentumReport rep;
    rep.p_abraham = {px, 0.0, 0.0};
    rep.chi = chi;
    if (chi.imag() == 0.0) {
        const double f = 1.0 + chi.real();
        rep.p_minkowski = Vec3{f * px, 0.0, 0.0};
    }
    return rep;
}

// Circuit elements.

struct PhaseShifter {
    double phi = 0.0;
};

struct BeamSplitter {
    MixMatrix2 mix = MixMatrix2::balanced();
};

struct MediumSegment {
    Medium medium = Medium::constant(0.0);
    double length = 0.0;
};

/// Planar interface at normal incidence. Output 0 is transmitted, output 1
/// reflected.
struct Interface {
    cplx n_in{1.0, 0.0};
    cplx n_out{1.0, 0.0};
    FresnelConvention convention = FresnelConvention::flux_conserving;
};

struct Mirror {};

using ElementSpec = std::variant<PhaseShifter, BeamSplitter, MediumSegment, Interface, Mirror>;

inline std::string kind_name(const ElementSpec& e) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PhaseShifter>) return "phase_shifter";
            else if constexpr (std::is_same_v<T, BeamSplitter>) return "beam_splitter";
            else if constexpr (std::is_same_v<T, MediumSegment>) return "medium_segment";
            else if constexpr (std::is_same_v<T, Interface>) return "interface";
            else return "mirror";
        },
        e);
}

/// (inputs, outputs) for each element kind.
inline std::pair<std::size_t, std::size_t> port_arity(const ElementSpec& e) {
    if (std::holds_alternative<BeamSplitter>(e)) return {2, 2};
    if (std::holds_alternative<Interface>(e)) return {1, 2};
    return {1, 1};
}

/// Element parameter problems, empty when the element is well formed.
inline std::vector<std::string> element_problems(const ElementSpec& e) {
    std::vector<std::string> out;
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
        if (!bs->mix.is_unitary())
            out.push_back("beam splitter violates |r|^2 + |t|^2 = 1 (defect " +
                          std::to_string(bs->mix.unitarity_defect()) + ")");
    } else if (const auto* ms = std::get_if<MediumSegment>(&e)) {
        if (!(ms->length >= 0.0)) out.push_back("medium length must be non-negative");
    } else if (const auto* in = std::get_if<Interface>(&e)) {
        try {
            fresnel_interface(in->n_in, in->n_out, in->convention);
        } catch (const Error& err) {
            out.emplace_back(err.what());
        }
        if (in->n_in.imag() != 0.0) out.push_back("interface incident index must be real (lossless incident side)");
        if (!(in->n_in.real() > 0.0)) out.push_back("interface incident index must have positive real part");
    } else if (const auto* ps = std::get_if<PhaseShifter>(&e)) {
        if (!std::isfinite(ps->phi)) out.push_back("phase must be finite");
    }
    return out;
}

}  // namespace photon
