#pragma once

// Truncated multimode bosonic Fock algebra.
//
// A FockState is a sparse map from occupation tuples to amplitudes. Each
// k-mode carries two helicity slots, so a state over M k-modes has 2M
// occupation numbers, each capped at n_max.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "photon/errors.hpp"
#include "photon/numeric.hpp"

namespace photon {

struct ModeIndex {
    Helicity helicity = Helicity::positive;
    std::size_t mode_id = 0;
};

using Occupation = std::vector<unsigned>;

class FockState {
public:
    FockState(std::size_t mode_count, unsigned n_max) : mode_count_(mode_count), n_max_(n_max) {
        if (mode_count == 0) throw InvalidModeError("FockState needs at least one mode");
    }

    static FockState vacuum(std::size_t mode_count, unsigned n_max) {
        FockState s(mode_count, n_max);
        s.add(Occupation(2 * mode_count, 0u), 1.0);
        return s;
    }

    std::size_t mode_count() const { return mode_count_; }
    std::size_t slot_count() const { return 2 * mode_count_; }
    unsigned n_max() const { return n_max_; }
    const std::map<Occupation, cplx>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    std::size_t slot(ModeIndex m) const {
        const int h = to_int(m.helicity);
        if (h != 1 && h != -1) throw InvalidModeError("helicity must be +1 or -1");
        if (m.mode_id >= mode_count_)
            throw InvalidModeError("mode_id " + std::to_string(m.mode_id) + " >= mode count " +
                                   std::to_string(mode_count_));
        return 2 * m.mode_id + (h == 1 ? 0 : 1);
    }

    /// Accumulates `amp` onto the basis term `occ`. Exact cancellations are
    /// removed so the map only holds nonzero amplitudes.
    void add(const Occupation& occ, cplx amp) {
        if (occ.size() != slot_count()) throw DimensionError("occupation tuple has wrong length");
        for (unsigned n : occ)
            if (n > n_max_) throw TruncationError("occupation exceeds n_max");
        if (amp == cplx{}) return;
        auto [it, inserted] = terms_.try_emplace(occ, amp);
        if (!inserted) {
            it->second += amp;
            if (it->second == cplx{}) terms_.erase(it);
        }
    }

    cplx amplitude(const Occupation& occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? cplx{} : it->second;
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& [occ, amp] : terms_) s += std::norm(amp);
        return s;
    }

    bool is_normalized(double tol = 1e-12) const { return std::abs(norm_squared() - 1.0) <= tol; }

private:
    std::size_t mode_count_;
    unsigned n_max_;
    std::map<Occupation, cplx> terms_;
};

inline FockState apply_annihilation(const FockState& state, ModeIndex mode) {
    const std::size_t s = state.slot(mode);
    FockState out(state.mode_count(), state.n_max());
    for (const auto& [occ, amp] : state.terms()) {
        if (occ[s] == 0) continue;
        Occupation next = occ;
        next[s] -= 1;
        out.add(next, amp * std::sqrt(static_cast<double>(occ[s])));
    }
    return out;
}

inline FockState apply_creation(const FockState& state, ModeIndex mode) {
    const std::size_t s = state.slot(mode);
    FockState out(state.mode_count(), state.n_max());
    for (const auto& [occ, amp] : state.terms()) {
        if (occ[s] >= state.n_max())
            throw TruncationError("creation would exceed n_max = " + std::to_string(state.n_max()));
        Occupation next = occ;
        next[s] += 1;
        out.add(next, amp * std::sqrt(static_cast<double>(occ[s] + 1)));
    }
    return out;
}

/// (a^dagger)^n |0> / sqrt(n!), built by repeated creation.
inline FockState n_photon_state(ModeIndex mode, unsigned n, unsigned n_max, std::size_t mode_count) {
    if (n > n_max)
        throw TruncationError("n = " + std::to_string(n) + " exceeds n_max = " + std::to_string(n_max));
    FockState s = FockState::vacuum(mode_count, n_max);
    double fact = 1.0;
    for (unsigned i = 0; i < n; ++i) {
        s = apply_creation(s, mode);
        fact *= static_cast<double>(i + 1);
    }
    const double scale = 1.0 / std::sqrt(fact);
    FockState out(mode_count, n_max);
    for (const auto& [occ, amp] : s.terms()) out.add(occ, amp * scale);
    return out;
}

/// <s1|s2>, conjugate-linear in the first argument.
inline cplx inner_product(const FockState& s1, const FockState& s2) {
    if (s1.mode_count() != s2.mode_count())
        throw DimensionError("inner product of states over different mode sets");
    cplx acc{};
    for (const auto& [occ, amp] : s1.terms()) acc += std::conj(amp) * s2.amplitude(occ);
    return acc;
}

inline double number_expectation(const FockState& state, ModeIndex mode) {
    const std::size_t s = state.slot(mode);
    if (!state.is_normalized())
        throw NormalizationError("number expectation requires a normalized state");
    double n = 0.0;
    for (const auto& [occ, amp] : state.terms()) n += occ[s] * std::norm(amp);
    return n;
}

inline double total_number_expectation(const FockState& state) {
    if (!state.is_normalized())
        throw NormalizationError("number expectation requires a normalized state");
    double n = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        unsigned total = 0;
        for (unsigned k : occ) total += k;
        n += total * std::norm(amp);
    }
    return n;
}

/// Max-norm of ([a, a^dagger] - I) over single-mode levels 0..n_max-1.
/// The top level is excluded; see full_commutator_residual.
inline double commutator_residual(unsigned n_max) {
    if (n_max < 2) throw DomainError("commutator_residual needs n_max >= 2");
    const ModeIndex m{};
    double worst = 0.0;
    for (unsigned n = 0; n < n_max; ++n) {
        const FockState ket = n_photon_state(m, n, n_max, 1);
        const FockState aad = apply_annihilation(apply_creation(ket, m), m);
        const FockState ada = apply_creation(apply_annihilation(ket, m), m);
        FockState diff(1, n_max);
        for (const auto& [occ, amp] : aad.terms()) diff.add(occ, amp);
        for (const auto& [occ, amp] : ada.terms()) diff.add(occ, -amp);
        for (const auto& [occ, amp] : ket.terms()) diff.add(occ, -amp);
        for (const auto& [occ, amp] : diff.terms()) worst = std::max(worst, std::abs(amp));
    }
    return worst;
}

/// Same residual over the whole truncated space 0..n_max, where a^dagger
/// maps the top level to zero. The cutoff defect there is n_max + 1.
inline double full_commutator_residual(unsigned n_max) {
    double worst = commutator_residual(n_max);
    // Top level: a a^dagger |n_max> = 0 and a^dagger a |n_max> = n_max |n_max>.
    worst = std::max(worst, std::abs(0.0 - static_cast<double>(n_max) - 1.0));
    return worst;
}

/// Beam-splitter mode mixer in the (t, r; -r*, t*) convention:
/// a_A^dagger -> t a_A^dagger + r a_B^dagger, a_B^dagger -> -r* a_A^dagger + t* a_B^dagger.
struct MixMatrix2 {
    cplx t{1.0, 0.0};
    cplx r{0.0, 0.0};

    static MixMatrix2 balanced() { return {cplx{1.0 / std::sqrt(2.0), 0.0}, cplx{1.0 / std::sqrt(2.0), 0.0}}; }

    double unitarity_defect() const { return std::abs(std::norm(t) + std::norm(r) - 1.0); }
    bool is_unitary(double tol = 1e-12) const { return unitarity_defect() <= tol; }

    /// Single-photon amplitudes on (A, B) after the mixer.
    std::pair<cplx, cplx> apply(cplx alpha, cplx beta) const {
        return {t * alpha - std::conj(r) * beta, r * alpha + std::conj(t) * beta};
    }
};

inline FockState two_mode_mix(const FockState& state, ModeIndex ma, ModeIndex mb, const MixMatrix2& u) {
    if (!u.is_unitary())
        throw UnitarityError("mix matrix is not unitary (defect " + std::to_string(u.unitarity_defect()) + ")");
    const std::size_t sa = state.slot(ma);
    const std::size_t sb = state.slot(mb);
    if (sa == sb) throw InvalidModeError("two_mode_mix needs two distinct modes");

    std::vector<double> fact(2 * state.n_max() + 2, 1.0);
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
    auto binom = [&](unsigned n, unsigned k) { return fact[n] / (fact[k] * fact[n - k]); };

    auto ipow = [](cplx z, unsigned e) {
        cplx acc{1.0, 0.0};
        for (unsigned i = 0; i < e; ++i) acc *= z;
        return acc;
    };
    const cplx ta = u.t, ra = u.r, tb = std::conj(u.t), rb = -std::conj(u.r);
    FockState out(state.mode_count(), state.n_max());
    for (const auto& [occ, amp] : state.terms()) {
        const unsigned na = occ[sa], nb = occ[sb];
        if (na + nb > state.n_max())
            throw TruncationError("combined occupation of mixed modes exceeds n_max");
        const double norm_in = std::sqrt(fact[na] * fact[nb]);
        for (unsigned p = 0; p <= na; ++p) {
            for (unsigned q = 0; q <= nb; ++q) {
                const unsigned out_a = p + q;
                const unsigned out_b = na + nb - out_a;
                const cplx coeff = binom(na, p) * ipow(ta, p) * ipow(ra, na - p) * binom(nb, q) *
                                   ipow(rb, q) * ipow(tb, nb - q);
                Occupation next = occ;
                next[sa] = out_a;
                next[sb] = out_b;
                out.add(next, amp * coeff * std::sqrt(fact[out_a] * fact[out_b]) / norm_in);
            }
        }
    }
    return out;
}

}  // namespace photon
