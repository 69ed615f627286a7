#pragma once

// Single-photon propagation through a feed-forward netlist of optical
// elements, with a per-element photon-number ledger.
//
// Each port carries a path amplitude and a spectral amplitude; the
// probability of finding the photon on a port is |amplitude|^2 times the
// photon number of its spectrum. Elements act multiplicatively in k-space,
// so loss and dispersion stay frequency resolved.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "photon/errors.hpp"
#include "photon/fock.hpp"
#include "photon/numeric.hpp"
#include "photon/optics.hpp"
#include "photon/spectral.hpp"
#include "photon/units.hpp"

namespace photon {

struct Element {
    std::string id;
    ElementSpec spec;
    std::vector<std::string> in;
    std::vector<std::string> out;
};

/// Photon injected on `port` with path amplitude `amplitude`. A source with
/// no state is a vacuum input (used to terminate unused splitter ports).
struct Source {
    std::string port;
    cplx amplitude{1.0, 0.0};
    std::optional<SpectralAmplitude> state;
};

struct Netlist {
    std::vector<Element> elements;
    std::vector<Source> sources;
    std::vector<std::string> detectors;
};

enum class ViolationKind {
    duplicate_id,
    arity,
    multiple_producers,
    multiple_consumers,
    unterminated_output,
    unknown_detector_port,
    cycle,
    element_parameter,
    source,
};

inline std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::duplicate_id: return "duplicate_id";
        case ViolationKind::arity: return "arity";
        case ViolationKind::multiple_producers: return "multiple_producers";
        case ViolationKind::multiple_consumers: return "multiple_consumers";
        case ViolationKind::unterminated_output: return "unterminated_output";
        case ViolationKind::unknown_detector_port: return "unknown_detector_port";
        case ViolationKind::cycle: return "cycle";
        case ViolationKind::element_parameter: return "element_parameter";
        case ViolationKind::source: return "source";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::string element;  ///< element id, port name, or empty
    std::string message;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> v)
        : Error("netlist failed validation (" + std::to_string(v.size()) + " violation(s))"), violations_(std::move(v)) {}
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

namespace detail {

// Kahn's algorithm, always releasing the lowest-index ready element so the
// order is deterministic. Elements left unreleased sit on a cycle.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> topological_order(const Netlist& n) {
    std::map<std::string, std::size_t> producer;
    for (std::size_t i = 0; i < n.elements.size(); ++i)
        for (const auto& p : n.elements[i].out) producer.emplace(p, i);
    std::vector<std::set<std::size_t>> deps(n.elements.size());
    std::vector<std::vector<std::size_t>> dependents(n.elements.size());
    for (std::size_t i = 0; i < n.elements.size(); ++i)
        for (const auto& p : n.elements[i].in)
            if (auto it = producer.find(p); it != producer.end() && deps[i].insert(it->second).second)
                dependents[it->second].push_back(i);

    std::vector<std::size_t> pending(n.elements.size());
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < n.elements.size(); ++i) {
        pending[i] = deps[i].size();
        if (pending[i] == 0) ready.insert(i);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const std::size_t i = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(i);
        for (std::size_t d : dependents[i])
            if (--pending[d] == 0) ready.insert(d);
    }
    std::vector<std::size_t> stuck;
    for (std::size_t i = 0; i < n.elements.size(); ++i)
        if (pending[i] > 0) stuck.push_back(i);
    return {order, stuck};
}

}  // namespace detail

/// All structural and parameter problems; empty iff the netlist can run.
inline std::vector<Violation> validate(const Netlist& n) {
    std::vector<Violation> out;
    std::map<std::string, int> producers, consumers;
    std::set<std::string> ids;

    for (const auto& s : n.sources) ++producers[s.port];
    for (const auto& e : n.elements) {
        if (!ids.insert(e.id).second) out.push_back({ViolationKind::duplicate_id, e.id, "element id used more than once"});
        const auto [ni, no] = port_arity(e.spec);
        if (e.in.size() != ni || e.out.size() != no)
            out.push_back({ViolationKind::arity, e.id,
                           kind_name(e.spec) + " needs " + std::to_string(ni) + " input(s) and " + std::to_string(no) +
                               " output(s), got " + std::to_string(e.in.size()) + " and " +
                               std::to_string(e.out.size())});
        for (const auto& msg : element_problems(e.spec)) out.push_back({ViolationKind::element_parameter, e.id, msg});
        for (const auto& p : e.out) ++producers[p];
        for (const auto& p : e.in) ++consumers[p];
    }
    for (const auto& d : n.detectors) ++consumers[d];

    for (const auto& [port, count] : producers)
        if (count > 1) out.push_back({ViolationKind::multiple_producers, port, "port is driven by more than one output"});
    for (const auto& [port, count] : consumers)
        if (count > 1) out.push_back({ViolationKind::multiple_consumers, port, "port feeds more than one input"});

    for (const auto& e : n.elements) {
        for (const auto& p : e.in)
            if (!producers.count(p))
                out.push_back({ViolationKind::arity, e.id, "input port '" + p + "' is unwired"});
        for (const auto& p : e.out)
            if (!consumers.count(p))
                out.push_back({ViolationKind::unterminated_output, e.id, "output port '" + p + "' goes nowhere"});
    }
    for (const auto& s : n.sources)
        if (!consumers.count(s.port))
            out.push_back({ViolationKind::unterminated_output, s.port, "source port goes nowhere"});
    for (const auto& d : n.detectors)
        if (!producers.count(d)) out.push_back({ViolationKind::unknown_detector_port, d, "detector port is never driven"});

    const auto [order, stuck] = detail::topological_order(n);
    for (std::size_t i : stuck) out.push_back({ViolationKind::cycle, n.elements[i].id, "element lies on a wiring cycle"});

    // Sources: one shared grid and helicity, unit total probability.
    const SpectralAmplitude* first = nullptr;
    double total = 0.0;
    for (const auto& s : n.sources) {
        if (!s.state) continue;
        try {
            s.state->validate();
        } catch (const Error& err) {
            out.push_back({ViolationKind::source, s.port, err.what()});
            continue;
        }
        if (first && (!(first->grid == s.state->grid) || first->helicity != s.state->helicity)) {
            out.push_back({ViolationKind::source, s.port, "sources must share one grid and helicity"});
            continue;
        }
        if (!first) first = &*s.state;
        total += std::norm(s.amplitude) * photon_number(*s.state);
    }
    if (!first) out.push_back({ViolationKind::source, "", "netlist has no photon source"});
    else if (std::abs(total - 1.0) > 1e-9)
        out.push_back({ViolationKind::source, "", "sources carry " + std::to_string(total) + " photons, expected 1"});
    return out;
}

struct PortPulse {
    cplx path_amplitude{};
    SpectralAmplitude spectrum;
    double delay = 0.0;

    double probability() const { return std::norm(path_amplitude) * photon_number(spectrum); }
};

struct PulseState {
    std::map<std::string, PortPulse> ports;
    std::vector<std::string> detectors;
    double absorbed = 0.0;

    double probability(const std::string& port) const {
        auto it = ports.find(port);
        return it == ports.end() ? 0.0 : it->second.probability();
    }

    double detected_total() const {
        double s = 0.0;
        for (const auto& d : detectors) s += probability(d);
        return s;
    }
};

struct LedgerRow {
    std::string element;
    double number_in = 0.0;
    double number_out = 0.0;
    double absorbed = 0.0;
};

struct Ledger {
    std::vector<LedgerRow> rows;

    double total_absorbed() const {
        double s = 0.0;
        for (const auto& r : rows) s += r.absorbed;
        return s;
    }
};

struct CircuitResult {
    PulseState state;
    Ledger ledger;
};

namespace detail {

inline PortPulse scaled_pulse(const PortPulse& p, cplx factor) {
    PortPulse q = p;
    q.path_amplitude *= factor;
    return q;
}

// Mean frequency of |c|^2, for delay bookkeeping in dispersive media.
inline double mean_omega(const SpectralAmplitude& s, const UnitsConfig& u) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < s.c.size(); ++j) {
        const double w = std::norm(s.c[j]);
        num += w * angular_frequency(s.grid, j, u);
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

// Coherent two-input mixing. When only one input carries light, its
// spectrum is kept and the path amplitude is split by (t, r).
inline std::pair<PortPulse, PortPulse> mix_pulses(const PortPulse& a, const PortPulse& b, const MixMatrix2& u) {
    const bool has_a = a.probability() > 0.0;
    const bool has_b = b.probability() > 0.0;
    if (!has_b) {
        auto [fa, fb] = u.apply(1.0, 0.0);
        return {scaled_pulse(a, fa), scaled_pulse(a, fb)};
    }
    if (!has_a) {
        auto [fa, fb] = u.apply(0.0, 1.0);
        return {scaled_pulse(b, fa), scaled_pulse(b, fb)};
    }
    PortPulse oa{cplx{1.0, 0.0}, a.spectrum, 0.0};
    PortPulse ob{cplx{1.0, 0.0}, b.spectrum, 0.0};
    for (std::size_t j = 0; j < a.spectrum.c.size(); ++j) {
        const auto [x, y] = u.apply(a.path_amplitude * a.spectrum.c[j], b.path_amplitude * b.spectrum.c[j]);
        oa.spectrum.c[j] = x;
        ob.spectrum.c[j] = y;
    }
    const double pa = a.probability(), pb = b.probability();
    const double d = (pa * a.delay + pb * b.delay) / (pa + pb);
    oa.delay = d;
    ob.delay = d;
    return {oa, ob};
}

// Elements that cannot absorb by construction; their ledger rows record
// exactly zero rather than the rounding residue of in - out.
inline bool is_lossless(const ElementSpec& spec) {
    if (const auto* m = std::get_if<MediumSegment>(&spec)) {
        for (const cplx& chi : m->medium.table())
            if (refractive_index(chi).imag() != 0.0) return false;
        return true;
    }
    if (const auto* i = std::get_if<Interface>(&spec)) return i->convention == FresnelConvention::flux_conserving;
    return true;
}

}  // namespace detail

/// Propagates the photon through the netlist in topological order.
/// Throws ValidationError when validate() reports anything.
inline CircuitResult run_circuit(const Netlist& n, const UnitsConfig& units = {}) {
    if (auto v = validate(n); !v.empty()) throw ValidationError(std::move(v));

    const SpectralAmplitude* reference = nullptr;
    for (const auto& s : n.sources)
        if (s.state) {
            reference = &*s.state;
            break;
        }
    const SpectralAmplitude vacuum = zero_state(reference->grid, reference->helicity);

    CircuitResult res;
    auto& ports = res.state.ports;
    for (const auto& s : n.sources)
        ports[s.port] = s.state ? PortPulse{s.amplitude, *s.state, 0.0} : PortPulse{cplx{}, vacuum, 0.0};

    const auto order = detail::topological_order(n).first;
    for (std::size_t idx : order) {
        const Element& e = n.elements[idx];
        std::vector<PortPulse> in;
        double number_in = 0.0;
        for (const auto& p : e.in) {
            in.push_back(ports.at(p));
            number_in += in.back().probability();
        }
        std::vector<PortPulse> out;
        std::visit(
            [&](const auto& spec) {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, PhaseShifter>) {
                    out.push_back(detail::scaled_pulse(in[0], std::polar(1.0, spec.phi)));
                } else if constexpr (std::is_same_v<T, BeamSplitter>) {
                    auto [a, b] = detail::mix_pulses(in[0], in[1], spec.mix);
                    out = {a, b};
                } else if constexpr (std::is_same_v<T, MediumSegment>) {
                    PortPulse p = in[0];
                    const double w = detail::mean_omega(p.spectrum, units);
                    p.spectrum = propagate_in_medium(p.spectrum, spec.medium, spec.length, units);
                    p.delay += spec.length * spec.medium.index(w).real() / units.c;
                    out.push_back(p);
                } else if constexpr (std::is_same_v<T, Interface>) {
                    const auto f = fresnel_interface(spec.n_in, spec.n_out, spec.convention);
                    cplx t_amp = f.t;
                    if (spec.convention == FresnelConvention::flux_conserving)
                        t_amp *= std::sqrt(spec.n_out.real() / spec.n_in.real());
                    out.push_back(detail::scaled_pulse(in[0], t_amp));
                    out.push_back(detail::scaled_pulse(in[0], f.r));
                } else {
                    out.push_back(in[0]);
                }
            },
            e.spec);

        LedgerRow row{e.id, number_in, 0.0, 0.0};
        for (std::size_t k = 0; k < out.size(); ++k) {
            row.number_out += out[k].probability();
            ports[e.out[k]] = std::move(out[k]);
        }
        row.absorbed = detail::is_lossless(e.spec) ? 0.0 : row.number_in - row.number_out;
        res.ledger.rows.push_back(row);
    }
    res.state.detectors = n.detectors;
    res.state.absorbed = res.ledger.total_absorbed();
    return res;
}

/// Joint click probability on two distinct detectors. The port
/// probabilities are embedded as a single-photon-sector Fock state over the
/// detector modes and the |1,1> weight is read off it.
inline double coincidence_probability(const PulseState& p, const std::string& da, const std::string& db) {
    if (da == db) throw PortError("coincidence needs two distinct detectors");
    const auto ia = std::find(p.detectors.begin(), p.detectors.end(), da);
    const auto ib = std::find(p.detectors.begin(), p.detectors.end(), db);
    if (ia == p.detectors.end()) throw PortError("unknown detector port '" + da + "'");
    if (ib == p.detectors.end()) throw PortError("unknown detector port '" + db + "'");

    FockState fock(p.detectors.size(), 1);
    const std::size_t slots = fock.slot_count();
    fock.add(Occupation(slots, 0u), std::sqrt(std::max(0.0, p.absorbed)));
    for (std::size_t d = 0; d < p.detectors.size(); ++d) {
        Occupation occ(slots, 0u);
        occ[fock.slot({Helicity::positive, d})] = 1;
        fock.add(occ, std::sqrt(p.probability(p.detectors[d])));
    }
    const std::size_t sa = fock.slot({Helicity::positive, static_cast<std::size_t>(ia - p.detectors.begin())});
    const std::size_t sb = fock.slot({Helicity::positive, static_cast<std::size_t>(ib - p.detectors.begin())});
    double joint = 0.0;
    for (const auto& [occ, amp] : fock.terms())
        if (occ[sa] > 0 && occ[sb] > 0) joint += std::norm(amp);
    return joint;
}

struct DetectionOutcome {
    std::string detector;  ///< empty when absorbed
    bool absorbed = false;
};

inline constexpr const char* absorbed_label = "absorbed";

namespace detail {

inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Outcome weights: detectors in order, then absorption.
inline std::vector<double> outcome_weights(const PulseState& p) {
    std::vector<double> weights;
    for (const auto& d : p.detectors) weights.push_back(p.probability(d));
    weights.push_back(std::max(0.0, p.absorbed));
    return weights;
}

inline DetectionOutcome draw(const PulseState& p, const std::vector<double>& weights, std::mt19937_64& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double x = unit_uniform(rng) * total;
    double acc = 0.0;
    std::size_t pick = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        pick = i;
        if (x < acc) break;
    }
    if (pick + 1 >= weights.size()) return {"", true};
    return {p.detectors[pick], false};
}

}  // namespace detail

/// One ideal photon-counting measurement. After it the field is in the
/// zero-photon state (see collapse()).
inline DetectionOutcome detect_sample(const PulseState& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return detail::draw(p, detail::outcome_weights(p), rng);
}

/// Outcome histogram of `count` independent measurements on copies of the
/// state; keys are detector ports plus "absorbed".
inline std::map<std::string, std::size_t> sample_counts(const PulseState& p, std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::map<std::string, std::size_t> hist;
    for (const auto& d : p.detectors) hist[d] = 0;
    hist[absorbed_label] = 0;
    const auto weights = detail::outcome_weights(p);
    for (std::size_t i = 0; i < count; ++i) {
        const auto o = detail::draw(p, weights, rng);
        ++hist[o.absorbed ? std::string(absorbed_label) : o.detector];
    }
    return hist;
}

/// The post-measurement state: every port empty, nothing left to absorb.
inline PulseState collapse(const PulseState& p) {
    PulseState out = p;
    for (auto& [port, pulse] : out.ports) pulse.path_amplitude = cplx{};
    out.absorbed = 0.0;
    return out;
}

}  // namespace photon
