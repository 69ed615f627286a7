#pragma once

// Random feed-forward netlists for conservation tests. Every open port at
// the end becomes a detector, so the result is always valid.

#include <random>
#include <string>
#include <vector>

#include "photon/circuit.hpp"

namespace photon::fixtures {

inline Netlist random_netlist(std::mt19937_64& rng, const SpectralAmplitude& pulse, int steps = 12) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Netlist n;
    std::vector<std::string> open;
    int port_id = 0, elem_id = 0;
    auto fresh = [&] { return "p" + std::to_string(port_id++); };

    // One photon spread coherently over 1-3 input rails.
    const int rails = 1 + static_cast<int>(U(rng) * 3.0);
    std::vector<cplx> amps;
    double norm = 0.0;
    for (int i = 0; i < rails; ++i) {
        amps.push_back(std::polar(0.2 + U(rng), two_pi * U(rng)));
        norm += std::norm(amps.back());
    }
    for (int i = 0; i < rails; ++i) {
        const auto p = fresh();
        n.sources.push_back({p, amps[i] / std::sqrt(norm), pulse});
        open.push_back(p);
    }
    auto take = [&] {
        const auto i = static_cast<std::size_t>(U(rng) * open.size());
        auto p = open[i];
        open.erase(open.begin() + static_cast<long>(i));
        return p;
    };

    for (int s = 0; s < steps; ++s) {
        const double pick = U(rng);
        Element e;
        e.id = "e" + std::to_string(elem_id++);
        if (pick < 0.3) {
            const double th = 0.5 * pi * U(rng);
            e.spec = BeamSplitter{MixMatrix2{std::polar(std::cos(th), two_pi * U(rng)),
                                             std::polar(std::sin(th), two_pi * U(rng))}};
            e.in.push_back(take());
            if (open.empty()) {
                const auto v = fresh();
                n.sources.push_back({v, cplx{}, std::nullopt});
                e.in.push_back(v);
            } else {
                e.in.push_back(take());
            }
            e.out = {fresh(), fresh()};
        } else if (pick < 0.5) {
            e.spec = PhaseShifter{two_pi * U(rng)};
            e.in = {take()};
            e.out = {fresh()};
        } else if (pick < 0.75) {
            const cplx chi{1.5 * U(rng), U(rng) < 0.5 ? 0.0 : 0.002 * U(rng)};
            e.spec = MediumSegment{Medium::constant(chi), 2.0 * U(rng)};
            e.in = {take()};
            e.out = {fresh()};
        } else if (pick < 0.9) {
            e.spec = Interface{1.0 + U(rng), cplx{1.0 + 2.0 * U(rng), 0.05 * U(rng)}};
            e.in = {take()};
            e.out = {fresh(), fresh()};
        } else {
            e.spec = Mirror{};
            e.in = {take()};
            e.out = {fresh()};
        }
        for (const auto& p : e.out) open.push_back(p);
        n.elements.push_back(std::move(e));
    }
    n.detectors = open;
    return n;
}

}  // namespace photon::fixtures
