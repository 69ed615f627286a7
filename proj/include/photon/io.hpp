#pragma once

// JSON and CSV formats: spectral amplitudes, netlists, circuit results and
// sampled fields. Doubles are written with 17 significant digits so files
// round-trip and identical runs produce identical bytes.

#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "photon/circuit.hpp"
#include "photon/density.hpp"
#include "photon/errors.hpp"
#include "photon/localized.hpp"
#include "photon/optics.hpp"
#include "photon/spectral.hpp"

namespace photon {

/// Malformed or inconsistent input files.
class InputError : public Error {
public:
    using Error::Error;
};

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// SpectralAmplitude <-> {N, dk, area, helicity, re[], im[]}

inline json to_json(const SpectralAmplitude& s) {
    std::vector<double> re(s.c.size()), im(s.c.size());
    for (std::size_t j = 0; j < s.c.size(); ++j) {
        re[j] = s.c[j].real();
        im[j] = s.c[j].imag();
    }
    return json{{"N", s.grid.n}, {"dk", s.grid.dk}, {"area", s.grid.area},
                {"helicity", to_int(s.helicity)}, {"re", re}, {"im", im}};
}

inline Helicity parse_helicity(const json& j) {
    if (!j.is_number_integer()) throw InputError("helicity must be +1 or -1");
    const int h = j.get<int>();
    if (h != 1 && h != -1) throw InputError("helicity must be +1 or -1");
    return h == 1 ? Helicity::positive : Helicity::negative;
}

inline SpectralAmplitude amplitude_from_json(const json& j) {
    try {
        SpectralAmplitude s;
        s.grid.n = j.at("N").get<std::size_t>();
        s.grid.dk = j.at("dk").get<double>();
        s.grid.area = j.at("area").get<double>();
        s.helicity = parse_helicity(j.at("helicity"));
        const auto re = j.at("re").get<std::vector<double>>();
        const auto im = j.at("im").get<std::vector<double>>();
        if (re.size() != s.grid.n || im.size() != s.grid.n) throw InputError("re/im arrays must have N entries");
        s.c.resize(s.grid.n);
        for (std::size_t i = 0; i < s.grid.n; ++i) s.c[i] = {re[i], im[i]};
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad spectral amplitude: ") + e.what());
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(std::string("bad spectral amplitude: ") + e.what());
    }
}

/// A number, or [re, im].
inline cplx parse_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InputError("expected a number or a [re, im] pair");
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// State specs: {"gaussian": {k0, sigma, x0?, helicity?}}, {"single_mode":
/// {bin, helicity?}}, {"zero": {helicity?}}, or an explicit amplitude.
inline SpectralAmplitude state_from_json(const json& j, const KGrid1D& grid) {
    try {
        if (!j.is_object()) throw InputError("state spec must be a JSON object");
        auto helicity_of = [](const json& o) {
            return o.contains("helicity") ? parse_helicity(o.at("helicity")) : Helicity::positive;
        };
        if (j.contains("gaussian")) {
            const auto& g = j.at("gaussian");
            std::optional<double> x0;
            if (g.contains("x0")) x0 = g.at("x0").get<double>();
            return make_gaussian_state(g.at("k0").get<double>(), g.at("sigma").get<double>(), grid, helicity_of(g), x0);
        }
        if (j.contains("single_mode")) {
            const auto& g = j.at("single_mode");
            return make_single_mode_state(g.at("bin").get<std::size_t>(), grid, helicity_of(g));
        }
        if (j.contains("zero")) return zero_state(grid, helicity_of(j.at("zero")));
        if (j.contains("N")) return amplitude_from_json(j);
        throw InputError("unrecognized state spec (expected gaussian, single_mode, zero or an amplitude)");
    } catch (const json::exception& e) {
        throw InputError(std::string("bad state spec: ") + e.what());
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(std::string("bad state spec: ") + e.what());
    }
}

/// CSV rows "omega, Re chi, Im chi"; a non-numeric first line is a header.
inline Medium medium_from_csv(std::istream& in) {
    std::vector<double> omega;
    std::vector<cplx> chi;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
            throw InputError("medium table row needs three columns: " + line);
        try {
            omega.push_back(std::stod(a));
            chi.emplace_back(std::stod(b), std::stod(c));
        } catch (const std::exception&) {
            if (first) {
                first = false;
                continue;
            }
            throw InputError("non-numeric medium table row: " + line);
        }
        first = false;
    }
    try {
        return Medium::tabulated(std::move(omega), std::move(chi));
    } catch (const Error& e) {
        throw InputError(std::string("bad medium table: ") + e.what());
    }
}

inline Medium medium_from_json(const json& p, const std::string& base_dir) {
    if (p.contains("chi")) return Medium::constant(parse_complex(p.at("chi")));
    if (p.contains("chi_table")) {
        std::vector<double> omega;
        std::vector<cplx> chi;
        for (const auto& row : p.at("chi_table")) {
            if (!row.is_array() || row.size() != 3) throw InputError("chi_table rows are [omega, re, im]");
            omega.push_back(row[0].get<double>());
            chi.emplace_back(row[1].get<double>(), row[2].get<double>());
        }
        return Medium::tabulated(std::move(omega), std::move(chi));
    }
    if (p.contains("chi_csv")) {
        std::string path = p.at("chi_csv").get<std::string>();
        if (!path.empty() && path[0] != '/' && !base_dir.empty()) path = base_dir + "/" + path;
        std::ifstream f(path);
        if (!f) throw InputError("cannot open medium table " + path);
        return medium_from_csv(f);
    }
    return Medium::constant(0.0);
}

inline ElementSpec element_spec_from_json(const std::string& kind, const json& p, const std::string& base_dir) {
    if (kind == "phase_shifter") return PhaseShifter{p.value("phi", 0.0)};
    if (kind == "beam_splitter") {
        BeamSplitter bs;
        bs.mix.t = p.contains("t") ? parse_complex(p.at("t")) : cplx{1.0 / std::sqrt(2.0), 0.0};
        bs.mix.r = p.contains("r") ? parse_complex(p.at("r")) : cplx{1.0 / std::sqrt(2.0), 0.0};
        return bs;
    }
    if (kind == "medium_segment") return MediumSegment{medium_from_json(p, base_dir), p.value("length", 0.0)};
    if (kind == "interface") {
        Interface in;
        in.n_in = p.contains("n_in") ? parse_complex(p.at("n_in")) : cplx{1.0, 0.0};
        in.n_out = p.contains("n_out") ? parse_complex(p.at("n_out")) : cplx{1.0, 0.0};
        const std::string conv = p.value("convention", std::string("flux"));
        if (conv == "paper") in.convention = FresnelConvention::paper_literal;
        else if (conv != "flux") throw InputError("interface convention must be 'flux' or 'paper'");
        return in;
    }
    if (kind == "mirror") return Mirror{};
    throw InputError("unknown element kind '" + kind + "'");
}

/// Parses the netlist schema. Structural problems (wiring, arity, cycles)
/// are left to validate(); only malformed JSON raises here.
inline Netlist netlist_from_json(const json& j, const KGrid1D& grid, const std::string& base_dir = "") {
    try {
        Netlist n;
        for (const auto& e : j.at("elements")) {
            Element el;
            el.id = e.at("id").get<std::string>();
            const json params = e.contains("params") ? e.at("params") : json::object();
            el.spec = element_spec_from_json(e.at("kind").get<std::string>(), params, base_dir);
            if (e.contains("in")) el.in = e.at("in").get<std::vector<std::string>>();
            if (e.contains("out")) el.out = e.at("out").get<std::vector<std::string>>();
            n.elements.push_back(std::move(el));
        }
        for (const auto& s : j.at("sources")) {
            Source src;
            src.port = s.at("port").get<std::string>();
            if (s.contains("amplitude")) src.amplitude = parse_complex(s.at("amplitude"));
            if (!s.value("vacuum", false)) src.state = state_from_json(s.at("state"), grid);
            else src.amplitude = 0.0;
            n.sources.push_back(std::move(src));
        }
        n.detectors = j.at("detectors").get<std::vector<std::string>>();
        return n;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad netlist: ") + e.what());
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(std::string("bad netlist: ") + e.what());
    }
}

inline json violations_to_json(const std::vector<Violation>& v) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back({{"kind", to_string(x.kind)}, {"where", x.element}, {"message", x.message}});
    return arr;
}

inline json circuit_result_to_json(const CircuitResult& r) {
    json det = json::object();
    for (const auto& d : r.state.detectors) {
        const auto& p = r.state.ports.at(d);
        det[d] = {{"probability", p.probability()}, {"delay", p.delay}};
    }
    json rows = json::array();
    for (const auto& row : r.ledger.rows)
        rows.push_back({{"element", row.element}, {"number_in", row.number_in}, {"number_out", row.number_out},
                        {"absorbed", row.absorbed}});
    return json{{"detectors", det},
                {"absorbed", r.state.absorbed},
                {"total", r.state.detected_total() + r.state.absorbed},
                {"ledger", rows}};
}

// CSV

inline void write_fields_csv(std::ostream& out, const FieldSet& f) {
    out << "x,re_A+,im_A+,re_E+,im_E+\n";
    for (std::size_t i = 0; i < f.a_plus.size(); ++i)
        out << format_double(f.grid.x(i)) << ',' << format_double(f.a_plus[i].real()) << ','
            << format_double(f.a_plus[i].imag()) << ',' << format_double(f.e_plus[i].real()) << ','
            << format_double(f.e_plus[i].imag()) << '\n';
}

/// Header comment carries t, k_max and the unit system, then x, rho, J.
inline void write_density_csv(std::ostream& out, const DensityField& d, const CurrentField& j, double k_max,
                              const std::string& units) {
    out << "# t=" << format_double(d.t) << ",k_max=" << format_double(k_max) << ",units=" << units << '\n';
    out << "x,rho,J\n";
    for (std::size_t i = 0; i < d.values.size(); ++i)
        out << format_double(d.grid.x(i)) << ',' << format_double(d.values[i].real()) << ','
            << format_double(j.values[i].real()) << '\n';
}

/// Columns: position (u or r), Re rho+, Im rho+, physical rho.
inline void write_split_csv(std::ostream& out, const SplitDensity& d, const std::string& position_name, double t,
                            double k_max, const std::string& units) {
    out << "# t=" << format_double(t) << ",k_max=" << format_double(k_max) << ",units=" << units << '\n';
    out << position_name << ",re_rho+,im_rho+,rho\n";
    for (std::size_t i = 0; i < d.positions.size(); ++i)
        out << format_double(d.positions[i]) << ',' << format_double(d.rho_plus[i].real()) << ','
            << format_double(d.rho_plus[i].imag()) << ',' << format_double(2.0 * d.rho_plus[i].real()) << '\n';
}

}  // namespace photon
