// photon: batch front end for the photon library.
//
//   photon [--units natural|si] [--out DIR] [--seed N] [--grid N,dk,area] <command> ...
//
// Exit codes: 0 ok, 2 bad input or failed validation, 3 numerical invariant
// breached (outputs are still written so the breach can be inspected).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "photon/circuit.hpp"
#include "photon/density.hpp"
#include "photon/io.hpp"
#include "photon/localized.hpp"
#include "photon/optics.hpp"

namespace fs = std::filesystem;
using namespace photon;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_invariant = 3;

struct RunConfig {
    UnitsConfig units;
    KGrid1D grid;
    fs::path out = ".";
    std::uint64_t seed = 0;
};

KGrid1D parse_grid(const std::string& spec) {
    std::stringstream ss(spec);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') || ss.rdbuf()->in_avail())
        throw InputError("--grid expects N,dk,area");
    KGrid1D g;
    try {
        std::size_t used = 0;
        const long long n = std::stoll(a, &used);
        if (used != a.size() || n <= 0) throw InputError("--grid N must be a positive integer");
        g.n = static_cast<std::size_t>(n);
        g.dk = std::stod(b);
        g.area = std::stod(c);
    } catch (const std::logic_error&) {
        throw InputError("--grid expects numeric N,dk,area");
    }
    try {
        g.validate();
    } catch (const Error& e) {
        throw InputError(std::string("--grid: ") + e.what());
    }
    return g;
}

// "re" or "re,im"
cplx parse_complex_arg(const std::string& s, const std::string& name) {
    try {
        const auto comma = s.find(',');
        std::size_t used = 0;
        const double re = std::stod(s.substr(0, comma), &used);
        if (comma == std::string::npos) {
            if (used != s.size()) throw std::invalid_argument(s);
            return {re, 0.0};
        }
        const std::string tail = s.substr(comma + 1);
        const double im = std::stod(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(s);
        return {re, im};
    } catch (const std::logic_error&) {
        throw InputError(name + " expects re or re,im (got '" + s + "')");
    }
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    std::ofstream f(cfg.out / name, std::ios::binary);
    if (!f) throw InputError("cannot write " + (cfg.out / name).string());
    return f;
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
    auto f = open_output(cfg, name);
    f << j.dump(2) << '\n';
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

// density

struct DensityArgs {
    std::string state;
    double t = 0.0;
    double dt = 0.0;
};

// omega_rms dt = 1/200 keeps the centred-difference error well below the
// audit tolerance whatever the grid spacing.
double default_audit_step(const SpectralAmplitude& s, const UnitsConfig& u) {
    double w = 0.0, k2 = 0.0;
    for (std::size_t j = 0; j < s.c.size(); ++j) {
        w += std::norm(s.c[j]);
        k2 += std::norm(s.c[j]) * s.grid.k(j) * s.grid.k(j);
    }
    const double k_rms = w > 0.0 ? std::sqrt(k2 / w) : s.grid.k_max();
    return 1.0 / (200.0 * u.c * k_rms);
}

int cmd_density(const RunConfig& cfg, const DensityArgs& a) {
    const auto s = state_from_json(read_json_file(a.state), cfg.grid);
    const auto d = density_field(s, a.t, cfg.units);
    const auto j = current_field(s, a.t, cfg.units);
    const double dt = a.dt > 0.0 ? a.dt : default_audit_step(s, cfg.units);
    const double residual = continuity_residual(s, a.t, dt, cfg.units);
    const double number_k = photon_number(s);
    const double number_x = d.integral().real();

    {
        auto f = open_output(cfg, "density.csv");
        write_density_csv(f, d, j, cfg.grid.k_max(), cfg.units.name());
    }
    {
        auto f = open_output(cfg, "fields.csv");
        write_fields_csv(f, synthesize_fields(s, a.t, cfg.units));
    }

    const bool number_ok = std::abs(number_x - number_k) <= 1e-8 * std::max(1.0, number_k);
    const bool continuity_ok = residual <= 1e-6;
    const bool real_ok = d.max_imag_residue() <= 1e-10 * std::max(d.peak(), 1e-300) || d.peak() == 0.0;
    write_json(cfg, "density_summary.json",
               {{"units", cfg.units.name()},
                {"t", a.t},
                {"k_max", cfg.grid.k_max()},
                {"photon_number", number_x},
                {"photon_number_kspace", number_k},
                {"centroid", centroid(d)},
                {"min_rho", min_density(d)},
                {"max_imag_residue", d.max_imag_residue()},
                {"continuity_residual", residual},
                {"continuity_dt", dt},
                {"clear_of_wrap", clear_of_wrap(d)},
                {"invariants_ok", number_ok && continuity_ok && real_ok}});
    return number_ok && continuity_ok && real_ok ? exit_ok : exit_invariant;
}

// localized

struct LocalizedArgs {
    int dim = 1;
    double k_max = 0.0;
    double dt = 0.0;
    double window = 0.0;
    double range = 0.0;
    std::size_t count = 0;
};

int cmd_localized(const RunConfig& cfg, const LocalizedArgs& a) {
    if (a.dim != 1 && a.dim != 3) throw InputError("--dim must be 1 or 3");
    const double K = a.k_max > 0.0 ? a.k_max : cfg.grid.k_max();
    const double W = a.window > 0.0 ? a.window : (a.dim == 1 ? 50.0 : 10.0) / K;
    const std::string units = cfg.units.name();

    if (a.dim == 1) {
        const double range = a.range > 0.0 ? a.range : 2000.0 / K;
        std::size_t count = a.count;
        if (count == 0) count = 2 * static_cast<std::size_t>(std::ceil(range * 8.0 * K / (2.0 * pi))) + 1;
        // Sampled in u = x - c dt; u = 0 is the centre sample when count is odd.
        const auto d = sample_localized_1d(K, cfg.grid.area, 0.0, -range, range, count, cfg.units);
        {
            auto f = open_output(cfg, "localized_1d.csv");
            write_split_csv(f, d, "u", a.dt, K, units);
        }
        const double phys = tail_mass(d, W, DensityPart::physical);
        const double mag = tail_mass(d, W, DensityPart::positive_magnitude);
        write_json(cfg, "localized_summary.json",
                   {{"dim", 1},
                    {"units", units},
                    {"k_max", K},
                    {"dt", a.dt},
                    {"centre", cfg.units.c * a.dt},
                    {"window_halfwidth", W},
                    {"rho_plus_at_u0", localized_density_1d(0.0, K, cfg.grid.area).real()},
                    {"tail_mass_physical", phys},
                    {"tail_mass_positive_part", mag},
                    {"contrast", phys > 0.0 ? json(mag / phys) : json(nullptr)}});
        return exit_ok;
    }

    const double tau = cfg.units.c * std::abs(a.dt);
    const double r_max = a.range > 0.0 ? a.range : 2.0 * (tau + 100.0 / K);
    const std::size_t count = a.count > 0 ? a.count : 400;
    SplitDensity d;
    for (std::size_t i = 1; i <= count; ++i) {
        const double r = r_max * static_cast<double>(i) / static_cast<double>(count);
        d.positions.push_back(r);
        d.rho_plus.push_back(localized_density_3d(r, a.dt, K, cfg.units));
    }
    {
        auto f = open_output(cfg, "localized_3d.csv");
        write_split_csv(f, d, "r", a.dt, K, units);
    }
    const double total = total_radial_mass(a.dt, K, cfg.units);
    const double shell = shell_mass(a.dt, W, K, cfg.units);
    const double frac = total != 0.0 ? shell / total : 0.0;
    write_json(cfg, "localized_summary.json",
               {{"dim", 3},
                {"units", units},
                {"k_max", K},
                {"dt", a.dt},
                {"shell_radius", tau},
                {"shell_halfwidth", W},
                {"total_radial_mass", total},
                {"shell_mass", shell},
                {"shell_fraction", frac},
                {"shell_fraction_exceeds_0.9", frac >= 0.9}});
    return exit_ok;
}

// circuit

struct CircuitArgs {
    std::string netlist;
    std::size_t samples = 0;
    bool paper_convention = false;
};

int cmd_circuit(const RunConfig& cfg, const CircuitArgs& a) {
    const std::string base = fs::path(a.netlist).parent_path().string();
    auto net = netlist_from_json(read_json_file(a.netlist), cfg.grid, base);
    if (a.paper_convention)
        for (auto& e : net.elements)
            if (auto* in = std::get_if<Interface>(&e.spec)) in->convention = FresnelConvention::paper_literal;

    if (auto v = validate(net); !v.empty()) {
        write_json(cfg, "circuit_violations.json", {{"violations", violations_to_json(v)}});
        for (const auto& x : v)
            std::cerr << "violation [" << to_string(x.kind) << "] " << x.element << ": " << x.message << '\n';
        return exit_input;
    }
    const auto r = run_circuit(net, cfg.units);
    json out = circuit_result_to_json(r);
    // Ledger rows balance by construction; an element that emits more than
    // it receives (negative absorption) is what breaks conservation.
    double gain = 0.0;
    for (const auto& row : r.ledger.rows) gain += std::max(0.0, -row.absorbed);
    const double defect = r.state.detected_total() + r.state.absorbed + gain - 1.0;
    const bool conserved = std::abs(defect) <= 1e-9;
    out["conservation"] = {{"defect", defect}, {"ok", conserved}};
    if (a.paper_convention)
        out["conservation"]["note"] =
            "interfaces use the literal (n-1)/(n+1), 2n/(n+1) pair, which does not conserve photon number";
    if (a.samples > 0) {
        json counts = json::object();
        for (const auto& [k, v] : sample_counts(r.state, cfg.seed, a.samples)) counts[k] = v;
        out["samples"] = {{"seed", cfg.seed}, {"draws", a.samples}, {"counts", counts}};
    }
    write_json(cfg, "circuit_result.json", out);
    return conserved ? exit_ok : exit_invariant;
}

// fresnel

struct FresnelArgs {
    std::string n1 = "1";
    std::string n2 = "1.5";
    bool paper_convention = false;
};

json fresnel_json(cplx n1, cplx n2, FresnelConvention conv) {
    const auto f = fresnel_interface(n1, n2, conv);
    const double R = std::norm(f.r);
    const double T = n2.real() / n1.real() * std::norm(f.t);
    return {{"convention", conv == FresnelConvention::paper_literal ? "paper" : "flux"},
            {"r", complex_to_json(f.r)},
            {"t", complex_to_json(f.t)},
            {"reflectance", R},
            {"transmittance", T},
            {"flux_balance", R + T},
            {"defect", R + T - 1.0},
            {"amplitude_sum_defect", R + std::norm(f.t) - 1.0}};
}

int cmd_fresnel(const RunConfig& cfg, const FresnelArgs& a) {
    const cplx n1 = parse_complex_arg(a.n1, "--n1");
    const cplx n2 = parse_complex_arg(a.n2, "--n2");
    if (n1.imag() != 0.0 || !(n1.real() > 0.0)) throw InputError("--n1 must be real and positive");
    json out = {{"n1", complex_to_json(n1)}, {"n2", complex_to_json(n2)}};
    const json flux = fresnel_json(n1, n2, FresnelConvention::flux_conserving);
    out["default"] = flux;
    if (a.paper_convention) {
        out["paper"] = fresnel_json(n1, n2, FresnelConvention::paper_literal);
        out["report"] = "paper pair r=(n-1)/(n+1), t=2n/(n+1) with n=n2/n1 misses flux balance by " +
                        format_double(out["paper"]["defect"].get<double>());
    }
    write_json(cfg, "fresnel.json", out);
    return std::abs(flux["defect"].get<double>()) <= 1e-12 ? exit_ok : exit_invariant;
}

// momentum

struct MomentumArgs {
    std::string state;
    std::string chi = "0";
};

int cmd_momentum(const RunConfig& cfg, const MomentumArgs& a) {
    const auto s = state_from_json(read_json_file(a.state), cfg.grid);
    const cplx chi = parse_complex_arg(a.chi, "--chi");
    const cplx n = refractive_index(chi);
    const auto rep = momentum_report(s, chi, cfg.units);
    json out = {{"units", cfg.units.name()},
                {"chi", complex_to_json(chi)},
                {"n", complex_to_json(n)},
                {"photon_number", photon_number(s)},
                {"p_abraham", vec_json(rep.p_abraham)},
                {"mirror_kick_reflect", vec_json(mirror_momentum_kick(rep.p_abraham, KickMode::reflect))},
                {"mirror_kick_absorb", vec_json(mirror_momentum_kick(rep.p_abraham, KickMode::absorb))}};
    bool ok = true;
    if (rep.p_minkowski) {
        out["p_minkowski"] = vec_json(*rep.p_minkowski);
        const double expect = std::norm(n) * rep.p_abraham[0];
        const double err = std::abs((*rep.p_minkowski)[0] - expect);
        out["minkowski_relation_error"] = err;
        ok = err <= 1e-12 * std::max(std::abs(expect), 1e-300) || expect == 0.0;
    } else {
        out["p_minkowski"] = nullptr;
        out["note"] = "complex susceptibility: Minkowski momentum undefined";
    }
    write_json(cfg, "momentum.json", out);
    return ok ? exit_ok : exit_invariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-photon density, localization and optical-circuit calculations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string units = "natural", grid = "4096,1,1", out = ".";
    std::uint64_t seed = 0;
    app.add_option("--units", units, "Unit system")->check(CLI::IsMember({"natural", "si"}));
    app.add_option("--out", out, "Output directory");
    app.add_option("--seed", seed, "Seed for sampled outcomes");
    app.add_option("--grid", grid, "k-grid as N,dk,area");

    DensityArgs da;
    auto* density = app.add_subcommand("density", "Density/current CSV and continuity audit for a state");
    density->add_option("--state", da.state, "State spec JSON file")->required();
    density->add_option("--t", da.t, "Evaluation time");
    density->add_option("--dt", da.dt, "Time step of the continuity audit (default 1/(200 c k_rms))");

    LocalizedArgs la;
    auto* localized = app.add_subcommand("localized", "Localized-basis density and tail masses");
    localized->add_option("--dim", la.dim, "1 or 3")->required();
    localized->add_option("--kmax", la.k_max, "Band limit (default: grid k_max)");
    localized->add_option("--dt", la.dt, "Time separation");
    localized->add_option("--window", la.window, "Half-width (1D tail window / 3D shell)");
    localized->add_option("--range", la.range, "Sampled half-range in u (1D) or r_max (3D)");
    localized->add_option("--count", la.count, "Number of samples");

    CircuitArgs ca;
    auto* circuit = app.add_subcommand("circuit", "Validate and run a netlist");
    circuit->add_option("--netlist", ca.netlist, "Netlist JSON file")->required();
    circuit->add_option("--samples", ca.samples, "Seeded detection draws to tally");
    circuit->add_flag("--paper-convention", ca.paper_convention, "Use the literal paper Fresnel pair at interfaces");

    FresnelArgs fa;
    auto* fresnel = app.add_subcommand("fresnel", "Normal-incidence Fresnel coefficients and flux balance");
    fresnel->add_option("--n1", fa.n1, "Incident index (real)");
    fresnel->add_option("--n2", fa.n2, "Transmitted index, re or re,im");
    fresnel->add_flag("--paper-convention", fa.paper_convention, "Also report the literal paper pair");

    MomentumArgs ma;
    auto* momentum = app.add_subcommand("momentum", "Abraham/Minkowski momentum report");
    momentum->add_option("--state", ma.state, "State spec JSON file")->required();
    momentum->add_option("--chi", ma.chi, "Susceptibility, re or re,im");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        RunConfig cfg;
        cfg.units = units == "si" ? UnitsConfig::si() : UnitsConfig::natural();
        cfg.grid = parse_grid(grid);
        cfg.out = out;
        cfg.seed = seed;
        if (density->parsed()) return cmd_density(cfg, da);
        if (localized->parsed()) return cmd_localized(cfg, la);
        if (circuit->parsed()) return cmd_circuit(cfg, ca);
        if (fresnel->parsed()) return cmd_fresnel(cfg, fa);
        if (momentum->parsed()) return cmd_momentum(cfg, ma);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
    return exit_input;
}
