#include <gtest/gtest.h>

#include <random>

#include "photon/density.hpp"
#include "photon/optics.hpp"

using namespace photon;

namespace {
const KGrid1D grid4096{4096, 1.0, 1.0};
}

TEST(Optics, RefractiveIndex) {
    EXPECT_EQ(refractive_index(0.0), cplx(1.0, 0.0));
    EXPECT_EQ(refractive_index(3.0), cplx(2.0, 0.0));
    const cplx chi{0.2, 0.02};
    const cplx n = refractive_index(chi);
    EXPECT_LE(std::abs(n * n - (1.0 + chi)), 1e-14);
    EXPECT_GT(n.real(), 0.0);
    EXPECT_GT(n.imag(), 0.0);
    EXPECT_THROW(refractive_index(-1.0), DomainError);
    EXPECT_THROW(refractive_index(-3.0), DomainError);
    EXPECT_THROW(refractive_index(cplx(std::nan(""), 0.0)), DomainError);
    // Just off the cut is fine, and continuous from above.
    EXPECT_NEAR(refractive_index(cplx(-2.0, 1e-12)).imag(), 1.0, 1e-9);
}

TEST(Optics, MediumTable) {
    const auto m = Medium::tabulated({1.0, 2.0, 4.0}, {cplx(0.0, 0.0), cplx(1.0, 0.2), cplx(3.0, 0.0)});
    EXPECT_FALSE(m.is_constant());
    EXPECT_EQ(m.susceptibility(0.5), cplx(0.0, 0.0));
    EXPECT_EQ(m.susceptibility(9.0), cplx(3.0, 0.0));
    EXPECT_LE(std::abs(m.susceptibility(1.5) - cplx(0.5, 0.1)), 1e-15);
    EXPECT_LE(std::abs(m.susceptibility(3.0) - cplx(2.0, 0.1)), 1e-15);
    EXPECT_THROW(Medium::tabulated({1.0, 1.0}, {0.0, 0.0}), DomainError);
    EXPECT_THROW(Medium::tabulated({1.0}, {}), DomainError);
    EXPECT_THROW(Medium::constant(cplx(0.5, -0.1)), PassivityError);
}

TEST(Optics, LosslessPropagationKeepsNumber) {
    const auto s = make_gaussian_state(300.0, 10.0, grid4096);
    for (double L : {0.0, 0.3, 17.0})
        EXPECT_NEAR(photon_number(propagate_in_medium(s, Medium::constant(1.25), L)), 1.0, 1e-12);
    EXPECT_THROW(propagate_in_medium(s, Medium::constant(1.25), -1.0), DomainError);
}

TEST(Optics, MonochromaticAttenuation) {
    const std::size_t bin = 99;
    const auto s = make_single_mode_state(bin, grid4096);
    const double omega = grid4096.k(bin);
    const cplx chi{0.44, 0.3};
    const cplx n = refractive_index(chi);
    const double L = std::log(2.0) / (omega * n.imag());
    const auto out = propagate_in_medium(s, Medium::constant(chi), L);
    EXPECT_NEAR(std::abs(out.c[bin]) / std::abs(s.c[bin]), 0.5, 1e-12);
    EXPECT_NEAR(photon_number(out), 0.25, 1e-12);
}

TEST(Optics, PerComponentAttenuation) {
    const auto s = make_gaussian_state(300.0, 10.0, grid4096);
    const auto m = Medium::tabulated({200.0, 400.0}, {cplx(0.5, 0.001), cplx(0.7, 0.004)});
    const double L = 2.0;
    const auto out = propagate_in_medium(s, m, L);
    for (std::size_t j = 250; j < 350; ++j) {
        const double w = grid4096.k(j);
        const double factor = std::exp(-2.0 * w * m.index(w).imag() * L);
        EXPECT_NEAR(std::norm(out.c[j]) / std::norm(s.c[j]), factor, 1e-12);
    }
    EXPECT_LT(photon_number(out), 1.0);
}

TEST(Optics, Composition) {
    const auto s = make_gaussian_state(300.0, 10.0, grid4096);
    const auto m = Medium::constant(cplx(0.8, 0.01));
    const auto two = propagate_in_medium(propagate_in_medium(s, m, 0.4), m, 0.7);
    const auto one = propagate_in_medium(s, m, 1.1);
    double worst = 0.0;
    for (std::size_t j = 0; j < s.c.size(); ++j) worst = std::max(worst, std::abs(two.c[j] - one.c[j]));
    EXPECT_LE(worst, 1e-12);
}

TEST(Optics, GroupDelayInDispersionlessMedium) {
    const auto s = make_gaussian_state(300.0, 10.0, grid4096, Helicity::positive, 4.5);
    const double L = 1.2, n = 1.5;
    const auto vac = propagate_in_medium(s, Medium::constant(0.0), L);
    const auto med = propagate_in_medium(s, Medium::constant(n * n - 1.0), L);
    const double cv = centroid(density_field(vac, 0.0));
    const double cm = centroid(density_field(med, 0.0));
    // The medium pulse lags the vacuum pulse by (n - 1) L, i.e. it arrives
    // at t = n L / c instead of L / c.
    EXPECT_NEAR(cv - cm, (n - 1.0) * L, 1e-3 * (n - 1.0) * L);
    EXPECT_NEAR(centroid(density_field(s, 0.0)) - cm, n * L, 1e-3 * n * L);
}

TEST(Optics, FresnelDefaults) {
    const auto same = fresnel_interface(1.7, 1.7);
    EXPECT_EQ(same.r, cplx(0.0, 0.0));
    EXPECT_EQ(same.t, cplx(1.0, 0.0));
    EXPECT_NEAR(std::abs(fresnel_interface(1.0, 3.0).r), 0.5, 1e-15);
    const auto f = fresnel_interface(1.0, 1.5);
    EXPECT_NEAR(std::norm(f.r) + 1.5 * std::norm(f.t), 1.0, 1e-12);
}

TEST(Optics, FresnelFluxConservationRandom) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(1.0, 4.0), V(0.0, 0.5);
    for (int i = 0; i < 200; ++i) {
        const double n1 = U(rng);
        const cplx n2{U(rng), i % 2 ? V(rng) : 0.0};
        EXPECT_NEAR(flux_balance(n1, n2, fresnel_interface(n1, n2)), 1.0, 1e-12);
    }
}

TEST(Optics, PaperConventionDefect) {
    const auto p = fresnel_interface(1.0, 3.0, FresnelConvention::paper_literal);
    EXPECT_NEAR(p.r.real(), 0.5, 1e-15);
    EXPECT_NEAR(p.t.real(), 1.5, 1e-15);
    // |r|^2 + n |t|^2 = 0.25 + 3 * 2.25 = 7.
    EXPECT_NEAR(flux_balance(1.0, 3.0, p), 7.0, 1e-12);
}

TEST(Optics, FresnelErrors) {
    EXPECT_THROW(fresnel_interface(0.0, 1.0), DomainError);
    EXPECT_THROW(fresnel_interface(cplx(1.0, 1.0), cplx(-1.0, -1.0)), DomainError);
    EXPECT_THROW(fresnel_interface(std::numeric_limits<double>::infinity(), 1.0), DomainError);
}

TEST(Optics, MirrorKick) {
    EXPECT_EQ(mirror_momentum_kick({3.0, 0.0, 0.0}, KickMode::reflect), (Vec3{6.0, 0.0, 0.0}));
    EXPECT_EQ(mirror_momentum_kick({3.0, -1.0, 0.5}, KickMode::absorb), (Vec3{3.0, -1.0, 0.5}));
    EXPECT_EQ(mirror_momentum_kick({0.0, 0.0, 0.0}, KickMode::reflect), (Vec3{0.0, 0.0, 0.0}));
}

TEST(Optics, MomentumReport) {
    const auto s = make_single_mode_state(41, grid4096);
    const auto r0 = momentum_report(s, 0.0);
    EXPECT_NEAR(r0.p_abraham[0], grid4096.k(41), 1e-12);
    ASSERT_TRUE(r0.p_minkowski);
    EXPECT_EQ((*r0.p_minkowski)[0], r0.p_abraham[0]);

    const auto r1 = momentum_report(s, 1.25);
    const cplx n = refractive_index(1.25);
    EXPECT_NEAR((*r1.p_minkowski)[0], std::norm(n) * r1.p_abraham[0], 1e-12);
    EXPECT_NEAR((*r1.p_minkowski)[0], 2.25 * r1.p_abraham[0], 1e-12);

    EXPECT_FALSE(momentum_report(s, cplx(1.0, 0.1)).p_minkowski);

    const auto si = UnitsConfig::si();
    const KGrid1D g{64, 1e6, 1.0};
    const auto rs = momentum_report(make_single_mode_state(9, g), 0.0, si);
    EXPECT_NEAR(rs.p_abraham[0] / (si.hbar * g.k(9)), 1.0, 1e-12);
}

TEST(Optics, ElementChecks) {
    EXPECT_TRUE(element_problems(BeamSplitter{}).empty());
    EXPECT_FALSE(element_problems(BeamSplitter{MixMatrix2{0.8, 0.8}}).empty());
    EXPECT_FALSE(element_problems(MediumSegment{Medium::constant(0.0), -1.0}).empty());
    EXPECT_FALSE(element_problems(Interface{cplx(1.0, 0.1), 2.0}).empty());
    EXPECT_FALSE(element_problems(PhaseShifter{std::nan("")}).empty());
    EXPECT_EQ(port_arity(BeamSplitter{}), (std::pair<std::size_t, std::size_t>{2, 2}));
    EXPECT_EQ(port_arity(Interface{}), (std::pair<std::size_t, std::size_t>{1, 2}));
    EXPECT_EQ(kind_name(Mirror{}), "mirror");
}
