#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gravicav/params.hpp"

using namespace gravicav;

namespace {
const params::PhysicalConstants pc = params::PhysicalConstants::codata();
}

TEST_CASE("constants") {
    CHECK_NOTHROW(pc.validate());
    CHECK(pc.Epl == doctest::Approx(1.855e43).epsilon(2e-4));
    CHECK(pc.lnCutoffRatio == 62.0);
}

TEST_CASE("constants file overrides") {
    const auto path = std::filesystem::temp_directory_path() / "gravicav_constants_test.txt";
    {
        std::ofstream out(path);
        out << "# toy units\n";
        out << "G 1.0\n";
        out << "hbar = 1.0\n";
        out << "c 1.0\n";
    }
    const auto toy = params::load_constants(path);
    CHECK(toy.G == 1.0);
    CHECK(toy.hbar == 1.0);
    CHECK(toy.c == 1.0);
    CHECK(toy.kB == pc.kB);       // untouched default
    CHECK(toy.Epl == doctest::Approx(1.0));  // re-derived
    std::filesystem::remove(path);

    {
        std::ofstream out(path);
        out << "planck 1\n";
    }
    CHECK_THROWS_AS(params::load_constants(path), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("cavity frequency shift") {
    CHECK(params::cavity_frequency_shift(1.77e15, 0.0) == 1.77e15);
    // the first-order shift omega0 h / 2 for LIGO strain: -8.85e-7 rad/s,
    // twenty-two orders below omega0, so check it as a product rather than a
    // difference of near-equal doubles
    CHECK(1.77e15 * 1e-21 / 2.0 == doctest::Approx(8.85e-7).epsilon(1e-12));
    // at a resolvable scale the shift is linear and flips sign with h
    const double plus = params::cavity_frequency_shift(1.0, 1e-3);
    const double minus = params::cavity_frequency_shift(1.0, -1e-3);
    CHECK(plus - 1.0 == doctest::Approx(-5e-4).epsilon(1e-12));
    CHECK(plus - 1.0 == doctest::Approx(-(minus - 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(params::cavity_frequency_shift(1.0, 0.1), InvalidParameter);
}

TEST_CASE("single graviton strain") {
    // f scales like V^{-1/2}
    const double f1 = params::single_graviton_strain(100.0, 1.0, pc);
    const double f2 = params::single_graviton_strain(100.0, 4.0, pc);
    CHECK(f1 / f2 == doctest::Approx(2.0).epsilon(1e-12));

    // round trip and single-graviton energy consistency
    for (double Om : {1.0, 50.0, 2.0 * M_PI * 100.0, 1e4}) {
        for (double V : {1.0, 1e4, 1e9}) {
            const double f = params::single_graviton_strain(Om, V, pc);
            CHECK(std::abs(params::graviton_number_from_strain(f, Om, V, pc) - 1.0) < 1e-10);
            const double energy_density = pc.c * pc.c / (32.0 * M_PI * pc.G) * Om * Om * f * f;
            CHECK(std::abs(energy_density * V / (pc.hbar * Om) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("graviton number from strain") {
    const double n1 = params::graviton_number_from_strain(1e-21, 200.0, 1e6, pc);
    const double n2 = params::graviton_number_from_strain(2e-21, 200.0, 1e6, pc);
    CHECK(n2 / n1 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("phase swing q*lambda is volume independent and equals (omega0/Omega) f") {
    const double omega0 = 1.77e15, f = 1e-21;
    for (double Om : {2.0 * M_PI * 100.0, 700.0}) {
        double lo = 1e300, hi = 0.0;
        for (double V : {1.0, 1e3, 1e6, 1e9}) {
            const double q = params::coupling_q(omega0, Om, V, pc);
            const double lambda = std::sqrt(params::graviton_number_from_strain(f, Om, V, pc));
            const double swing = q * lambda;
            lo = std::min(lo, swing);
            hi = std::max(hi, swing);
            CHECK(std::abs(swing / (omega0 / Om * f) - 1.0) < 1e-10);
        }
        CHECK(hi / lo - 1.0 < 1e-10);
    }
    // LIGO-band numbers: about 2.8e-9 radians of phase
    const double q = params::coupling_q(omega0, 2.0 * M_PI * 100.0, 1e6, pc);
    const double lambda =
        std::sqrt(params::graviton_number_from_strain(f, 2.0 * M_PI * 100.0, 1e6, pc));
    CHECK(q * lambda == doctest::Approx(2.817e-9).epsilon(1e-3));
}

TEST_CASE("coupling scaling and bound") {
    // q ~ Omega^{-3/2} at fixed V
    const double qa = params::coupling_q(1.0, 1.0, 1.0, pc);
    const double qb = params::coupling_q(1.0, 4.0, 1.0, pc);
    CHECK(qa / qb == doctest::Approx(8.0).epsilon(1e-12));

    CHECK(params::q_max(pc.Epl, pc) == doctest::Approx(1.0));
    CHECK(params::q_max(1.77e15, pc) == doctest::Approx(9.5e-29).epsilon(0.02));
}

TEST_CASE("thermal occupation") {
    // hbar Omega / kB T = ln 2 gives nbar = 1
    const double Om = std::log(2.0) * pc.kB / pc.hbar;  // T = 1 K
    CHECK(params::nbar(Om, 1.0, pc) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(params::nbar(2.0 * M_PI * 10.0, 1.0, pc) == doctest::Approx(2.08e9).epsilon(0.01));

    // monotone: decreasing in Omega, increasing in T
    double prev = params::nbar(1.0, 1.0, pc);
    for (double Om2 : {2.0, 5.0, 20.0}) {
        const double cur = params::nbar(Om2, 1.0, pc);
        CHECK(cur < prev);
        prev = cur;
    }
    prev = params::nbar(10.0, 0.5, pc);
    for (double T : {1.0, 2.0, 8.0}) {
        const double cur = params::nbar(10.0, T, pc);
        CHECK(cur > prev);
        prev = cur;
    }
    // T -> 0 freezes the mode out
    CHECK(params::nbar(1e12, 1e-6, pc) == 0.0);
}

TEST_CASE("relic background frequency scale") {
    CHECK(params::upsilon_of_hubble(1e-4) == doctest::Approx(1e9));
    CHECK(params::upsilon_of_hubble(1e-6) == doctest::Approx(1e8));
    CHECK(params::upsilon_of_hubble(4e-4) == doctest::Approx(2e9));
    CHECK_THROWS_AS(params::upsilon_of_hubble(0.0), InvalidParameter);
}

TEST_CASE("squeeze magnitude from frequencies") {
    bool warn = true;
    const double x = std::sinh(5.0);
    const double xi0 = params::xi0_from_frequency(std::sqrt(2.0 * x), 1.0, &warn);
    CHECK(xi0 == doctest::Approx(5.0).epsilon(1e-12));
    CHECK_FALSE(warn);

    CHECK(params::xi0_from_frequency(1e9, 0.1) == doctest::Approx(46.05).epsilon(1e-3));

    params::xi0_from_frequency(1.5, 1.0, &warn);  // xi0 ~ 1 < 3
    CHECK(warn);
}

TEST_CASE("interferometer phase estimate") {
    const double v = params::ligo_phase_estimate(200, 4000.0, 1.064e-6, 1e-21);
    CHECK(v == doctest::Approx(4.7e-9).epsilon(0.01));
    CHECK(params::ligo_phase_estimate(1, 4000.0, 1.064e-6, 1e-21) ==
          doctest::Approx(2.36e-11).epsilon(0.01));
    CHECK(params::ligo_phase_estimate(200, 4000.0, 1.064e-6, 0.0) == 0.0);
    CHECK_THROWS_AS(params::ligo_phase_estimate(0, 1.0, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("cavity config validation") {
    params::CavityConfig ok{1.77e15, 4000.0, 1.0};
    CHECK_NOTHROW(ok.validate(pc));
    params::CavityConfig bad = ok;
    bad.omega0 = 2.0 * pc.Epl;
    CHECK_THROWS_AS(bad.validate(pc), InvalidParameter);
    bad = ok;
    bad.ell0 = 0.0;
    CHECK_THROWS_AS(bad.validate(pc), InvalidParameter);
}

TEST_CASE("mode config: exactly one of V and q") {
    params::GwModeConfig neither;
    CHECK_THROWS_AS(neither.validate(), InvalidParameter);

    params::GwModeConfig both;
    both.V = 1.0;
    both.q = 0.1;
    CHECK_THROWS_AS(both.validate(), InvalidParameter);

    params::GwModeConfig direct;
    direct.q = 0.25;
    CHECK(direct.coupling(1.0, pc) == 0.25);

    params::GwModeConfig derived;
    derived.Omega = 2.0 * M_PI * 100.0;
    derived.V = 1e6;
    CHECK(derived.coupling(1.77e15, pc) ==
          doctest::Approx(params::coupling_q(1.77e15, derived.Omega, 1e6, pc)));

    params::GwModeConfig bad_state;
    bad_state.q = 0.1;
    bad_state.state = params::Coherent{-1.0};
    CHECK_THROWS_AS(bad_state.validate(), InvalidParameter);
}

TEST_CASE("Epl override must stay consistent") {
    const auto path = std::filesystem::temp_directory_path() / "gravicav_constants_epl.txt";
    {
        std::ofstream out(path);
        out << "Epl 1.0\n";  // wildly inconsistent with the CODATA G, hbar, c
    }
    CHECK_THROWS_AS(params::load_constants(path), InvalidParameter);
    std::filesystem::remove(path);
}
