#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <starspec/star_chain.hpp>

#include "oracles.hpp"

using namespace starspec;
using Catch::Matchers::WithinAbs;

TEST_CASE("transfer roots at band center are +/- i", "[star_chain]") {
    auto r = transfer_roots(0.0);
    REQUIRE_THAT(r.mu_plus.real(), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(r.mu_plus.imag(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(r.mu_minus.imag(), WithinAbs(-1.0, 1e-15));
    REQUIRE_THAT(std::abs(r.mu_plus), WithinAbs(1.0, 1e-15));
}

TEST_CASE("transfer roots degenerate at the band edge", "[star_chain]") {
    auto r = transfer_roots(2.0);
    REQUIRE_THAT(r.mu_plus.real(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(r.mu_minus.real(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(r.mu_plus.imag(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("transfer roots split outside the band", "[star_chain]") {
    auto r = transfer_roots(2.1213203);
    REQUIRE_THAT(r.mu_plus.real(), WithinAbs(1.4142136, 1e-6));
    REQUIRE_THAT(r.mu_minus.real(), WithinAbs(0.7071068, 1e-6));

    for (double e : {2.5, 3.0, -2.5, -4.2, 7.0}) {
        auto t = transfer_roots(e);
        auto q = oracle::chain_roots_real(e);
        double plus_branch = (e + std::sqrt(e * e - 4.0)) / 2.0;
        REQUIRE_THAT(t.mu_plus.real(), WithinAbs(plus_branch, 1e-12));
        REQUIRE_THAT(t.mu_plus.imag(), WithinAbs(0.0, 1e-15));
        double lo = std::min(std::abs(t.mu_plus), std::abs(t.mu_minus));
        double hi = std::max(std::abs(t.mu_plus), std::abs(t.mu_minus));
        REQUIRE(lo < 1.0);
        REQUIRE(hi > 1.0);
        REQUIRE_THAT(hi, WithinAbs(std::abs(q.big), 1e-12));
        REQUIRE_THAT(lo, WithinAbs(std::abs(q.small), 1e-12));
    }
}

TEST_CASE("transfer roots multiply to one and sum to E", "[star_chain][property]") {
    for (double e = -5.0; e <= 5.0; e += 0.0625) {
        auto r = transfer_roots(e);
        REQUIRE(std::abs(r.mu_plus * r.mu_minus - 1.0) < 1e-12);
        REQUIRE(std::abs(r.mu_plus + r.mu_minus - e) < 1e-12);
        if (std::abs(e) <= 2.0) {
            REQUIRE_THAT(std::abs(r.mu_plus), WithinAbs(1.0, 1e-12));
            REQUIRE(std::abs(r.mu_plus - std::conj(r.mu_minus)) < 1e-12);
        }
    }
}

TEST_CASE("bound energies match the junction condition root", "[star_chain]") {
    for (int p = 3; p <= 12; ++p) {
        auto b = bound_energies(p);
        REQUIRE_THAT(b.e_plus, WithinAbs(oracle::star_bound_energy_bisect(p), 1e-12));
        REQUIRE(b.e_minus == -b.e_plus);
        REQUIRE(b.e_plus > 2.0);
        REQUIRE_THAT(b.decay_factor, WithinAbs(1.0 / std::sqrt(p - 1.0), 1e-15));
        // the small transfer root at the bound energy is the decay factor
        auto r = transfer_roots(b.e_plus);
        REQUIRE_THAT(r.mu_minus.real(), WithinAbs(b.decay_factor, 1e-12));
    }
}

TEST_CASE("ten arms give the +/-10/3 pair", "[star_chain]") {
    auto b = bound_energies(10);
    REQUIRE_THAT(b.e_plus, WithinAbs(10.0 / 3.0, 1e-12));
    REQUIRE_THAT(b.e_plus, WithinAbs(3.333, 1e-3));
    REQUIRE_THAT(b.e_minus, WithinAbs(-3.333, 1e-3));
}

TEST_CASE("two arms sit on the band edge, not bound", "[star_chain]") {
    auto b = bound_energies(2);
    REQUIRE(b.e_plus == 2.0);
    REQUIRE(b.e_minus == -2.0);
    REQUIRE(b.decay_factor == 1.0);
}

TEST_CASE("bound_energies rejects degenerate arm counts", "[star_chain][errors]") {
    REQUIRE_THROWS_AS(bound_energies(1), InvalidArmCount);
    REQUIRE_THROWS_AS(bound_energies(0), InvalidArmCount);
    REQUIRE_THROWS_AS(bound_energies(-3), InvalidArmCount);
}

TEST_CASE("bound amplitudes follow the alternating power law", "[star_chain]") {
    REQUIRE(bound_amplitude(3, +1, 0) == 1.0);
    REQUIRE_THAT(bound_amplitude(5, -1, 2), WithinAbs(0.25, 1e-15));
    REQUIRE_THAT(bound_amplitude(3, -1, 3), WithinAbs(-0.3535534, 1e-7));
    REQUIRE_THROWS_AS(bound_amplitude(2, +1, 1), NotBound);
}

TEST_CASE("bound amplitudes satisfy recurrence and junction rows", "[star_chain][property]") {
    for (int p = 3; p <= 8; ++p) {
        for (int parity : {+1, -1}) {
            double e = parity > 0 ? bound_energies(p).e_plus : bound_energies(p).e_minus;
            // center row: p * phi_1 = E * phi_0
            REQUIRE_THAT(p * bound_amplitude(p, parity, 1),
                         WithinAbs(e * bound_amplitude(p, parity, 0), 1e-12));
            for (int k = 1; k <= 12; ++k) {
                double lhs = bound_amplitude(p, parity, k + 1) -
                             e * bound_amplitude(p, parity, k) +
                             bound_amplitude(p, parity, k - 1);
                REQUIRE_THAT(lhs, WithinAbs(0.0, 1e-12));
            }
        }
    }
}

TEST_CASE("normalization constant matches the summed geometric series", "[star_chain]") {
    REQUIRE_THAT(normalization_constant(3), WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(normalization_constant(4), WithinAbs(0.5773503, 1e-7));
    for (int p = 3; p <= 10; ++p) {
        REQUIRE_THAT(normalization_constant(p),
                     WithinAbs(oracle::normalization_by_series(p), 1e-12));
        // the scaled vector really has unit infinite-array norm
        double phi0 = normalization_constant(p);
        long double norm2 = phi0 * phi0;
        for (int k = 1; k <= 300; ++k) {
            double a = phi0 * bound_amplitude(p, +1, k);
            norm2 += static_cast<long double>(p) * a * a;
        }
        REQUIRE_THAT(static_cast<double>(norm2), WithinAbs(1.0, 1e-12));
    }
    REQUIRE_THROWS_AS(normalization_constant(2), NotNormalizable);
    REQUIRE_THROWS_AS(normalization_constant(1), NotNormalizable);
}

TEST_CASE("square-summable recurrence solution keeps only the decaying root",
          "[star_chain]") {
    auto s = square_summable_solution(2.5);
    REQUIRE(s.a_plus == 0.0);
    REQUIRE(s.a_minus == s.phi0);
    auto t = square_summable_solution(-2.5, 0.75);
    REQUIRE(t.a_plus == t.phi0);  // for E < -2 the + branch is the decaying one
    REQUIRE(t.a_minus == 0.0);
    REQUIRE(t.phi0 == 0.75);
    REQUIRE_THROWS_AS(square_summable_solution(1.5), NotBound);
    REQUIRE_THROWS_AS(square_summable_solution(2.0), NotBound);
}

TEST_CASE("stem energies are the quartic root, alias golden ratio", "[star_chain]") {
    auto b = stem_bound_energies();
    REQUIRE_THAT(b.e_plus, WithinAbs(oracle::stem_energy_bisect(), 1e-12));
    REQUIRE_THAT(b.e_plus, WithinAbs(2.0581710, 1e-7));
    REQUIRE(b.e_minus == -b.e_plus);
    double tau = (1.0 + std::sqrt(5.0)) / 2.0;
    REQUIRE_THAT(b.e_plus * b.e_plus, WithinAbs(2.0 * tau + 1.0, 1e-12));
    REQUIRE_THAT(b.decay_factor, WithinAbs(0.786151, 1e-6));
    // consistency with the transfer-root machinery
    REQUIRE_THAT(transfer_roots(b.e_plus).mu_minus.real(),
                 WithinAbs(b.decay_factor, 1e-9));
}

TEST_CASE("stem amplitudes obey all three defining relations", "[star_chain]") {
    REQUIRE(stem_amplitude(+1, StemSite::Center) == 1.0);
    REQUIRE_THAT(stem_amplitude(+1, StemSite::Arm, 1), WithinAbs(0.786151, 1e-6));
    REQUIRE_THAT(stem_amplitude(+1, StemSite::Stem), WithinAbs(0.4858683, 1e-7));

    for (int parity : {+1, -1}) {
        double e = parity > 0 ? stem_bound_energies().e_plus : stem_bound_energies().e_minus;
        double c = stem_amplitude(parity, StemSite::Center);
        double s = stem_amplitude(parity, StemSite::Stem);
        // stem site couples to the center alone
        REQUIRE_THAT(c, WithinAbs(e * s, 1e-12));
        // center row: both arms plus stem
        double a1 = stem_amplitude(parity, StemSite::Arm, 1);
        REQUIRE_THAT(2.0 * a1 + s, WithinAbs(e * c, 1e-12));
        // first arm site also equals (E^2-1)/(2E) by eliminating the stem
        REQUIRE_THAT(a1, WithinAbs((e * e - 1.0) / (2.0 * e), 1e-12));
        for (int k = 1; k <= 10; ++k) {
            double prev = k == 1 ? c : stem_amplitude(parity, StemSite::Arm, k - 1);
            double lhs = stem_amplitude(parity, StemSite::Arm, k + 1) -
                         e * stem_amplitude(parity, StemSite::Arm, k) + prev;
            REQUIRE_THAT(lhs, WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("energy classification around the band", "[star_chain]") {
    REQUIRE(classify_energy(0.0) == EnergyClass::InBand);
    REQUIRE(classify_energy(1.999999) == EnergyClass::InBand);
    REQUIRE(classify_energy(2.0) == EnergyClass::BandEdge);
    REQUIRE(classify_energy(-2.0) == EnergyClass::BandEdge);
    REQUIRE(classify_energy(2.0 + 5e-13) == EnergyClass::BandEdge);
    REQUIRE(classify_energy(2.5) == EnergyClass::Evanescent);
    REQUIRE(classify_energy(-2.5) == EnergyClass::Evanescent);
}

TEST_CASE("resonance prediction reproduces the microwave numbers", "[star_chain]") {
    auto r = predict_resonances(6.66, 0.070, 4);
    REQUIRE_THAT(r.f_low, WithinAbs(6.4983, 1e-4));
    REQUIRE_THAT(r.f_high, WithinAbs(6.8217, 1e-4));
    REQUIRE_THAT(r.band_low, WithinAbs(6.52, 1e-12));
    REQUIRE_THAT(r.band_high, WithinAbs(6.80, 1e-12));
    REQUIRE(r.f_low < r.band_low);
    REQUIRE(r.band_high < r.f_high);

    auto z = predict_resonances(6.66, 0.0, 3);
    REQUIRE(z.f_low == 6.66);
    REQUIRE(z.f_high == 6.66);

    // p=2 puts the pair exactly on the band edges
    auto e = predict_resonances(6.66, 0.070, 2);
    REQUIRE(e.f_low == e.band_low);
    REQUIRE(e.f_high == e.band_high);

    REQUIRE_THROWS_AS(predict_resonances(6.66, 0.070, 1), InvalidArmCount);
}

TEST_CASE("resonance splitting equals delta times the bound energy, bitwise",
          "[star_chain][property]") {
    for (int p : {2, 3, 4, 6, 10}) {
        auto r = predict_resonances(6.66, 0.070, p);
        double shift = 0.070 * bound_energies(p).e_plus;
        REQUIRE(r.f_high == 6.66 + shift);
        REQUIRE(r.f_low == 6.66 - shift);
        REQUIRE_THAT((r.f_high - r.f_low) / 2.0,
                     WithinAbs(p * 0.070 / std::sqrt(p - 1.0), 1e-12));
    }
    // six arms: quoted splitting value
    auto r6 = predict_resonances(6.66, 0.070, 6);
    REQUIRE_THAT((r6.f_high - r6.f_low) / 2.0, WithinAbs(0.18783, 1e-5));
}

TEST_CASE("decay factor shrinks with arm count; stem decays slowest",
          "[star_chain][property]") {
    double prev = 1.0;
    for (int p = 3; p <= 12; ++p) {
        double d = bound_energies(p).decay_factor;
        REQUIRE(d < prev);
        prev = d;
    }
    REQUIRE(stem_bound_energies().decay_factor > 1.0 / std::sqrt(2.0));
}

TEST_CASE("chain spec validation and dimension", "[star_chain]") {
    StarChainSpec spec{4, 30, Convention::ChainCentered};
    spec.validate();
    REQUIRE(spec.dimension() == 121);

    StarChainSpec bad_p{1, 10, Convention::ChainCentered};
    REQUIRE_THROWS_AS(bad_p.validate(), InvalidArmCount);
    StarChainSpec bad_n{3, 0, Convention::ChainCentered};
    REQUIRE_THROWS_AS(bad_n.validate(), Error);
}
