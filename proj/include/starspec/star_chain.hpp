#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "errors.hpp"

namespace starspec {

// Sign and origin convention for the Hamiltonian. ChainCentered is the bare
// hopping matrix with spectrum in [-2, 2]; GridShifted is 4I minus that, the
// form a five-point Laplacian takes on a one-site-wide arm, with the band
// moved to [2, 6].
enum class Convention { ChainCentered, GridShifted };

struct StarChainSpec {
    int arms = 3;
    int sites = 20;
    Convention convention = Convention::ChainCentered;

    std::size_t dimension() const {
        return static_cast<std::size_t>(arms) * static_cast<std::size_t>(sites) + 1;
    }

    void validate() const {
        if (arms < 2)
            throw InvalidArmCount("star chain needs at least two arms, got " +
                                  std::to_string(arms));
        if (sites < 1)
            throw Error("star chain needs at least one site per arm, got " +
                        std::to_string(sites));
    }
};

// Roots of mu^2 - E mu + 1 = 0, the one-step transfer multipliers of the
// infinite chain. Inside the band they form a unimodular conjugate pair;
// outside, a reciprocal real pair with exactly one decaying member.
struct TransferRoots {
    std::complex<double> mu_plus;
    std::complex<double> mu_minus;
    double energy = 0.0;
};

inline TransferRoots transfer_roots(double e) {
    std::complex<double> disc = std::sqrt(std::complex<double>(e * e - 4.0, 0.0));
    return {(e + disc) / 2.0, (e - disc) / 2.0, e};
}

struct BoundEnergies {
    double e_minus;
    double e_plus;
    double decay_factor;
};

inline BoundEnergies bound_energies(int arms) {
    if (arms < 2)
        throw InvalidArmCount("bound_energies: need at least two arms, got " +
                              std::to_string(arms));
    double root = std::sqrt(arms - 1.0);
    double e_plus = arms / root;
    return {-e_plus, e_plus, 1.0 / root};
}

// Site amplitude phi_k of the symmetric bound state, normalized to phi_0 = 1.
// parity selects the top (+1) or bottom (-1) state of the pair.
inline double bound_amplitude(int arms, int parity, int k) {
    if (arms < 3)
        throw NotBound("bound_amplitude: " + std::to_string(arms) +
                       " arms have no bound state");
    if (k < 0)
        throw Error("bound_amplitude: negative site index");
    double amp = std::pow(arms - 1.0, -0.5 * k);
    if (parity < 0 && (k % 2) != 0)
        amp = -amp;
    return amp;
}

// Center amplitude that gives the infinite-arm bound vector unit l2 norm.
inline double normalization_constant(int arms) {
    if (arms < 3)
        throw NotNormalizable("normalization_constant: the " + std::to_string(arms) +
                              "-arm solution is not square-summable");
    return std::sqrt((arms - 2.0) / (2.0 * arms - 2.0));
}

// Coefficients of the general recurrence solution phi_k = a_plus mu_plus^k +
// a_minus mu_minus^k after discarding the growing branch.
struct DecayingSolution {
    double phi0;
    double a_plus;
    double a_minus;
};

inline DecayingSolution square_summable_solution(double e, double phi0 = 1.0) {
    if (!(std::abs(e) > 2.0))
        throw NotBound("square_summable_solution: |E| = " + std::to_string(std::abs(e)) +
                       " does not leave the band");
    // for E > 2 the minus root decays; for E < -2 the plus root does
    if (e > 0.0)
        return {phi0, 0.0, phi0};
    return {phi0, phi0, 0.0};
}

// Two arms plus one dangling site on the junction. The bound energy solves
// E^4 - 4E^2 - 1 = 0, i.e. E^2 = 2 + sqrt(5).
inline BoundEnergies stem_bound_energies() {
    double e_plus = std::sqrt(2.0 + std::sqrt(5.0));
    double decay = (e_plus - std::sqrt(e_plus * e_plus - 4.0)) / 2.0;
    return {-e_plus, e_plus, decay};
}

enum class StemSite { Center, Arm, Stem };

inline double stem_amplitude(int parity, StemSite site, int k = 1) {
    double e = parity < 0 ? stem_bound_energies().e_minus : stem_bound_energies().e_plus;
    switch (site) {
        case StemSite::Center:
            return 1.0;
        case StemSite::Stem:
            return 1.0 / e;
        case StemSite::Arm:
            break;
    }
    if (k < 0)
        throw Error("stem_amplitude: negative site index");
    double disc = std::sqrt(e * e - 4.0);
    double mu = e > 0.0 ? (e - disc) / 2.0 : (e + disc) / 2.0;
    double amp = 1.0;
    for (int i = 0; i < k; ++i)
        amp *= mu;
    return amp;
}

enum class EnergyClass { InBand, BandEdge, Evanescent };

inline EnergyClass classify_energy(double e, double tol = 1e-12) {
    double a = std::abs(e);
    if (std::abs(a - 2.0) <= tol)
        return EnergyClass::BandEdge;
    return a < 2.0 ? EnergyClass::InBand : EnergyClass::Evanescent;
}

// Detuned-junction resonance pair: the coupling delta scales the
// dimensionless bound energies onto a carrier frequency omega0.
struct ResonancePrediction {
    double f_low;
    double f_high;
    double band_low;
    double band_high;
};

inline ResonancePrediction predict_resonances(double omega0, double delta, int arms) {
    double shift = delta * bound_energies(arms).e_plus;
    return {omega0 - shift, omega0 + shift, omega0 - 2.0 * delta, omega0 + 2.0 * delta};
}

}  // namespace starspec
