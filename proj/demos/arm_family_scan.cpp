// Tabulates bound energies of ideal star chains against the closed forms,
// showing how fast the finite truncation converges to p/sqrt(p-1).

#include <cmath>
#include <cstdio>

#include <starspec/starspec.hpp>

int main() {
    using namespace starspec;

    const int sites = 30;
    std::printf("%4s %12s %12s %12s %10s %10s\n", "p", "analytic", "numeric",
                "difference", "decay fit", "1/sqrt(p-1)");
    for (int p = 3; p <= 8; ++p) {
        StarChainSpec spec{p, sites, Convention::ChainCentered};
        Spectrum s = eig_dense_symmetric(build_star_chain_matrix(spec));
        BoundStateReport r =
            find_bound_states(s, bloch_band(spec.convention), star_chain_layout(spec));

        BoundEnergies be = bound_energies(p);
        double numeric = r.states.back().energy;
        double kappa = r.states.back().decay_rate.value_or(0.0);
        std::printf("%4d %12.8f %12.8f %12.3e %10.6f %10.6f\n", p, be.e_plus, numeric,
                    std::abs(numeric - be.e_plus), std::exp(-kappa), be.decay_factor);
    }
    return 0;
}
