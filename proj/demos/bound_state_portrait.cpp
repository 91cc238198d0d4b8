// Rasterizes a star-shaped wire, diagonalizes it, and draws the deepest
// trapped mode as an ASCII intensity map.

#include <cstdio>
#include <cstdlib>

#include <starspec/starspec.hpp>

int main(int argc, char** argv) {
    using namespace starspec;

    int size = argc > 1 ? std::atoi(argv[1]) : 24;
    int arms = argc > 2 ? std::atoi(argv[2]) : 4;
    int thickness = argc > 3 ? std::atoi(argv[3]) : 6;

    GridMask mask = build_star_mask(size, size, arms, thickness);
    Spectrum s = eig_dense_symmetric(build_laplacian(mask));
    BandDescriptor band =
        thickness == 1 ? bloch_band(Convention::GridShifted) : guide_band(thickness);
    BoundStateReport r = find_bound_states(s, band, mask);

    std::printf("%s\n", r.geometry.c_str());
    std::printf("sites %zu, threshold %.6f, %zu trapped state(s)\n",
                mask.site_count(), propagation_threshold(thickness),
                r.states.size());
    for (const auto& st : r.states)
        std::printf("  E = %.6f  E/Et = %s  localization %.3f\n", st.energy,
                    st.energy_over_et ? fmt_fixed(*st.energy_over_et, 4).c_str() : "-",
                    st.localization);
    if (r.states.empty())
        return 0;

    std::printf("\n%s",
                portrait_text(mask, s.eigenvectors[r.states[0].spectrum_index]).c_str());
    return 0;
}
