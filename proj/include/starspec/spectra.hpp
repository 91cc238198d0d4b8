#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigensolve.hpp"
#include "errors.hpp"
#include "lattice_grid.hpp"
#include "sparse.hpp"
#include "star_chain.hpp"

namespace starspec {

// Lowest transverse mode of a hard-wall strip w sites across; modes below
// this cannot propagate down a guide of that width.
inline double propagation_threshold(int width) {
    if (width < 1)
        throw Error("propagation_threshold: width must be positive");
    return 2.0 - 2.0 * std::cos(kTwoPi / 2.0 / (width + 1));
}

enum class BandKind { BlochBand, PropagatingThreshold };

struct BandDescriptor {
    BandKind kind;
    double band_low;
    double band_high;
    double band_center;
    double e_threshold = 0.0;
};

inline BandDescriptor bloch_band(Convention convention) {
    if (convention == Convention::ChainCentered)
        return {BandKind::BlochBand, -2.0, 2.0, 0.0, 0.0};
    return {BandKind::BlochBand, 2.0, 6.0, 4.0, 0.0};
}

inline BandDescriptor guide_band(int thickness) {
    double et = propagation_threshold(thickness);
    return {BandKind::PropagatingThreshold, et, 8.0 - et, 4.0, et};
}

inline double convert_energy(double e, Convention from, Convention to) {
    if (from == to)
        return e;
    return 4.0 - e;
}

// Where each site sits relative to the junction, for localization and decay
// bookkeeping that works the same on ideal chains and rasterized masks.
struct SiteLayout {
    std::string geometry;
    Convention convention = Convention::ChainCentered;
    std::vector<int> distance;                 // graph distance from the junction
    std::vector<std::vector<int>> arms;        // outward site indices per arm
    bool one_dimensional = true;

    std::size_t dimension() const { return distance.size(); }
};

inline SiteLayout star_chain_layout(const StarChainSpec& spec) {
    spec.validate();
    SiteLayout layout;
    layout.geometry = "star chain, " + std::to_string(spec.arms) + " arms of " +
                      std::to_string(spec.sites) + " sites";
    layout.convention = spec.convention;
    layout.distance.assign(spec.dimension(), 0);
    for (int a = 0; a < spec.arms; ++a) {
        std::vector<int> arm;
        for (int k = 1; k <= spec.sites; ++k) {
            int idx = a * spec.sites + k;
            layout.distance[idx] = k;
            arm.push_back(idx);
        }
        layout.arms.push_back(std::move(arm));
    }
    return layout;
}

inline SiteLayout stem_chain_layout(int sites_per_arm) {
    if (sites_per_arm < 1)
        throw Error("stem_chain_layout: need at least one site per arm");
    SiteLayout layout;
    layout.geometry = "stem chain, two arms of " + std::to_string(sites_per_arm) +
                      " sites plus a dangling site";
    layout.distance.assign(2 * sites_per_arm + 2, 0);
    for (int a = 0; a < 2; ++a) {
        std::vector<int> arm;
        for (int k = 1; k <= sites_per_arm; ++k) {
            int idx = a * sites_per_arm + k;
            layout.distance[idx] = k;
            arm.push_back(idx);
        }
        layout.arms.push_back(std::move(arm));
    }
    layout.distance[2 * sites_per_arm + 1] = 1;
    return layout;
}

struct DecayFit {
    double kappa;
    double goodness;
};

// Least-squares fit of ln|phi| against arm position over sites k_min..k_max
// (one-based along the arm). kappa is minus the slope.
inline DecayFit decay_rate_fit(const std::vector<double>& amplitudes,
                               const std::vector<int>& arm_sites, int k_min,
                               int k_max) {
    if (k_min < 1 || k_max < k_min)
        throw FitDomainError("decay_rate_fit: bad window [" + std::to_string(k_min) +
                             ", " + std::to_string(k_max) + "]");
    if (k_max > static_cast<int>(arm_sites.size()))
        throw FitDomainError("decay_rate_fit: window reaches site " +
                             std::to_string(k_max) + " but the arm has " +
                             std::to_string(arm_sites.size()) + " sites");
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = k_max - k_min + 1;
    if (count < 2)
        throw FitDomainError("decay_rate_fit: need at least two points");
    std::vector<double> ys;
    for (int k = k_min; k <= k_max; ++k) {
        int site = arm_sites[k - 1];
        if (site < 0 || site >= static_cast<int>(amplitudes.size()))
            throw FitDomainError("decay_rate_fit: arm site index " +
                                 std::to_string(site) + " out of range");
        double a = std::abs(amplitudes[site]);
        if (a == 0.0)
            throw FitDomainError("decay_rate_fit: zero amplitude at arm site " +
                                 std::to_string(k));
        double y = std::log(a);
        ys.push_back(y);
        sx += k;
        sy += y;
        sxx += static_cast<long double>(k) * k;
        sxy += static_cast<long double>(k) * y;
    }
    long double denom = count * sxx - sx * sx;
    double slope = static_cast<double>((count * sxy - sx * sy) / denom);
    double mean = static_cast<double>(sy / count);
    long double ss_tot = 0, ss_res = 0;
    for (int k = k_min; k <= k_max; ++k) {
        double y = ys[k - k_min];
        long double fit = (sy / count) + slope * (k - static_cast<double>(sx) / count);
        ss_tot += (y - mean) * static_cast<long double>(y - mean);
        ss_res += (y - fit) * (y - fit);
    }
    double goodness = ss_tot <= 1e-30L ? 1.0 : static_cast<double>(1.0L - ss_res / ss_tot);
    return {-slope, goodness};
}

struct BoundState {
    int spectrum_index;
    double energy;
    double energy_over_ec;
    std::optional<double> energy_over_et;
    bool below_threshold;
    double localization;
    double tail_fraction;
    std::optional<double> decay_rate;
    std::optional<double> decay_rate_predicted;
};

struct BoundStateReport {
    std::string geometry;
    BandDescriptor band;
    std::vector<BoundState> states;
    int below_threshold_levels = 0;
};

// Chebyshev distance of every site from the mask center.
inline std::vector<int> mask_distances(const GridMask& mask) {
    std::vector<int> d;
    d.reserve(mask.site_count());
    for (auto [x, y] : mask.sites)
        d.push_back(std::max(std::abs(x - mask.center.first),
                             std::abs(y - mask.center.second)));
    return d;
}

inline double mass_within(const std::vector<double>& vec, const std::vector<int>& dist,
                          int radius) {
    long double inside = 0, total = 0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        long double w = static_cast<long double>(vec[i]) * vec[i];
        total += w;
        if (dist[i] <= radius)
            inside += w;
    }
    return total > 0 ? static_cast<double>(inside / total) : 0.0;
}

namespace detail {

inline double tail_mass(const std::vector<double>& vec, const std::vector<int>& dist,
                        int dist_max) {
    double cut = (2.0 / 3.0) * dist_max;
    long double tail = 0, total = 0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        long double w = static_cast<long double>(vec[i]) * vec[i];
        total += w;
        if (dist[i] >= cut)
            tail += w;
    }
    return total > 0 ? static_cast<double>(tail / total) : 0.0;
}

// Per-arm amplitude profile: |phi| site by site for one-dimensional arms,
// root-sum-square over rounded-distance shells for thick ones.
struct ArmProfile {
    std::vector<double> values;       // values[k-1] is the shell at distance k
    double weight = 0.0;
};

inline ArmProfile arm_profile_1d(const std::vector<double>& vec,
                                 const std::vector<int>& arm) {
    ArmProfile p;
    for (int site : arm) {
        p.values.push_back(std::abs(vec[site]));
        p.weight += vec[site] * vec[site];
    }
    return p;
}

inline ArmProfile arm_profile_binned(const std::vector<double>& vec,
                                     const std::vector<int>& arm,
                                     const GridMask& mask) {
    std::vector<double> acc;
    ArmProfile p;
    for (int site : arm) {
        auto [x, y] = mask.sites[site];
        double r = std::hypot(static_cast<double>(x - mask.center.first),
                              static_cast<double>(y - mask.center.second));
        int k = static_cast<int>(std::lround(r));
        if (k < 1)
            continue;
        if (k > static_cast<int>(acc.size()))
            acc.resize(k, 0.0);
        acc[k - 1] += vec[site] * vec[site];
        p.weight += vec[site] * vec[site];
    }
    for (double v : acc)
        p.values.push_back(std::sqrt(v));
    return p;
}

inline std::optional<double> fit_profile(const ArmProfile& profile) {
    int top = std::min<int>(10, static_cast<int>(profile.values.size()) - 1);
    if (top < 4)
        return std::nullopt;
    std::vector<int> sites(profile.values.size());
    for (std::size_t i = 0; i < sites.size(); ++i)
        sites[i] = static_cast<int>(i);
    try {
        DecayFit fit = decay_rate_fit(profile.values, sites, 2, top);
        return fit.kappa;
    } catch (const FitDomainError&) {
        return std::nullopt;
    }
}

inline std::optional<double> predicted_decay(double energy, Convention convention) {
    double e_chain = convention == Convention::ChainCentered ? energy : 4.0 - energy;
    if (std::abs(e_chain) <= 2.0)
        return std::nullopt;
    TransferRoots roots = transfer_roots(e_chain);
    double big = std::max(std::abs(roots.mu_plus), std::abs(roots.mu_minus));
    return std::log(big);
}

struct IdentifyInputs {
    const Spectrum* spectrum;
    const BandDescriptor* band;
    std::string geometry;
    Convention convention;
    const std::vector<int>* distances;
    const std::vector<std::vector<int>>* arms;
    bool one_dimensional;
    int loc_radius;
    const GridMask* mask;  // null for ideal chains
};

inline BoundStateReport identify(const IdentifyInputs& in) {
    const Spectrum& s = *in.spectrum;
    const BandDescriptor& band = *in.band;
    if (!s.has_vectors())
        throw NeedVectors("find_bound_states: spectrum carries no eigenvectors");
    if (!s.eigenvectors.empty() && s.eigenvectors[0].size() != in.distances->size())
        throw ShapeError("find_bound_states: eigenvector length " +
                         std::to_string(s.eigenvectors[0].size()) +
                         " does not match the geometry (" +
                         std::to_string(in.distances->size()) + " sites)");

    int dist_max = 0;
    for (int d : *in.distances)
        dist_max = std::max(dist_max, d);

    BoundStateReport report;
    report.geometry = in.geometry;
    report.band = band;

    const double half_width = (band.band_high - band.band_low) / 2.0;
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        double e = s.eigenvalues[i];
        const std::vector<double>& vec = s.eigenvectors[i];
        double tail = tail_mass(vec, *in.distances, dist_max);
        if (band.kind == BandKind::BlochBand) {
            if (std::abs(e - band.band_center) <= half_width + 1e-9)
                continue;
        } else {
            if (e >= 4.0 * band.e_threshold)
                continue;
            if (tail > 0.1)
                continue;
        }

        BoundState st;
        st.spectrum_index = static_cast<int>(i);
        st.energy = e;
        st.energy_over_ec = convert_energy(e, in.convention, Convention::GridShifted) / 4.0;
        st.energy_over_et = band.kind == BandKind::PropagatingThreshold
                                ? std::optional<double>(e / band.e_threshold)
                                : std::nullopt;
        st.below_threshold = e < band.band_low;
        st.localization = mass_within(vec, *in.distances, in.loc_radius);
        st.tail_fraction = tail;

        std::optional<ArmProfile> best;
        for (const auto& arm : *in.arms) {
            ArmProfile p = in.one_dimensional ? arm_profile_1d(vec, arm)
                                              : arm_profile_binned(vec, arm, *in.mask);
            if (!best || p.weight > best->weight)
                best = std::move(p);
        }
        st.decay_rate = best ? fit_profile(*best) : std::nullopt;
        st.decay_rate_predicted =
            in.one_dimensional ? predicted_decay(e, in.convention) : std::nullopt;
        report.states.push_back(std::move(st));
    }

    double level_gap = band.kind == BandKind::PropagatingThreshold
                           ? 0.1 * band.e_threshold
                           : 0.1;
    double prev = 0.0;
    bool first = true;
    for (const auto& st : report.states) {
        if (!st.below_threshold)
            continue;
        if (first || st.energy - prev > level_gap)
            ++report.below_threshold_levels;
        prev = st.energy;
        first = false;
    }
    return report;
}

}  // namespace detail

inline BoundStateReport find_bound_states(const Spectrum& spectrum,
                                          const BandDescriptor& band,
                                          const SiteLayout& layout) {
    int dist_max = 0;
    for (int d : layout.distance)
        dist_max = std::max(dist_max, d);
    detail::IdentifyInputs in;
    in.spectrum = &spectrum;
    in.band = &band;
    in.geometry = layout.geometry;
    in.convention = layout.convention;
    in.distances = &layout.distance;
    in.arms = &layout.arms;
    in.one_dimensional = layout.one_dimensional;
    in.loc_radius = std::min(10, dist_max);
    in.mask = nullptr;
    return detail::identify(in);
}

inline BoundStateReport find_bound_states(const Spectrum& spectrum,
                                          const BandDescriptor& band,
                                          const GridMask& mask) {
    std::vector<int> dist = mask_distances(mask);
    detail::IdentifyInputs in;
    in.spectrum = &spectrum;
    in.band = &band;
    in.geometry = "grid " + std::to_string(mask.width) + "x" +
                  std::to_string(mask.height) + ", " + std::to_string(mask.arms.size()) +
                  " arms, thickness " + std::to_string(mask.thickness);
    in.convention = Convention::GridShifted;
    in.distances = &dist;
    in.arms = &mask.arms;
    in.one_dimensional = mask.thickness == 1;
    int quarter = std::min(mask.width, mask.height) / 4;
    in.loc_radius = mask.thickness >= 1 ? std::min(2 * mask.thickness, quarter) : quarter;
    in.mask = &mask;
    return detail::identify(in);
}

struct SizeStabilityResult {
    double max_drift = 0.0;
    bool stable = true;
    std::vector<double> energies;
};

// Recompute one tracked level at several truncation sizes; a genuine bound
// state sits still while band-edge artifacts drift with the box.
template <typename EnergiesAt>
SizeStabilityResult size_stability(EnergiesAt&& energies_at, const std::vector<int>& sizes,
                                   std::size_t index, double tol) {
    if (sizes.empty())
        throw Error("size_stability: no sizes given");
    SizeStabilityResult result;
    for (int n : sizes) {
        std::vector<double> levels = energies_at(n);
        if (index >= levels.size())
            throw StateNotTracked("size_stability: level " + std::to_string(index) +
                                      " not present at size " + std::to_string(n) +
                                      " (only " + std::to_string(levels.size()) +
                                      " found)",
                                  n);
        result.energies.push_back(levels[index]);
    }
    for (std::size_t i = 1; i < result.energies.size(); ++i)
        result.max_drift = std::max(result.max_drift,
                                    std::abs(result.energies[i] - result.energies[i - 1]));
    result.stable = result.max_drift <= tol;
    return result;
}

struct MeshRefinementRow {
    int factor;
    int width;
    int height;
    int thickness;
    double e_threshold;
    std::vector<double> e_over_et;
};

struct MeshRefinementResult {
    std::vector<MeshRefinementRow> rows;
    double max_ratio_drift = 0.0;
};

// Scale a base geometry by integer factors and compare threshold-normalized
// bound energies across the family. The ratios, not the raw energies, are
// the mesh-independent quantity.
inline MeshRefinementResult mesh_refinement_check(
    int base_width, int base_height, int arms, int base_thickness,
    const RasterPolicy& policy, double base_arm_length, const std::vector<int>& factors,
    std::size_t dense_limit = DenseEigOptions{}.dense_limit) {
    MeshRefinementResult result;
    for (int f : factors) {
        if (f < 1)
            throw Error("mesh_refinement_check: factors must be positive");
        int w = base_width * f;
        int h = base_height * f;
        int t = base_thickness * f;
        double length = base_arm_length < 0.0 ? -1.0 : base_arm_length * f;
        GridMask mask = build_star_mask(w, h, arms, t, policy, length);
        SparseSymMatrix matrix = build_laplacian(mask);
        BandDescriptor band = t == 1 ? bloch_band(Convention::GridShifted) : guide_band(t);
        double et = propagation_threshold(t);

        Spectrum spectrum;
        if (matrix.dimension() <= dense_limit) {
            spectrum = eig_dense_symmetric(matrix);
        } else {
            int want = 8;
            const int most = static_cast<int>((matrix.dimension() - 1) / 2);
            for (;;) {
                want = std::min(want, most);
                spectrum = eig_extremal_lanczos(matrix, want, Which::Lowest);
                if (spectrum.eigenvalues.back() >= 4.0 * et || want == most)
                    break;
                want *= 2;
            }
        }

        BoundStateReport report = find_bound_states(spectrum, band, mask);
        MeshRefinementRow row;
        row.factor = f;
        row.width = w;
        row.height = h;
        row.thickness = t;
        row.e_threshold = et;
        for (const auto& st : report.states)
            row.e_over_et.push_back(st.energy_over_et ? *st.energy_over_et
                                                      : st.energy / et);
        result.rows.push_back(std::move(row));
    }
    for (std::size_t r = 1; r < result.rows.size(); ++r) {
        const auto& a = result.rows[r - 1].e_over_et;
        const auto& b = result.rows[r].e_over_et;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            result.max_ratio_drift =
                std::max(result.max_ratio_drift, std::abs(b[i] - a[i]));
    }
    return result;
}

}  // namespace starspec
