#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "sparse.hpp"
#include "star_chain.hpp"

namespace starspec {

inline constexpr double kTwoPi = 6.28318530717958647692;

// How arm directions become lattice cells. BresenhamStaircase walks the
// closest monotone staircase to the ideal ray; AxisAligned snaps each arm to
// its dominant axis first.
enum class RasterMode { BresenhamStaircase, AxisAligned };

struct RasterPolicy {
    RasterMode mode = RasterMode::BresenhamStaircase;
    std::vector<double> angles = {};
};

struct GridMask {
    int width = 0;
    int height = 0;
    int thickness = 0;
    std::pair<int, int> center{0, 0};
    std::vector<std::uint8_t> occupancy;           // row-major, y * width + x
    std::vector<std::pair<int, int>> sites;        // junction first, arms outward
    std::vector<std::vector<int>> arms;            // site indices per arm
    std::vector<int> index;                        // cell -> site index, -1 if empty

    std::size_t site_count() const { return sites.size(); }

    bool in_grid(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    bool occupied(int x, int y) const {
        return in_grid(x, y) && occupancy[static_cast<std::size_t>(y) * width + x] != 0;
    }

    int index_of(int x, int y) const {
        if (!in_grid(x, y))
            return -1;
        return index[static_cast<std::size_t>(y) * width + x];
    }
};

namespace detail {

inline void assign_site_indices(GridMask& mask,
                                const std::vector<std::vector<std::pair<int, int>>>& arm_cells) {
    mask.index.assign(static_cast<std::size_t>(mask.width) * mask.height, -1);
    auto claim = [&mask](std::pair<int, int> cell) {
        std::size_t flat = static_cast<std::size_t>(cell.second) * mask.width + cell.first;
        if (mask.index[flat] < 0) {
            mask.index[flat] = static_cast<int>(mask.sites.size());
            mask.sites.push_back(cell);
        }
        return mask.index[flat];
    };
    claim(mask.center);
    for (const auto& cells : arm_cells) {
        std::vector<int> ids;
        ids.reserve(cells.size());
        for (const auto& cell : cells)
            ids.push_back(claim(cell));
        mask.arms.push_back(std::move(ids));
    }
    // anything placed during the root prepass but orphaned by a zero-length
    // arm still needs an index
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.occupancy[static_cast<std::size_t>(y) * mask.width + x] &&
                mask.index[static_cast<std::size_t>(y) * mask.width + x] < 0)
                claim({x, y});
}

inline std::vector<double> resolve_angles(int arms, const RasterPolicy& policy) {
    std::vector<double> angles = policy.angles;
    if (angles.empty()) {
        for (int j = 0; j < arms; ++j)
            angles.push_back(kTwoPi * j / arms);
    }
    if (static_cast<int>(angles.size()) != arms)
        throw Error("build_star_mask: " + std::to_string(arms) + " arms but " +
                    std::to_string(angles.size()) + " angles");
    std::vector<double> norm;
    for (double a : angles) {
        double v = std::fmod(a, kTwoPi);
        if (v < 0.0)
            v += kTwoPi;
        norm.push_back(v);
    }
    for (std::size_t i = 0; i < norm.size(); ++i) {
        for (std::size_t j = i + 1; j < norm.size(); ++j) {
            double d = std::abs(norm[i] - norm[j]);
            d = std::min(d, kTwoPi - d);
            if (d < 1e-9)
                throw Error("build_star_mask: arms " + std::to_string(i) + " and " +
                            std::to_string(j) + " point the same way");
        }
    }
    return norm;
}

}  // namespace detail

inline GridMask build_star_mask(int width, int height, int arms, int thickness,
                                const RasterPolicy& policy = {},
                                double arm_length = -1.0) {
    if (width < 1 || height < 1)
        throw Error("build_star_mask: grid must be at least 1x1");
    if (arms < 1)
        throw Error("build_star_mask: need at least one arm");
    if (thickness < 1)
        throw Error("build_star_mask: thickness must be positive");
    if (thickness > std::min(width, height))
        throw OutOfBounds("build_star_mask: thickness " + std::to_string(thickness) +
                          " exceeds the " + std::to_string(width) + "x" +
                          std::to_string(height) + " grid");

    std::vector<double> angles = detail::resolve_angles(arms, policy);

    GridMask mask;
    mask.width = width;
    mask.height = height;
    mask.thickness = thickness;
    mask.center = {width / 2, height / 2};
    mask.occupancy.assign(static_cast<std::size_t>(width) * height, 0);

    const int cx = mask.center.first;
    const int cy = mask.center.second;
    auto occupy = [&mask](int x, int y) {
        mask.occupancy[static_cast<std::size_t>(y) * mask.width + x] = 1;
    };
    auto is_occ = [&mask](std::pair<int, int> c) {
        return mask.in_grid(c.first, c.second) &&
               mask.occupancy[static_cast<std::size_t>(c.second) * mask.width + c.first] != 0;
    };
    occupy(cx, cy);

    std::vector<std::pair<double, double>> dirs;
    for (double th : angles) {
        double dx = std::cos(th);
        double dy = std::sin(th);
        if (std::abs(dx) < 1e-12)
            dx = 0.0;
        if (std::abs(dy) < 1e-12)
            dy = 0.0;
        if (policy.mode == RasterMode::AxisAligned) {
            if (std::abs(dx) >= std::abs(dy)) {
                dx = dx >= 0.0 ? 1.0 : -1.0;
                dy = 0.0;
            } else {
                dy = dy >= 0.0 ? 1.0 : -1.0;
                dx = 0.0;
            }
        }
        dirs.emplace_back(dx, dy);
    }

    if (arm_length >= 0.0) {
        for (auto [dx, dy] : dirs) {
            int ex = static_cast<int>(std::lround(cx + dx * arm_length));
            int ey = static_cast<int>(std::lround(cy + dy * arm_length));
            if (!mask.in_grid(ex, ey))
                throw OutOfBounds("build_star_mask: arm of length " +
                                  std::to_string(arm_length) +
                                  " does not fit in the grid");
        }
    }

    std::vector<std::vector<std::pair<int, int>>> arm_cells(dirs.size());

    if (thickness == 1) {
        // pin every arm's first site before any staircase walks, so junction
        // regions come out as trees instead of picking up loops
        for (auto [dx, dy] : dirs) {
            bool major_x = std::abs(dx) >= std::abs(dy);
            std::pair<int, int> first =
                major_x ? std::pair<int, int>{cx + (dx > 0 ? 1 : -1), cy}
                        : std::pair<int, int>{cx, cy + (dy > 0 ? 1 : -1)};
            if (mask.in_grid(first.first, first.second))
                occupy(first.first, first.second);
        }
        for (std::size_t a = 0; a < dirs.size(); ++a) {
            auto [dx, dy] = dirs[a];
            auto& arm = arm_cells[a];
            bool major_x = std::abs(dx) >= std::abs(dy);
            std::pair<int, int> s{cx, cy};

            auto place = [&](std::pair<int, int> site) {
                if (!mask.in_grid(site.first, site.second))
                    return false;
                if (arm_length >= 0.0) {
                    double u = (site.first - cx) * dx + (site.second - cy) * dy;
                    if (u > arm_length + 1e-9)
                        return false;
                }
                occupy(site.first, site.second);
                arm.push_back(site);
                s = site;
                return true;
            };

            std::pair<int, int> first =
                major_x ? std::pair<int, int>{cx + (dx > 0 ? 1 : -1), cy}
                        : std::pair<int, int>{cx, cy + (dy > 0 ? 1 : -1)};
            if (!place(first))
                continue;

            int smaj, smin;
            double ratio;
            if (major_x) {
                smaj = dx > 0 ? 1 : -1;
                ratio = dx != 0.0 ? std::abs(dy / dx) : 0.0;
                smin = dy > 0 ? 1 : -1;
            } else {
                smaj = dy > 0 ? 1 : -1;
                ratio = dy != 0.0 ? std::abs(dx / dy) : 0.0;
                smin = dx > 0 ? 1 : -1;
            }

            for (int k = 2;; ++k) {
                int mj = smaj * k;
                int mn = smin * static_cast<int>(std::floor(ratio * k + 0.5));
                std::pair<int, int> target = major_x
                                                 ? std::pair<int, int>{cx + mj, cy + mn}
                                                 : std::pair<int, int>{cx + mn, cy + mj};
                int ddx = target.first - s.first;
                int ddy = target.second - s.second;
                if (std::abs(ddx) + std::abs(ddy) == 2 && ddx != 0 && ddy != 0) {
                    std::pair<int, int> c1{target.first, s.second};
                    std::pair<int, int> c2{s.first, target.second};
                    auto extra_contacts = [&](std::pair<int, int> c) {
                        int n = 0;
                        for (auto nb : {std::pair<int, int>{c.first + 1, c.second},
                                        {c.first - 1, c.second},
                                        {c.first, c.second + 1},
                                        {c.first, c.second - 1}})
                            if (is_occ(nb) && nb != s)
                                ++n;
                        return n;
                    };
                    auto dev = [&](std::pair<int, int> c) {
                        double rx = c.first - cx;
                        double ry = c.second - cy;
                        return std::abs(rx * dy - ry * dx);
                    };
                    // fresh cells that would touch existing sites sort last:
                    // reusing an occupied cell is free, creating a contact
                    // where none existed closes a loop
                    auto key = [&](std::pair<int, int> c, bool is_c2) {
                        return std::tuple<bool, double, bool>(
                            !is_occ(c) && extra_contacts(c) > 0, dev(c), is_c2);
                    };
                    std::pair<int, int> mid = key(c1, false) <= key(c2, true) ? c1 : c2;
                    if (!place(mid))
                        break;
                }
                if (!place(target))
                    break;
                if (k > 4 * (width + height))
                    break;
            }
        }
    } else {
        const int lo = (thickness - 1) / 2;
        const int hi = thickness / 2;
        std::vector<std::vector<double>> claim_depth(
            static_cast<std::size_t>(width) * height);
        for (std::size_t a = 0; a < dirs.size(); ++a) {
            auto [dx, dy] = dirs[a];
            double px = -dy, py = dx;
            if (py < 0.0 || (py == 0.0 && px < 0.0)) {
                px = -px;
                py = -py;
            }
            for (int x = 0; x < width; ++x) {
                for (int y = 0; y < height; ++y) {
                    double rx = x - cx, ry = y - cy;
                    double u = rx * dx + ry * dy;
                    double w = rx * px + ry * py;
                    if (u < -1e-9)
                        continue;
                    if (arm_length >= 0.0 && u > arm_length + 1e-9)
                        continue;
                    if (-lo - 0.5 < w && w <= hi + 0.5) {
                        occupy(x, y);
                        arm_cells[a].emplace_back(x, y);
                        claim_depth[static_cast<std::size_t>(y) * width + x].push_back(u);
                    }
                }
            }
        }
        // two arms sharing cells deep along both axes means the bands merged
        // outright rather than just meeting at the junction
        const double junction_reach = 1.5 * thickness + 1.0;
        for (auto& depths : claim_depth) {
            if (depths.size() < 2)
                continue;
            std::sort(depths.begin(), depths.end());
            if (depths[depths.size() - 2] > junction_reach)
                throw GeometryOverlap(
                    "build_star_mask: arms overlap far outside the junction; "
                    "spread the angles or reduce the thickness");
        }
    }

    detail::assign_site_indices(mask, arm_cells);
    return mask;
}

inline std::string mask_to_text(const GridMask& mask) {
    std::string out = std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n";
    for (int y = mask.height - 1; y >= 0; --y) {
        for (int x = 0; x < mask.width; ++x)
            out += mask.occupied(x, y) ? '#' : '.';
        out += '\n';
    }
    return out;
}

inline GridMask mask_from_text(const std::string& text) {
    std::istringstream in(text);
    int w = 0, h = 0;
    if (!(in >> w >> h) || w < 1 || h < 1)
        throw Error("mask_from_text: expected a \"width height\" header");
    std::string line;
    std::getline(in, line);

    GridMask mask;
    mask.width = w;
    mask.height = h;
    mask.center = {w / 2, h / 2};
    mask.occupancy.assign(static_cast<std::size_t>(w) * h, 0);
    for (int row = 0; row < h; ++row) {
        if (!std::getline(in, line))
            throw Error("mask_from_text: expected " + std::to_string(h) +
                        " rows, got " + std::to_string(row));
        if (static_cast<int>(line.size()) != w)
            throw Error("mask_from_text: row " + std::to_string(row) + " has " +
                        std::to_string(line.size()) + " cells, expected " +
                        std::to_string(w));
        int y = h - 1 - row;
        for (int x = 0; x < w; ++x) {
            if (line[x] == '#')
                mask.occupancy[static_cast<std::size_t>(y) * w + x] = 1;
            else if (line[x] != '.')
                throw Error(std::string("mask_from_text: unexpected character '") +
                            line[x] + "'");
        }
    }
    mask.index.assign(static_cast<std::size_t>(w) * h, -1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.occupancy[static_cast<std::size_t>(y) * w + x]) {
                mask.index[static_cast<std::size_t>(y) * w + x] =
                    static_cast<int>(mask.sites.size());
                mask.sites.emplace_back(x, y);
            }
    return mask;
}

inline GridMask mask_from_pgm(const std::string& pgm) {
    std::string cleaned;
    std::istringstream raw(pgm);
    std::string line;
    while (std::getline(raw, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        cleaned += line + "\n";
    }
    std::istringstream in(cleaned);
    std::string magic;
    in >> magic;
    if (magic != "P2")
        throw Error("mask_from_pgm: expected plain-text magic P2, got \"" + magic + "\"");
    int w = 0, h = 0, maxval = 0;
    if (!(in >> w >> h >> maxval) || w < 1 || h < 1 || maxval < 1)
        throw Error("mask_from_pgm: bad header");

    std::string text = std::to_string(w) + " " + std::to_string(h) + "\n";
    for (int row = 0; row < h; ++row) {
        for (int x = 0; x < w; ++x) {
            int v;
            if (!(in >> v))
                throw Error("mask_from_pgm: truncated pixel data");
            text += v > 0 ? '#' : '.';
        }
        text += '\n';
    }
    return mask_from_text(text);
}

// Five-point -Laplacian restricted to the mask, with Dirichlet outside: 4 on
// the diagonal, -1 between occupied four-neighbors. Refuses masks that fall
// into disconnected pieces.
inline SparseSymMatrix build_laplacian(const GridMask& mask) {
    const std::size_t n = mask.site_count();
    if (n == 0)
        throw Error("build_laplacian: empty mask");

    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        auto [x, y] = mask.sites[frontier.front()];
        frontier.pop();
        for (auto [nx, ny] : {std::pair<int, int>{x + 1, y},
                              {x - 1, y},
                              {x, y + 1},
                              {x, y - 1}}) {
            int j = mask.index_of(nx, ny);
            if (j >= 0 && !seen[j]) {
                seen[j] = 1;
                ++reached;
                frontier.push(j);
            }
        }
    }
    if (reached != n)
        throw Disconnected("build_laplacian: mask splits into pieces (" +
                           std::to_string(reached) + " of " + std::to_string(n) +
                           " sites reachable)");

    SparseSymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [x, y] = mask.sites[i];
        m.add(static_cast<int>(i), static_cast<int>(i), 4.0);
        for (auto [nx, ny] : {std::pair<int, int>{x + 1, y}, {x, y + 1}}) {
            int j = mask.index_of(nx, ny);
            if (j >= 0)
                m.add(static_cast<int>(i), j, -1.0);
        }
    }
    m.finalize();
    return m;
}

// Ideal star chain: junction site 0, then each arm's sites in order, walking
// outward. ChainCentered gives the bare +1 hopping matrix, GridShifted the
// 4I-minus-hopping form that matches build_laplacian on thin axis arms.
inline SparseSymMatrix build_star_chain_matrix(const StarChainSpec& spec) {
    spec.validate();
    const std::size_t n = spec.dimension();
    const double hop = spec.convention == Convention::ChainCentered ? 1.0 : -1.0;
    SparseSymMatrix m(n);
    if (spec.convention == Convention::GridShifted)
        for (std::size_t i = 0; i < n; ++i)
            m.add(static_cast<int>(i), static_cast<int>(i), 4.0);
    for (int a = 0; a < spec.arms; ++a) {
        int base = 1 + a * spec.sites;
        m.add(0, base, hop);
        for (int k = 0; k + 1 < spec.sites; ++k)
            m.add(base + k, base + k + 1, hop);
    }
    m.finalize();
    return m;
}

// Two arms of n sites plus a single dangling stem site on the junction,
// in the centered convention. Site order: junction, arm one, arm two, stem.
inline SparseSymMatrix build_stem_chain_matrix(int sites_per_arm) {
    if (sites_per_arm < 1)
        throw Error("build_stem_chain_matrix: need at least one site per arm");
    const int n = 2 * sites_per_arm + 2;
    SparseSymMatrix m(n);
    for (int a = 0; a < 2; ++a) {
        int base = 1 + a * sites_per_arm;
        m.add(0, base, 1.0);
        for (int k = 0; k + 1 < sites_per_arm; ++k)
            m.add(base + k, base + k + 1, 1.0);
    }
    m.add(0, n - 1, 1.0);
    m.finalize();
    return m;
}

}  // namespace starspec
