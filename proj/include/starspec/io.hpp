#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "lattice_grid.hpp"

namespace starspec {

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw Error("short write to " + path.string());
}

// Grayscale picture of |phi| on the grid, brightest pixel scaled to 255.
inline std::string portrait_pgm(const GridMask& mask, const std::vector<double>& vec,
                                const std::string& comment) {
    double peak = 0.0;
    for (double v : vec)
        peak = std::max(peak, std::abs(v));
    std::string out = "P2\n# " + comment + "\n" + std::to_string(mask.width) + " " +
                      std::to_string(mask.height) + "\n255\n";
    for (int y = mask.height - 1; y >= 0; --y) {
        for (int x = 0; x < mask.width; ++x) {
            int level = 0;
            if (mask.occupied(x, y) && peak > 0.0) {
                double a = std::abs(vec[static_cast<std::size_t>(mask.index_of(x, y))]);
                level = static_cast<int>(std::lround(255.0 * a / peak));
            }
            out += std::to_string(level);
            out += x + 1 == mask.width ? '\n' : ' ';
        }
    }
    return out;
}

// Same picture with a ten-step character ramp, handy in a terminal.
inline std::string portrait_text(const GridMask& mask, const std::vector<double>& vec) {
    static const char ramp[] = " .:-=+*#%@";
    double peak = 0.0;
    for (double v : vec)
        peak = std::max(peak, std::abs(v));
    std::string out;
    for (int y = mask.height - 1; y >= 0; --y) {
        for (int x = 0; x < mask.width; ++x) {
            char c = ' ';
            if (mask.occupied(x, y) && peak > 0.0) {
                double a = std::abs(vec[static_cast<std::size_t>(mask.index_of(x, y))]);
                int level = static_cast<int>(a / peak * 9.999);
                c = ramp[std::min(9, std::max(0, level))];
            }
            out += c;
        }
        out += '\n';
    }
    return out;
}

// Depth-first flattening of a JSON document into dotted key,value pairs.
inline void flatten_json(const nlohmann::json& j, const std::string& prefix,
                         std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                         out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten_json(j[i], prefix + "." + std::to_string(i), out);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

inline std::string flat_csv(const nlohmann::json& j) {
    std::vector<std::pair<std::string, std::string>> pairs;
    flatten_json(j, "", pairs);
    std::string out;
    for (const auto& [k, v] : pairs)
        out += k + "," + v + "\n";
    return out;
}

}  // namespace starspec
