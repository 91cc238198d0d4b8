#pragma once

#include <cstdint>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigensolve.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "lattice_grid.hpp"
#include "spectra.hpp"
#include "star_chain.hpp"
#include "version.hpp"

namespace starspec {

namespace cli_detail {

using nlohmann::json;
namespace fs = std::filesystem;

inline json state_to_json(const BoundState& st) {
    json j;
    j["index"] = st.spectrum_index;
    j["energy"] = st.energy;
    j["energy_over_ec"] = st.energy_over_ec;
    if (st.energy_over_et)
        j["energy_over_et"] = *st.energy_over_et;
    j["below_threshold"] = st.below_threshold;
    j["localization"] = st.localization;
    j["tail_fraction"] = st.tail_fraction;
    if (st.decay_rate)
        j["decay_rate"] = *st.decay_rate;
    if (st.decay_rate_predicted)
        j["decay_rate_predicted"] = *st.decay_rate_predicted;
    return j;
}

inline void emit(const json& report, const std::string& format) {
    if (format == "csv")
        std::cout << flat_csv(report);
    else
        std::cout << report.dump(2) << "\n";
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

struct ChainOptions {
    int arms = 3;
    int sites = 0;
    bool stem = false;
    std::uint64_t seed = 20260823ull;
    std::string out;
    std::string format = "json";
};

inline void run_chain(const ChainOptions& opt) {
    SparseSymMatrix matrix;
    SiteLayout layout;
    json config;
    json analytic;
    if (opt.stem) {
        matrix = build_stem_chain_matrix(opt.sites);
        layout = stem_chain_layout(opt.sites);
        config = {{"arms", 2}, {"sites", opt.sites}, {"stem", true}};
        BoundEnergies be = stem_bound_energies();
        analytic = {{"e_minus", be.e_minus},
                    {"e_plus", be.e_plus},
                    {"decay_factor", be.decay_factor}};
    } else {
        StarChainSpec spec{opt.arms, opt.sites, Convention::ChainCentered};
        matrix = build_star_chain_matrix(spec);
        layout = star_chain_layout(spec);
        config = {{"arms", opt.arms}, {"sites", opt.sites}, {"stem", false}};
        BoundEnergies be = bound_energies(opt.arms);
        analytic = {{"e_minus", be.e_minus},
                    {"e_plus", be.e_plus},
                    {"decay_factor", be.decay_factor}};
    }

    Spectrum s = eig_dense_symmetric(matrix);
    BoundStateReport r =
        find_bound_states(s, bloch_band(Convention::ChainCentered), layout);

    json report;
    report["version"] = kVersion;
    report["command"] = "chain";
    report["convention"] = "chain-centered";
    report["seed"] = opt.seed;
    report["config"] = config;
    report["analytic"] = analytic;
    report["geometry"] = r.geometry;
    report["no_bound_states"] = r.states.empty();
    report["below_threshold_levels"] = r.below_threshold_levels;
    report["bound_states"] = json::array();
    for (const auto& st : r.states)
        report["bound_states"].push_back(state_to_json(st));
    if (!r.states.empty())
        report["numeric"] = {{"e_minus", r.states.front().energy},
                             {"e_plus", r.states.back().energy}};

    if (!opt.out.empty()) {
        fs::path dir(opt.out);
        fs::create_directories(dir);
        write_text_file(dir / "chain_report.json", report.dump(2) + "\n");

        std::string csv = "state,arm,k,amplitude\n";
        for (std::size_t i = 0; i < r.states.size(); ++i) {
            const std::vector<double>& vec = s.eigenvectors[r.states[i].spectrum_index];
            std::string name = r.states.size() == 2
                                   ? (i == 0 ? "minus" : "plus")
                                   : "state" + std::to_string(i);
            csv += name + ",center,0," + fmt_g17(vec[0]) + "\n";
            int n = opt.sites;
            int main_arms = opt.stem ? 2 : opt.arms;
            for (int a = 0; a < main_arms; ++a)
                for (int k = 1; k <= n; ++k)
                    csv += name + "," + std::to_string(a) + "," + std::to_string(k) +
                           "," + fmt_g17(vec[a * n + k]) + "\n";
            if (opt.stem)
                csv += name + ",stem,1," + fmt_g17(vec[2 * n + 1]) + "\n";
        }
        write_text_file(dir / "chain_vectors.csv", csv);
    }
    emit(report, opt.format);
}

struct GridOptions {
    int size = 0;
    int arms = 4;
    int thickness = 1;
    double arm_length = -1.0;
    std::string angles;
    std::string raster = "staircase";
    std::string solver = "dense";
    int count = 8;
    std::uint64_t seed = 20260823ull;
    std::string out;
    std::string format = "json";
};

inline void run_grid(const GridOptions& opt) {
    RasterPolicy policy;
    policy.mode = opt.raster == "axis-aligned" ? RasterMode::AxisAligned
                                               : RasterMode::BresenhamStaircase;
    for (const std::string& a : split_list(opt.angles))
        policy.angles.push_back(std::stod(a) * kTwoPi / 360.0);

    GridMask mask =
        build_star_mask(opt.size, opt.size, opt.arms, opt.thickness, policy,
                        opt.arm_length);
    SparseSymMatrix matrix = build_laplacian(mask);
    const double et = propagation_threshold(opt.thickness);
    BandDescriptor band = opt.thickness == 1 ? bloch_band(Convention::GridShifted)
                                             : guide_band(opt.thickness);

    Spectrum s;
    if (opt.solver == "lanczos") {
        if (opt.thickness == 1) {
            s = eig_extremal_lanczos(matrix, opt.count, Which::Both, 1e-10, opt.seed);
        } else {
            const int most =
                std::max(1, static_cast<int>((matrix.dimension() - 1) / 2));
            int want = opt.count;
            for (;;) {
                want = std::min(want, most);
                s = eig_extremal_lanczos(matrix, want, Which::Lowest, 1e-10, opt.seed);
                if (s.eigenvalues.back() >= 4.0 * et || want == most)
                    break;
                want *= 2;
            }
        }
    } else {
        s = eig_dense_symmetric(matrix);
    }

    BoundStateReport r = find_bound_states(s, band, mask);

    json report;
    report["version"] = kVersion;
    report["command"] = "grid";
    report["convention"] = "grid-shifted";
    report["seed"] = opt.seed;
    report["solver"] = opt.solver;
    report["dim"] = matrix.dimension();
    report["config"] = {{"size", opt.size},
                        {"arms", opt.arms},
                        {"thickness", opt.thickness},
                        {"raster", opt.raster},
                        {"arm_length", opt.arm_length}};
    if (!opt.angles.empty())
        report["config"]["angles_deg"] = opt.angles;
    report["thresholds"] = {
        {"e_t", et},
        {"band", {{"low", band.band_low}, {"high", band.band_high},
                  {"center", band.band_center}}}};
    report["geometry"] = r.geometry;
    report["no_bound_states"] = r.states.empty();
    report["below_threshold_levels"] = r.below_threshold_levels;
    report["bound_states"] = json::array();
    for (const auto& st : r.states)
        report["bound_states"].push_back(state_to_json(st));

    if (!opt.out.empty()) {
        fs::path dir(opt.out);
        fs::create_directories(dir);
        write_text_file(dir / "grid_report.json", report.dump(2) + "\n");
        write_text_file(dir / "grid_mask.txt", mask_to_text(mask));

        std::vector<int> dist = mask_distances(mask);
        int quarter = std::min(mask.width, mask.height) / 4;
        int radius = mask.thickness >= 1 ? std::min(2 * mask.thickness, quarter)
                                         : quarter;
        std::string csv = "index,energy,energy_over_et,energy_over_ec,localization\n";
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            double e = s.eigenvalues[i];
            csv += std::to_string(i) + "," + fmt_g17(e) + "," + fmt_g17(e / et) + "," +
                   fmt_g17(e / 4.0) + "," +
                   fmt_g17(mass_within(s.eigenvectors[i], dist, radius)) + "\n";
        }
        write_text_file(dir / "grid_spectrum.csv", csv);

        for (std::size_t i = 0; i < r.states.size(); ++i) {
            const std::vector<double>& vec = s.eigenvectors[r.states[i].spectrum_index];
            std::string comment = "|phi| for bound state " + std::to_string(i) +
                                  ", energy " + fmt_g17(r.states[i].energy);
            write_text_file(dir / ("grid_state_" + std::to_string(i) + ".pgm"),
                            portrait_pgm(mask, vec, comment));
            write_text_file(dir / ("grid_state_" + std::to_string(i) + ".txt"),
                            portrait_text(mask, vec));
        }
    }
    emit(report, opt.format);
}

struct SweepOptions {
    std::string axis;
    std::string values;
    std::string kind = "chain";
    int arms = 0;
    int sites = 20;
    int size = 20;
    int thickness = 1;
    int jobs = 1;
    std::uint64_t seed = 20260823ull;
    std::string out;
    std::string format = "json";
};

struct SweepRow {
    std::vector<std::string> fields;        // all but the drift column
    std::optional<double> e1;
};

inline SweepRow sweep_one(const SweepOptions& opt, int value) {
    SweepRow row;
    auto& f = row.fields;
    f.assign(21, "");
    f[0] = opt.axis;
    f[1] = std::to_string(value);
    f[2] = opt.kind;
    f[20] = "ok";
    try {
        std::vector<BoundState> states;
        if (opt.kind == "chain") {
            if (opt.axis != "arms" && opt.axis != "sites")
                throw Error("sweep: axis '" + opt.axis + "' does not apply to chains");
            int p = opt.axis == "arms" ? value : (opt.arms > 0 ? opt.arms : 3);
            int n = opt.axis == "sites" ? value : opt.sites;
            StarChainSpec spec{p, n, Convention::ChainCentered};
            Spectrum s = eig_dense_symmetric(build_star_chain_matrix(spec));
            BoundStateReport r =
                find_bound_states(s, bloch_band(spec.convention), star_chain_layout(spec));
            f[3] = std::to_string(p);
            f[7] = std::to_string(n);
            f[8] = std::to_string(spec.dimension());
            states = r.states;
        } else {
            if (opt.axis == "sites")
                throw Error("sweep: axis 'sites' does not apply to grids");
            int size = opt.axis == "size" ? value : opt.size;
            int p = opt.axis == "arms" ? value : (opt.arms > 0 ? opt.arms : 4);
            int t = opt.axis == "thickness" ? value : opt.thickness;
            GridMask mask = build_star_mask(size, size, p, t);
            SparseSymMatrix matrix = build_laplacian(mask);
            BandDescriptor band =
                t == 1 ? bloch_band(Convention::GridShifted) : guide_band(t);
            Spectrum s;
            if (matrix.dimension() <= DenseEigOptions{}.dense_limit) {
                s = eig_dense_symmetric(matrix);
            } else {
                const double et = propagation_threshold(t);
                const int most =
                    std::max(1, static_cast<int>((matrix.dimension() - 1) / 2));
                int want = 8;
                for (;;) {
                    want = std::min(want, most);
                    s = eig_extremal_lanczos(matrix, want, Which::Lowest, 1e-10,
                                             opt.seed);
                    if (s.eigenvalues.back() >= 4.0 * et || want == most)
                        break;
                    want *= 2;
                }
            }
            BoundStateReport r = find_bound_states(s, band, mask);
            f[3] = std::to_string(p);
            f[4] = std::to_string(t);
            f[5] = std::to_string(size);
            f[6] = std::to_string(size);
            f[8] = std::to_string(matrix.dimension());
            states = r.states;
        }
        f[9] = std::to_string(states.size());
        for (std::size_t i = 0; i < 3 && i < states.size(); ++i) {
            f[10 + 3 * i] = fmt_g17(states[i].energy);
            if (states[i].energy_over_et)
                f[11 + 3 * i] = fmt_g17(*states[i].energy_over_et);
            f[12 + 3 * i] = fmt_g17(states[i].energy_over_ec);
        }
        if (!states.empty())
            row.e1 = states[0].energy;
    } catch (const Error&) {
        f[20] = "error";
    }
    return row;
}

inline void run_sweep(const SweepOptions& opt) {
    std::vector<int> values;
    for (const std::string& v : split_list(opt.values))
        values.push_back(std::stoi(v));

    std::vector<SweepRow> rows(values.size());
    if (opt.jobs > 1) {
        std::vector<std::future<SweepRow>> pending;
        for (int v : values)
            pending.push_back(std::async(std::launch::async,
                                         [&opt, v] { return sweep_one(opt, v); }));
        for (std::size_t i = 0; i < pending.size(); ++i)
            rows[i] = pending[i].get();
    } else {
        for (std::size_t i = 0; i < values.size(); ++i)
            rows[i] = sweep_one(opt, values[i]);
    }

    std::string csv =
        "axis,value,kind,arms,thickness,width,height,sites,dim,n_bound,"
        "e_1,e_1_over_et,e_1_over_ec,e_2,e_2_over_et,e_2_over_ec,"
        "e_3,e_3_over_et,e_3_over_ec,drift,status\n";
    std::optional<double> prev;
    for (auto& row : rows) {
        if (row.e1 && prev)
            row.fields[19] = fmt_g17(std::abs(*row.e1 - *prev));
        if (row.e1)
            prev = row.e1;
        for (std::size_t i = 0; i < row.fields.size(); ++i)
            csv += row.fields[i] + (i + 1 == row.fields.size() ? "\n" : ",");
    }

    if (!opt.out.empty()) {
        fs::path dir(opt.out);
        fs::create_directories(dir);
        write_text_file(dir / "sweep.csv", csv);
    }

    json report;
    report["version"] = kVersion;
    report["command"] = "sweep";
    report["config"] = {{"axis", opt.axis}, {"kind", opt.kind}, {"jobs", opt.jobs}};
    report["rows"] = values.size();
    emit(report, opt.format);
}

struct PredictOptions {
    double omega0 = 0.0;
    double delta = 0.0;
    int arms = 0;
    std::string out;
    std::string format = "json";
};

inline void run_predict(const PredictOptions& opt) {
    ResonancePrediction r = predict_resonances(opt.omega0, opt.delta, opt.arms);

    json report;
    report["version"] = kVersion;
    report["command"] = "predict";
    report["config"] = {{"omega0", opt.omega0}, {"delta", opt.delta},
                        {"arms", opt.arms}};
    report["resonances"] = {{"f_low", r.f_low},
                            {"f_high", r.f_high},
                            {"splitting", r.f_high - r.f_low}};
    report["band"] = {{"low", r.band_low}, {"high", r.band_high},
                      {"center", opt.omega0}};
    report["display"] = {{"f_low", fmt_fixed(r.f_low, 4)},
                         {"f_high", fmt_fixed(r.f_high, 4)}};

    if (!opt.out.empty()) {
        fs::path dir(opt.out);
        fs::create_directories(dir);
        write_text_file(dir / "predict.json", report.dump(2) + "\n");
    }
    emit(report, opt.format);
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args) {
    using namespace cli_detail;

    CLI::App app{"spectral laboratory for star-shaped chains and quantum wires",
                 "starspec"};
    app.require_subcommand(1);

    ChainOptions chain;
    CLI::App* chain_cmd = app.add_subcommand("chain", "diagonalize an ideal star chain");
    chain_cmd->add_option("--arms", chain.arms, "number of arms");
    chain_cmd->add_option("--sites", chain.sites, "sites per arm")->required();
    chain_cmd->add_flag("--stem", chain.stem, "two arms plus a dangling stem site");
    chain_cmd->add_option("--seed", chain.seed, "seed echoed into the report");
    chain_cmd->add_option("--out", chain.out, "output directory");
    chain_cmd->add_option("--format", chain.format, "stdout format")
        ->check(CLI::IsMember({"json", "csv"}));

    GridOptions grid;
    CLI::App* grid_cmd =
        app.add_subcommand("grid", "rasterize a star onto a square lattice");
    grid_cmd->add_option("--size", grid.size, "grid width and height")->required();
    grid_cmd->add_option("--arms", grid.arms, "number of arms");
    grid_cmd->add_option("--thickness", grid.thickness, "arm thickness in cells");
    grid_cmd->add_option("--arm-length", grid.arm_length, "arm length in cells");
    grid_cmd->add_option("--angles", grid.angles, "comma list of arm angles in degrees");
    grid_cmd->add_option("--raster", grid.raster, "arm rasterization rule")
        ->check(CLI::IsMember({"staircase", "axis-aligned"}));
    grid_cmd->add_option("--solver", grid.solver, "eigensolver")
        ->check(CLI::IsMember({"dense", "lanczos"}));
    grid_cmd->add_option("--count", grid.count, "eigenpairs per end for lanczos");
    grid_cmd->add_option("--seed", grid.seed, "lanczos start vector seed");
    grid_cmd->add_option("--out", grid.out, "output directory");
    grid_cmd->add_option("--format", grid.format, "stdout format")
        ->check(CLI::IsMember({"json", "csv"}));

    SweepOptions sweep;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "scan a family of geometries into one table");
    sweep_cmd->add_option("--axis", sweep.axis, "quantity to scan")
        ->required()
        ->check(CLI::IsMember({"arms", "sites", "size", "thickness"}));
    sweep_cmd->add_option("--values", sweep.values, "comma list of integer values")
        ->required();
    sweep_cmd->add_option("--kind", sweep.kind, "geometry family")
        ->check(CLI::IsMember({"chain", "grid"}));
    sweep_cmd->add_option("--arms", sweep.arms, "fixed arm count");
    sweep_cmd->add_option("--sites", sweep.sites, "fixed sites per arm (chains)");
    sweep_cmd->add_option("--size", sweep.size, "fixed grid size (grids)");
    sweep_cmd->add_option("--thickness", sweep.thickness, "fixed thickness (grids)");
    sweep_cmd->add_option("--jobs", sweep.jobs, "worker count");
    sweep_cmd->add_option("--seed", sweep.seed, "lanczos start vector seed");
    sweep_cmd->add_option("--out", sweep.out, "output directory");
    sweep_cmd->add_option("--format", sweep.format, "stdout format")
        ->check(CLI::IsMember({"json", "csv"}));

    PredictOptions predict;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "detuned resonance pair for a microwave star");
    predict_cmd->add_option("--omega0", predict.omega0, "center frequency")->required();
    predict_cmd->add_option("--delta", predict.delta, "coupling half-bandwidth scale")
        ->required();
    predict_cmd->add_option("--arms", predict.arms, "number of arms")->required();
    predict_cmd->add_option("--out", predict.out, "output directory");
    predict_cmd->add_option("--format", predict.format, "stdout format")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success))
            return app.exit(e);
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (chain_cmd->parsed())
            run_chain(chain);
        else if (grid_cmd->parsed())
            run_grid(grid);
        else if (sweep_cmd->parsed())
            run_sweep(sweep);
        else if (predict_cmd->parsed())
            run_predict(predict);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace starspec
