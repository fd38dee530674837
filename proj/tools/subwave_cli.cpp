// Command-line front end for the double-slit correlation library.
//
// Subcommands
//   fringe      diagonal and antidiagonal G2 scans
//   surface     G2 on an (x1, x2) grid
//   visibility  closed-form visibility tables and scan-extracted values
//   gain-sweep  broadband coefficients versus coupling strength
//   classical   coherent-light reference curves
//
// All files are CSV with '#' metadata lines, 17 significant digits, and
// atomic replacement; output bytes depend only on the configuration.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <subwave/io/config.hpp>
#include <subwave/io/csv.hpp>
#include <subwave/subwave.hpp>

namespace {

using namespace subwave;
namespace fs = std::filesystem;

struct CommonArgs {
    std::string config_path;
    std::string mode;
    std::string out_dir;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON configuration file");
    cmd->add_option("--mode", args.mode, "evaluation mode: full or broadband")
        ->check(CLI::IsMember({"full", "broadband"}));
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--set", args.sets, "override a config entry, e.g. crystal.g=2.0");
}

io::RunConfig resolve(const CommonArgs& args) {
    io::RunConfig cfg = io::load_run_config(args.config_path, args.sets);
    if (!args.mode.empty()) cfg.mode = io::parse_mode(args.mode);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

std::vector<double> scan_positions(const io::RunConfig& cfg) {
    std::vector<double> xs;
    xs.reserve(cfg.scan.points);
    for (int i = 0; i < cfg.scan.points; ++i) {
        const double t = static_cast<double>(i) / (cfg.scan.points - 1);
        const double xn = cfg.scan.x_min + t * (cfg.scan.x_max - cfg.scan.x_min);
        xs.push_back(io::physical_x(xn, cfg.scene.slits, cfg.scene.det));
    }
    return xs;
}

void add_scene_meta(io::CsvTable& t, const io::RunConfig& cfg) {
    t.add_meta("mode", to_string(cfg.mode));
    t.add_meta("g", cfg.scene.crystal.g);
    t.add_meta("delta0", cfg.scene.crystal.delta0);
    t.add_meta("q0", cfg.scene.crystal.q0);
    t.add_meta("omega0", cfg.scene.crystal.omega0);
    t.add_meta("b", cfg.scene.slits.b);
    t.add_meta("d", cfg.scene.slits.d);
    t.add_meta("k", cfg.scene.det.k);
    t.add_meta("z", cfg.scene.det.z);
    t.add_meta("x_unit", "k*b*x/(2*pi*z)");
}

void write_scan(const fs::path& path, const FringeScan& scan, const io::RunConfig& cfg) {
    io::CsvTable t;
    add_scene_meta(t, cfg);
    t.add_meta("kind", to_string(scan.kind));
    t.add_meta("normalization", scan.normalization);
    const char* value_col = (scan.kind == ScanKind::classical_g1) ? "g1" : "g2";
    t.columns = {"x", value_col};
    for (std::size_t i = 0; i < scan.positions.size(); ++i)
        t.add_row({io::normalized_x(scan.positions[i], cfg.scene.slits, cfg.scene.det),
                   scan.values[i]});
    io::write_csv(path, t);
}

int cmd_fringe(const CommonArgs& args) {
    const io::RunConfig cfg = resolve(args);
    const std::vector<double> xs = scan_positions(cfg);
    Correlator corr(cfg.scene);
    const FringeScan diag = diagonal_scan(xs, corr, cfg.mode);
    const FringeScan anti = antidiagonal_scan(xs, corr, cfg.mode);
    write_scan(fs::path(cfg.out_dir) / "fringe_diagonal.csv", diag, cfg);
    write_scan(fs::path(cfg.out_dir) / "fringe_antidiagonal.csv", anti, cfg);
    std::printf("wrote %s/fringe_diagonal.csv and fringe_antidiagonal.csv (%d points)\n",
                cfg.out_dir.c_str(), cfg.scan.points);
    return 0;
}

int cmd_surface(const CommonArgs& args) {
    const io::RunConfig cfg = resolve(args);
    Correlator corr(cfg.scene);
    const int n = cfg.scan.grid_points;
    io::CsvTable t;
    add_scene_meta(t, cfg);
    t.columns = {"x1", "x2", "g2"};
    for (int i = 0; i < n; ++i) {
        const double t1 = static_cast<double>(i) / (n - 1);
        const double xn1 = cfg.scan.x_min + t1 * (cfg.scan.x_max - cfg.scan.x_min);
        const double x1 = io::physical_x(xn1, cfg.scene.slits, cfg.scene.det);
        for (int j = 0; j < n; ++j) {
            const double t2 = static_cast<double>(j) / (n - 1);
            const double xn2 = cfg.scan.x_min + t2 * (cfg.scan.x_max - cfg.scan.x_min);
            const double x2 = io::physical_x(xn2, cfg.scene.slits, cfg.scene.det);
            const double g2 = cfg.mode == EvalMode::full ? corr.g2_full(x1, x2)
                                                         : corr.g2_broadband(x1, x2);
            t.add_row({xn1, xn2, g2});
        }
    }
    io::write_csv(fs::path(cfg.out_dir) / "surface.csv", t);
    std::printf("wrote %s/surface.csv (%d x %d grid)\n", cfg.out_dir.c_str(), n, n);
    return 0;
}

int cmd_visibility(const CommonArgs& args) {
    const io::RunConfig cfg = resolve(args);

    io::CsvTable table;
    table.add_meta("v1", "1/(1+4*xi)  (diagonal)");
    table.add_meta("v2", "1/(3+2/xi)  (antidiagonal)");
    table.columns = {"xi", "v1", "v2"};
    const int n = 201;
    for (int i = 0; i < n; ++i) {
        const double e = -2.0 + 4.0 * static_cast<double>(i) / (n - 1);
        const double xi = std::pow(10.0, e);
        table.add_row({xi, visibility_formula(xi, ScanKind::diagonal),
                       visibility_formula(xi, ScanKind::antidiagonal)});
    }
    io::write_csv(fs::path(cfg.out_dir) / "visibility_formula.csv", table);

    // Scan-extracted visibilities for the configured scene: the scan must
    // cover [0, x_null]; build one from the configured range if needed.
    const double x_null = first_null(cfg.scene.slits, cfg.scene.det);
    std::vector<double> xs;
    const int pts = std::max(cfg.scan.points, 9);
    for (int i = 0; i < pts; ++i)
        xs.push_back(1.25 * x_null * static_cast<double>(i) / (pts - 1));
    Correlator corr(cfg.scene);
    const FringeScan diag = diagonal_scan(xs, corr, cfg.mode);
    const FringeScan anti = antidiagonal_scan(xs, corr, cfg.mode);
    const VisibilityReport rd = visibility_report(diag, cfg.scene);
    const VisibilityReport ra = visibility_report(anti, cfg.scene);

    io::CsvTable summary;
    add_scene_meta(summary, cfg);
    summary.columns = {"kind", "v_formula", "v_extracted", "xi", "strength"};
    summary.add_row({std::string(to_string(ScanKind::diagonal)), io::format_value(rd.v_formula),
                     io::format_value(rd.v_extracted), io::format_value(rd.xi),
                     io::format_value(rd.strength)});
    summary.add_row({std::string(to_string(ScanKind::antidiagonal)), io::format_value(ra.v_formula),
                     io::format_value(ra.v_extracted), io::format_value(ra.xi),
                     io::format_value(ra.strength)});
    io::write_csv(fs::path(cfg.out_dir) / "visibility_summary.csv", summary);
    std::printf("wrote %s/visibility_formula.csv and visibility_summary.csv\n",
                cfg.out_dir.c_str());
    return 0;
}

int cmd_gain_sweep(const CommonArgs& args) {
    const io::RunConfig cfg = resolve(args);
    std::vector<double> gs;
    gs.reserve(cfg.sweep.points);
    for (int i = 0; i < cfg.sweep.points; ++i) {
        const double t = static_cast<double>(i) / (cfg.sweep.points - 1);
        gs.push_back(cfg.sweep.g_min + t * (cfg.sweep.g_max - cfg.sweep.g_min));
    }
    io::CsvTable t;
    add_scene_meta(t, cfg);
    t.columns = {"g", "delta0", "xi", "f1sq", "f2sq"};
    for (double delta0 : cfg.sweep.delta0_list) {
        const std::vector<GainSweepRow> rows = gain_sweep(gs, delta0, cfg.scene);
        for (const GainSweepRow& r : rows) {
            if (r.degenerate) continue;
            t.add_row({r.g, r.delta0, r.xi, r.f1_sq, r.f2_sq});
        }
    }
    io::write_csv(fs::path(cfg.out_dir) / "gain_sweep.csv", t);
    std::printf("wrote %s/gain_sweep.csv (%d couplings x %zu detunings)\n", cfg.out_dir.c_str(),
                cfg.sweep.points, cfg.sweep.delta0_list.size());
    return 0;
}

int cmd_classical(const CommonArgs& args) {
    const io::RunConfig cfg = resolve(args);
    const std::vector<double> xs = scan_positions(cfg);
    const FringeScan g1 = classical_g1_scan(xs, cfg.scan.alpha_sq, cfg.scene.slits, cfg.scene.det);
    write_scan(fs::path(cfg.out_dir) / "classical_g1.csv", g1, cfg);

    FringeScan g2;
    g2.positions = xs;
    g2.kind = ScanKind::classical_g2_diagonal;
    g2.mode = EvalMode::broadband;
    for (double x : xs)
        g2.values.push_back(classical_g2(x, x, cfg.scan.alpha_sq, cfg.scene.slits, cfg.scene.det));
    g2.normalization = "classical second-order reference";
    write_scan(fs::path(cfg.out_dir) / "classical_g2_diagonal.csv", g2, cfg);
    std::printf("wrote %s/classical_g1.csv and classical_g2_diagonal.csv\n", cfg.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sub-wavelength double-slit correlation simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* fringe = app.add_subcommand("fringe", "diagonal and antidiagonal G2 scans");
    CLI::App* surface = app.add_subcommand("surface", "G2 on an (x1,x2) grid");
    CLI::App* visibility = app.add_subcommand("visibility", "visibility tables and extraction");
    CLI::App* sweep = app.add_subcommand("gain-sweep", "broadband coefficients vs coupling");
    CLI::App* classical = app.add_subcommand("classical", "coherent-light reference curves");
    for (CLI::App* c : {fringe, surface, visibility, sweep, classical}) add_common(c, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fringe->parsed()) return cmd_fringe(args);
        if (surface->parsed()) return cmd_surface(args);
        if (visibility->parsed()) return cmd_visibility(args);
        if (sweep->parsed()) return cmd_gain_sweep(args);
        if (classical->parsed()) return cmd_classical(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const NonConvergent& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const DegenerateGain& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const NonFiniteIntegrand& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
