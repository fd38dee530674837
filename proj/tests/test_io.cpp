#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <subwave/io/config.hpp>
#include <subwave/io/csv.hpp>

using namespace subwave;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static int counter = 0;
    fs::path p = fs::temp_directory_path() / ("subwave_io_test_" + std::to_string(counter++));
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

} // namespace

TEST_CASE("values render with 17 significant digits and round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 2.5e5, -4.818511776285465e-07, 0.0}) {
        const std::string s = io::format_value(v);
        REQUIRE(std::strtod(s.c_str(), nullptr) == v);
    }
    REQUIRE(io::format_value(0.5) == "0.5");
    REQUIRE(io::format_value(0.1) == "0.10000000000000001");
}

TEST_CASE("csv rendering is stable and newline-terminated") {
    io::CsvTable t;
    t.add_meta("mode", "broadband");
    t.add_meta("g", 1.84);
    t.columns = {"x", "g2"};
    t.add_row({0.5, 2.0});
    REQUIRE(t.render() ==
            "# mode = broadband\n# g = 1.8400000000000001\nx,g2\n0.5,2\n");
}

TEST_CASE("atomic write replaces the target and leaves no temp file") {
    const fs::path dir = temp_dir();
    const fs::path target = dir / "table.csv";
    io::write_file_atomic(target, "first\n");
    REQUIRE(slurp(target) == "first\n");
    io::write_file_atomic(target, "second\n");
    REQUIRE(slurp(target) == "second\n");
    REQUIRE(!fs::exists(target.string() + ".tmp"));
    fs::remove_all(dir);
}

TEST_CASE("defaults load without a config file") {
    const io::RunConfig cfg = io::load_run_config("", {});
    REQUIRE(cfg.scene.crystal.g == 1.84);
    REQUIRE(cfg.scene.crystal.q0 == 20.0);
    REQUIRE(cfg.scene.det.z == 2.5e5);
    REQUIRE(cfg.scene.slits.d == 5.0);
    REQUIRE(cfg.mode == EvalMode::broadband);
    REQUIRE(cfg.scan.points == 401);
    REQUIRE(cfg.sweep.delta0_list == std::vector<double>{0.0, 2.0, -2.0});
}

TEST_CASE("config files override defaults and reject unknown keys") {
    const fs::path dir = temp_dir();
    const fs::path good = write_text(dir, "good.json",
                                     R"({"mode":"full","crystal":{"g":2.5,"delta0":-1.0},)"
                                     R"("detection":{"z":1000.0},"scan":{"points":11}})");
    const io::RunConfig cfg = io::load_run_config(good.string(), {});
    REQUIRE(cfg.mode == EvalMode::full);
    REQUIRE(cfg.scene.crystal.g == 2.5);
    REQUIRE(cfg.scene.crystal.delta0 == -1.0);
    REQUIRE(cfg.scene.det.z == 1000.0);
    REQUIRE(cfg.scan.points == 11);
    REQUIRE(cfg.scene.slits.d == 5.0);

    const fs::path unknown = write_text(dir, "unknown.json", R"({"crystal":{"gain":2.0}})");
    REQUIRE_THROWS_AS(io::load_run_config(unknown.string(), {}), ConfigError);
    const fs::path top = write_text(dir, "top.json", R"({"crystals":{}})");
    REQUIRE_THROWS_AS(io::load_run_config(top.string(), {}), ConfigError);
    const fs::path badmode = write_text(dir, "badmode.json", R"({"mode":"exact"})");
    REQUIRE_THROWS_AS(io::load_run_config(badmode.string(), {}), ConfigError);
    const fs::path notjson = write_text(dir, "notjson.json", "g = 1.84");
    REQUIRE_THROWS_AS(io::load_run_config(notjson.string(), {}), ConfigError);
    REQUIRE_THROWS_AS(io::load_run_config((dir / "missing.json").string(), {}), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("invalid physical configurations are rejected") {
    const fs::path dir = temp_dir();
    const fs::path p = write_text(dir, "bad.json", R"({"detection":{"z":0.0}})");
    REQUIRE_THROWS_AS(io::load_run_config(p.string(), {}), ConfigError);
    const fs::path p2 = write_text(dir, "bad2.json", R"({"slits":{"b":6.0}})");
    REQUIRE_THROWS_AS(io::load_run_config(p2.string(), {}), ConfigError);
    const fs::path p3 = write_text(dir, "bad3.json", R"({"scan":{"x_min":1.0,"x_max":-1.0}})");
    REQUIRE_THROWS_AS(io::load_run_config(p3.string(), {}), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("dotted-path overrides reach nested keys") {
    const io::RunConfig cfg = io::load_run_config(
        "", {"crystal.g=3.5", "mode=full", "quadrature.max_subdivisions=3000",
             "out=elsewhere", "sweep.delta0_list=[0.5,1.5]"});
    REQUIRE(cfg.scene.crystal.g == 3.5);
    REQUIRE(cfg.mode == EvalMode::full);
    REQUIRE(cfg.scene.quad.max_subdivisions == 3000);
    REQUIRE(cfg.out_dir == "elsewhere");
    REQUIRE(cfg.sweep.delta0_list == std::vector<double>{0.5, 1.5});

    REQUIRE_THROWS_AS(io::load_run_config("", {"crystal.g"}), ConfigError);
    REQUIRE_THROWS_AS(io::load_run_config("", {"=3"}), ConfigError);
    REQUIRE_THROWS_AS(io::load_run_config("", {"crystal.g.deep=3"}), ConfigError);
    REQUIRE_THROWS_AS(io::load_run_config("", {"crystal.unknown=3"}), ConfigError);
}

TEST_CASE("detector coordinate normalization round-trips") {
    const SlitGeometry slits{1.0, 5.0};
    const DetectionGeometry det{2.0, 4.0e4};
    const double x = 1234.5;
    REQUIRE(io::physical_x(io::normalized_x(x, slits, det), slits, det) ==
            Catch::Approx(x).epsilon(1e-14));
    // X = 1 sits at the first envelope null, x = 2 pi z / (k b)
    REQUIRE(io::physical_x(1.0, slits, det) ==
            Catch::Approx(2.0 * std::numbers::pi * det.z / (det.k * slits.b)).epsilon(1e-15));
}
