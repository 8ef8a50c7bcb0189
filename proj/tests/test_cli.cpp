// Config parsing, serialization round trips, runner artifacts, exit codes,
// and byte determinism of outputs.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wunsch/cli.hpp"

using namespace wunsch;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("wunschlab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json base_config(const std::string& sub) {
    ordered_json j;
    j["schema"] = config_schema_id;
    j["subcommand"] = sub;
    j["metric"] = "mu_half";
    j["grid_n"] = 64;
    j["dt"] = 1e-2;
    j["horizon"] = 0.2;
    j["record_stride"] = 2;
    j["initial"] = "cos1";
    j["seed"] = 42;
    return j;
}

} // namespace

TEST_CASE("spectrum JSON round trip") {
    const GridSpec g(64);
    auto f = random_field(g, 7, {.max_mode = 20, .zero_mean = false});
    auto j = field_spectrum_json(f);
    CHECK(j["N"] == 64);
    CHECK(j["coeffs"].size() == 64);
    auto back = field_from_spectrum_json(j);
    CHECK((back - f).sup_norm() < 1e-13);
}

TEST_CASE("config validation") {
    auto j = base_config("simulate");
    CHECK_NOTHROW(parse_config(j));

    auto bad_schema = j;
    bad_schema["schema"] = "wunschlab/0";
    CHECK_THROWS_AS(parse_config(bad_schema), ConfigError);

    auto unknown_key = j;
    unknown_key["grdn"] = 64;
    CHECK_THROWS_AS(parse_config(unknown_key), ConfigError);

    auto bad_sub = j;
    bad_sub["subcommand"] = "simulte";
    CHECK_THROWS_AS(parse_config(bad_sub), ConfigError);

    auto bad_grid = j;
    bad_grid["grid_n"] = 63;
    CHECK_THROWS_AS(parse_config(bad_grid), ConfigError);

    auto bad_initial = j;
    bad_initial["initial"] = "cos9000";
    CHECK_THROWS_AS(parse_config(bad_initial), ConfigError);

    auto modes = j;
    modes["initial"] = ordered_json{{"modes", {{1, 1.0, 0.0}, {2, 0.5, 1.0}}}};
    CHECK_NOTHROW(parse_config(modes));

    auto hs = j;
    hs["metric"] = ordered_json{{"homogeneous_s", 0.75}};
    CHECK(parse_config(hs).kind.s() == 0.75);
}

TEST_CASE("simulate run writes diagnostics and a manifest") {
    auto dir = fresh_dir("simulate");
    auto j = base_config("simulate");
    RunConfig cfg = parse_config(j);
    cfg.out = dir.string();
    CHECK(run(cfg) == 0);
    for (const char* f : {"manifest.json", "mean_omega.csv", "min_eta_x.csv", "sup_omega.csv",
                          "sup_ux.csv", "conservation_residual.csv", "u0.csv",
                          "u0_spectrum.json", "u_final.csv"}) {
        INFO(f);
        CHECK(fs::exists(dir / f));
    }
    auto manifest = ordered_json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["config"]["subcommand"] == "simulate");
    CHECK(manifest["status"] == "completed");
    CHECK(manifest["exit_code"] == 0);
}

TEST_CASE("blowup run reports the bracket with exit code zero") {
    auto dir = fresh_dir("blowup");
    auto j = base_config("blowup");
    j["metric"] = "homogeneous_half";
    j["grid_n"] = 256;
    j["dt"] = 2e-4;
    j["horizon"] = 1.2;
    j["record_stride"] = 50;
    j["initial"] = ordered_json{{"modes", {{1, 1.0, pi / 2}}}}; // cos(x+π/2) = −sin x
    j["probes"] = {0.0};
    RunConfig cfg = parse_config(j);
    cfg.out = dir.string();
    CHECK(run(cfg) == 0);
    auto rep = ordered_json::parse(slurp(dir / "blowup_report.json"));
    CHECK(rep["status"] == "blowup");
    CHECK(rep["t_star_bracket"][1].get<double>() < 1.0);
    CHECK(rep["min_F"].get<double>() > 0.0);
    CHECK(rep["theorem_checks"][0]["satisfied"] == true);
    CHECK(fs::exists(dir / "bkm_ux_running.csv"));
}

TEST_CASE("curvature run emits the mode table") {
    auto dir = fresh_dir("curvature");
    auto j = base_config("curvature");
    j["curvature"] = ordered_json{{"family", "mu_half_table"}, {"pairs", "default"}};
    RunConfig cfg = parse_config(j);
    cfg.out = dir.string();
    CHECK(run(cfg) == 0);
    const std::string csv = slurp(dir / "curvature_scan.csv");
    CHECK(csv.find("m,n,family,pair,K_numeric,K_closed,ratio") == 0);
    CHECK(csv.find("sin/cos") != std::string::npos); // negative-direction row present
}

TEST_CASE("inequality summary carries the seed and bounds") {
    auto dir = fresh_dir("ineq");
    auto j = base_config("inequality");
    j["grid_n"] = 128;
    j["inequality"] = ordered_json{{"trials", 10}, {"p_values", {1.0, 2.0}}, {"max_mode", 16}};
    j["threads"] = 2;
    RunConfig cfg = parse_config(j);
    cfg.out = dir.string();
    CHECK(run(cfg) == 0);
    auto summary = ordered_json::parse(slurp(dir / "inequality_summary.json"));
    REQUIRE(summary.size() == 2);
    for (const auto& entry : summary) {
        CHECK(entry["trials"] == 10);
        CHECK(entry["seed"] == 42);
        CHECK(entry["min_over_trials"].get<double>() >= -1e-12);
        CHECK(entry["max_route_discrepancy"].get<double>() < 1e-10);
    }
}

TEST_CASE("outputs are byte-deterministic for a fixed config and seed") {
    auto j = base_config("distance");
    j["distance"] = ordered_json{{"lambda", 0.9}, {"theta_star", 1.0}, {"ladder", {4.0, 16.0}}};
    auto dir1 = fresh_dir("det1");
    auto dir2 = fresh_dir("det2");
    RunConfig cfg = parse_config(j);
    cfg.out = dir1.string();
    CHECK(run(cfg) == 0);
    cfg.out = dir2.string();
    CHECK(run(cfg) == 0);
    // manifests differ only through the out path; strip it before comparing
    auto m1 = ordered_json::parse(slurp(dir1 / "manifest.json"));
    auto m2 = ordered_json::parse(slurp(dir2 / "manifest.json"));
    m1["config"].erase("out");
    m2["config"].erase("out");
    CHECK(m1.dump() == m2.dump());
    CHECK(slurp(dir1 / "distance_ladder.csv") == slurp(dir2 / "distance_ladder.csv"));
}

TEST_CASE("cli entry point exit codes") {
    auto dir = fresh_dir("cli");
    // malformed JSON: exit 2 and no artifacts
    const fs::path bad = dir / "bad.json";
    write_text(bad, "{ not json");
    const fs::path out = dir / "out";
    CHECK_THROWS_AS(run_cli({"--config", bad.string(), "--out", out.string()}), ConfigError);
    CHECK_FALSE(fs::exists(out / "manifest.json"));

    // a good config runs end to end through the argv interface
    const fs::path good = dir / "good.json";
    auto j = base_config("identities");
    j["grid_n"] = 128;
    j["identities"] = ordered_json{{"trials", 5}, {"max_mode", 32}};
    write_text(good, j.dump(2));
    CHECK(run_cli({"--config", good.string(), "--out", out.string(), "--seed", "7",
                   "--threads", "2"}) == 0);
    auto summary = ordered_json::parse(slurp(out / "identities_summary.json"));
    CHECK(summary["seed"] == 7);
    CHECK(summary["max_hh_residual"].get<double>() < 1e-12);
    CHECK(summary["max_isometry_residual"].get<double>() < 1e-12);
    CHECK(summary["max_product_formula_residual"].get<double>() < 1e-10);

    // --subcommand override is honored
    CHECK_THROWS_AS(run_cli({"--config", good.string(), "--subcommand", "nonsense"}),
                    ConfigError);
    CHECK_THROWS_AS(run_cli({"--bogus-flag"}), ConfigError);
}

TEST_CASE("jacobi subcommand emits the closed-form mode table on the rotation geodesic") {
    auto dir = fresh_dir("jacobi");
    auto j = base_config("jacobi");
    j["initial"] = "rotation";
    j["dt"] = 1e-3;
    j["horizon"] = pi;
    j["record_stride"] = 1;
    j["jacobi"] = ordered_json{{"max_mode", 2}};
    RunConfig cfg = parse_config(j);
    cfg.out = dir.string();
    CHECK(run(cfg) == 0);
    const std::string csv = slurp(dir / "jacobi_modes.csv");
    CHECK(csv.find("mode,T,sup_v_end,closed_sup_v_end,abs_err") == 0);
    CHECK(csv.find("cos1") != std::string::npos);
    CHECK(csv.find("const") != std::string::npos);
}
