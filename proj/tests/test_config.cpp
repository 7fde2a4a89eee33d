#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qdual/config.hpp"
#include "qdual/errors.hpp"
#include "qdual/runner.hpp"

using namespace qdual;

namespace {

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("minimal jc config fills the documented defaults") {
    const RunConfig cfg = parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": 0}
    })");
    CHECK(cfg.experiment == Experiment::jc_compare);
    CHECK(cfg.jc.delta() == doctest::Approx(0.5));
    CHECK(cfg.grid.t0 == 0.0);
    CHECK(cfg.grid.t1 == doctest::Approx(400.0));  // 200 / |delta|
    CHECK(cfg.grid.samples == 4096);
    CHECK(std::abs(cfg.init.c1 - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(cfg.init.c2) == 0.0);
    CHECK(cfg.out == "./out");
}

TEST_CASE("initial state is normalized") {
    const RunConfig cfg = parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": 0},
        "init": {"c1": [3.0, 0.0], "c2": [0.0, 4.0]}
    })");
    CHECK(std::abs(cfg.init.c1 - cplx(0.6, 0.0)) < 1e-15);
    CHECK(std::abs(cfg.init.c2 - cplx(0.0, 0.8)) < 1e-15);

    CHECK_THROWS_AS(parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": 0},
        "init": {"c1": [0.0, 0.0], "c2": [0.0, 0.0]}
    })"),
                    ValidationError);
}

TEST_CASE("missing model fields are reported by their full path") {
    try {
        parse_config(R"({
            "experiment": "hhg-spectrum",
            "hhg": {"omega0": 0.1, "field": 0.5, "dipole": 1.0}
        })");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(mentions(e, "hhg.omegaL"));
    }
}

TEST_CASE("experiment field is mandatory and closed") {
    CHECK_THROWS_AS(parse_config(R"({"jc": {}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "banana"})"), ValidationError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ParseError);
    CHECK_THROWS_AS(parse_config("{\"experiment\": \"jc-compare\","), ParseError);
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": 0},
        "typo": 1
    })"),
                    UnknownKey);
    try {
        parse_config(R"({
            "experiment": "jc-compare",
            "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": 0, "gg": 2.0}
        })");
        FAIL("expected UnknownKey");
    } catch (const UnknownKey& e) {
        CHECK(mentions(e, "jc.gg"));
    }
}

TEST_CASE("sections of other experiments are called out") {
    try {
        parse_config(R"({
            "experiment": "wkbj-demo",
            "wkbj": {"eps": 0.01},
            "spectrum": {"periods": 64}
        })");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(mentions(e, "spectrum"));
        CHECK(mentions(e, "wkbj-demo"));
    }
}

TEST_CASE("jc photon number must be a non-negative integer") {
    CHECK_THROWS_AS(parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": -1}
    })"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": 0.5}
    })"),
                    ValidationError);
}

TEST_CASE("grid default needs a detuning and must run forward") {
    CHECK_THROWS_AS(parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.0, "g": 0.1, "n": 0}
    })"),
                    ValidationError);
    CHECK_NOTHROW(parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.0, "g": 0.1, "n": 0},
        "grid": {"t1": 10.0}
    })"));
    CHECK_THROWS_AS(parse_config(R"({
        "experiment": "jc-compare",
        "jc": {"omega": 1.0, "omega0": 1.5, "g": 0.1, "n": 0},
        "grid": {"t0": 5.0, "t1": 1.0}
    })"),
                    ValidationError);
}

TEST_CASE("spectrum block enforces power-of-two shapes") {
    const std::string head = R"({
        "experiment": "hhg-spectrum",
        "hhg": {"omega0": 0.1, "omegaL": 1.0, "field": 0.75, "dipole": 1.0},
        "spectrum": )";
    CHECK_THROWS_AS(parse_config(head + R"({"periods": 100}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(head + R"({"samples_per_period": 48}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(head + R"({"rel_threshold": 2.0}})"), ValidationError);
    const RunConfig cfg = parse_config(head + R"({"periods": 64, "rel_threshold": 1e-6}})");
    CHECK(cfg.spectrum.periods == 64);
    CHECK(cfg.spectrum.samples_per_period == 64);
    CHECK(cfg.spectrum.rel_threshold == doctest::Approx(1e-6));
}

TEST_CASE("sweep settings") {
    const RunConfig cfg = parse_config(R"({
        "experiment": "sweep",
        "hhg": {"omega0": 0.1, "omegaL": 1.0, "field": 0.75, "dipole": 1.0},
        "sweep": {"parameter": "z", "values": [0.5, 1.0, 1.5, 2.0]}
    })");
    CHECK(cfg.experiment == Experiment::sweep);
    REQUIRE(cfg.sweep.values.size() == 4);
    CHECK(cfg.sweep.values[2] == doctest::Approx(1.5));

    const std::string head = R"({
        "experiment": "sweep",
        "hhg": {"omega0": 0.1, "omegaL": 1.0, "field": 0.75, "dipole": 1.0},
        "sweep": )";
    CHECK_THROWS_AS(parse_config(head + R"({"parameter": "omega0", "values": [1.0]}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(head + R"({"values": []}})"), ValidationError);
    CHECK_THROWS_AS(parse_config(head + R"({"values": [0.5, -1.0]}})"), ValidationError);
    // a z sweep rescales the field through z = 2 Omega d / omegaL, so d != 0
    CHECK_THROWS_AS(parse_config(R"({
        "experiment": "sweep",
        "hhg": {"omega0": 0.1, "omegaL": 1.0, "field": 0.75, "dipole": 0.0},
        "sweep": {"values": [1.0]}
    })"),
                    ValidationError);
}

TEST_CASE("wkbj demo runs end to end") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qdual_cfg_test_out";
    fs::remove_all(dir);

    RunConfig cfg = parse_config(R"({
        "experiment": "wkbj-demo",
        "wkbj": {"eps": 0.01, "x1": 5.0, "samples": 65},
        "out": "placeholder"
    })");
    cfg.out = dir.string();
    run(cfg);

    CHECK(fs::exists(dir / "wkbj-demo.csv"));
    CHECK(fs::exists(dir / "wkbj-demo-peaks.csv"));
    CHECK(fs::exists(dir / "wkbj-demo.json"));
    CHECK(fs::exists(dir / "plot.gp"));

    const std::string csv = slurp(dir / "wkbj-demo.csv");
    CHECK(csv.rfind("x,wkbj_re,wkbj_im,ref_re,ref_im,err\n", 0) == 0);
    // header plus one row per sample
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 66);
    const std::string echo = slurp(dir / "wkbj-demo.json");
    CHECK(echo.find("\"experiment\"") != std::string::npos);
    CHECK(echo.find("\"rel_err\"") != std::string::npos);

    fs::remove_all(dir);
}
