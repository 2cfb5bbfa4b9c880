#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "cavitymod/config.hpp"
#include "cavitymod/constants.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cavitymod;
using nlohmann::json;

namespace {

std::filesystem::path write_temp_json(const std::string& name,
                                      const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("empty config document keeps the desk defaults") {
    const ExperimentConfig cfg = config_from_json(json::object());
    CHECK(cfg.volume_m3 == 1.0);
    CHECK(cfg.tau_s == 1e-6);
    CHECK(cfg.unit_count == 512);
    CHECK(cfg.n_samples == 512);
    CHECK(cfg.sample_rate_hz == 25e6);
    CHECK(cfg.bandwidth_hz == 20e6);
    CHECK(cfg.center_frequency_hz == 3.3e9);
    CHECK(!cfg.eta);
    CHECK(cfg.window == 1);
    CHECK(cfg.calibration_frames == 24);
    CHECK(cfg.m_ary == 4);
    CHECK(cfg.min_gap == 2);
    CHECK(cfg.start_frame == 4);
    CHECK(cfg.motion_preset == "walking");
    CHECK(cfg.snr_db == 20.0);
    CHECK(!cfg.seed);
    CHECK(cfg.seeds_per_point == 24);
    CHECK(cfg.switch_frames.size() == 8);
    CHECK(cfg.flip_counts.size() == 9);
}

TEST_CASE("config overlay touches only the named keys") {
    const json doc = {{"volume_m3", 2.5},
                      {"n_samples", 256},
                      {"seed", 7},
                      {"motion_preset", "stationary"},
                      {"switch_frames", {5, 9}}};
    const ExperimentConfig cfg = config_from_json(doc);
    CHECK(cfg.volume_m3 == 2.5);
    CHECK(cfg.n_samples == 256);
    REQUIRE(cfg.seed.has_value());
    CHECK(*cfg.seed == 7);
    CHECK(cfg.motion_preset == "stationary");
    CHECK(cfg.switch_frames == std::vector<std::size_t>{5, 9});
    // untouched keys keep their defaults
    CHECK(cfg.tau_s == 1e-6);
    CHECK(cfg.snr_db == 20.0);
}

TEST_CASE("config rejects unknown keys") {
    CHECK_THROWS_WITH_AS(config_from_json({{"volume", 1.0}}),
                         doctest::Contains("unknown key"),
                         std::invalid_argument);
}

TEST_CASE("snr accepts the string inf and eta accepts auto") {
    ExperimentConfig cfg = config_from_json({{"snr_db", "inf"}});
    CHECK(std::isinf(cfg.snr_db));
    CHECK_THROWS(config_from_json({{"snr_db", "quiet"}}));

    cfg = config_from_json({{"eta", "auto"}});
    CHECK(!cfg.eta);
    cfg = config_from_json({{"eta", 24.0}});
    REQUIRE(cfg.eta.has_value());
    CHECK(*cfg.eta == 24.0);
}

TEST_CASE("validate requires a seed and sane frame indices") {
    ExperimentConfig cfg;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("seed"),
                         std::invalid_argument);

    cfg.seed = 1;
    cfg.validate();

    ExperimentConfig bad_switch = cfg;
    bad_switch.n_frames = 40;
    bad_switch.switch_frames = {3, 40};
    CHECK_THROWS(bad_switch.validate());

    ExperimentConfig bad_flips = cfg;
    bad_flips.flip_counts = {0, 600};
    CHECK_THROWS(bad_flips.validate());

    ExperimentConfig bad_snr = cfg;
    bad_snr.snr_db = -120.0;
    CHECK_THROWS(bad_snr.validate());
}

TEST_CASE("motion presets resolve to the documented drift rates") {
    ScattererMotion m = resolve_motion_preset("stationary", 9.0, 9.0);
    CHECK(m.drift_rate == 0.0);
    CHECK(m.phase_drift_rate == 0.0);

    m = resolve_motion_preset("walking", 9.0, 9.0);
    CHECK(m.drift_rate == 1e4);
    CHECK(m.phase_drift_rate == 0.01);

    m = resolve_motion_preset("running", 9.0, 9.0);
    CHECK(m.drift_rate == 3e5);
    CHECK(m.phase_drift_rate == 0.05);

    m = resolve_motion_preset("custom", 123.0, 0.25);
    CHECK(m.drift_rate == 123.0);
    CHECK(m.phase_drift_rate == 0.25);

    CHECK_THROWS(resolve_motion_preset("jogging", 0.0, 0.0));
}

TEST_CASE("derived quantities follow the band and frame geometry") {
    ExperimentConfig cfg;
    cfg.seed = 1;
    // band edges sit half the widened bandwidth from the carrier
    CHECK(cfg.band_lo() ==
          doctest::Approx(kTwoPi * (3.3e9 - 12.5e6)).epsilon(1e-12));
    CHECK(cfg.band_hi() ==
          doctest::Approx(kTwoPi * (3.3e9 + 12.5e6)).epsilon(1e-12));
    // one frame spans n_samples at the sample rate
    CHECK(cfg.frame_duration_s() == doctest::Approx(512.0 / 25e6));
    // auto kappa is the mean mode spacing over sqrt(unit count)
    const double spacing = (cfg.band_hi() - cfg.band_lo()) /
                           (mode_count(cfg.band_hi(), 1.0) -
                            mode_count(cfg.band_lo(), 1.0));
    CHECK(cfg.resolved_kappa() ==
          doctest::Approx(spacing / std::sqrt(512.0)).epsilon(1e-9));

    ExperimentConfig pinned = cfg;
    pinned.kappa_rad_per_s = 42.0;
    CHECK(pinned.resolved_kappa() == 42.0);
}

TEST_CASE("resolved config echoes every effective value") {
    ExperimentConfig cfg;
    cfg.seed = 31;
    cfg.snr_db = std::numeric_limits<double>::infinity();
    const json doc = cfg.resolved();

    CHECK(doc.at("seed") == 31);
    CHECK(doc.at("eta") == "auto");
    CHECK(doc.at("snr_db") == "inf");
    CHECK(doc.at("kappa_rad_per_s").get<double>() > 0.0);
    CHECK(doc.at("motion_preset") == "walking");
    CHECK(doc.at("drift_rate_rad_per_s") == 1e4);
    CHECK(doc.at("phase_drift_rate_rad") == 0.01);
    CHECK(doc.at("frame_duration_s").get<double>() ==
          doctest::Approx(512.0 / 25e6));

    // a resolved document is itself a valid config
    const ExperimentConfig back = config_from_json(doc);
    CHECK(back.volume_m3 == cfg.volume_m3);
    CHECK(back.calibration_frames == cfg.calibration_frames);
    CHECK(std::isinf(back.snr_db));
    CHECK(!back.eta);
    REQUIRE(back.seed.has_value());
    CHECK(*back.seed == 31);
}

TEST_CASE("load_config reads a file and reports parse errors") {
    const auto good = write_temp_json("cavitymod_cfg_good.json",
                                      "{\"seed\": 5, \"n_frames\": 64}\n");
    const ExperimentConfig cfg = load_config(good.string());
    REQUIRE(cfg.seed.has_value());
    CHECK(*cfg.seed == 5);
    CHECK(cfg.n_frames == 64);
    std::filesystem::remove(good);

    const auto broken =
        write_temp_json("cavitymod_cfg_broken.json", "{\"seed\": \n");
    CHECK_THROWS(load_config(broken.string()));
    std::filesystem::remove(broken);

    CHECK_THROWS(load_config("/nonexistent/cavitymod.json"));
}

TEST_CASE("the shipped example configs parse and validate") {
    const std::filesystem::path root = CAVITYMOD_SOURCE_DIR;
    const char* names[] = {"psd_variance.json", "two_codebooks.json",
                           "three_scenarios.json", "ber_table.json",
                           "roundtrip.json"};
    for (const char* name : names) {
        CAPTURE(name);
        const ExperimentConfig cfg =
            load_config((root / "configs" / name).string());
        cfg.validate();
        REQUIRE(cfg.seed.has_value());
    }
}
