#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "omm/config.hpp"
#include "omm/error.hpp"
#include "omm/presets.hpp"

using namespace omm;
using nlohmann::json;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("omm_test_config_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_SUITE("effective parameters") {
  TEST_CASE("empty document is the baseline") {
    CHECK(parse_effective(json::object()) == baseline_params());
    const PointParams p = parse_point_config(json::object());
    REQUIRE(std::holds_alternative<EffectiveParams>(p));
    CHECK(std::get<EffectiveParams>(p) == baseline_params());
  }

  TEST_CASE("cyclic frequencies become angular") {
    const EffectiveParams p = parse_effective(json{{"g_ac2_hz", 5e6}, {"theta", 1.0}, {"T", 0.2}});
    CHECK(p.g_ac2 == doctest::Approx(kTwoPi * 5e6));
    CHECK(p.theta == 1.0);
    CHECK(p.T == 0.2);
    CHECK(p.G_c == baseline_params().G_c);
  }

  TEST_CASE("angles are folded into [0, 2 pi)") {
    const EffectiveParams p = parse_effective(json{{"theta", -std::numbers::pi / 2}});
    CHECK(p.theta == doctest::Approx(1.5 * std::numbers::pi));
  }

  TEST_CASE("unknown keys and wrong types are named") {
    CHECK_THROWS_WITH_AS(parse_effective(json{{"g_ac_hz", 1.0}}), doctest::Contains("'g_ac_hz'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_effective(json{{"theta", "pi"}}), doctest::Contains("key 'theta': expected a number"),
                         ConfigError);
    CHECK_THROWS_AS(parse_effective(json::array()), ConfigError);
  }

  TEST_CASE("physically invalid values are rejected") {
    CHECK_THROWS_WITH_AS(parse_effective(json{{"kappa_m_hz", 0.0}}), doctest::Contains("invalid parameters"),
                         ConfigError);
    CHECK_THROWS_AS(parse_effective(json{{"T", -1.0}}), ConfigError);
    CHECK_THROWS_AS(parse_effective(json{{"G_m_hz", -1.0}}), ConfigError);
  }

  TEST_CASE("round trip through JSON") {
    EffectiveParams p = baseline_params();
    p.theta = 2.0;
    p.g_ac2 = kTwoPi * 7.5e6;
    const EffectiveParams back = parse_effective(to_json(p));
    for (const ParamField& field : effective_fields()) {
      CAPTURE(field.key);
      CHECK(back.*(field.member) == doctest::Approx(p.*(field.member)).epsilon(1e-15));
    }
  }
}

TEST_SUITE("microscopic parameters") {
  TEST_CASE("mode key selects the parameterization") {
    const json doc = {{"mode", "microscopic"}, {"g_c_hz", 10.0}, {"eta_c_hz", 1e9}, {"Omega_m_hz", 1e9}};
    const PointParams p = parse_point_config(doc);
    REQUIRE(std::holds_alternative<MicroscopicParams>(p));
    const auto& m = std::get<MicroscopicParams>(p);
    CHECK(m.g_c == doctest::Approx(kTwoPi * 10.0));
    CHECK(m.g_m == 0.0);
    CHECK(*m.eta_c == doctest::Approx(kTwoPi * 1e9));
    CHECK(m.delta_c0 == baseline_params().delta_c);
  }

  TEST_CASE("explicit mode overrides the file") {
    const json doc = {{"eta_c_hz", 1e9}, {"Omega_m_hz", 1e9}};
    CHECK(std::holds_alternative<MicroscopicParams>(parse_point_config(doc, ParamMode::microscopic)));
    CHECK_THROWS_AS(parse_point_config(json{{"mode", "micro"}}), ConfigError);
    CHECK(parse_param_mode("effective") == ParamMode::effective);
    CHECK_FALSE(parse_param_mode("x").has_value());
  }

  TEST_CASE("physical drive inputs") {
    const json doc = {{"P", 0.01}, {"omega_c_hz", 3e14}, {"gamma_gyro", 1.76e11}, {"N_d", 1e18}, {"B_d", 1e-4}};
    const MicroscopicParams m = parse_microscopic(doc);
    REQUIRE(m.cavity_drive.has_value());
    CHECK(m.cavity_drive->power == 0.01);
    CHECK(m.cavity_drive->omega_c == doctest::Approx(kTwoPi * 3e14));
    CHECK_FALSE(m.cavity_drive->kappa_port.has_value());
    REQUIRE(m.magnon_drive.has_value());
    CHECK(m.magnon_drive->spin_count == 1e18);
    const DriveStrengths d = drive_strengths(m);
    CHECK(d.eta_c > 0.0);
    CHECK(d.Omega_m > 0.0);
  }

  TEST_CASE("incomplete or conflicting drives") {
    CHECK_THROWS_WITH_AS(parse_microscopic(json{{"P", 0.01}}), doctest::Contains("omega_c_hz"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_microscopic(json{{"kappa_c_hz", 1e6}}), doctest::Contains("kappa_c_hz"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_microscopic(json{{"gamma_gyro", 1.76e11}, {"N_d", 1e18}}),
                         doctest::Contains("'B_d'"), ConfigError);
    CHECK_THROWS_AS(parse_microscopic(json{{"eta_c_hz", 1e9}, {"P", 0.01}, {"omega_c_hz", 3e14}}), ConfigError);
    CHECK_THROWS_WITH_AS(parse_microscopic(json{{"G_c_hz", 1e6}}), doctest::Contains("'G_c_hz'"), ConfigError);
  }
}

TEST_SUITE("sweep specs") {
  TEST_CASE("preset seeds the spec") {
    const SweepSpec spec = parse_sweep_spec(json{{"preset", "fig8"}});
    const SweepSpec expected = preset("fig8");
    CHECK(same_grid(spec, expected));
    CHECK(spec.measures == expected.measures);
  }

  TEST_CASE("explicit axes and overrides") {
    const json doc = json::parse(R"({
      "base": {"G_m_hz": 3e6},
      "axes": [{"field": "theta", "min": 0, "max": 6.283185307179586, "count": 5},
               {"field": "T", "min": 0.001, "max": 1, "count": 4, "scale": "log"}],
      "measures": ["E_am", "Sc_ac1c2b_to_m"],
      "out": "x.csv",
      "steering_form": "symplectic"
    })");
    const SweepSpec spec = parse_sweep_spec(doc);
    CHECK(spec.base.G_m == doctest::Approx(kTwoPi * 3e6));
    REQUIRE(spec.axes.size() == 2);
    CHECK(spec.axes[0].count == 5);
    CHECK(spec.axes[1].scale == AxisScale::log);
    CHECK(spec.measures.size() == 2);
    CHECK(spec.output == "x.csv");
    CHECK(spec.options.steering_form == SteeringForm::symplectic);
  }

  TEST_CASE("base overrides apply on top of a preset") {
    const SweepSpec spec = parse_sweep_spec(json{{"preset", "fig4"}, {"base", {{"T", 0.1}}}});
    CHECK(spec.base.T == 0.1);
    CHECK(spec.base.G_m == doctest::Approx(kTwoPi * 3e6));
  }

  TEST_CASE("default counts depend on dimension") {
    const SweepSpec one = parse_sweep_spec(json::parse(R"({"axes": [{"field": "G_c_hz", "min": 0, "max": 1e7}]})"));
    CHECK(one.axes[0].count == kDefaultGrid1D);
    const SweepSpec two = parse_sweep_spec(json::parse(
        R"({"axes": [{"field": "G_c_hz", "min": 0, "max": 1e7}, {"field": "T", "min": 0.01, "max": 1}]})"));
    CHECK(two.axes[1].count == kDefaultGrid2D);
  }

  TEST_CASE("malformed specs") {
    CHECK_THROWS_WITH_AS(parse_sweep_spec(json{{"axis", json::array()}}), doctest::Contains("'axis'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_sweep_spec(json::parse(R"({"axes": [{"field": "T", "min": 0.1}]})")),
                         doctest::Contains("missing key 'max'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_sweep_spec(json::parse(R"({"axes": [{"field": "T", "min": 0.1, "max": 1, "step": 2}]})")),
                         doctest::Contains("'step'"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(json::parse(R"({"axes": [{"field": "T", "min": 0.1, "max": 1, "scale": "exp"}]})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(json{{"preset", "fig4"}, {"measures", {"E_zz"}}}), ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(json{{"preset", "fig4"}, {"steering_form", "gauss"}}), ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(json{{"preset", "figX"}}), ConfigError);
    // no axes at all
    CHECK_THROWS_AS(parse_sweep_spec(json::object()), ConfigError);
  }

  TEST_CASE("spec serializes its resolved measures") {
    const json out = to_json(preset("fig3h"));
    CHECK(out["axes"][0]["field"] == "T");
    CHECK(out["axes"][0]["scale"] == "log");
    CHECK(out["measures"].size() == 3);
    CHECK(out["steering_form"] == "det");
  }
}

TEST_SUITE("files") {
  TEST_CASE("load_json reports location of syntax errors") {
    const auto path = write_temp("bad.json", "{\n  \"theta\": 1.0,\n  \"T\": \n}\n");
    CHECK_THROWS_WITH_AS(load_json(path), doctest::Contains("line 4"), ConfigError);
    CHECK_THROWS_WITH_AS(load_json(path), doctest::Contains(path.string().c_str()), ConfigError);
    std::filesystem::remove(path);
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_WITH_AS(load_json("/nonexistent/omm.json"), doctest::Contains("cannot open"), ConfigError);
  }

  TEST_CASE("valid file") {
    const auto path = write_temp("ok.json", R"({"theta": 0.5})");
    const EffectiveParams p = parse_effective(load_json(path));
    CHECK(p.theta == 0.5);
    std::filesystem::remove(path);
  }
}

TEST_SUITE("point reports") {
  TEST_CASE("stable point") {
    const json doc = to_json(evaluate_point(baseline_params()));
    CHECK(doc["status"] == "ok");
    CHECK(doc["stable"] == true);
    CHECK(doc["spectrum"].size() == 10);
    CHECK(doc["measures"].size() == default_measures().size());
    CHECK(doc["measures"]["E_am"].get<double>() == doctest::Approx(0.134106).epsilon(1e-5));
    CHECK(doc["regions"]["ent_label"] == "E_am|E_c1m|E_c2m");
    CHECK(doc["regions"]["dir"].size() == direction_pairs().size());
    CHECK(doc["lyapunov_residual"].get<double>() < 1e-10);
    CHECK(doc["params"]["g_ac2_hz"].get<double>() == doctest::Approx(3e6));
  }

  TEST_CASE("unstable point uses null") {
    EffectiveParams p = polarization_map_params();
    p.theta = std::numbers::pi / 2;
    p.g_ac2 = kTwoPi * 10e6;
    const json doc = to_json(evaluate_point(p));
    CHECK(doc["status"] == "unstable");
    CHECK(doc["stable"] == false);
    CHECK(doc["max_re_lambda"].get<double>() > 0.0);
    CHECK(doc["measures"]["E_am"].is_null());
    CHECK(doc["regions"].is_null());
    CHECK(doc["lyapunov_residual"].is_null());
  }
}
