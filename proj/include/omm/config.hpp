#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"
#include "omm/model.hpp"
#include "omm/sweep.hpp"

namespace omm {

enum class ParamMode { effective, microscopic };

std::optional<ParamMode> parse_param_mode(std::string_view text);

using PointParams = std::variant<EffectiveParams, MicroscopicParams>;

/// Parameter file -> parameters. Frequencies are cyclic (`*_hz` keys).
/// Unset effective keys fall back to the baseline point; unknown keys are
/// rejected. `mode` overrides the file's "mode" key.
PointParams parse_point_config(const nlohmann::json& doc, std::optional<ParamMode> mode = std::nullopt);

EffectiveParams parse_effective(const nlohmann::json& doc, EffectiveParams defaults = baseline_params());
MicroscopicParams parse_microscopic(const nlohmann::json& doc);

/// Sweep spec file -> SweepSpec. A "preset" key seeds base, axes and
/// measures; "base", "axes", "measures" then override it.
SweepSpec parse_sweep_spec(const nlohmann::json& doc);

/// Reads and parses a JSON file; parse errors carry line/column.
nlohmann::json load_json(const std::filesystem::path& path);

nlohmann::json to_json(const EffectiveParams& params);
nlohmann::json to_json(const SweepSpec& spec);
/// Self-describing single-point report; NaN sentinels become null.
nlohmann::json to_json(const SweepRow& row);

}  // namespace omm
