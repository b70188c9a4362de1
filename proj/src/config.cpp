#include "omm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "omm/error.hpp"
#include "omm/presets.hpp"

namespace omm {

using nlohmann::json;

namespace {

double number_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) {
    throw ConfigError("key '" + key + "': expected a number, got " + std::string(v.type_name()));
  }
  return v.get<double>();
}

std::optional<double> optional_number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) return std::nullopt;
  return number_at(doc, key);
}

std::string string_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) {
    throw ConfigError("key '" + key + "': expected a string, got " + std::string(v.type_name()));
  }
  return v.get<std::string>();
}

void require_object(const json& doc, std::string_view what) {
  if (!doc.is_object()) {
    throw ConfigError(std::string(what) + ": expected a JSON object");
  }
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::optional<ParamMode> parse_param_mode(std::string_view text) {
  if (text == "effective") return ParamMode::effective;
  if (text == "microscopic") return ParamMode::microscopic;
  return std::nullopt;
}

EffectiveParams parse_effective(const json& doc, EffectiveParams defaults) {
  require_object(doc, "parameters");
  EffectiveParams p = defaults;
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") continue;
    const ParamField* field = find_effective_field(key);
    if (!field) {
      throw ConfigError("unknown parameter key '" + key + "'");
    }
    p.*(field->member) = number_at(doc, key) * field->file_to_internal;
  }
  try {
    validate(p);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }
  return normalized(p);
}

MicroscopicParams parse_microscopic(const json& doc) {
  require_object(doc, "parameters");
  static const std::vector<std::string> known = {
      "mode",       "omega_b_hz", "omega_m_hz",  "gamma_a_hz",  "kappa_c1_hz", "kappa_c2_hz", "kappa_m_hz",
      "gamma_b_hz", "g_ac2_hz",   "theta",       "T",           "g_c_hz",      "g_m_hz",      "delta_a_hz",
      "delta_c0_hz", "delta_m0_hz", "eta_c_hz",  "Omega_m_hz",  "Omega_a_hz",  "P",           "omega_c_hz",
      "kappa_c_hz", "gamma_gyro", "N_d",         "B_d"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown microscopic parameter key '" + key + "'");
    }
  }

  const EffectiveParams base = baseline_params();
  auto freq = [&](const std::string& key, double fallback) {
    const auto v = optional_number(doc, key);
    return v ? *v * kTwoPi : fallback;
  };
  MicroscopicParams m;
  m.omega_b = freq("omega_b_hz", base.omega_b);
  m.omega_m = freq("omega_m_hz", base.omega_m);
  m.gamma_a = freq("gamma_a_hz", base.gamma_a);
  m.kappa_c1 = freq("kappa_c1_hz", base.kappa_c1);
  m.kappa_c2 = freq("kappa_c2_hz", base.kappa_c2);
  m.kappa_m = freq("kappa_m_hz", base.kappa_m);
  m.gamma_b = freq("gamma_b_hz", base.gamma_b);
  m.g_ac2 = freq("g_ac2_hz", base.g_ac2);
  m.theta = optional_number(doc, "theta").value_or(base.theta);
  m.T = optional_number(doc, "T").value_or(base.T);
  m.g_c = freq("g_c_hz", 0.0);
  m.g_m = freq("g_m_hz", 0.0);
  m.delta_a = freq("delta_a_hz", base.delta_a);
  m.delta_c0 = freq("delta_c0_hz", base.delta_c);
  m.delta_m0 = freq("delta_m0_hz", base.delta_m);
  m.Omega_a = freq("Omega_a_hz", 0.0);

  if (auto v = optional_number(doc, "eta_c_hz")) m.eta_c = *v * kTwoPi;
  if (auto v = optional_number(doc, "Omega_m_hz")) m.Omega_m = *v * kTwoPi;
  if (doc.contains("P") || doc.contains("omega_c_hz")) {
    if (!doc.contains("P") || !doc.contains("omega_c_hz")) {
      throw ConfigError("cavity drive inputs need both 'P' and 'omega_c_hz'");
    }
    CavityDriveInputs in;
    in.power = number_at(doc, "P");
    in.omega_c = number_at(doc, "omega_c_hz") * kTwoPi;
    if (auto k = optional_number(doc, "kappa_c_hz")) in.kappa_port = *k * kTwoPi;
    m.cavity_drive = in;
  } else if (doc.contains("kappa_c_hz")) {
    throw ConfigError("key 'kappa_c_hz' only applies together with 'P' and 'omega_c_hz'");
  }
  if (doc.contains("gamma_gyro") || doc.contains("N_d") || doc.contains("B_d")) {
    for (const char* key : {"gamma_gyro", "N_d", "B_d"}) {
      if (!doc.contains(key)) {
        throw ConfigError(std::string("magnon drive inputs need key '") + key + "'");
      }
    }
    m.magnon_drive = MagnonDriveInputs{number_at(doc, "gamma_gyro"), number_at(doc, "N_d"), number_at(doc, "B_d")};
  }
  try {
    validate(m);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid microscopic parameters: ") + e.what());
  }
  return m;
}

PointParams parse_point_config(const json& doc, std::optional<ParamMode> mode) {
  require_object(doc, "parameter file");
  ParamMode resolved = ParamMode::effective;
  if (doc.contains("mode")) {
    const auto parsed = parse_param_mode(string_at(doc, "mode"));
    if (!parsed) throw ConfigError("key 'mode': expected \"effective\" or \"microscopic\"");
    resolved = *parsed;
  }
  if (mode) resolved = *mode;
  if (resolved == ParamMode::microscopic) return parse_microscopic(doc);
  return parse_effective(doc);
}

SweepSpec parse_sweep_spec(const json& doc) {
  require_object(doc, "sweep spec");
  static const std::vector<std::string> known = {"preset", "base", "axes", "measures", "out", "steering_form"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown sweep spec key '" + key + "'");
    }
  }

  SweepSpec spec;
  spec.base = baseline_params();
  if (doc.contains("preset")) {
    spec = preset(string_at(doc, "preset"));
  }
  if (doc.contains("base")) {
    spec.base = parse_effective(doc.at("base"), spec.base);
  }
  if (doc.contains("axes")) {
    const json& axes = doc.at("axes");
    if (!axes.is_array()) throw ConfigError("key 'axes': expected an array");
    spec.axes.clear();
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const json& a = axes[i];
      const std::string where = "axes[" + std::to_string(i) + "]";
      require_object(a, where);
      for (const auto& [key, value] : a.items()) {
        if (key != "field" && key != "min" && key != "max" && key != "count" && key != "scale") {
          throw ConfigError(where + ": unknown key '" + key + "'");
        }
      }
      for (const char* key : {"field", "min", "max"}) {
        if (!a.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
      }
      Axis axis;
      axis.field = string_at(a, "field");
      axis.min = number_at(a, "min");
      axis.max = number_at(a, "max");
      axis.count = a.contains("count") ? static_cast<int>(number_at(a, "count")) : 0;
      if (axis.count == 0) axis.count = axes.size() == 2 ? kDefaultGrid2D : kDefaultGrid1D;
      if (a.contains("scale")) {
        const std::string scale = string_at(a, "scale");
        if (scale == "linear") {
          axis.scale = AxisScale::linear;
        } else if (scale == "log") {
          axis.scale = AxisScale::log;
        } else {
          throw ConfigError(where + ": key 'scale' must be \"linear\" or \"log\"");
        }
      }
      spec.axes.push_back(axis);
    }
  }
  if (doc.contains("measures")) {
    const json& m = doc.at("measures");
    if (!m.is_array()) throw ConfigError("key 'measures': expected an array of names");
    spec.measures.clear();
    for (const json& name : m) {
      if (!name.is_string()) throw ConfigError("key 'measures': expected an array of names");
      spec.measures.push_back(name.get<std::string>());
    }
  }
  if (doc.contains("out")) spec.output = string_at(doc, "out");
  if (doc.contains("steering_form")) {
    const auto form = parse_steering_form(string_at(doc, "steering_form"));
    if (!form) throw ConfigError("key 'steering_form': expected \"det\" or \"symplectic\"");
    spec.options.steering_form = *form;
  }
  validate(spec);
  return spec;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json to_json(const EffectiveParams& params) {
  json out = json::object();
  for (const ParamField& field : effective_fields()) {
    out[std::string(field.key)] = params.*(field.member) / field.file_to_internal;
  }
  return out;
}

json to_json(const SweepSpec& spec) {
  json out;
  out["base"] = to_json(spec.base);
  out["axes"] = json::array();
  for (const Axis& axis : spec.axes) {
    out["axes"].push_back({{"field", axis.field},
                           {"min", axis.min},
                           {"max", axis.max},
                           {"count", axis.count},
                           {"scale", axis.scale == AxisScale::log ? "log" : "linear"}});
  }
  out["measures"] = measure_columns(spec);
  out["steering_form"] = steering_form_label(spec.options.steering_form);
  if (!spec.output.empty()) out["out"] = spec.output;
  return out;
}

json to_json(const SweepRow& row) {
  json out;
  const StabilityReport& st = row.report.stability;
  out["status"] = row.status;
  out["stable"] = st.stable;
  out["marginal"] = st.marginal;
  out["max_re_lambda"] = nullable(st.max_real_part);
  json spectrum = json::array();
  for (int i = 0; i < st.spectrum.size(); ++i) {
    spectrum.push_back({st.spectrum(i).real(), st.spectrum(i).imag()});
  }
  out["spectrum"] = spectrum;
  out["params"] = to_json(row.params);

  json measures = json::object();
  const auto& table = default_measures();
  for (std::size_t i = 0; i < table.size(); ++i) {
    measures[table[i].name] = nullable(row.report.values.at(i));
  }
  out["measures"] = measures;

  if (row.region.unstable) {
    out["regions"] = nullptr;
  } else {
    json dirs = json::object();
    for (std::size_t i = 0; i < direction_pairs().size(); ++i) {
      dirs[direction_pairs()[i].name] = direction_label(row.region.directions[i]);
    }
    out["regions"] = {{"ent_code", row.region.entanglement},
                      {"ent_label", entanglement_label(row.region.entanglement)},
                      {"steer_code", row.region.steering},
                      {"steer_label", steering_label(row.region.steering)},
                      {"dir", dirs}};
  }
  out["lyapunov_residual"] = nullable(row.lyapunov_residual);
  out["min_symplectic_eigenvalue"] = nullable(row.min_symplectic_eigenvalue);
  return out;
}

}  // namespace omm
