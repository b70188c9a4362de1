#include "omm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "omm/dynamics.hpp"
#include "omm/error.hpp"

namespace omm {

namespace {

constexpr std::array<std::string_view, 3> kEntanglementBits = {"E_am", "E_c1m", "E_c2m"};
constexpr std::array<std::string_view, 4> kSteeringBits = {"S_m_to_a", "S_m_to_c1", "S_m_to_c2", "S_m_to_b"};

template <std::size_t N>
unsigned bitmask(const MeasureReport& report, const std::array<std::string_view, N>& names, double eps) {
  unsigned code = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (report.at(names[i]) > eps) code |= 1u << i;
  }
  return code;
}

template <std::size_t N>
std::string bit_label(unsigned code, const std::array<std::string_view, N>& names) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (code & (1u << i)) {
      if (!out.empty()) out += '|';
      out += names[i];
    }
  }
  return out.empty() ? "none" : out;
}

std::string sanitize(std::string text) {
  std::replace_if(text.begin(), text.end(), [](char c) { return c == ',' || c == '\n' || c == '"'; }, ';');
  return text;
}

}  // namespace

std::vector<double> Axis::values() const {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    if (scale == AxisScale::linear) {
      out[i] = min + t * (max - min);
    } else {
      out[i] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    }
  }
  // pin the end points exactly
  out.front() = min;
  out.back() = max;
  return out;
}

void validate(const SweepSpec& spec) {
  validate(spec.base);
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw ConfigError("sweep needs one or two axes");
  }
  for (const Axis& axis : spec.axes) {
    if (!find_effective_field(axis.field)) {
      throw ConfigError("axis field '" + axis.field + "' is not a parameter");
    }
    if (axis.count < 1) {
      throw ConfigError("axis '" + axis.field + "' needs at least 1 point");
    }
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
      throw ConfigError("axis '" + axis.field + "' needs finite bounds");
    }
    if (axis.count == 1 ? axis.min != axis.max : !(axis.min < axis.max)) {
      throw ConfigError("axis '" + axis.field + "' needs min < max, or min == max for a single point");
    }
    if (axis.scale == AxisScale::log && !(axis.min > 0.0)) {
      throw ConfigError("log axis '" + axis.field + "' needs a positive lower bound");
    }
  }
  if (spec.axes.size() == 2 && spec.axes[0].field == spec.axes[1].field) {
    throw ConfigError("both axes sweep '" + spec.axes[0].field + "'");
  }
  for (const std::string& name : spec.measures) {
    if (!find_measure(name)) {
      throw ConfigError("unknown measure '" + name + "'");
    }
  }
}

std::vector<std::string> measure_columns(const SweepSpec& spec) {
  if (!spec.measures.empty()) return spec.measures;
  std::vector<std::string> out;
  for (const MeasureDef& def : default_measures()) out.push_back(def.name);
  return out;
}

std::string_view direction_label(Direction d) {
  switch (d) {
    case Direction::no_way:
      return "no-way";
    case Direction::one_way:
      return "one-way";
    case Direction::reverse:
      return "reverse";
    case Direction::two_way:
      return "two-way";
  }
  return "?";
}

Direction classify_direction(double forward, double backward, double eps) {
  const bool f = forward > eps;
  const bool b = backward > eps;
  if (f && b) return Direction::two_way;
  if (f) return Direction::one_way;
  if (b) return Direction::reverse;
  return Direction::no_way;
}

const std::vector<DirectionPair>& direction_pairs() {
  static const std::vector<DirectionPair> pairs = {
      {"m_a", "S_m_to_a", "S_a_to_m"},
      {"m_c1", "S_m_to_c1", "S_c1_to_m"},
      {"m_c2", "S_m_to_c2", "S_c2_to_m"},
      {"m_b", "S_m_to_b", "S_b_to_m"},
      {"c1_mb", "S_c1_to_mb", "S_mb_to_c1"},
      {"c2_mb", "S_c2_to_mb", "S_mb_to_c2"},
      {"mb_c1c2", "S_mb_to_c1c2", "S_c1c2_to_mb"},
      {"am_c1c2", "S_am_to_c1c2", "S_c1c2_to_am"},
  };
  return pairs;
}

unsigned classify_entanglement(const MeasureReport& report, double eps) {
  return bitmask(report, kEntanglementBits, eps);
}

unsigned classify_steering(const MeasureReport& report, double eps) { return bitmask(report, kSteeringBits, eps); }

RegionCode classify(const MeasureReport& report, double eps) {
  RegionCode code;
  code.unstable = !report.stable();
  if (code.unstable) return code;
  code.entanglement = classify_entanglement(report, eps);
  code.steering = classify_steering(report, eps);
  for (const DirectionPair& pair : direction_pairs()) {
    code.directions.push_back(classify_direction(report.at(pair.forward), report.at(pair.backward), eps));
  }
  return code;
}

std::string entanglement_label(unsigned code) { return bit_label(code, kEntanglementBits); }
std::string steering_label(unsigned code) { return bit_label(code, kSteeringBits); }

void set_field(EffectiveParams& params, std::string_view key, double file_value) {
  const ParamField* field = find_effective_field(key);
  if (!field) throw ConfigError("unknown parameter '" + std::string(key) + "'");
  params.*(field->member) = file_value * field->file_to_internal;
}

double get_field(const EffectiveParams& params, std::string_view key) {
  const ParamField* field = find_effective_field(key);
  if (!field) throw ConfigError("unknown parameter '" + std::string(key) + "'");
  return params.*(field->member) / field->file_to_internal;
}

SweepRow evaluate_point(const EffectiveParams& params, const MeasureOptions& options) {
  SweepRow row;
  row.params = params;
  row.report.values.assign(default_measures().size(), kSentinel);
  try {
    const PointSolution sol = solve_point(params);
    row.params = sol.params;
    row.report = full_report(sol.covariance, sol.stability, options);
    if (sol.covariance) {
      row.lyapunov_residual = lyapunov_residual(sol.drift, sol.diffusion, *sol.covariance);
      row.min_symplectic_eigenvalue = symplectic_spectrum(sol.covariance->matrix()).front();
    } else {
      row.status = "unstable";
    }
    row.region = classify(row.report);
  } catch (const std::exception& e) {
    row.status = "error: " + sanitize(e.what());
    row.report = MeasureReport{};
    row.report.stability.max_real_part = kSentinel;
    row.report.values.assign(default_measures().size(), kSentinel);
    row.region = RegionCode{};
  }
  return row;
}

SweepRow evaluate_stability(const EffectiveParams& params) {
  SweepRow row;
  row.params = params;
  row.report.values.assign(default_measures().size(), kSentinel);
  try {
    validate(params);
    row.params = normalized(params);
    row.report.stability = stability(build_drift(row.params), row.params.omega_b);
    if (!row.report.stable()) row.status = "unstable";
  } catch (const std::exception& e) {
    row.status = "error: " + sanitize(e.what());
    row.report.stability = StabilityReport{};
    row.report.stability.max_real_part = kSentinel;
  }
  return row;
}

SweepResult run_sweep(const SweepSpec& spec, int threads, const ProgressCallback& progress, SweepKind kind) {
  validate(spec);

  std::vector<std::vector<double>> axis_values;
  for (const Axis& axis : spec.axes) axis_values.push_back(axis.values());
  const std::size_t inner = axis_values.size() == 2 ? axis_values[1].size() : 1;
  const std::size_t total = axis_values[0].size() * inner;

  SweepResult result;
  result.spec = spec;
  result.rows.resize(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      std::vector<double> point = {axis_values[0][idx / inner]};
      if (axis_values.size() == 2) point.push_back(axis_values[1][idx % inner]);

      EffectiveParams params = spec.base;
      for (std::size_t k = 0; k < point.size(); ++k) set_field(params, spec.axes[k].field, point[k]);

      SweepRow row = kind == SweepKind::full ? evaluate_point(params, spec.options) : evaluate_stability(params);
      row.axis_values = std::move(point);
      result.rows[idx] = std::move(row);

      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };

  const int n = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(total, 1)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  return result;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return "NaN";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", value);
  return buf;
}

void write_csv(std::ostream& out, const SweepResult& result) {
  const std::vector<std::string> columns = measure_columns(result.spec);
  std::vector<std::size_t> measure_index;
  const auto& table = default_measures();
  for (const std::string& name : columns) {
    auto it = std::find_if(table.begin(), table.end(), [&](const MeasureDef& d) { return d.name == name; });
    measure_index.push_back(static_cast<std::size_t>(it - table.begin()));
  }

  for (const Axis& axis : result.spec.axes) out << axis.field << ',';
  out << "stable,max_re_lambda,marginal";
  for (const std::string& name : columns) out << ',' << name;
  out << ",ent_code,ent_label,steer_code,steer_label";
  for (const DirectionPair& pair : direction_pairs()) out << ",dir_" << pair.name;
  out << ",status\n";

  for (const SweepRow& row : result.rows) {
    for (double v : row.axis_values) out << format_number(v) << ',';
    const bool stable = row.report.stable();
    out << (stable ? "true" : "false") << ',' << format_number(row.report.stability.max_real_part) << ','
        << (row.report.stability.marginal ? "true" : "false");
    for (std::size_t idx : measure_index) out << ',' << format_number(row.report.values[idx]);
    if (row.region.unstable) {
      out << ",NaN,NaN,NaN,NaN";
      for (std::size_t i = 0; i < direction_pairs().size(); ++i) out << ",NaN";
    } else {
      out << ',' << row.region.entanglement << ',' << entanglement_label(row.region.entanglement) << ','
          << row.region.steering << ',' << steering_label(row.region.steering);
      for (Direction d : row.region.directions) out << ',' << direction_label(d);
    }
    out << ',' << row.status << '\n';
  }
}

void write_stability_csv(std::ostream& out, const SweepResult& result) {
  for (const Axis& axis : result.spec.axes) out << axis.field << ',';
  out << "max_re_lambda,stable,marginal\n";
  for (const SweepRow& row : result.rows) {
    for (double v : row.axis_values) out << format_number(v) << ',';
    out << format_number(row.report.stability.max_real_part) << ',' << (row.report.stable() ? "true" : "false")
        << ',' << (row.report.stability.marginal ? "true" : "false") << '\n';
  }
}

}  // namespace omm
