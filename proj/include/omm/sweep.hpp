#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "omm/measures.hpp"
#include "omm/model.hpp"

namespace omm {

enum class AxisScale { linear, log };

/// One swept parameter. `field` is a serialized EffectiveParams key
/// (e.g. "theta", "g_ac2_hz"); bounds are in the same file units.
struct Axis {
  std::string field;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  AxisScale scale = AxisScale::linear;

  std::vector<double> values() const;
};

struct SweepSpec {
  EffectiveParams base;
  std::vector<Axis> axes;             // one or two
  std::vector<std::string> measures;  // empty = every default measure
  std::string output;
  MeasureOptions options;
};

/// Throws ConfigError on bad axes or unknown measure names.
void validate(const SweepSpec& spec);

/// Resolved measure names (spec.measures or the full default list).
std::vector<std::string> measure_columns(const SweepSpec& spec);

enum class Direction { no_way = 0, one_way = 1, reverse = 2, two_way = 3 };

std::string_view direction_label(Direction d);

/// (S_ab, S_ba) -> directionality under the positivity threshold.
Direction classify_direction(double forward, double backward, double eps = kPositivityThreshold);

/// A pairing whose steering directionality gets its own `dir_<name>` column.
struct DirectionPair {
  std::string name;
  std::string forward;   // measure name of S_x->y
  std::string backward;  // measure name of S_y->x
};

const std::vector<DirectionPair>& direction_pairs();

struct RegionCode {
  bool unstable = true;
  unsigned entanglement = 0;  // bit i: i-th of (E_am, E_c1m, E_c2m)
  unsigned steering = 0;      // bit i: i-th of (S_m_to_a, S_m_to_c1, S_m_to_c2, S_m_to_b)
  std::vector<Direction> directions;  // parallel to direction_pairs()
};

/// Bitmask over E_am, E_c1m, E_c2m of values above eps.
unsigned classify_entanglement(const MeasureReport& report, double eps = kPositivityThreshold);
unsigned classify_steering(const MeasureReport& report, double eps = kPositivityThreshold);
RegionCode classify(const MeasureReport& report, double eps = kPositivityThreshold);

/// "E_am|E_c2m" style label; "none" for an empty code.
std::string entanglement_label(unsigned code);
std::string steering_label(unsigned code);

struct SweepRow {
  std::vector<double> axis_values;  // file units, parallel to spec.axes
  EffectiveParams params;
  MeasureReport report;
  RegionCode region;
  std::string status = "ok";  // ok | unstable | error: ...
  // Only filled at stable points.
  double lyapunov_residual = kSentinel;
  double min_symplectic_eigenvalue = kSentinel;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // row-major over axes (last axis fastest)
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

enum class SweepKind {
  full,            // stability, covariance, every measure, region codes
  stability_only,  // drift spectrum only; measures stay NaN
};

/// Evaluates every grid point; per-point failures land in the row status.
SweepResult run_sweep(const SweepSpec& spec, int threads = 1, const ProgressCallback& progress = {},
                      SweepKind kind = SweepKind::full);

/// Evaluates one parameter point exactly like a sweep row.
SweepRow evaluate_point(const EffectiveParams& params, const MeasureOptions& options = {});
SweepRow evaluate_stability(const EffectiveParams& params);

/// 12-significant-digit scientific notation, "NaN" for non-finite values.
std::string format_number(double value);

void write_csv(std::ostream& out, const SweepResult& result);
void write_stability_csv(std::ostream& out, const SweepResult& result);

/// Overwrites the named EffectiveParams field, converting from file units.
void set_field(EffectiveParams& params, std::string_view key, double file_value);
double get_field(const EffectiveParams& params, std::string_view key);

}  // namespace omm
