#include "omm/presets.hpp"

#include <algorithm>
#include <numbers>

#include "omm/error.hpp"

namespace omm {

namespace {

constexpr double kMHz = 1e6;  // file units are cyclic Hz
constexpr double kPhononHz = 40e6;

const std::vector<std::string> kEntanglements = {"E_am", "E_c1m", "E_c2m"};
const std::vector<std::string> kTripartite = {"R_ac2m", "R_ac1m", "R_c1c2m"};

Axis linear(std::string field, double min, double max, int count) {
  return Axis{std::move(field), min, max, count, AxisScale::linear};
}

Axis logarithmic(std::string field, double min, double max, int count) {
  return Axis{std::move(field), min, max, count, AxisScale::log};
}

SweepSpec detuning_map(std::string measure) {
  return SweepSpec{baseline_params(),
                   {linear("delta_a_hz", -2 * kPhononHz, 2 * kPhononHz, kDefaultGrid2D),
                    linear("delta_m_hz", -2 * kPhononHz, 2 * kPhononHz, kDefaultGrid2D)},
                   {std::move(measure)},
                   {},
                   {}};
}

SweepSpec decay_map(std::string measure) {
  return SweepSpec{baseline_params(),
                   {linear("kappa_c1_hz", 0.1 * kMHz, 10 * kMHz, kDefaultGrid2D),
                    linear("kappa_c2_hz", 0.1 * kMHz, 10 * kMHz, kDefaultGrid2D)},
                   {std::move(measure)},
                   {},
                   {}};
}

SweepSpec cut(Axis axis) { return SweepSpec{baseline_params(), {std::move(axis)}, kEntanglements, {}, {}}; }

SweepSpec polarization_map(std::vector<std::string> measures) {
  return SweepSpec{polarization_map_params(),
                   {linear("theta", 0.0, 2.0 * std::numbers::pi, kDefaultGrid2D),
                    linear("g_ac2_hz", 0.0, 10 * kMHz, kDefaultGrid2D)},
                   std::move(measures),
                   {},
                   {}};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string valid_ids_message(std::string_view kind, std::string_view id, const std::vector<std::string>& ids) {
  std::string msg = "unknown " + std::string(kind) + " '" + std::string(id) + "'; valid ids:";
  for (const auto& v : ids) msg += " " + v;
  return msg;
}

}  // namespace

EffectiveParams polarization_map_params() {
  EffectiveParams p = baseline_params();
  p.G_m = kTwoPi * 3e6;
  return p;
}

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids = {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
                                               "fig3c", "fig3d", "fig3e", "fig3f", "fig3g", "fig3h",
                                               "fig4",  "fig5",  "fig6",  "fig7",  "fig8"};
  return ids;
}

SweepSpec preset(std::string_view id) {
  if (id == "fig2a") return detuning_map("E_am");
  if (id == "fig2b") return detuning_map("E_c1m");
  if (id == "fig2c") return detuning_map("E_c2m");
  if (id == "fig2d") return cut(linear("delta_c_hz", 0.0, 2 * kPhononHz, kDefaultGrid1D));
  if (id == "fig3a") return cut(linear("G_m_hz", 0.0, 5 * kMHz, kDefaultGrid1D));
  if (id == "fig3b") return cut(linear("G_c_hz", 0.0, 20 * kMHz, kDefaultGrid1D));
  if (id == "fig3c") return decay_map("E_am");
  if (id == "fig3d") return decay_map("E_c1m");
  if (id == "fig3e") return decay_map("E_c2m");
  if (id == "fig3f") return cut(linear("kappa_m_hz", 0.1 * kMHz, 10 * kMHz, kDefaultGrid1D));
  if (id == "fig3g") return cut(logarithmic("gamma_b_hz", 10.0, 1e6, kDefaultGrid1D));
  if (id == "fig3h") return cut(logarithmic("T", 1e-3, 5.0, kDefaultGrid1D));
  if (id == "fig4") return polarization_map(concat(kEntanglements, kTripartite));
  if (id == "fig5") {
    return polarization_map({"S_m_to_a", "S_m_to_c1", "S_m_to_c2", "S_m_to_b", "S_a_to_m", "S_c1_to_m", "S_c2_to_m",
                             "S_b_to_m"});
  }
  if (id == "fig6") return polarization_map({"S_c1_to_mb", "S_mb_to_c1", "S_c2_to_mb", "S_mb_to_c2"});
  if (id == "fig7") return polarization_map({"S_mb_to_c1c2", "S_c1c2_to_mb", "S_am_to_c1c2", "S_c1c2_to_am"});
  if (id == "fig8") return polarization_map({"Sc_ac1c2b_to_m"});
  throw ConfigError(valid_ids_message("preset", id, preset_ids()));
}

const std::vector<Figure>& figures() {
  static const std::vector<Figure> table = [] {
    auto single = [](std::string letter, std::string preset_id) {
      return Panel{std::move(letter), preset_id, preset(preset_id).measures};
    };
    std::vector<Figure> out;
    out.push_back({"fig2", {single("a", "fig2a"), single("b", "fig2b"), single("c", "fig2c"), single("d", "fig2d")}});
    Figure fig3{"fig3", {}};
    for (char c = 'a'; c <= 'h'; ++c) fig3.panels.push_back(single(std::string(1, c), "fig3" + std::string(1, c)));
    out.push_back(std::move(fig3));
    out.push_back({"fig4",
                   {{"a", "fig4", {"E_am"}},
                    {"b", "fig4", {"E_c1m"}},
                    {"c", "fig4", {"E_c2m"}},
                    {"d", "fig4", {"R_ac2m"}},
                    {"e", "fig4", {"R_ac1m"}},
                    {"f", "fig4", {"R_c1c2m"}},
                    {"g", "fig4", kEntanglements},
                    {"h", "fig4", kTripartite}}});
    out.push_back({"fig5",
                   {{"a", "fig5", {"S_m_to_a"}},
                    {"b", "fig5", {"S_m_to_c1"}},
                    {"c", "fig5", {"S_m_to_c2"}},
                    {"d", "fig5", {"S_m_to_b"}},
                    {"e", "fig5", {"S_m_to_a", "S_m_to_c1", "S_m_to_c2", "S_m_to_b"}}}});
    out.push_back({"fig6",
                   {{"a", "fig6", {"S_c1_to_mb"}},
                    {"b", "fig6", {"S_mb_to_c1"}},
                    {"c", "fig6", {"S_c1_to_mb", "S_mb_to_c1"}},
                    {"d", "fig6", {"S_c2_to_mb"}},
                    {"e", "fig6", {"S_mb_to_c2"}},
                    {"f", "fig6", {"S_c2_to_mb", "S_mb_to_c2"}}}});
    out.push_back({"fig7",
                   {{"a", "fig7", {"S_mb_to_c1c2"}},
                    {"b", "fig7", {"S_c1c2_to_mb"}},
                    {"c", "fig7", {"S_mb_to_c1c2", "S_c1c2_to_mb"}},
                    {"d", "fig7", {"S_am_to_c1c2"}},
                    {"e", "fig7", {"S_c1c2_to_am"}},
                    {"f", "fig7", {"S_am_to_c1c2", "S_c1c2_to_am"}}}});
    out.push_back({"fig8", {single("a", "fig8")}});
    return out;
  }();
  return table;
}

const Figure& find_figure(std::string_view id) {
  const auto& table = figures();
  auto it = std::find_if(table.begin(), table.end(), [&](const Figure& f) { return f.id == id; });
  if (it == table.end()) {
    std::vector<std::string> ids;
    for (const Figure& f : table) ids.push_back(f.id);
    throw ConfigError(valid_ids_message("figure", id, ids));
  }
  return *it;
}

bool same_grid(const SweepSpec& lhs, const SweepSpec& rhs) {
  if (!(lhs.base == rhs.base) || lhs.axes.size() != rhs.axes.size()) return false;
  if (lhs.options.steering_form != rhs.options.steering_form) return false;
  for (std::size_t i = 0; i < lhs.axes.size(); ++i) {
    const Axis& a = lhs.axes[i];
    const Axis& b = rhs.axes[i];
    if (a.field != b.field || a.min != b.min || a.max != b.max || a.count != b.count || a.scale != b.scale) {
      return false;
    }
  }
  return true;
}

void override_grid(SweepSpec& spec, int count) {
  for (Axis& axis : spec.axes) axis.count = count;
}

}  // namespace omm
