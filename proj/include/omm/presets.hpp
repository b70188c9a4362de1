#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "omm/sweep.hpp"

namespace omm {

inline constexpr int kDefaultGrid2D = 101;
inline constexpr int kDefaultGrid1D = 201;

/// fig2a..fig2d, fig3a..fig3h, fig4..fig8.
const std::vector<std::string>& preset_ids();

/// Base parameters, swept axes and measure list of one figure (panel).
/// Throws ConfigError listing the valid ids.
SweepSpec preset(std::string_view id);

/// Baseline with the magnomechanical coupling raised to 3 MHz, shared by
/// the (theta, g_ac2) maps.
EffectiveParams polarization_map_params();

/// One output CSV of `reproduce`: a preset sweep restricted to some measures.
struct Panel {
  std::string letter;
  std::string preset;
  std::vector<std::string> measures;
};

struct Figure {
  std::string id;  // fig2 .. fig8
  std::vector<Panel> panels;
};

const std::vector<Figure>& figures();
const Figure& find_figure(std::string_view id);

/// True when both specs evaluate the same parameter points.
bool same_grid(const SweepSpec& lhs, const SweepSpec& rhs);

/// Sets the point count of every axis.
void override_grid(SweepSpec& spec, int count);

}  // namespace omm
