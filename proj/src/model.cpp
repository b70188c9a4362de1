#include "omm/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "omm/error.hpp"

namespace omm {

namespace {

constexpr std::array<std::string_view, kModeCount> kModeLabels = {"a", "c1", "c2", "m", "b"};

constexpr std::array<ParamField, 15> kEffectiveFields = {{
    {"omega_b_hz", &EffectiveParams::omega_b, kTwoPi},
    {"omega_m_hz", &EffectiveParams::omega_m, kTwoPi},
    {"delta_a_hz", &EffectiveParams::delta_a, kTwoPi},
    {"delta_c_hz", &EffectiveParams::delta_c, kTwoPi},
    {"delta_m_hz", &EffectiveParams::delta_m, kTwoPi},
    {"gamma_a_hz", &EffectiveParams::gamma_a, kTwoPi},
    {"kappa_c1_hz", &EffectiveParams::kappa_c1, kTwoPi},
    {"kappa_c2_hz", &EffectiveParams::kappa_c2, kTwoPi},
    {"kappa_m_hz", &EffectiveParams::kappa_m, kTwoPi},
    {"gamma_b_hz", &EffectiveParams::gamma_b, kTwoPi},
    {"g_ac2_hz", &EffectiveParams::g_ac2, kTwoPi},
    {"theta", &EffectiveParams::theta, 1.0},
    {"G_c_hz", &EffectiveParams::G_c, kTwoPi},
    {"G_m_hz", &EffectiveParams::G_m, kTwoPi},
    {"T", &EffectiveParams::T, 1.0},
}};

void require_finite(double value, std::string_view name) {
  if (!std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be finite");
  }
}

void require_positive(double value, std::string_view name) {
  require_finite(value, name);
  if (!(value > 0.0)) {
    throw ConfigError(std::string(name) + " must be strictly positive");
  }
}

void require_non_negative(double value, std::string_view name) {
  require_finite(value, name);
  if (value < 0.0) {
    throw ConfigError(std::string(name) + " must be non-negative");
  }
}

}  // namespace

std::string_view mode_label(Mode mode) { return kModeLabels[static_cast<int>(mode)]; }

std::optional<Mode> parse_mode(std::string_view label) {
  for (int i = 0; i < kModeCount; ++i) {
    if (kModeLabels[i] == label) {
      return static_cast<Mode>(i);
    }
  }
  return std::nullopt;
}

void validate(const EffectiveParams& p) {
  require_positive(p.omega_b, "omega_b");
  require_positive(p.omega_m, "omega_m");
  require_finite(p.delta_a, "delta_a");
  require_finite(p.delta_c, "delta_c");
  require_finite(p.delta_m, "delta_m");
  require_positive(p.gamma_a, "gamma_a");
  require_positive(p.kappa_c1, "kappa_c1");
  require_positive(p.kappa_c2, "kappa_c2");
  require_positive(p.kappa_m, "kappa_m");
  require_positive(p.gamma_b, "gamma_b");
  require_non_negative(p.g_ac2, "g_ac2");
  require_finite(p.theta, "theta");
  require_non_negative(p.G_c, "G_c");
  require_non_negative(p.G_m, "G_m");
  require_non_negative(p.T, "T");
}

double normalize_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  // fmod can land exactly on 2pi after the shift for tiny negative inputs
  return r >= kTwoPi ? 0.0 : r;
}

EffectiveParams normalized(EffectiveParams p) {
  p.theta = normalize_angle(p.theta);
  return p;
}

EffectiveParams baseline_params() {
  constexpr double MHz = kTwoPi * 1e6;
  EffectiveParams p;
  p.omega_m = kTwoPi * 10e9;
  p.omega_b = 40.0 * MHz;
  p.gamma_a = 1.0 * MHz;
  p.kappa_c1 = 3.0 * MHz;
  p.kappa_c2 = 1.0 * MHz;
  p.kappa_m = 1.0 * MHz;
  p.gamma_b = kTwoPi * 100.0;
  p.g_ac2 = 3.0 * MHz;
  p.theta = std::numbers::pi / 4.0;
  p.T = 0.01;
  p.G_c = 10.0 * MHz;
  p.G_m = 2.0 * MHz;
  p.delta_a = p.omega_b;
  p.delta_m = -p.omega_b;
  p.delta_c = p.omega_b;
  return p;
}

std::span<const ParamField> effective_fields() { return kEffectiveFields; }

const ParamField* find_effective_field(std::string_view key) {
  auto it = std::find_if(kEffectiveFields.begin(), kEffectiveFields.end(),
                         [&](const ParamField& f) { return f.key == key; });
  return it == kEffectiveFields.end() ? nullptr : &*it;
}

double thermal_occupation(double omega, double temperature) {
  if (temperature <= 0.0) {
    return 0.0;
  }
  const double x = kHbar * omega / (kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

void validate(const MicroscopicParams& p) {
  require_positive(p.omega_b, "omega_b");
  require_positive(p.omega_m, "omega_m");
  require_positive(p.gamma_a, "gamma_a");
  require_positive(p.kappa_c1, "kappa_c1");
  require_positive(p.kappa_c2, "kappa_c2");
  require_positive(p.kappa_m, "kappa_m");
  require_positive(p.gamma_b, "gamma_b");
  require_non_negative(p.g_ac2, "g_ac2");
  require_finite(p.theta, "theta");
  require_non_negative(p.T, "T");
  require_non_negative(p.g_c, "g_c");
  require_non_negative(p.g_m, "g_m");
  require_finite(p.delta_a, "delta_a");
  require_finite(p.delta_c0, "delta_c0");
  require_finite(p.delta_m0, "delta_m0");
  require_non_negative(p.Omega_a, "Omega_a");

  if (p.eta_c && p.cavity_drive) {
    throw ConfigError("eta_c given both directly and through cavity drive inputs (P, omega_c)");
  }
  if (p.Omega_m && p.magnon_drive) {
    throw ConfigError("Omega_m given both directly and through magnon drive inputs (gamma_gyro, N_d, B_d)");
  }
  if (p.eta_c) require_non_negative(*p.eta_c, "eta_c");
  if (p.Omega_m) require_non_negative(*p.Omega_m, "Omega_m");
  if (p.cavity_drive) {
    require_non_negative(p.cavity_drive->power, "P");
    require_positive(p.cavity_drive->omega_c, "omega_c");
    if (p.cavity_drive->kappa_port) require_positive(*p.cavity_drive->kappa_port, "kappa_c");
  }
  if (p.magnon_drive) {
    require_non_negative(p.magnon_drive->gamma_gyro, "gamma_gyro");
    require_non_negative(p.magnon_drive->spin_count, "N_d");
    require_non_negative(p.magnon_drive->amplitude, "B_d");
  }
}

DriveStrengths drive_strengths(const MicroscopicParams& micro) {
  DriveStrengths out;
  if (micro.eta_c) {
    out.eta_c = *micro.eta_c;
  } else if (micro.cavity_drive) {
    const auto& in = *micro.cavity_drive;
    const double kappa = in.kappa_port.value_or(micro.kappa_c1);
    out.eta_c = std::sqrt(2.0 * in.power * kappa / (kHbar * in.omega_c));
  } else {
    throw ConfigError("missing cavity drive: supply eta_c or (P, omega_c)");
  }

  if (micro.Omega_m) {
    out.Omega_m = *micro.Omega_m;
  } else if (micro.magnon_drive) {
    const auto& in = *micro.magnon_drive;
    out.Omega_m = std::sqrt(5.0) / 4.0 * in.gamma_gyro * std::sqrt(in.spin_count) * in.amplitude;
  } else {
    throw ConfigError("missing magnon drive: supply Omega_m or (gamma_gyro, N_d, B_d)");
  }
  return out;
}

std::complex<double> SteadyState::c_total() const { return std::sqrt(c1 * c1 + c2 * c2); }

namespace {

struct Amplitudes {
  std::complex<double> c1, c2, m;
};

Amplitudes amplitudes_at(const MicroscopicParams& p, const DriveStrengths& drives, double delta_c, double delta_m) {
  using namespace std::complex_literals;
  const double abs_cos = std::abs(std::cos(p.theta));
  const double abs_sin = std::abs(std::sin(p.theta));
  const std::complex<double> atom = p.gamma_a + 1i * p.delta_a;

  Amplitudes out;
  out.m = drives.Omega_m / (p.kappa_m + 1i * delta_m);
  out.c1 = drives.eta_c * abs_cos / (p.kappa_c1 + 1i * delta_c);
  out.c2 = (drives.eta_c * abs_sin * atom - 1i * p.g_ac2 * p.Omega_a) /
           (p.g_ac2 * p.g_ac2 + atom * (p.kappa_c2 + 1i * delta_c));
  return out;
}

}  // namespace

SteadyState steady_state(const MicroscopicParams& micro, const SteadyStateOptions& options) {
  validate(micro);
  const DriveStrengths drives = drive_strengths(micro);
  const double coupling_scale = std::max(micro.g_c, micro.g_m) / micro.omega_b;

  std::deque<double> trace;
  double q = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double delta_c = micro.delta_c0 - micro.g_c * q;
    const double delta_m = micro.delta_m0 - micro.g_m * q;
    const Amplitudes amp = amplitudes_at(micro, drives, delta_c, delta_m);
    const double optical = std::abs(amp.c1 * amp.c1 + amp.c2 * amp.c2);
    const double target = (micro.g_m * std::norm(amp.m) - micro.g_c * optical) / micro.omega_b;
    const double next = (1.0 - options.relaxation) * q + options.relaxation * target;

    trace.push_back(next);
    if (trace.size() > 8) trace.pop_front();

    const double step = std::abs(next - q);
    q = next;
    if (!std::isfinite(q)) break;
    if (step * coupling_scale < options.tolerance || coupling_scale == 0.0) {
      SteadyState out;
      out.q = q;
      out.delta_c = micro.delta_c0 - micro.g_c * q;
      out.delta_m = micro.delta_m0 - micro.g_m * q;
      const Amplitudes final_amp = amplitudes_at(micro, drives, out.delta_c, out.delta_m);
      out.c1 = final_amp.c1;
      out.c2 = final_amp.c2;
      out.m = final_amp.m;
      out.iterations = it;
      return out;
    }
  }

  std::ostringstream msg;
  msg << "steady state did not converge after " << options.max_iterations << " iterations; last q_s values:";
  msg.precision(15);
  for (double v : trace) msg << ' ' << v;
  throw ConvergenceError(msg.str());
}

EffectiveParams effective_from_micro(const MicroscopicParams& micro, const SteadyStateOptions& options) {
  const SteadyState ss = steady_state(micro, options);
  EffectiveParams p;
  p.omega_b = micro.omega_b;
  p.omega_m = micro.omega_m;
  p.delta_a = micro.delta_a;
  p.delta_c = ss.delta_c;
  p.delta_m = ss.delta_m;
  p.gamma_a = micro.gamma_a;
  p.kappa_c1 = micro.kappa_c1;
  p.kappa_c2 = micro.kappa_c2;
  p.kappa_m = micro.kappa_m;
  p.gamma_b = micro.gamma_b;
  p.g_ac2 = micro.g_ac2;
  p.theta = normalize_angle(micro.theta);
  p.G_c = std::sqrt(2.0) * micro.g_c * std::abs(ss.c_total());
  p.G_m = std::sqrt(2.0) * micro.g_m * std::abs(ss.m);
  p.T = micro.T;
  return p;
}

}  // namespace omm
