#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace omm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
// CODATA 2018 exact/recommended values, SI units.
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kBoltzmann = 1.380649e-23;

/// Bosonic modes in the fixed covariance-matrix order (a, c1, c2, m, b).
enum class Mode : int { a = 0, c1 = 1, c2 = 2, m = 3, b = 4 };

inline constexpr int kModeCount = 5;
inline constexpr int kQuadratureCount = 2 * kModeCount;
inline constexpr std::array<Mode, kModeCount> kAllModes = {Mode::a, Mode::c1, Mode::c2, Mode::m, Mode::b};

std::string_view mode_label(Mode mode);
std::optional<Mode> parse_mode(std::string_view label);

/// Row/column of the X (or q) quadrature of `mode`; the Y (or p) quadrature follows it.
constexpr int quadrature_offset(Mode mode) { return 2 * static_cast<int>(mode); }

/// One operating point, all frequencies and rates angular (rad/s).
///
/// Couplings (g_ac2, G_c, G_m) may be zero; decay rates and mode frequencies
/// must be strictly positive. Detunings may take either sign.
struct EffectiveParams {
  double omega_b = 0.0;
  double omega_m = 0.0;  // only enters the magnon thermal occupation
  double delta_a = 0.0;
  double delta_c = 0.0;  // shared by both cavity polarizations
  double delta_m = 0.0;
  double gamma_a = 0.0;
  double kappa_c1 = 0.0;
  double kappa_c2 = 0.0;
  double kappa_m = 0.0;
  double gamma_b = 0.0;
  double g_ac2 = 0.0;
  double theta = 0.0;  // polarizer angle, radians in [0, 2pi)
  double G_c = 0.0;
  double G_m = 0.0;
  double T = 0.0;  // kelvin

  bool operator==(const EffectiveParams&) const = default;
};

/// Throws ConfigError naming the first offending field.
void validate(const EffectiveParams& p);

double normalize_angle(double theta);

/// Copy of `p` with theta folded into [0, 2pi).
EffectiveParams normalized(EffectiveParams p);

/// Baseline operating point used by every figure preset.
EffectiveParams baseline_params();

/// Describes how a serialized key maps onto an EffectiveParams member.
/// Frequency-like keys carry the `_hz` suffix and are cyclic in files.
struct ParamField {
  std::string_view key;
  double EffectiveParams::*member;
  double file_to_internal;  // 2pi for cyclic frequencies, 1 otherwise
};

std::span<const ParamField> effective_fields();
const ParamField* find_effective_field(std::string_view key);

/// Bose-Einstein occupation 1/(exp(hbar*omega/kB*T) - 1); exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

struct CavityDriveInputs {
  double power = 0.0;    // W
  double omega_c = 0.0;  // rad/s
  std::optional<double> kappa_port;  // defaults to kappa_c1
};

struct MagnonDriveInputs {
  double gamma_gyro = 0.0;  // rad s^-1 T^-1
  double spin_count = 0.0;
  double amplitude = 0.0;  // T
};

/// Bare couplings and drives; rates angular like EffectiveParams.
struct MicroscopicParams {
  double omega_b = 0.0;
  double omega_m = 0.0;
  double gamma_a = 0.0;
  double kappa_c1 = 0.0;
  double kappa_c2 = 0.0;
  double kappa_m = 0.0;
  double gamma_b = 0.0;
  double g_ac2 = 0.0;
  double theta = 0.0;
  double T = 0.0;

  double g_c = 0.0;
  double g_m = 0.0;
  double delta_a = 0.0;
  double delta_c0 = 0.0;
  double delta_m0 = 0.0;

  // Each drive is given either directly or through its physical inputs.
  std::optional<double> eta_c;
  std::optional<double> Omega_m;
  std::optional<CavityDriveInputs> cavity_drive;
  std::optional<MagnonDriveInputs> magnon_drive;
  double Omega_a = 0.0;
};

void validate(const MicroscopicParams& p);

struct DriveStrengths {
  double eta_c = 0.0;
  double Omega_m = 0.0;
};

DriveStrengths drive_strengths(const MicroscopicParams& micro);

struct SteadyState {
  std::complex<double> c1;
  std::complex<double> c2;
  std::complex<double> m;
  double q = 0.0;
  double delta_c = 0.0;  // effective detunings at the fixed point
  double delta_m = 0.0;
  int iterations = 0;

  /// Total optical amplitude sqrt(c1^2 + c2^2) taken on the complex amplitudes.
  std::complex<double> c_total() const;
};

struct SteadyStateOptions {
  double relaxation = 0.5;
  double tolerance = 1e-12;
  int max_iterations = 1000;
};

/// Self-consistent mean fields; throws ConvergenceError with the tail of the
/// q_s iteration trace when the relaxed fixed-point loop does not settle.
SteadyState steady_state(const MicroscopicParams& micro, const SteadyStateOptions& options = {});

EffectiveParams effective_from_micro(const MicroscopicParams& micro, const SteadyStateOptions& options = {});

}  // namespace omm
