#pragma once

#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "omm/dynamics.hpp"
#include "omm/model.hpp"

namespace omm {

/// Ordered, duplicate-free, non-empty subset of the five modes.
class ModeSet {
 public:
  ModeSet(std::initializer_list<Mode> modes);
  explicit ModeSet(std::vector<Mode> modes);

  /// Parses concatenated labels such as "mb", "c1c2", "ac1c2b".
  static ModeSet parse(std::string_view labels);

  const std::vector<Mode>& modes() const { return modes_; }
  int size() const { return static_cast<int>(modes_.size()); }
  bool contains(Mode mode) const;
  bool disjoint(const ModeSet& other) const;
  ModeSet united(const ModeSet& other) const;
  std::string label() const;

  bool operator==(const ModeSet&) const = default;

 private:
  std::vector<Mode> modes_;
};

/// Quadrature rows/columns of `modes`, in ModeSet order.
Eigen::MatrixXd reduce(const CovarianceMatrix& cov, const ModeSet& modes);

/// P V P with P flipping the momentum quadrature of each listed local mode
/// (indices into the modes of `v`, 0-based).
Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& v, std::initializer_list<int> local_modes);
Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& v, const std::vector<int>& local_modes);

/// Ascending symplectic eigenvalues of a 2n x 2n covariance matrix.
std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& v);

double log_negativity(const CovarianceMatrix& cov, Mode first, Mode second);

/// Residual contangle C_i|jk - C_i|j - C_i|k for the focus `focus` of `triple`.
/// Unfloored; negative values signal a monogamy violation of the squared
/// logarithmic negativity.
double residual_contangle(const CovarianceMatrix& cov, Mode focus, Mode j, Mode k);

/// Minimum residual contangle over the three foci, floored at zero.
double residual_contangle_min(const CovarianceMatrix& cov, const ModeSet& triple);

enum class SteeringForm {
  determinant,  // 1/2 ln(det V_A / (4^{n_B} det V_AB))
  symplectic,   // sum over Schur-complement symplectic eigenvalues below 1/2
};

std::optional<SteeringForm> parse_steering_form(std::string_view text);
std::string_view steering_form_label(SteeringForm form);

/// Gaussian steerability of `steered` by `steering`.
double steering(const CovarianceMatrix& cov, const ModeSet& steering_party, const ModeSet& steered_party,
                SteeringForm form = SteeringForm::determinant);

inline constexpr double kPositivityThreshold = 1e-5;

/// Steering of `steered` by the union of all other modes, or 0 when any
/// subset of all-but-one of those modes already steers it above `eps`.
double collective_steering(const CovarianceMatrix& cov, Mode steered, SteeringForm form = SteeringForm::determinant,
                           double eps = kPositivityThreshold);

enum class MeasureKind { log_negativity, residual_contangle, steering, collective_steering };

/// One named entry of the default measure list.
struct MeasureDef {
  std::string name;  // CSV column / JSON key
  MeasureKind kind;
  ModeSet first;   // entanglement pair / triple / steering party / (unused)
  ModeSet second;  // entanglement partner / (unused) / steered party / steered mode
};

const std::vector<MeasureDef>& default_measures();
const MeasureDef* find_measure(std::string_view name);

double evaluate(const MeasureDef& def, const CovarianceMatrix& cov, SteeringForm form = SteeringForm::determinant);

struct MeasureOptions {
  SteeringForm steering_form = SteeringForm::determinant;
};

/// All default measures at one point. Unstable points carry NaN for every
/// measure; stability metadata is kept either way.
struct MeasureReport {
  StabilityReport stability;
  std::vector<double> values;  // parallel to default_measures()

  bool stable() const { return stability.stable; }
  double at(std::string_view name) const;
};

inline constexpr double kSentinel = std::numeric_limits<double>::quiet_NaN();

MeasureReport full_report(const std::optional<CovarianceMatrix>& cov, const StabilityReport& stability,
                          const MeasureOptions& options = {});

}  // namespace omm
