#pragma once

#include <complex>

#include <Eigen/Dense>

#include "omm/model.hpp"

namespace omm {

using Matrix10 = Eigen::Matrix<double, kQuadratureCount, kQuadratureCount>;
using Spectrum10 = Eigen::Matrix<std::complex<double>, kQuadratureCount, 1>;

/// Linear generator of the quadrature fluctuations, layout
/// (X_a, Y_a, X_c1, Y_c1, X_c2, Y_c2, X_m, Y_m, q, p).
struct DriftMatrix {
  Matrix10 value;
};

/// Noise covariance rates; always diagonal.
struct DiffusionMatrix {
  Eigen::Matrix<double, kQuadratureCount, 1> diagonal;

  Matrix10 dense() const { return diagonal.asDiagonal(); }
};

/// Stationary second moments V_ij = <{u_i, u_j}>/2 over all five modes.
/// The vacuum state is identity/2.
class CovarianceMatrix {
 public:
  CovarianceMatrix() : value_(Matrix10::Identity() * 0.5) {}
  explicit CovarianceMatrix(const Matrix10& value) : value_(value) {}

  static CovarianceMatrix vacuum() { return CovarianceMatrix(); }

  const Matrix10& matrix() const { return value_; }
  double operator()(int row, int col) const { return value_(row, col); }

 private:
  Matrix10 value_;
};

struct StabilityReport {
  bool stable = false;
  // |max Re lambda| below 1e-6 omega_b (only meaningful with a frequency scale)
  bool marginal = false;
  double max_real_part = 0.0;  // rad/s
  Spectrum10 spectrum;
};

DriftMatrix build_drift(const EffectiveParams& p);
DiffusionMatrix build_diffusion(const EffectiveParams& p);

/// Full complex spectrum via Hessenberg reduction + shifted QR.
/// `frequency_scale` sets the marginal band (1e-6 * scale); pass 0 to disable.
StabilityReport stability(const DriftMatrix& drift, double frequency_scale = 0.0);

/// Solves A V + V A^T = -D for the stationary covariance matrix.
/// Throws UnstablePointError when A is not Hurwitz.
CovarianceMatrix steady_covariance(const DriftMatrix& drift, const DiffusionMatrix& diffusion);

/// ||A V + V A^T + D||_F / ||D||_F
double lyapunov_residual(const DriftMatrix& drift, const DiffusionMatrix& diffusion, const CovarianceMatrix& cov);

/// Convenience bundle for one parameter point.
struct PointSolution {
  EffectiveParams params;
  DriftMatrix drift;
  DiffusionMatrix diffusion;
  StabilityReport stability;
  std::optional<CovarianceMatrix> covariance;  // empty when unstable
};

PointSolution solve_point(const EffectiveParams& p);

}  // namespace omm
