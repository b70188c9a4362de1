#include "omm/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "omm/error.hpp"

namespace omm {

namespace {

constexpr int N = kQuadratureCount;

// Damped rotation block [[-k, d], [-d, -k]] on the diagonal of `mode`.
void set_mode_block(Matrix10& a, Mode mode, double damping, double detuning) {
  const int o = quadrature_offset(mode);
  a(o, o) = -damping;
  a(o, o + 1) = detuning;
  a(o + 1, o) = -detuning;
  a(o + 1, o + 1) = -damping;
}

}  // namespace

DriftMatrix build_drift(const EffectiveParams& p) {
  Matrix10 a = Matrix10::Zero();
  set_mode_block(a, Mode::a, p.gamma_a, p.delta_a);
  set_mode_block(a, Mode::c1, p.kappa_c1, p.delta_c);
  set_mode_block(a, Mode::c2, p.kappa_c2, p.delta_c);
  set_mode_block(a, Mode::m, p.kappa_m, p.delta_m);

  const int ia = quadrature_offset(Mode::a);
  const int ic1 = quadrature_offset(Mode::c1);
  const int ic2 = quadrature_offset(Mode::c2);
  const int im = quadrature_offset(Mode::m);
  const int ib = quadrature_offset(Mode::b);

  // Tavis-Cummings exchange; the lower-left block equals the upper-right one as printed.
  const double tc = p.g_ac2 * std::abs(std::sin(p.theta));
  a(ia, ic2 + 1) = tc;
  a(ia + 1, ic2) = -tc;
  a(ic2, ia + 1) = tc;
  a(ic2 + 1, ia) = -tc;

  // Optomechanical couplings with signed cos/sin.
  const double gc1 = p.G_c * std::cos(p.theta);
  const double gc2 = p.G_c * std::sin(p.theta);
  a(ic1, ib) = -gc1;
  a(ib + 1, ic1 + 1) = gc1;
  a(ic2, ib) = -gc2;
  a(ib + 1, ic2 + 1) = gc2;

  a(im, ib) = p.G_m;
  a(ib + 1, im + 1) = -p.G_m;

  a(ib, ib + 1) = p.omega_b;
  a(ib + 1, ib) = -p.omega_b;
  a(ib + 1, ib + 1) = -p.gamma_b;
  return DriftMatrix{a};
}

DiffusionMatrix build_diffusion(const EffectiveParams& p) {
  const double magnon = p.kappa_m * (2.0 * thermal_occupation(p.omega_m, p.T) + 1.0);
  const double phonon = p.gamma_b * (2.0 * thermal_occupation(p.omega_b, p.T) + 1.0);
  DiffusionMatrix d;
  d.diagonal << p.gamma_a, p.gamma_a, p.kappa_c1, p.kappa_c1, p.kappa_c2, p.kappa_c2, magnon, magnon, 0.0, phonon;
  return d;
}

StabilityReport stability(const DriftMatrix& drift, double frequency_scale) {
  if (!drift.value.allFinite()) {
    throw NumericalError("drift matrix has non-finite entries");
  }
  Eigen::EigenSolver<Matrix10> solver(drift.value, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration failed on drift matrix");
  }
  StabilityReport out;
  out.spectrum = solver.eigenvalues();
  out.max_real_part = out.spectrum.real().maxCoeff();
  out.stable = out.max_real_part < 0.0;
  out.marginal = frequency_scale > 0.0 && std::abs(out.max_real_part) < 1e-6 * frequency_scale;
  return out;
}

CovarianceMatrix steady_covariance(const DriftMatrix& drift, const DiffusionMatrix& diffusion) {
  const StabilityReport report = stability(drift);
  if (!report.stable) {
    std::ostringstream msg;
    msg << "steady covariance requested at an unstable point (max Re lambda = " << report.max_real_part << ")";
    throw UnstablePointError(msg.str());
  }

  // (I (x) A + A (x) I) vec(V) = -vec(D), column-major vec.
  const Matrix10& a = drift.value;
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(N * N, N * N);
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < N; ++l) {
      for (int i = 0; i < N; ++i) {
        double& dst = kron(N * j + i, N * l + i);
        dst += a(j, l);
      }
    }
    kron.block(N * j, N * j, N, N) += a;
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N * N);
  for (int i = 0; i < N; ++i) {
    rhs(N * i + i) = -diffusion.diagonal(i);
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(kron);
  Eigen::VectorXd x = lu.solve(rhs);
  // one step of iterative refinement
  const Eigen::VectorXd residual = rhs - kron * x;
  x += lu.solve(residual);

  if (!x.allFinite()) {
    throw NumericalError("Lyapunov solve produced non-finite entries");
  }
  const Matrix10 v = Eigen::Map<const Matrix10>(x.data());
  return CovarianceMatrix(0.5 * (v + v.transpose()));
}

double lyapunov_residual(const DriftMatrix& drift, const DiffusionMatrix& diffusion, const CovarianceMatrix& cov) {
  const Matrix10& a = drift.value;
  const Matrix10& v = cov.matrix();
  const Matrix10 d = diffusion.dense();
  return (a * v + v * a.transpose() + d).norm() / d.norm();
}

PointSolution solve_point(const EffectiveParams& p) {
  validate(p);
  PointSolution out;
  out.params = normalized(p);
  out.drift = build_drift(out.params);
  out.diffusion = build_diffusion(out.params);
  out.stability = stability(out.drift, out.params.omega_b);
  if (out.stability.stable) {
    out.covariance = steady_covariance(out.drift, out.diffusion);
  }
  return out;
}

}  // namespace omm
