#include "omm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omm/error.hpp"

namespace omm {

// ---------------------------------------------------------------- ModeSet

ModeSet::ModeSet(std::initializer_list<Mode> modes) : ModeSet(std::vector<Mode>(modes)) {}

ModeSet::ModeSet(std::vector<Mode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) {
    throw ConfigError("mode set must not be empty");
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    for (std::size_t j = i + 1; j < modes_.size(); ++j) {
      if (modes_[i] == modes_[j]) {
        throw ConfigError("duplicate mode '" + std::string(mode_label(modes_[i])) + "' in mode set");
      }
    }
  }
}

ModeSet ModeSet::parse(std::string_view labels) {
  std::vector<Mode> modes;
  std::size_t pos = 0;
  while (pos < labels.size()) {
    const std::size_t len = (labels[pos] == 'c' && pos + 1 < labels.size()) ? 2 : 1;
    const auto mode = parse_mode(labels.substr(pos, len));
    if (!mode) {
      throw ConfigError("unknown mode label '" + std::string(labels.substr(pos, len)) + "' in '" +
                        std::string(labels) + "'");
    }
    modes.push_back(*mode);
    pos += len;
  }
  return ModeSet(std::move(modes));
}

bool ModeSet::contains(Mode mode) const { return std::find(modes_.begin(), modes_.end(), mode) != modes_.end(); }

bool ModeSet::disjoint(const ModeSet& other) const {
  return std::none_of(modes_.begin(), modes_.end(), [&](Mode m) { return other.contains(m); });
}

ModeSet ModeSet::united(const ModeSet& other) const {
  std::vector<Mode> all = modes_;
  for (Mode m : other.modes_) {
    if (!contains(m)) all.push_back(m);
  }
  return ModeSet(std::move(all));
}

std::string ModeSet::label() const {
  std::string out;
  for (Mode m : modes_) out += mode_label(m);
  return out;
}

// ---------------------------------------------------------- CM primitives

Eigen::MatrixXd reduce(const CovarianceMatrix& cov, const ModeSet& modes) {
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (Mode m : modes.modes()) {
    idx.push_back(quadrature_offset(m));
    idx.push_back(quadrature_offset(m) + 1);
  }
  const int n = static_cast<int>(idx.size());
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out(i, j) = cov(idx[i], idx[j]);
    }
  }
  return out;
}

Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& v, std::initializer_list<int> local_modes) {
  return partial_transpose(v, std::vector<int>(local_modes));
}

Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& v, const std::vector<int>& local_modes) {
  Eigen::MatrixXd out = v;
  for (int mode : local_modes) {
    const int row = 2 * mode + 1;
    if (mode < 0 || row >= v.rows()) {
      throw ConfigError("partial transpose mode index out of range");
    }
    out.row(row) *= -1.0;
    out.col(row) *= -1.0;
  }
  return out;
}

std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0 || v.rows() == 0) {
    throw NumericalError("symplectic spectrum needs a square matrix of even dimension");
  }
  const int n = static_cast<int>(v.rows()) / 2;
  Eigen::MatrixXd omega_v(2 * n, 2 * n);
  // Omega = (+) [[0, 1], [-1, 0]]: row 2k of Omega V is row 2k+1 of V, row 2k+1 is -row 2k.
  for (int k = 0; k < n; ++k) {
    omega_v.row(2 * k) = v.row(2 * k + 1);
    omega_v.row(2 * k + 1) = -v.row(2 * k);
  }
  const Eigen::MatrixXd m = -(omega_v * omega_v);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue iteration failed in symplectic spectrum");
  }
  const Eigen::VectorXcd ev = solver.eigenvalues();
  const double scale = std::max(1.0, v.squaredNorm());
  std::vector<double> squares(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).imag()) > 1e-8 * scale) {
      std::ostringstream msg;
      msg << "symplectic spectrum: imaginary residue " << ev(i).imag() << " exceeds tolerance";
      throw NumericalError(msg.str());
    }
    squares[i] = ev(i).real();
  }
  std::sort(squares.begin(), squares.end());

  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    const double pair = 0.5 * (squares[2 * k] + squares[2 * k + 1]);
    out[k] = std::sqrt(std::max(0.0, pair));
  }
  return out;
}

namespace {

double negativity_from_min(double nu_min) { return std::max(0.0, -std::log(2.0 * nu_min)); }

double min_symplectic(const Eigen::MatrixXd& v) { return symplectic_spectrum(v).front(); }

}  // namespace

double log_negativity(const CovarianceMatrix& cov, Mode first, Mode second) {
  if (first == second) {
    throw ConfigError("log negativity needs two distinct modes");
  }
  const Eigen::MatrixXd v = partial_transpose(reduce(cov, {first, second}), {1});
  return negativity_from_min(min_symplectic(v));
}

double residual_contangle(const CovarianceMatrix& cov, Mode focus, Mode j, Mode k) {
  const Eigen::MatrixXd v = partial_transpose(reduce(cov, {focus, j, k}), {0});
  const double one_vs_two = std::pow(negativity_from_min(min_symplectic(v)), 2);
  const double with_j = std::pow(log_negativity(cov, focus, j), 2);
  const double with_k = std::pow(log_negativity(cov, focus, k), 2);
  return one_vs_two - with_j - with_k;
}

double residual_contangle_min(const CovarianceMatrix& cov, const ModeSet& triple) {
  if (triple.size() != 3) {
    throw ConfigError("residual contangle needs exactly three modes");
  }
  const auto& t = triple.modes();
  const double r = std::min({residual_contangle(cov, t[0], t[1], t[2]), residual_contangle(cov, t[1], t[0], t[2]),
                             residual_contangle(cov, t[2], t[0], t[1])});
  return std::max(0.0, r);
}

// --------------------------------------------------------------- steering

std::optional<SteeringForm> parse_steering_form(std::string_view text) {
  if (text == "det") return SteeringForm::determinant;
  if (text == "symplectic") return SteeringForm::symplectic;
  return std::nullopt;
}

std::string_view steering_form_label(SteeringForm form) {
  return form == SteeringForm::determinant ? "det" : "symplectic";
}

double steering(const CovarianceMatrix& cov, const ModeSet& steering_party, const ModeSet& steered_party,
                SteeringForm form) {
  if (!steering_party.disjoint(steered_party)) {
    throw ConfigError("steering parties " + steering_party.label() + " and " + steered_party.label() +
                      " overlap");
  }
  const Eigen::MatrixXd v_a = reduce(cov, steering_party);
  const Eigen::MatrixXd v_ab = reduce(cov, steering_party.united(steered_party));
  const int n_a = 2 * steering_party.size();
  const int n_b = steered_party.size();

  if (form == SteeringForm::determinant) {
    const double det_a = v_a.determinant();
    const double det_ab = v_ab.determinant();
    if (!(det_a > 0.0) || !(det_ab > 0.0)) {
      throw NumericalError("non-positive covariance determinant in steering of " + steered_party.label() + " by " +
                           steering_party.label());
    }
    const double ratio = det_a / (std::pow(4.0, n_b) * det_ab);
    return std::max(0.0, 0.5 * std::log(ratio));
  }

  // Schur complement of V_A in V_AB.
  const Eigen::MatrixXd c = v_ab.topRightCorner(n_a, 2 * n_b);
  const Eigen::MatrixXd v_b = v_ab.bottomRightCorner(2 * n_b, 2 * n_b);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(v_a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericalError("steering party covariance block is not positive definite");
  }
  Eigen::MatrixXd schur = v_b - c.transpose() * ldlt.solve(c);
  schur = 0.5 * (schur + schur.transpose());
  double total = 0.0;
  for (double nu : symplectic_spectrum(schur)) {
    total += std::max(0.0, -std::log(2.0 * nu));
  }
  return total;
}

double collective_steering(const CovarianceMatrix& cov, Mode steered, SteeringForm form, double eps) {
  std::vector<Mode> pool;
  for (Mode m : kAllModes) {
    if (m != steered) pool.push_back(m);
  }
  const ModeSet target{steered};
  for (std::size_t skip = 0; skip < pool.size(); ++skip) {
    std::vector<Mode> subset;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i != skip) subset.push_back(pool[i]);
    }
    if (steering(cov, ModeSet(std::move(subset)), target, form) > eps) {
      return 0.0;
    }
  }
  return steering(cov, ModeSet(pool), target, form);
}

// ---------------------------------------------------------- measure table

namespace {

std::vector<MeasureDef> make_default_measures() {
  std::vector<MeasureDef> out;
  auto ent = [&](std::string name, Mode x, Mode y) {
    out.push_back({std::move(name), MeasureKind::log_negativity, ModeSet{x}, ModeSet{y}});
  };
  auto tri = [&](std::string name, std::string_view triple) {
    const ModeSet t = ModeSet::parse(triple);
    out.push_back({std::move(name), MeasureKind::residual_contangle, t, t});
  };
  auto steer = [&](std::string_view from, std::string_view to) {
    out.push_back({"S_" + std::string(from) + "_to_" + std::string(to), MeasureKind::steering, ModeSet::parse(from),
                   ModeSet::parse(to)});
  };

  ent("E_am", Mode::a, Mode::m);
  ent("E_c1m", Mode::c1, Mode::m);
  ent("E_c2m", Mode::c2, Mode::m);
  tri("R_ac2m", "ac2m");
  tri("R_ac1m", "ac1m");
  tri("R_c1c2m", "c1c2m");
  for (std::string_view x : {"a", "c1", "c2", "b"}) steer("m", x);
  for (std::string_view x : {"a", "c1", "c2", "b"}) steer(x, "m");
  steer("c1", "mb");
  steer("mb", "c1");
  steer("c2", "mb");
  steer("mb", "c2");
  steer("mb", "c1c2");
  steer("c1c2", "mb");
  steer("am", "c1c2");
  steer("c1c2", "am");
  out.push_back({"Sc_ac1c2b_to_m", MeasureKind::collective_steering, ModeSet::parse("ac1c2b"), ModeSet{Mode::m}});
  return out;
}

}  // namespace

const std::vector<MeasureDef>& default_measures() {
  static const std::vector<MeasureDef> table = make_default_measures();
  return table;
}

const MeasureDef* find_measure(std::string_view name) {
  const auto& table = default_measures();
  auto it = std::find_if(table.begin(), table.end(), [&](const MeasureDef& d) { return d.name == name; });
  return it == table.end() ? nullptr : &*it;
}

double evaluate(const MeasureDef& def, const CovarianceMatrix& cov, SteeringForm form) {
  switch (def.kind) {
    case MeasureKind::log_negativity:
      return log_negativity(cov, def.first.modes().front(), def.second.modes().front());
    case MeasureKind::residual_contangle:
      return residual_contangle_min(cov, def.first);
    case MeasureKind::steering:
      return steering(cov, def.first, def.second, form);
    case MeasureKind::collective_steering:
      return collective_steering(cov, def.second.modes().front(), form);
  }
  return kSentinel;
}

double MeasureReport::at(std::string_view name) const {
  const auto& table = default_measures();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].name == name) return values.at(i);
  }
  throw ConfigError("unknown measure '" + std::string(name) + "'");
}

MeasureReport full_report(const std::optional<CovarianceMatrix>& cov, const StabilityReport& stability,
                          const MeasureOptions& options) {
  MeasureReport report;
  report.stability = stability;
  const auto& table = default_measures();
  report.values.assign(table.size(), kSentinel);
  if (!stability.stable || !cov) {
    return report;
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    report.values[i] = evaluate(table[i], *cov, options.steering_form);
  }
  return report;
}

}  // namespace omm
