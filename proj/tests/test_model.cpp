#include <cmath>
#include <numbers>

#include "doctest.h"
#include "omm/error.hpp"
#include "omm/model.hpp"
#include "oracles.hpp"

using namespace omm;

namespace {

MicroscopicParams undriven() {
  const EffectiveParams b = baseline_params();
  MicroscopicParams m;
  m.omega_b = b.omega_b;
  m.omega_m = b.omega_m;
  m.gamma_a = b.gamma_a;
  m.kappa_c1 = b.kappa_c1;
  m.kappa_c2 = b.kappa_c2;
  m.kappa_m = b.kappa_m;
  m.gamma_b = b.gamma_b;
  m.g_ac2 = b.g_ac2;
  m.theta = b.theta;
  m.T = b.T;
  m.delta_a = b.delta_a;
  m.delta_c0 = b.delta_c;
  m.delta_m0 = b.delta_m;
  m.eta_c = 0.0;
  m.Omega_m = 0.0;
  return m;
}

}  // namespace

TEST_SUITE("thermal_occupation") {
  TEST_CASE("zero temperature is the vacuum") {
    CHECK(thermal_occupation(kTwoPi * 40e6, 0.0) == 0.0);
    CHECK(thermal_occupation(kTwoPi * 10e9, 0.0) == 0.0);
  }

  TEST_CASE("phonon and magnon occupations at 10 mK") {
    // mpmath, 40 digits, CODATA hbar and k_B
    CHECK(thermal_occupation(kTwoPi * 40e6, 0.01) == doctest::Approx(4.725142443788449).epsilon(1e-12));
    CHECK(thermal_occupation(kTwoPi * 10e9, 0.01) == doctest::Approx(1.435992501216950e-21).epsilon(1e-9));
    CHECK(thermal_occupation(kTwoPi * 40e6, 1.0) == doctest::Approx(520.4156383771234).epsilon(1e-12));
    CHECK(thermal_occupation(kTwoPi * 10e9, 2.0) == doctest::Approx(3.687301508700263).epsilon(1e-12));
  }

  TEST_CASE("agrees with the long-double definition") {
    for (double nu : {1e5, 4e7, 1e9, 1e10}) {
      for (double t : {1e-3, 1e-2, 0.4, 5.0}) {
        CHECK(thermal_occupation(kTwoPi * nu, t) == doctest::Approx(oracle::bose_einstein(kTwoPi * nu, t)).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("increasing in T, decreasing in omega") {
    double prev_t = -1.0;
    for (int i = 0; i < 200; ++i) {
      const double t = 1e-3 * std::pow(10.0, 4.0 * i / 199.0);
      const double n = thermal_occupation(kTwoPi * 40e6, t);
      CHECK(n > prev_t);
      prev_t = n;
    }
    double prev_w = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
      const double w = kTwoPi * 1e6 * std::pow(10.0, 4.0 * i / 199.0);
      const double n = thermal_occupation(w, 0.5);
      CHECK(n < prev_w);
      prev_w = n;
    }
  }
}

TEST_SUITE("parameters") {
  TEST_CASE("baseline values in angular units") {
    const EffectiveParams p = baseline_params();
    CHECK(p.omega_b == doctest::Approx(kTwoPi * 40e6));
    CHECK(p.delta_a == p.omega_b);
    CHECK(p.delta_c == p.omega_b);
    CHECK(p.delta_m == -p.omega_b);
    CHECK(p.gamma_b == doctest::Approx(kTwoPi * 100.0));
    CHECK(p.G_c == doctest::Approx(kTwoPi * 10e6));
    CHECK(p.G_m == doctest::Approx(kTwoPi * 2e6));
    CHECK(p.theta == doctest::Approx(std::numbers::pi / 4));
    CHECK_NOTHROW(validate(p));
  }

  TEST_CASE("validation names the offending field") {
    EffectiveParams p = baseline_params();
    p.kappa_c2 = 0.0;
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("kappa_c2"), ConfigError);
    p = baseline_params();
    p.G_m = -1.0;
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("G_m"), ConfigError);
    p = baseline_params();
    p.T = std::nan("");
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = baseline_params();
    p.delta_m = -5e9;  // detunings may take any sign
    CHECK_NOTHROW(validate(p));
  }

  TEST_CASE("theta folds into [0, 2pi)") {
    CHECK(normalize_angle(kTwoPi) == 0.0);
    CHECK(normalize_angle(-std::numbers::pi / 2) == doctest::Approx(1.5 * std::numbers::pi));
    CHECK(normalize_angle(5 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(normalize_angle(-1e-300) < kTwoPi);
  }

  TEST_CASE("field table round-trips every member") {
    EffectiveParams p;
    double v = 1.0;
    for (const ParamField& f : effective_fields()) {
      p.*(f.member) = v;
      v += 1.0;
    }
    v = 1.0;
    for (const ParamField& f : effective_fields()) {
      CHECK(p.*(f.member) == v);
      v += 1.0;
    }
    CHECK(find_effective_field("theta") != nullptr);
    CHECK(find_effective_field("theta_hz") == nullptr);
  }
}

TEST_SUITE("drive_strengths") {
  TEST_CASE("zero drives") {
    MicroscopicParams m = undriven();
    m.eta_c.reset();
    m.Omega_m.reset();
    m.cavity_drive = CavityDriveInputs{0.0, kTwoPi * 193e12, std::nullopt};
    m.magnon_drive = MagnonDriveInputs{kTwoPi * 28e9, 1e17, 0.0};
    const DriveStrengths d = drive_strengths(m);
    CHECK(d.eta_c == 0.0);
    CHECK(d.Omega_m == 0.0);
  }

  TEST_CASE("formulas and square-root power scaling") {
    MicroscopicParams m = undriven();
    m.eta_c.reset();
    m.Omega_m.reset();
    m.cavity_drive = CavityDriveInputs{1e-3, kTwoPi * 193e12, std::nullopt};
    m.magnon_drive = MagnonDriveInputs{kTwoPi * 28e9, 4e16, 1e-6};
    const DriveStrengths d1 = drive_strengths(m);
    CHECK(d1.eta_c == doctest::Approx(std::sqrt(2.0 * 1e-3 * m.kappa_c1 / (kHbar * kTwoPi * 193e12))));
    CHECK(d1.Omega_m == doctest::Approx(std::sqrt(5.0) / 4.0 * kTwoPi * 28e9 * 2e8 * 1e-6));

    m.cavity_drive->power *= 2.0;
    CHECK(drive_strengths(m).eta_c == doctest::Approx(d1.eta_c * std::sqrt(2.0)).epsilon(1e-14));

    m.cavity_drive->kappa_port = m.kappa_c2;
    CHECK(drive_strengths(m).eta_c < d1.eta_c * std::sqrt(2.0));
  }

  TEST_CASE("direct values pass through") {
    MicroscopicParams m = undriven();
    m.eta_c = 123.0;
    m.Omega_m = 456.0;
    const DriveStrengths d = drive_strengths(m);
    CHECK(d.eta_c == 123.0);
    CHECK(d.Omega_m == 456.0);
  }

  TEST_CASE("missing or doubly specified inputs") {
    MicroscopicParams m = undriven();
    m.eta_c.reset();
    CHECK_THROWS_WITH_AS(drive_strengths(m), doctest::Contains("eta_c"), ConfigError);
    m = undriven();
    m.Omega_m.reset();
    CHECK_THROWS_WITH_AS(drive_strengths(m), doctest::Contains("Omega_m"), ConfigError);
    m = undriven();
    m.cavity_drive = CavityDriveInputs{1e-3, kTwoPi * 193e12, std::nullopt};
    CHECK_THROWS_AS(validate(m), ConfigError);
    m = undriven();
    m.magnon_drive = MagnonDriveInputs{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(validate(m), ConfigError);
  }
}

TEST_SUITE("steady_state") {
  TEST_CASE("undriven fixed point") {
    const SteadyState ss = steady_state(undriven());
    CHECK(std::abs(ss.c1) == 0.0);
    CHECK(std::abs(ss.c2) == 0.0);
    CHECK(std::abs(ss.m) == 0.0);
    CHECK(ss.q == 0.0);
  }

  TEST_CASE("resonant magnon drive equal to its decay gives unit amplitude") {
    MicroscopicParams m = undriven();
    m.Omega_m = m.kappa_m;
    m.delta_m0 = 0.0;
    const SteadyState ss = steady_state(m);
    CHECK(ss.m.real() == doctest::Approx(1.0));
    CHECK(ss.m.imag() == doctest::Approx(0.0));
  }

  TEST_CASE("decoupled atom limit of the vertical polarization") {
    using namespace std::complex_literals;
    MicroscopicParams m = undriven();
    m.g_ac2 = 0.0;
    m.eta_c = kTwoPi * 5e6;
    m.Omega_a = kTwoPi * 1e6;  // only enters through g_ac2
    const SteadyState ss = steady_state(m);
    const std::complex<double> expected = *m.eta_c * std::abs(std::sin(m.theta)) / (m.kappa_c2 + 1i * m.delta_c0);
    CHECK(std::abs(ss.c2 - expected) < 1e-14 * std::abs(expected));
  }

  TEST_CASE("printed c2 amplitude with the atom drive") {
    using namespace std::complex_literals;
    MicroscopicParams m = undriven();
    m.eta_c = kTwoPi * 5e6;
    m.Omega_a = kTwoPi * 0.5e6;
    const SteadyState ss = steady_state(m);
    const std::complex<double> atom = m.gamma_a + 1i * m.delta_a;
    const std::complex<double> expected =
        (*m.eta_c * std::abs(std::sin(m.theta)) * atom - 1i * m.g_ac2 * m.Omega_a) /
        (m.g_ac2 * m.g_ac2 + atom * (m.kappa_c2 + 1i * m.delta_c0));
    CHECK(std::abs(ss.c2 - expected) < 1e-13 * std::abs(expected));
  }

  TEST_CASE("amplitudes are linear in the drives without radiation pressure") {
    MicroscopicParams m = undriven();
    m.eta_c = kTwoPi * 2e6;
    m.Omega_m = kTwoPi * 3e6;
    m.Omega_a = kTwoPi * 0.1e6;
    const SteadyState s1 = steady_state(m);
    *m.eta_c *= 3.0;
    *m.Omega_m *= 3.0;
    m.Omega_a *= 3.0;
    const SteadyState s3 = steady_state(m);
    CHECK(std::abs(s3.c1 - 3.0 * s1.c1) < 1e-13 * std::abs(s3.c1));
    CHECK(std::abs(s3.c2 - 3.0 * s1.c2) < 1e-13 * std::abs(s3.c2));
    CHECK(std::abs(s3.m - 3.0 * s1.m) < 1e-13 * std::abs(s3.m));
  }

  TEST_CASE("self-consistent displacement") {
    MicroscopicParams m = undriven();
    m.g_c = kTwoPi * 100.0;
    m.g_m = kTwoPi * 100.0;
    m.eta_c = kTwoPi * 2e11;
    m.Omega_m = kTwoPi * 1.6e12;
    const SteadyState ss = steady_state(m);
    CHECK(ss.iterations > 1);
    // detuning shift large enough that the fixed point is not trivial
    CHECK(std::abs(m.g_m * ss.q) > 1e-3 * m.omega_b);
    const double optical = std::abs(ss.c1 * ss.c1 + ss.c2 * ss.c2);
    const double expected = (m.g_m * std::norm(ss.m) - m.g_c * optical) / m.omega_b;
    CHECK(ss.q == doctest::Approx(expected).epsilon(1e-9));
    CHECK(ss.delta_c == doctest::Approx(m.delta_c0 - m.g_c * ss.q));
    CHECK(ss.delta_m == doctest::Approx(m.delta_m0 - m.g_m * ss.q));
  }

  TEST_CASE("non-convergence reports the iteration trace") {
    MicroscopicParams m = undriven();
    m.g_c = kTwoPi * 100.0;
    m.g_m = kTwoPi * 100.0;
    m.eta_c = kTwoPi * 2e11;
    m.Omega_m = kTwoPi * 1.6e12;
    SteadyStateOptions opts;
    opts.max_iterations = 2;
    CHECK_THROWS_WITH_AS(steady_state(m, opts), doctest::Contains("last q_s values"), ConvergenceError);
  }
}

TEST_SUITE("effective_from_micro") {
  TEST_CASE("no radiation pressure leaves detunings and zero couplings") {
    MicroscopicParams m = undriven();
    m.eta_c = kTwoPi * 2e6;
    m.Omega_m = kTwoPi * 3e6;
    const EffectiveParams p = effective_from_micro(m);
    CHECK(p.delta_c == m.delta_c0);
    CHECK(p.delta_m == m.delta_m0);
    CHECK(p.G_c == 0.0);
    CHECK(p.G_m == 0.0);
  }

  TEST_CASE("couplings scale with the steady amplitudes") {
    MicroscopicParams m = undriven();
    m.g_c = kTwoPi * 100.0;
    m.g_m = kTwoPi * 100.0;
    m.eta_c = kTwoPi * 2e11;
    m.Omega_m = kTwoPi * 1.6e12;
    const SteadyState ss = steady_state(m);
    const EffectiveParams p = effective_from_micro(m);
    CHECK(p.G_c == doctest::Approx(std::sqrt(2.0) * m.g_c * std::abs(ss.c_total())));
    CHECK(p.G_m == doctest::Approx(std::sqrt(2.0) * m.g_m * std::abs(ss.m)));
    CHECK(p.delta_c == doctest::Approx(ss.delta_c));
    CHECK(p.delta_m == doctest::Approx(ss.delta_m));
  }

  TEST_CASE("copied fields are idempotent") {
    MicroscopicParams m = undriven();
    m.theta = 7.0;
    m.eta_c = kTwoPi * 2e6;
    m.Omega_m = kTwoPi * 3e6;
    const EffectiveParams p = effective_from_micro(m);
    CHECK(p.omega_b == m.omega_b);
    CHECK(p.omega_m == m.omega_m);
    CHECK(p.gamma_a == m.gamma_a);
    CHECK(p.kappa_c1 == m.kappa_c1);
    CHECK(p.kappa_c2 == m.kappa_c2);
    CHECK(p.kappa_m == m.kappa_m);
    CHECK(p.gamma_b == m.gamma_b);
    CHECK(p.g_ac2 == m.g_ac2);
    CHECK(p.T == m.T);
    CHECK(p.theta == doctest::Approx(7.0 - kTwoPi));

    MicroscopicParams again = m;
    again.theta = p.theta;
    CHECK(effective_from_micro(again) == p);
  }
}
