#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace ptdiamond;
using ptd_test::small;

namespace {

DiagnosticsSeries synthetic(double period, double amp, double z_end, double dz,
                            double p_growth = 0.0) {
  DiagnosticsSeries s;
  for (double z = 0; z <= z_end + 1e-9; z += dz) {
    DiagnosticsPoint d;
    d.z = z;
    d.total_power = std::exp(p_growth * z);
    d.center_of_mass = amp * std::sin(kTwoPi * z / period);
    s.points.push_back(d);
  }
  return s;
}

}  // namespace

TEST(Intensity, ClsProfile) {
  const auto p = small(0.05, 0, 0, kPi);
  const auto prof = intensity(build_cls({}, p));
  EXPECT_EQ(prof.n_min, -5);
  EXPECT_NEAR(prof.rho[5], 2.0025, 1e-15);
  EXPECT_NEAR(prof.rho[6], 2.0, 0.0);
  double rest = 0;
  for (std::size_t i = 0; i < prof.rho.size(); ++i)
    if (i != 5 && i != 6) rest += prof.rho[i];
  EXPECT_EQ(rest, 0.0);
}

TEST(Intensity, ZeroAndGaussian) {
  const auto p = small(0.05, 0, 0, kPi / 2, -150, 150);
  for (double r : intensity(LatticeState::zeros(p)).rho) EXPECT_EQ(r, 0.0);
  const auto g = intensity(gaussian_initial(p, 70, 0));
  EXPECT_EQ(g.rho[150], 2.0);
  for (int i = 0; i < 150; ++i) EXPECT_EQ(g.rho[i], g.rho[300 - i]);
}

TEST(Intensity, RejectsNonFinite) {
  const auto p = small(0.05, 0, 0, kPi);
  auto s = LatticeState::zeros(p);
  s.b(2) = cplx(INFINITY, 0);
  EXPECT_THROW(intensity(s), ValidationError);
}

TEST(Diagnose, MomentsAndSplit) {
  const auto p = small(0, 0, 0, 0, -3, 3);
  auto s = LatticeState::zeros(p);
  s.a(-2) = 1.0;                 // rho = 1 at n = -2
  s.b(1) = cplx(0, 2.0);         // rho = 4 at n = 1
  s.c(0) = 1.0;                  // rho = 1 at n = 0
  const auto d = diagnose(s, {{1, Leg::b}, {9, Leg::a}});
  EXPECT_DOUBLE_EQ(d.total_power, 6.0);
  EXPECT_DOUBLE_EQ(d.center_of_mass, (-2.0 + 4.0) / 6.0);
  EXPECT_DOUBLE_EQ(d.asymmetry, (4.0 - 1.0) / 6.0);
  const double second = (4.0 + 4.0) / 6.0;
  EXPECT_NEAR(d.width, std::sqrt(second - d.center_of_mass * d.center_of_mass), 1e-15);
  EXPECT_DOUBLE_EQ(d.excited_power, 4.0);
  EXPECT_DOUBLE_EQ(d.complement_power, 2.0);
}

TEST(Diagnose, ZeroStateIsAllZero) {
  const auto d = diagnose(LatticeState::zeros(small(0, 0, 0, 0)), {});
  EXPECT_EQ(d.total_power, 0.0);
  EXPECT_EQ(d.center_of_mass, 0.0);
  EXPECT_EQ(d.width, 0.0);
}

TEST(Diagnose, ClsSupport) {
  const auto sites = cls_support(4);
  ASSERT_EQ(sites.size(), 5u);
  EXPECT_EQ(sites[3], std::make_pair(5, Leg::a));
  EXPECT_EQ(sites[4], std::make_pair(5, Leg::c));
}

TEST(Series, StationaryClsKeepsPowerOnItsSupport) {
  const auto p = small(0.05, 0, 0, kPi, -20, 20);
  const auto tr = evolve(build_cls({}, p), p, {20.0, 0.01, 100, 1e12});
  const auto s = series(tr, cls_support(0));
  const double p0 = s.points.front().total_power;
  for (const auto& d : s.points) {
    EXPECT_NEAR(d.excited_power, p0, 1e-10);
    EXPECT_LT(d.complement_power, 1e-20);
    EXPECT_NEAR(d.excited_power + d.complement_power, d.total_power, 1e-12);
  }
  EXPECT_THROW(series(Trajectory{}), ValidationError);
}

TEST(Series, InvariantsOnATiltedRun) {
  const auto p = small(0.05, 0.1, 0.01, kPi, -40, 40);
  const auto init = build_cls({ClsVariant::two_site_phipi_eperp}, small(0.05, 0, 0.01, kPi, -40, 40));
  const auto s = series(evolve(init, p, {100.0, 0.01, 20, 1e12}), cls_support(0));
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& d = s.points[i];
    EXPECT_GT(d.total_power, 0.0);
    EXPECT_LE(std::abs(d.asymmetry), 1.0);
    EXPECT_GE(d.width, 0.0);
    EXPECT_NEAR(d.excited_power + d.complement_power, d.total_power, 1e-12 * d.total_power);
    if (i > 0 && i + 1 < s.points.size()) {
      const double jump = std::abs(d.total_power - s.points[i - 1].total_power);
      const double next = std::abs(s.points[i + 1].total_power - d.total_power);
      EXPECT_LE(jump, 10 * next + 1e-6 * d.total_power);
    }
  }
  // Leakage off the CLS support.
  EXPECT_GT(s.points.back().complement_power, 1e-3);
}

// RK4 damps a Hermitian mode of frequency w by (h w)^6 / 72 per step, so power drifts
// monotonically down by at most steps * (h rho)^6 / 72.
TEST(Series, HermitianGaussianConservesPower) {
  const auto p = small(0, 0.05, 0, 0, -150, 150);
  const auto tr = evolve(gaussian_initial(p, 70, 0), p, {150.0, 0.01, 100, 1e12});
  const auto s = series(tr);
  const double p0 = s.points.front().total_power;
  const double rho = estimate_spectral_radius(real_space_operator(p));
  const double bound = tr.meta.steps * std::pow(0.01 * rho, 6) / 72.0;
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    EXPECT_LE(s.points[i].total_power, s.points[i - 1].total_power);
    EXPECT_GE(s.points[i].total_power, p0 * (1 - bound));
  }
}

TEST(Oscillation, SyntheticSine) {
  const auto m = oscillation_metrics(synthetic(40.0, 7.0, 400.0, 1.3));
  ASSERT_TRUE(m.period_z.has_value());
  EXPECT_NEAR(*m.period_z, 40.0, 0.05);
  EXPECT_NEAR(m.amplitude, 7.0, 0.05);
  EXPECT_TRUE(m.is_bounded);
  EXPECT_GE(m.peak_z.size(), 9u);
}

TEST(Oscillation, TooFewPeaksLeavesPeriodUndetermined) {
  const auto m = oscillation_metrics(synthetic(300.0, 1.0, 500.0, 1.0));
  EXPECT_FALSE(m.period_z.has_value());
  EXPECT_NEAR(m.amplitude, 1.0, 1e-3);
}

TEST(Oscillation, FlatSeries) {
  const auto m = oscillation_metrics(synthetic(10.0, 0.0, 100.0, 1.0));
  EXPECT_FALSE(m.period_z.has_value());
  EXPECT_EQ(m.amplitude, 0.0);
}

TEST(Oscillation, BoundFactor) {
  const auto grow = synthetic(40.0, 1.0, 100.0, 1.0, std::log(20.0) / 100.0);
  EXPECT_FALSE(oscillation_metrics(grow).is_bounded);
  EXPECT_TRUE(oscillation_metrics(grow, 25.0).is_bounded);
  const auto decay = synthetic(40.0, 1.0, 100.0, 1.0, -std::log(20.0) / 100.0);
  EXPECT_FALSE(oscillation_metrics(decay).is_bounded);
  EXPECT_THROW(oscillation_metrics(grow, 0.5), ValidationError);
  EXPECT_THROW(oscillation_metrics(DiagnosticsSeries{}), ValidationError);
}

TEST(Oscillation, BlowUpRunIsUnbounded) {
  const auto p = small(3.0, 0.1, 0, kPi, -20, 20);
  const auto tr = evolve(build_cls({}, small(3.0, 0, 0, kPi, -20, 20)), p, {200.0, 0.01, 100, 1e12});
  EXPECT_FALSE(oscillation_metrics(series(tr)).is_bounded);
}

TEST(Spectrum, CountSortAndHermitianLimit) {
  const auto rep = finite_spectrum(small(0, 0.1, 0.05, 1.0, -10, 10));
  EXPECT_EQ(rep.eigenvalues.size(), 63u);
  EXPECT_EQ(rep.complex_count, 0);
  EXPECT_TRUE(rep.complex_indices.empty());
  EXPECT_EQ(rep.convention, std::string(kLambdaConvention));
  for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i)
    EXPECT_LE(rep.eigenvalues[i - 1].real(), rep.eigenvalues[i].real());
}

TEST(Spectrum, EigenvaluesAreThoseOfMinusH) {
  const auto p = small(0, 0, 0, 0, 0, 0);
  const auto rep = finite_spectrum(p);
  ASSERT_EQ(rep.eigenvalues.size(), 3u);
  // Single Hermitian cell: eigenvalues of -H are {-sqrt2, 0, sqrt2}.
  EXPECT_NEAR(rep.eigenvalues[0].real(), -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(rep.eigenvalues[2].real(), std::sqrt(2.0), 1e-14);
  // Gain on leg a alone: the eigenvalue of -H for an isolated amplifying site is -i gamma.
  auto q = small(0.7, 0, 0, 0, 0, 0);
  const auto h = real_space_operator(q).dense();
  EXPECT_EQ(h(0, 0), cplx(0, 0.7));
}

TEST(Spectrum, ConjugatePairingWithoutTransverseField) {
  const auto rep = finite_spectrum(small(0.05, 0, 0, kPi, -25, 25));
  EXPECT_EQ(rep.eigenvalues.size(), 153u);
  EXPECT_LT(conjugate_pairing_residual(rep.eigenvalues), 1e-9);
  const auto broken = finite_spectrum(small(0.05, 0, 0.05, kPi, -25, 25));
  EXPECT_GT(conjugate_pairing_residual(broken.eigenvalues), 1e-4);
}

TEST(Spectrum, SizeLimit) {
  EXPECT_THROW(finite_spectrum(small(0.05, 0, 0, kPi, 0, 2000)), ValidationError);
}

TEST(Spectrum, GrowthRateMatchesEvolution) {
  std::mt19937_64 rng(31);
  const auto p = small(0.5, 0, 0.05, kPi);
  const auto rate = power_growth_rate(finite_spectrum(p));
  ASSERT_GT(rate, 0.0);
  const auto init = ptd_test::random_state(p, rng);
  const auto s1 = evolve_oracle(init, p, 150.0);
  const auto s2 = evolve_oracle(s1, p, 150.0);
  const double measured = std::log(s2.amps.squaredNorm() / s1.amps.squaredNorm()) / 150.0;
  EXPECT_NEAR(measured, rate, 0.1 * rate);
}
