#include <cmath>
#include <functional>
#include <map>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "ssd/jobs.hpp"
#include "ssd/verify.hpp"

using namespace ssd;

namespace {

const Potential& preset_potential(const std::string& name) {
  static std::map<std::string, Potential> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, build_job(preset(name)).potential).first;
  return it->second;
}

const JostSolver& solver_for(const std::string& name) {
  static std::map<std::string, JostSolver> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const JobConfig job = preset(name);
    const Potential& u = preset_potential(name);
    it = cache.emplace(name, JostSolver(u, job_truncation(job, u))).first;
  }
  return it->second;
}

Potential free_potential() {
  Potential u;
  u.profile = ComplexProfile::constant(0.0);
  return u;
}

// Well of depth `depth` on (x1, x2) with tanh edges of width `w`.
cplx smooth_well_value(cplx depth, double x1, double x2, double w, double x) {
  return -0.5 * depth * (std::tanh((x - x1) / w) - std::tanh((x - x2) / w));
}

Potential smooth_well(cplx depth, double x1, double x2, double w) {
  Potential u;
  u.profile = ComplexProfile::from_function([=](double x) { return smooth_well_value(depth, x1, x2, w, x); });
  return u;
}

using Mat2 = Eigen::Matrix2cd;

// (A, B) of A e^{iqx} + B e^{-iqx} to (psi, psi') at x.
Mat2 plane_wave_map(cplx q, double x) {
  const cplx e = std::exp(kI * q * x), ei = 1.0 / e;
  Mat2 d;
  d << e, ei, kI * q * e, -kI * q * ei;
  return d;
}

// Exact transfer matrix of the midpoint staircase of U on [-L, L] with n slabs.
Mat2 staircase_transfer(const std::function<cplx(double)>& u, double L, int n, double k) {
  const double h = 2.0 * L / n;
  Mat2 m = Mat2::Identity();
  for (int i = 0; i < n; ++i) {
    const double a = -L + i * h, b = a + h;
    const cplx q = std::sqrt(k * k - u(a + 0.5 * h));
    m = plane_wave_map(k, b).inverse() * plane_wave_map(q, b) * plane_wave_map(q, a).inverse() * plane_wave_map(k, a) * m;
  }
  return m;
}

}  // namespace

// -- transfer matrix -----------------------------------------------------------------------

TEST(TransferMatrix, FreePotentialIsIdentity) {
  const Potential u = free_potential();
  for (double k : {-2.0, 0.3, 1.0, 5.0}) {
    const TransferMatrix m = transfer_matrix(u, k, make_truncation(u));
    EXPECT_LE(max_entry_difference(m, TransferMatrix{}), 1e-12) << k;
  }
}

TEST(TransferMatrix, SmoothWellMatchesStaircaseOracle) {
  for (cplx depth : {cplx(2.0), cplx(1.0, 0.5), cplx(-0.3, -0.4)}) {
    const Potential u = smooth_well(depth, -1.0, 1.5, 0.3);
    const auto f = [&](double x) { return smooth_well_value(depth, -1.0, 1.5, 0.3, x); };
    const JostSolver solver(u, make_truncation(u, 12.0), 1e-12);
    for (double k : {-1.7, 0.6, 1.0, 2.3}) {
      const TransferMatrix m = solver(k);
      const Mat2 coarse = staircase_transfer(f, 12.0, 20000, k), fine = staircase_transfer(f, 12.0, 40000, k);
      const Mat2 o = (4.0 * fine - coarse) / 3.0;
      const double err = std::max({std::abs(m.m11 - o(0, 0)), std::abs(m.m12 - o(0, 1)), std::abs(m.m21 - o(1, 0)),
                                   std::abs(m.m22 - o(1, 1))});
      EXPECT_LE(err, 1e-7) << depth << " k=" << k;
    }
  }
}

TEST(TransferMatrix, SelfDualVanishesAtBothSingularities) {
  const JostSolver& s = solver_for("fig1a");
  EXPECT_LE(std::abs(s(2.5).m22), 1e-5);
  EXPECT_LE(std::abs(s(-2.5).m22), 1e-5);
  EXPECT_GT(std::abs(s(1.5).m22), 1e-2);
}

TEST(TransferMatrix, AdmissibilityEnforced) {
  const Potential& u = preset_potential("fig5");
  const JostSolver solver(u, make_truncation(u, 5.0));
  EXPECT_THROW(solver(0.2), Error);
  EXPECT_NO_THROW(JostSolver(u, make_truncation(u, 200.0))(0.2));
  try {
    solver(0.2);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TailTooFat);
  }
}

// -- scattering coefficients ---------------------------------------------------------------

TEST(ScatteringCoefficients, IdentityIsTransparent) {
  const ScatteringCoefficients c = scattering_coefficients(TransferMatrix{});
  EXPECT_EQ(c.T, cplx(1.0));
  EXPECT_EQ(c.RL, cplx(0.0));
  EXPECT_EQ(c.RR, cplx(0.0));
}

TEST(ScatteringCoefficients, ExactZeroRejected) {
  TransferMatrix m;
  m.m22 = 0.0;
  try {
    scattering_coefficients(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExactZero);
  }
}

TEST(ScatteringCoefficients, PseudoHermitianReflectionsAgreeInModulus) {
  const JostSolver& s = solver_for("fig5");
  for (double k : {0.3, 0.8, 1.3}) {
    const auto c = scattering_coefficients(s(k));
    EXPECT_LE(std::abs(std::abs(c.RL) - std::abs(c.RR)), 1e-5 * (1.0 + std::abs(c.RL))) << k;
  }
}

TEST(ScatteringCoefficients, TransmissionPeaksNearSingularity) {
  const JostSolver& s = solver_for("fig2");
  EXPECT_GT(std::abs(scattering_coefficients(s(2.5 + 1e-4)).T), 1e3);
  EXPECT_GT(std::abs(scattering_coefficients(s(3.0 - 1e-4)).T), 1e3);
}

// -- scans ---------------------------------------------------------------------------------

namespace {
int count_peaks(const std::vector<SpectrumSample>& scan, double floor) {
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
    const double a = std::abs(scan[i - 1].coefficients.T), b = std::abs(scan[i].coefficients.T),
                 c = std::abs(scan[i + 1].coefficients.T);
    if (b > a && b >= c && b > floor) ++peaks;
  }
  return peaks;
}
}  // namespace

TEST(Scan, FreeIsFlat) {
  const Potential u = free_potential();
  const auto scan = scan_spectrum(u, -4.0, 4.0, 81, make_truncation(u));
  EXPECT_EQ(scan.size(), 80u);
  for (const auto& s : scan) EXPECT_NEAR(std::abs(s.coefficients.T), 1.0, 1e-12);
}

TEST(Scan, TwoPeaksForTwoSingularities) {
  const auto scan = scan_spectrum(solver_for("fig2"), 2.0, 3.5, 2001);
  EXPECT_EQ(count_peaks(scan, 1e2), 2);
}

TEST(Scan, ThreePeaksForThreeSingularities) {
  const auto scan = scan_spectrum(solver_for("fig7"), 0.5, 3.5, 601);
  EXPECT_EQ(count_peaks(scan, 1e2), 3);
}

// -- locating --------------------------------------------------------------------------------

TEST(Locate, FreeHasNone) {
  const Potential u = free_potential();
  EXPECT_TRUE(locate_singularities(u, -4.0, 4.0, make_truncation(u)).empty());
}

TEST(Locate, SelfDualPair) {
  const auto found = locate_singularities(solver_for("fig1a"), -4.0, 4.0);
  ASSERT_EQ(found.size(), 2u);
  EXPECT_NEAR(found[0].k0, -2.5, 1e-4);
  EXPECT_NEAR(found[1].k0, 2.5, 1e-4);
  EXPECT_EQ(found[0].character, SsCharacter::cpa);
  EXPECT_EQ(found[1].character, SsCharacter::lasing);
  for (const auto& f : found) EXPECT_EQ(f.order, 1);
}

TEST(Locate, PseudoHermitianThree) {
  const auto found = locate_singularities(solver_for("fig6"), -3.5, 3.5);
  ASSERT_EQ(found.size(), 3u);
  EXPECT_NEAR(found[0].k0, -0.5, 1e-3);
  EXPECT_NEAR(found[1].k0, 0.5, 1e-3);
  EXPECT_NEAR(found[2].k0, 2.5, 1e-3);
}

// -- order ------------------------------------------------------------------------------------

TEST(Order, SecondOrderSingularity) {
  EXPECT_EQ(ss_order(preset_potential("fig4"), 1.0, make_truncation(preset_potential("fig4"))), 2);
}

TEST(Order, PseudoHermitianMixedOrders) {
  const Potential& u = preset_potential("fig5");
  const TruncationSpec t = make_truncation(u, 200.0);
  EXPECT_EQ(ss_order(u, 0.5, t), 2);
  EXPECT_EQ(ss_order(u, -0.5, t), 1);
}

TEST(Order, SimpleZeroMatchesTwoPointSlope) {
  const JostSolver fine(preset_potential("fig2"), solver_for("fig2").truncation(), 1e-12);
  const double k0 = find_real_root([&](double k) { return fine(k).m22; }, {2.45, 2.55}, 1e-12);
  const double h = 1e-3;
  const double slope = std::log(std::abs(fine(k0 + 2 * h).m22) / std::abs(fine(k0 + h).m22)) / std::log(2.0);
  EXPECT_NEAR(slope, 1.0, 0.05);
  EXPECT_EQ(ss_order(fine, k0), 1);
}

// -- pseudo-Hermitian identity ----------------------------------------------------------------

TEST(PseudoHermitianIdentity, HoldsForRealBase) {
  EXPECT_LE(pseudo_hermitian_residual(solver_for("fig5"), 1.3, 0.5), 1e-4);
  for (double k : {0.9, 1.7, 3.1}) EXPECT_LE(pseudo_hermitian_residual(solver_for("fig6"), k, 2.5), 1e-4) << k;
}

TEST(PseudoHermitianIdentity, FailsForGenericPotential) {
  EXPECT_GT(pseudo_hermitian_residual(solver_for("fig2"), 1.3, 2.5), 1e-2);
}

TEST(PseudoHermitianIdentity, PoleAtK1Rejected) {
  try {
    pseudo_hermitian_residual(solver_for("fig5"), -0.5, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PoleAtK1);
  }
}

// -- properties --------------------------------------------------------------------------------

TEST(ScatterProperty, UnitDeterminantScaled) {
  for (const char* name : {"fig1a", "fig1d", "fig2", "fig3", "fig4", "fig7"}) {
    const JostSolver& s = solver_for(name);
    for (double k : {-3.3, -1.1, 0.7, 1.9, 3.7}) EXPECT_LE(scaled_det_residual(s(k)), 1e-6) << name << " " << k;
  }
}

TEST(ScatterProperty, DiagonalReflection) {
  for (const char* name : {"fig1a", "fig2", "fig3", "fig4", "fig7"}) {
    const JostSolver& s = solver_for(name);
    for (double k : {0.45, 1.1, 1.9, 2.7, 3.3}) {
      const TransferMatrix p = s(k), m = s(-k);
      EXPECT_LE(std::abs(p.m11 - m.m22) / (1.0 + std::abs(p.m11)), 1e-5) << name << " " << k;
    }
  }
}

TEST(ScatterProperty, TruncationIndependence) {
  for (const char* name : {"fig1a", "fig3"}) {
    const Potential& u = preset_potential(name);
    const JostSolver a(u, make_truncation(u, 20.0)), b(u, make_truncation(u, 40.0));
    for (double k : {-1.3, 0.8, 2.2}) EXPECT_LE(relative_entry_difference(a(k), b(k)), 1e-6) << name << " " << k;
  }
}

TEST(ScatterProperty, TransmissionIsInverseOfM22) {
  const JostSolver& s = solver_for("fig7");
  for (double k = 0.55; k < 3.5; k += 0.29) {
    const TransferMatrix m = s(k);
    EXPECT_NEAR(std::abs(scattering_coefficients(m).T) * std::abs(m.m22), 1.0, 1e-12);
  }
}
