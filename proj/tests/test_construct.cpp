#include <cmath>

#include <gtest/gtest.h>

#include "ssd/construct.hpp"
#include "ssd/verify.hpp"

using namespace ssd;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ssd::Error thrown";
  return ErrorCode::InvalidArgument;
}

// U from w at x: -w^2 - i w' + k^2 with w' by central difference.
cplx u_by_hand(const BaseFunction& w, double x) {
  const double h = 1e-6;
  const cplx v = w(x), d = (w(x + h) - w(x - h)) / (2 * h);
  return -v * v - kI * d + w.k * w.k;
}

double sech_of(double x) { return 1.0 / std::cosh(x); }

// Term-by-term closed form of the self-dual tanh/sech potential for real x.
cplx selfdual_closed_form(double k1, cplx a0, cplx a1, double x) {
  const cplx y = x - a1;
  const double t = std::tanh(x), s = sech_of(x), sh = std::sinh(x);
  const cplx ty = std::tanh(y), sy = 1.0 / std::cosh(y);
  const double kk = k1 * k1;
  const cplx chi = 2.0 * k1 * t + kI * a0 * sy;
  const cplx num = kk * (3.0 * std::pow(s, 4) + 4.0 * std::pow(s, 4) * sh * sh - 4.0 * kk * std::pow(s, 4) * std::pow(sh, 4)) +
                   kI * a0 * k1 * sy * (2.0 * t * sy * sy - 3.0 * ty * s * s - t * (8.0 * kk * t * t + 1.0 - 2.0 * s * s)) -
                   a0 * a0 / 4.0 * sy * sy * (1.0 + sy * sy - 24.0 * kk * t * t) +
                   2.0 * kI * a0 * a0 * a0 * k1 * t * sy * sy * sy - std::pow(a0, 4) / 4.0 * std::pow(sy, 4);
  return kk + num / (chi * chi);
}

const Potential& fig1a() {
  static const Potential u = selfdual_potential_from_chi(tanh_sech_chi(2.5, -2.5, 2.0, 0.0), 2.5);
  return u;
}
const Potential& fig3() {
  static const Potential u = potential_from_chi(singular_node_chi(0.5, 3.0), 0.5, 3.0);
  return u;
}
const Potential& fig5() {
  static const Potential u = pseudo_hermitian_potential(1.0, 0.5, -0.5);
  return u;
}

}  // namespace

// -- potential_from_base ----------------------------------------------------------

TEST(PotentialFromBase, TanhBase) {
  const auto p = make_analytic_profile([](const Jet<cplx>& x) { return -1.0 * tanh(x); });
  BaseFunction w{p, 1.0};
  w.profile.with_asymptotes(1.0, -1.0);
  const Potential u = potential_from_base(w);
  for (double x : {-3.0, -0.4, 0.0, 1.2, 5.0}) {
    const cplx expected = cplx(1.0, 1.0) * sech_of(x) * sech_of(x);
    EXPECT_LE(std::abs(u(x) - expected), 1e-13) << x;
  }
}

TEST(PotentialFromBase, SecondOrderBaseAtOrigin) {
  const BaseFunction w = second_order_base(1.0);
  const Potential u = potential_from_base(w);
  const cplx expected = 2.0 * std::pow(cplx(1.0, 0.5), 2) + 0.25;  // 1.75 + 2i
  EXPECT_LE(std::abs(u(0.0) - cplx(1.75, 2.0)), 1e-12);
  EXPECT_LE(std::abs(u(0.0) - expected), 1e-12);
  EXPECT_LE(std::abs(u_by_hand(w, 0.0) - expected), 1e-8);
}

TEST(PotentialFromBase, WrongAsymptoteRejected) {
  BaseFunction w{ComplexProfile::constant(1.0), 1.0};
  EXPECT_EQ(code_of([&] { potential_from_base(w); }), ErrorCode::AsymptoteMismatch);
}

TEST(PotentialFromBase, NonCancellingPoleRejected) {
  auto p = make_analytic_profile([](const Jet<cplx>& x) { return -1.0 * tanh(x) + 2.0 * kI / x; });
  p.with_asymptotes(1.0, -1.0).with_singular_points({{0.0, 2.0 * kI}});
  EXPECT_EQ(code_of([&] { potential_from_base({p, 1.0}); }), ErrorCode::NonCancellation);
}

// -- tanh_sech_chi / self-dual / closed form ------------------------------------------

TEST(TanhSechChi, ValueAtOrigin) {
  const cplx a0(1.0, 0.5), a1(0.3, -0.2);
  const auto chi = tanh_sech_chi(2.5, 3.0, a0, a1);
  EXPECT_LE(std::abs(chi(0.0) - kI * a0 / std::cosh(-a1)), 1e-14);
}

TEST(TanhSechChi, AntiPtForRealAmplitude) {
  const auto chi = tanh_sech_chi(2.5, -2.5, 2.0, 0.0);
  for (double x : {-4.0, -1.3, 0.2, 0.9, 6.0}) EXPECT_LE(std::abs(chi(x) + std::conj(chi(-x))), 1e-14);
}

TEST(TanhSechChi, ZeroAmplitudeRejected) {
  EXPECT_EQ(code_of([] { tanh_sech_chi(2.5, 3.0, 0.0, 0.0); }), ErrorCode::ZeroAmplitude);
}

TEST(SelfDual, ValueAtOrigin) {
  EXPECT_LE(std::abs(fig1a()(0.0) - 3.0625), 1e-12);
  EXPECT_LE(std::abs(selfdual_closed_form(2.5, 2.0, 0.0, 0.0) - 3.0625), 1e-12);
}

TEST(SelfDual, AntiPtChiGivesPtPotential) {
  EXPECT_LE(pt_symmetry_residual(fig1a(), RealGrid(-10, 10, 2001)), 1e-10);
}

TEST(ClosedForm, MatchesTermByTermOracle) {
  for (auto [a0, a1] : {std::pair<cplx, cplx>{2.0, 0.0}, {{2.0, 1.0}, {1.0, -1.0}}}) {
    const Potential u = closed_form_two_ss_potential(2.5, a0, a1);
    for (double x : {-6.0, -1.1, 0.0, 0.37, 2.0, 8.0})
      EXPECT_LE(std::abs(u(x) - selfdual_closed_form(2.5, a0, a1, x)), 1e-10 * (1.0 + std::abs(u(x)))) << x;
  }
}

TEST(ClosedForm, AgreesWithChiRoute) {
  for (auto [a0, a1] : {std::pair<cplx, cplx>{2.0, 0.0}, {{2.0, 1.0}, {1.0, -1.0}}}) {
    const Potential closed = closed_form_two_ss_potential(2.5, a0, a1);
    const Potential route = selfdual_potential_from_chi(tanh_sech_chi(2.5, -2.5, a0, a1), 2.5);
    double worst = 0.0;
    for (double x : RealGrid(-10, 10, 2001).points_avoiding(route.tender_points, kExclusionRadius))
      worst = std::max(worst, std::abs(closed(x) - route(x)));
    EXPECT_LE(worst, 1e-10);
  }
}

TEST(ClosedForm, DecaysAtInfinity) {
  const Potential u = closed_form_two_ss_potential(2.5, 2.0, 0.0);
  EXPECT_LT(std::abs(u(30.0)), 1e-9);
  EXPECT_LT(std::abs(u(-30.0)), 1e-9);
}

TEST(ClosedForm, AsymmetricParametersBreakPt) {
  const Potential u = closed_form_two_ss_potential(2.5, {2.0, 1.0}, {1.0, -1.0});
  EXPECT_GT(pt_symmetry_residual(u, RealGrid(-10, 10, 401)), 1e-2);
}

// -- base_pair_from_chi ----------------------------------------------------------------

TEST(BasePair, AsymptotesFollowWavenumbers) {
  for (auto [k1, k2] : {std::pair{2.5, 3.0}, {1.0, -2.0}, {-0.7, 0.4}}) {
    auto [w1, w2] = base_pair_from_chi(tanh_sech_chi(k1, k2, 1.0, 0.0), k1, k2);
    EXPECT_LE(std::abs(w1(-25.0) - k1), 1e-9);
    EXPECT_LE(std::abs(w1(25.0) + k1), 1e-9);
    EXPECT_LE(std::abs(w2(-25.0) - k2), 1e-9);
    EXPECT_LE(std::abs(w2(25.0) + k2), 1e-9);
  }
}

TEST(BasePair, TwoSsBasesGenerateOnePotential) {
  auto [w1, w2] = base_pair_from_chi(tanh_sech_chi(2.5, 3.0, 1.0, 0.0), 2.5, 3.0);
  EXPECT_LE(cross_base_consistency({w1, w2}, RealGrid(-10, 10, 2001)), 1e-9);
  for (double x : {-2.0, 0.0, 1.5}) EXPECT_LE(std::abs(u_by_hand(w1, x) - u_by_hand(w2, x)), 1e-7);
}

TEST(BasePair, SingularNodeGoesToSecondBase) {
  const auto& u = fig3();
  const BaseFunction& w1 = u.provenance[0];
  const BaseFunction& w2 = u.provenance[1];
  EXPECT_TRUE(w1.profile.singular_points().empty());
  for (double x : RealGrid(-1, 1, 201).points()) EXPECT_TRUE(is_finite(w1(x)));
  ASSERT_EQ(w2.profile.singular_points().size(), 1u);
  EXPECT_EQ(w2.profile.singular_points()[0].x, 0.0);
  const double x = 1e-4;
  EXPECT_LE(std::abs(w2(x) * x - kI), 1e-3);
  EXPECT_TRUE(is_finite(u(0.0)));
}

TEST(BasePair, NegativePoleSwapsNode) {
  auto chi = make_analytic_profile([](const Jet<cplx>& x) { return -2.5 * tanh(x) - kI * sech(x) / x; });
  chi.with_asymptotes(2.5, -2.5).with_decay(DecayClass::exponential()).with_singular_points({{0.0, -kI}});
  auto [w1, w2] = base_pair_from_chi(chi, 0.5, 3.0);
  ASSERT_EQ(w1.profile.singular_points().size(), 1u);
  EXPECT_EQ(w1.profile.singular_points()[0].coefficient, kI);
  EXPECT_TRUE(w2.profile.singular_points().empty());
}

TEST(BasePair, BadAsymptotesRejected) {
  EXPECT_EQ(code_of([] { base_pair_from_chi(tanh_sech_chi(2.5, 3.0, 1.0, 0.0), 3.0, 2.5); }),
            ErrorCode::AsymptoteMismatch);
}

TEST(BasePair, NonRemovableZeroRejected) {
  // chi = -0.5 tanh x - sech x crosses zero with a real slope.
  EXPECT_EQ(code_of([] { base_pair_from_chi(tanh_sech_chi(2.5, 3.0, {0.0, 1.0}, 0.0), 2.5, 3.0); }), ErrorCode::BadZero);
}

TEST(BasePair, WrongPoleCoefficientRejected) {
  auto chi = make_analytic_profile([](const Jet<cplx>& x) { return -2.5 * tanh(x) + 2.0 * kI * sech(x) / x; });
  chi.with_asymptotes(2.5, -2.5).with_singular_points({{0.0, 2.0 * kI}});
  EXPECT_EQ(code_of([&] { base_pair_from_chi(chi, 0.5, 3.0); }), ErrorCode::BadSingularity);
}

// Property: the representation identity w_{j+1}^2 + i w_{j+1}' - k_{j+1}^2 = w_j^2 + i w_j' - k_j^2.
TEST(BasePairProperty, RepresentationIdentity) {
  const std::vector<std::tuple<double, double, cplx, cplx>> cases = {
      {2.5, 3.0, 1.0, 0.0}, {1.0, -2.0, {0.5, 0.5}, 0.4}, {-1.5, 0.5, 2.0, {0.0, 0.2}}, {0.3, 1.7, {1.0, -0.3}, -0.5}};
  for (auto [k1, k2, a0, a1] : cases) {
    auto [w1, w2] = base_pair_from_chi(tanh_sech_chi(k1, k2, a0, a1), k1, k2);
    double worst = 0.0, scale = 1.0;
    for (double x : RealGrid(-8, 8, 321).points()) {
      const Jet<cplx> j1 = w1.profile.taylor(x, 1), j2 = w2.profile.taylor(x, 1);
      const cplx l = j2.c[0] * j2.c[0] + kI * j2.c[1] - k2 * k2;
      const cplx r = j1.c[0] * j1.c[0] + kI * j1.c[1] - k1 * k1;
      worst = std::max(worst, std::abs(l - r));
      scale = std::max(scale, std::abs(r));
    }
    EXPECT_LE(worst / scale, 1e-9) << k1 << " " << k2;
  }
}

// Property: anti-PT chi implies a PT-symmetric potential.
TEST(BasePairProperty, AntiPtImpliesPt) {
  for (double k1 : {0.8, 1.5, 2.5}) {
    for (double a0 : {0.5, 1.0, 3.0}) {
      const Potential u = selfdual_potential_from_chi(tanh_sech_chi(k1, -k1, a0, 0.0), k1);
      EXPECT_LE(pt_symmetry_residual(u, RealGrid(-10, 10, 801)), 1e-10) << k1 << " " << a0;
    }
  }
}

// -- SS solutions --------------------------------------------------------------------------

TEST(SsSolution, RealBaseHasConstantAmplitude) {
  const BaseFunction& w1 = fig5().provenance[0];
  const WaveFunction psi = ss_solution(w1, 1.0, {2.0, 0.0});
  for (double x : {-30.0, -4.0, -0.5, 0.3, 1.0, 7.0, 29.0}) EXPECT_NEAR(std::abs(psi(x)), 2.0, 1e-8) << x;
}

TEST(SsSolution, NodeAtSingularPoint) {
  const BaseFunction& w2 = fig3().provenance[1];
  WaveFunction psi = ss_solution(w2, 1.0, 1.0);
  psi.normalize_asymptotic();
  EXPECT_EQ(psi(0.0), cplx(0.0));
  // Continuous through the node: psi(+d) ~ -psi(-d) ~ d psi'(0).
  for (double d : {1e-2, 1e-3}) {
    EXPECT_LE(std::abs(psi(d) + psi(-d)), 10.0 * d * d);
    EXPECT_GT(std::abs(psi(d)), 0.1 * d);
  }
}

TEST(SsSolution, Fig3SecondSolutionNormalized) {
  const BaseFunction& w2 = fig3().provenance[1];
  WaveFunction psi = ss_solution(w2, 2.0, {0.3, 0.7});
  psi.normalize_asymptotic();
  EXPECT_NEAR(std::abs(psi.rho_minus()), std::abs(psi(-30.0)), 1e-9);
  EXPECT_NEAR(std::sqrt(std::abs(psi.rho_minus()) * std::abs(psi.rho_plus())), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(psi(-25.0)), 1.0, 1e-6);
  EXPECT_NEAR(std::abs(psi(25.0)), 1.0, 1e-6);
  ASSERT_EQ(psi.node_points().size(), 1u);
}

TEST(SsSolution, FirstFig3SolutionIsZeroFree) {
  const BaseFunction& w1 = fig3().provenance[0];
  const WaveFunction psi = ss_solution(w1, 0.0, 1.0);
  EXPECT_TRUE(psi.node_points().empty());
  double smallest = HUGE_VAL;
  for (double x : RealGrid(-10, 10, 2001).points()) smallest = std::min(smallest, std::abs(psi(x)));
  EXPECT_GT(smallest, 1e-2);
}

TEST(SsSolution, SolvesSchrodingerEquation) {
  const BaseFunction w = second_order_base(1.0);
  const Potential u = second_order_potential(1.0);
  const WaveFunction psi = ss_solution(w, 0.0, 1.0);
  for (double x : {-3.0, -0.2, 0.0, 1.7}) {
    const double h = 1e-3;
    const cplx d2 = (psi(x + h) - 2.0 * psi(x) + psi(x - h)) / (h * h);
    EXPECT_LE(std::abs(-d2 + (u(x) - 1.0) * psi(x)), 1e-5) << x;
  }
}

TEST(SsSolution, ZeroAmplitudeRejected) {
  EXPECT_THROW(ss_solution(second_order_base(1.0), 0.0, 0.0), Error);
}

// -- second order and collision ------------------------------------------------------------

TEST(SecondOrder, BaseValues) {
  const BaseFunction w = second_order_base(1.0);
  EXPECT_LE(std::abs(w(0.0) - cplx(-0.5, 1.0)), 1e-15);
  EXPECT_LE(std::abs(w(-40.0) - 1.0), 1e-12);
  EXPECT_LE(std::abs(w(40.0) + 1.0), 1e-12);
}

TEST(SecondOrder, ClosedFormPotential) {
  const Potential u = second_order_potential(1.0);
  EXPECT_LE(std::abs(u(0.0) - cplx(1.75, 2.0)), 1e-14);
  const Potential via = potential_from_base(second_order_base(1.0));
  for (double x : RealGrid(-10, 10, 401).points()) {
    // Independent arithmetic of (2 (k1 + i/2)^2 (1 + i sinh x) + 1/4) sech^2 x.
    const cplx oracle = (2.0 * std::pow(cplx(1.0, 0.5), 2) * (1.0 + kI * std::sinh(x)) + 0.25) * sech_of(x) * sech_of(x);
    EXPECT_LE(std::abs(u(x) - oracle), 1e-12) << x;
    EXPECT_LE(std::abs(via(x) - oracle), 1e-10) << x;
  }
  EXPECT_LT(std::abs(u(20.0)), 1e-7);
  EXPECT_LT(std::abs(u(40.0)), 1e-15);
}

TEST(Collision, ConvergesToSecondOrderBase) {
  const BaseFunction tilde = second_order_base(1.0);
  const ChiFamily family = colliding_tanh_sech_family(1.0);
  std::vector<double> errs;
  for (double eps : {1e-2, 5e-3, 2.5e-3, 1e-3}) {
    const BaseFunction w = collision_limit_base(family, 1.0, eps);
    double worst = 0.0;
    for (double x : RealGrid(-10, 10, 401).points()) worst = std::max(worst, std::abs(w(x) - tilde(x)));
    errs.push_back(worst);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_LT(errs[i], errs[i - 1]);
  EXPECT_GE(std::log2(errs[0] / errs[1]), 0.9);
  EXPECT_LE(errs.back(), 5e-3);
}

TEST(Collision, FixedAmplitudeFamilyDoesNotCollide) {
  const ChiFamily family = [](double k2) { return tanh_sech_chi(1.0, k2, 1.0, 0.0); };
  EXPECT_EQ(code_of([&] { collision_limit_base(family, 1.0, 1e-3); }), ErrorCode::NoCollision);
}

// -- pseudo-Hermitian --------------------------------------------------------------------------

TEST(OddRho, ConstraintResiduals) {
  EXPECT_EQ(odd_singular_rho_constraint(1.0, 0.5, -0.5), 0.0);
  EXPECT_EQ(odd_singular_rho_constraint(1.0, 2.5, -0.5), 0.0);
  EXPECT_EQ(odd_singular_rho_constraint(1.0, 1.0, -1.0), -3.0);
  EXPECT_EQ(code_of([] { odd_singular_rho(1.0, 1.0, -1.0); }), ErrorCode::ConstraintViolated);
}

TEST(PseudoHermitian, RealFirstBaseAndSingularSecond) {
  const auto& u = fig5();
  const BaseFunction& w1 = u.provenance[0];
  const BaseFunction& w2 = u.provenance[1];
  EXPECT_LE(imaginary_part_bound(w1, RealGrid(-10, 10, 2001)), 1e-9);
  ASSERT_EQ(w2.profile.singular_points().size(), 1u);
  EXPECT_EQ(w2.profile.singular_points()[0].x, 0.0);
  EXPECT_LE(std::abs(w2(1e-4) * 1e-4 - kI), 1e-3);
}

TEST(PseudoHermitian, EvenPotentialWithCubicTail) {
  const auto& u = fig5();
  for (double x : {0.3, 1.0, 4.0}) EXPECT_LE(std::abs(u(x) - u(-x)), 1e-9 * (1.0 + std::abs(u(x))));
  const double r = std::abs(u(100.0)) / std::abs(u(50.0));
  EXPECT_NEAR(r, 0.125, 0.01);
}

TEST(PseudoHermitian, ConstantRhoGivesRealChi) {
  auto rho = ComplexProfile::constant(1.0);
  const ComplexProfile chi = pseudo_hermitian_chi(rho, 0.5, -0.5);
  for (double x : {-3.0, 0.0, 2.0}) {
    const Jet<cplx> c = chi.taylor(x, 1);
    EXPECT_EQ(c.c[0].imag(), 0.0);
    const Jet<cplx> w1 = detail::w_from_chi(c, 0.5 * 0.5 - 0.25, -1.0);
    EXPECT_EQ(w1.c[0].imag(), 0.0);
  }
}

TEST(PseudoHermitian, SineOutOfRangeRejected) {
  auto rho = make_analytic_profile([](const Jet<cplx>& x) { return 1.0 * tanh(5.0 * x); });
  rho.with_asymptotes(-1.0, 1.0);
  EXPECT_EQ(code_of([&] { pseudo_hermitian_chi(rho, 0.5, -0.5); }), ErrorCode::SineOutOfRange);
}

// Property: real-w1 guarantee over the constraint family a = ((k1-k2)(k1+k2) + 3) / (3 (k1-k2)).
TEST(PseudoHermitianProperty, FirstBaseIsReal) {
  for (auto [k1, k2] : {std::pair{0.5, -0.5}, {2.5, -0.5}, {1.5, -0.5}}) {
    const double a = ((k1 - k2) * (k1 + k2) + 3.0) / (3.0 * (k1 - k2));
    ASSERT_NEAR(odd_singular_rho_constraint(a, k1, k2), 0.0, 1e-14);
    const Potential u = pseudo_hermitian_potential(a, k1, k2);
    EXPECT_LE(imaginary_part_bound(u.provenance[0], RealGrid(-10, 10, 1001)), 1e-9) << k1 << " " << k2;
  }
}

// -- three SSs ------------------------------------------------------------------------------------

TEST(GaussianNu, OriginAndTail) {
  const cplx z(-0.5, -0.1);
  const auto nu = gaussian_nu(1.0, 2.0, 3.0, z);
  EXPECT_LE(std::abs(nu(0.0) - ((1.0 - 2.0) / (2.0 - 3.0) + z)), 1e-15);
  EXPECT_LE(std::abs(nu(6.0) - 1.0), 1e-14);
  EXPECT_LE(std::abs(nu(-6.0) - 1.0), 1e-14);
}

TEST(ChiFromNu, ConstantNuGivesConstantRoot) {
  // nu constant: the quadratic is (1+nu) chi^2 + (k2^2-k3^2) nu^2 + (k2^2-k1^2) nu = 0.
  const double k1 = 1.0, k2 = 2.0, k3 = 4.0;
  const double nu0 = (k1 - k2) / (k2 - k3);
  const cplx chi_sq = -((k2 * k2 - k3 * k3) * nu0 * nu0 + (k2 * k2 - k1 * k1) * nu0) / (1.0 + nu0);
  EXPECT_NEAR(std::abs(chi_sq - (k1 - k2) * (k1 - k2)), 0.0, 1e-12);
  // With constant nu the root cannot switch sign, so the continued branch never reaches k1 - k2.
  EXPECT_EQ(code_of([&] { chi_from_nu(ComplexProfile::constant(nu0), k1, k2, k3); }), ErrorCode::BranchAmbiguity);
}

TEST(ChiFromNu, GaussianNuReproducesAsymptotes) {
  const auto nu = gaussian_nu(1.0, 2.0, 3.0, {-0.5, -0.1});
  const ComplexProfile chi = chi_from_nu(nu, 1.0, 2.0, 3.0);
  EXPECT_LE(std::abs(chi(-15.0) - 1.0), 1e-9);
  EXPECT_LE(std::abs(chi(15.0) + 1.0), 1e-9);
  EXPECT_LE(nu_quadratic_residual(chi, nu, 1.0, 2.0, 3.0, RealGrid(-10, 10, 2001).points()), 1e-9);
}

TEST(ChiFromNu, NaiveRealNuIsNotSilentlyAccepted) {
  const double k1 = 1.0, k2 = 2.0, k3 = 3.0;
  auto nu = make_analytic_profile([](const Jet<cplx>& x) { return 1.0 + 2.0 * x * exp(-(x * x)); });
  nu.with_asymptotes(1.0, 1.0).with_decay(DecayClass::exponential());
  EXPECT_THROW(three_ss_bases(nu, k1, k2, k3), Error);
}

TEST(ThreeSs, BasesShareOnePotential) {
  const auto nu = gaussian_nu(1.0, 2.0, 3.0, {-0.5, -0.1});
  const auto bases = three_ss_bases(nu, 1.0, 2.0, 3.0);
  const RealGrid grid(-10, 10, 2001);
  EXPECT_LE(cross_base_consistency({bases[0], bases[1], bases[2]}, grid), 1e-7);
  double worst = 0.0, scale = 0.0;
  for (double x : grid.points()) {
    worst = std::max(worst, std::abs(u_by_hand(bases[0], x) - u_by_hand(bases[2], x)));
    scale = std::max(scale, std::abs(u_by_hand(bases[0], x)));
  }
  EXPECT_LE(worst, 1e-7 * scale + 1e-6);
}

TEST(ThreeSs, SecondChiAsymptotes) {
  const auto nu = gaussian_nu(1.0, 2.0, 3.0, {-0.5, -0.1});
  const auto bases = three_ss_bases(nu, 1.0, 2.0, 3.0);
  // chi_2 = w3 - w2 -> k3 - k2 at -inf and k2 - k3 at +inf.
  EXPECT_LE(std::abs((bases[2](-15.0) - bases[1](-15.0)) - 1.0), 1e-9);
  EXPECT_LE(std::abs((bases[2](15.0) - bases[1](15.0)) + 1.0), 1e-9);
}

TEST(ConstructionParamsTest, Validation) {
  ConstructionParams p;
  p.ks = {1.0, 2.0};
  EXPECT_NO_THROW(p.validate());
  p.ks = {1.0, 1.0};
  EXPECT_THROW(p.validate(), Error);
  p.ks = {1.0, 2.0, 3.0, 4.0};
  EXPECT_THROW(p.validate(), Error);
  p.ks = {0.0};
  EXPECT_THROW(p.validate(), Error);
}
