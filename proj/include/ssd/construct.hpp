#pragma once
/**
 * @file construct.hpp
 * @brief Complex potentials with prescribed spectral singularities.
 *
 * Every potential here is generated by one or more base functions w_j via
 *
 *     U = -w_j^2 - i w_j' + k_j^2,
 *
 * where w_j -> +k_j at -inf and -k_j at +inf. Each such representation
 * places a spectral singularity at k_j. Two base functions are tied
 * together through chi = w_2 - w_1; three through nu = chi_1 / chi_2.
 */
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "ssd/error.hpp"
#include "ssd/jet.hpp"
#include "ssd/numerics.hpp"
#include "ssd/patch.hpp"
#include "ssd/profile.hpp"

namespace ssd {

inline constexpr cplx kI{0.0, 1.0};

struct BaseFunction {
  ComplexProfile profile;
  double k = 0.0;

  cplx operator()(double x) const { return profile(x); }
  bool is_lasing() const { return k > 0.0; }
};

struct PrescribedSS {
  double k = 0.0;
  int order = 1;
};

struct Potential {
  ComplexProfile profile;
  std::vector<BaseFunction> provenance;
  std::vector<PrescribedSS> prescribed_ss;
  /// Points where U is evaluated through a regularizing patch (poles and
  /// zeros of the generating functions).
  std::vector<double> tender_points;

  cplx operator()(double x) const { return profile(x); }

  std::vector<double> prescribed_wavenumbers() const {
    std::vector<double> ks;
    for (const auto& s : prescribed_ss) ks.push_back(s.k);
    std::sort(ks.begin(), ks.end());
    return ks;
  }
};

/// Free parameters of the shipped generating families.
struct ConstructionParams {
  cplx a0{1.0, 0.0};
  cplx a1{0.0, 0.0};
  double a = 1.0;
  cplx z{0.0, 0.0};
  std::vector<double> ks;

  void validate() const {
    if (ks.empty() || ks.size() > 3) fail(ErrorCode::InvalidArgument, "between one and three wavenumbers required");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] == 0.0) fail(ErrorCode::InvalidArgument, "wavenumbers must be nonzero");
      for (std::size_t j = 0; j < i; ++j)
        if (ks[i] == ks[j]) fail(ErrorCode::InvalidArgument, "wavenumbers must be pairwise distinct");
    }
  }
};

// ---------------------------------------------------------------------------
namespace detail {

/// Taylor jet of p with orders above its analytic order filled in by finite
/// differences (up to second order).
inline Jet<cplx> jet_with_fd(const ComplexProfile& p, double x, int order) {
  Jet<cplx> j = p.taylor(x, order);
  const int top = std::min(order, 2);
  for (int k = j.order + 1; k <= top; ++k) {
    j.c[static_cast<std::size_t>(k)] = derivative(p, x, k) / (k == 2 ? 2.0 : 1.0);
    j.order = k;
  }
  return j;
}

inline int effective_order(const ComplexProfile& p) { return std::max(p.analytic_order(), 2); }

/// w = sign * chi/2 - (i chi' + delta) / (2 chi), delta = k_j^2 - k_{j+1}^2.
inline Jet<cplx> w_from_chi(const Jet<cplx>& chi, double delta, double sign) {
  const Jet<cplx> dchi = chi.differentiated();
  const Jet<cplx> c = chi.truncated(dchi.order);
  return (sign * 0.5) * c - (kI * dchi + delta) / (2.0 * c);
}

/// U = -w^2 - i w' + k^2.
inline Jet<cplx> u_from_w(const Jet<cplx>& w, double k) {
  const Jet<cplx> dw = w.differentiated();
  const Jet<cplx> v = w.truncated(dw.order);
  return -(v * v) - kI * dw + k * k;
}

/// Re-expands a jet taken at x0 around x0 + dx.
inline Jet<cplx> translate(const Jet<cplx>& at, double dx, int order) {
  Jet<cplx> out;
  out.order = std::min(order, at.order);
  for (int j = 0; j <= out.order; ++j) {
    cplx s{0.0, 0.0};
    double binom = 1.0, pw = 1.0;
    for (int k = j; k <= at.order; ++k) {
      s += binom * pw * at.c[static_cast<std::size_t>(k)];
      binom = binom * (k + 1) / (k + 1 - j);
      pw *= dx;
    }
    out.c[static_cast<std::size_t>(j)] = s;
  }
  return out;
}

/// Drops the (vanishing) constant term: jet of f(x)/(x - x0) at x0.
inline Jet<cplx> divide_by_offset(const Jet<cplx>& f) {
  Jet<cplx> r;
  r.order = std::max(f.order - 1, 0);
  for (int k = 0; k <= r.order; ++k) r.c[static_cast<std::size_t>(k)] = f.c[static_cast<std::size_t>(k + 1)];
  return r;
}

/// Minima of |f| on [-span, span] that refine to genuine zeros.
inline std::vector<double> real_zeros(const ComplexProfile& f, double scale, double span = 30.0,
                                      double step = 0.005) {
  std::vector<double> zeros;
  const int n = static_cast<int>(std::round(2.0 * span / step)) + 1;
  auto safe_abs = [&f](double x) {
    if (f.distance_to_singularity(x) < 1e-3) return HUGE_VAL;
    try {
      return std::abs(f(x));
    } catch (const Error&) {
      return HUGE_VAL;
    }
  };
  double prev2 = HUGE_VAL, prev1 = safe_abs(-span);
  for (int i = 1; i < n; ++i) {
    const double x = -span + i * step;
    const double cur = safe_abs(x);
    const double xm = x - step;
    if (prev1 <= prev2 && prev1 <= cur && prev1 < 0.05 * (1.0 + scale) && std::isfinite(prev1)) {
      try {
        const double r = find_real_root([&f](double t) { return f(t); }, {xm - step, xm + step}, 1e-12);
        if (std::abs(f(r)) <= 1e-7 * (1.0 + scale)) {
          if (zeros.empty() || std::abs(zeros.back() - r) > 2 * step) zeros.push_back(r);
        }
      } catch (const Error&) {
      }
    }
    prev2 = prev1;
    prev1 = cur;
  }
  return zeros;
}

/// Poles and zeros of a generating function chi for the pair (k1, k2).
struct ChiAnalysis {
  std::vector<double> poles_plus;       ///< +i/(x-x0): node of the k2 solution
  std::vector<double> poles_minus;      ///< -i/(x-x0): node of the k1 solution
  std::vector<double> zeros_removable;  ///< chi'(x0) = i(k1^2-k2^2)
  std::vector<double> zeros_singular;   ///< chi'(x0) = i(k1^2-k2^2)/3

  std::vector<double> tender_points() const {
    std::vector<double> t = poles_plus;
    t.insert(t.end(), poles_minus.begin(), poles_minus.end());
    t.insert(t.end(), zeros_removable.begin(), zeros_removable.end());
    t.insert(t.end(), zeros_singular.begin(), zeros_singular.end());
    std::sort(t.begin(), t.end());
    return t;
  }
};

inline ChiAnalysis analyze_chi(const ComplexProfile& chi, double k1, double k2) {
  ChiAnalysis out;
  const double delta = k1 * k1 - k2 * k2;
  for (const auto& s : chi.singular_points()) {
    if (std::abs(s.coefficient - kI) <= 1e-9)
      out.poles_plus.push_back(s.x);
    else if (std::abs(s.coefficient + kI) <= 1e-9)
      out.poles_minus.push_back(s.x);
    else
      fail(ErrorCode::BadSingularity, "chi singularity at " + std::to_string(s.x) + " has coefficient other than +-i");
  }
  const double scale = std::abs(k1) + std::abs(k2);
  for (double z : real_zeros(chi, scale)) {
    if (delta == 0.0) fail(ErrorCode::BadZero, "chi vanishes at " + std::to_string(z) + " while k1^2 = k2^2");
    const cplx d = derivative(chi, z, 1);
    const double tol = 1e-6 * (1.0 + std::abs(delta));
    if (std::abs(d - kI * delta) <= tol)
      out.zeros_removable.push_back(z);
    else if (std::abs(d - kI * delta / 3.0) <= tol)
      out.zeros_singular.push_back(z);
    else
      fail(ErrorCode::BadZero, "chi vanishes at " + std::to_string(z) + " with chi' violating both removability conditions");
  }
  return out;
}

inline std::vector<SingularPoint> as_i_poles(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<SingularPoint> out;
  for (double x : xs) out.push_back({x, kI});
  return out;
}

inline void check_asymptotes(const BaseFunction& w) {
  const double tol = 1e-9 * (1.0 + std::abs(w.k));
  if (std::abs(w.profile.asym_minus() - w.k) > tol || std::abs(w.profile.asym_plus() + w.k) > tol)
    fail(ErrorCode::AsymptoteMismatch, "base function for k=" + std::to_string(w.k) + " must approach +k at -inf and -k at +inf");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single base function.

/// Potential generated by one base function. Poles of w must be i/(x-x0);
/// there U is evaluated through a regularizing patch.
inline Potential potential_from_base(const BaseFunction& w, std::vector<double> tender = {}) {
  detail::check_asymptotes(w);
  for (const auto& s : w.profile.singular_points()) {
    if (std::abs(s.coefficient - kI) > 1e-9)
      fail(ErrorCode::NonCancellation, "pole of w at " + std::to_string(s.x) + " is not of the form i/(x-x0)");
    tender.push_back(s.x);
  }
  std::sort(tender.begin(), tender.end());
  tender.erase(std::unique(tender.begin(), tender.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               tender.end());

  const double k = w.k;
  const ComplexProfile wp = w.profile;
  ComplexProfile raw = ComplexProfile::analytic(
      [wp, k](double x, int order) { return detail::u_from_w(detail::jet_with_fd(wp, x, order + 1), k); },
      detail::effective_order(wp) - 1);
  raw.with_asymptotes(0.0, 0.0).with_decay(wp.decay());

  for (double s : tender) {
    const cplx near = raw(s + 1e-3), far = raw(s + 1e-2);
    if (!is_finite(near) || std::abs(near) > 30.0 * (1.0 + std::abs(far)))
      fail(ErrorCode::NonCancellation, "U diverges near " + std::to_string(s));
  }

  Potential u;
  u.profile = regularized(raw, tender);
  u.provenance = {w};
  u.prescribed_ss = {{w.k, 1}};
  u.tender_points = tender;
  return u;
}

// ---------------------------------------------------------------------------
// Two base functions from chi = w2 - w1.

inline std::pair<BaseFunction, BaseFunction> base_pair_from_chi(const ComplexProfile& chi, double k1, double k2) {
  if (k1 == k2) fail(ErrorCode::InvalidArgument, "k1 and k2 must differ");
  const double tol = 1e-9 * (1.0 + std::abs(k1) + std::abs(k2));
  if (std::abs(chi.asym_minus() - (k2 - k1)) > tol || std::abs(chi.asym_plus() - (k1 - k2)) > tol)
    fail(ErrorCode::AsymptoteMismatch, "chi must approach k2-k1 at -inf and k1-k2 at +inf");

  const detail::ChiAnalysis an = detail::analyze_chi(chi, k1, k2);
  const double delta = k1 * k1 - k2 * k2;
  const std::vector<double> removable = an.zeros_removable;

  auto make = [&](double sign, double k, std::vector<double> own_poles, const std::vector<double>& patched) {
    own_poles.insert(own_poles.end(), an.zeros_singular.begin(), an.zeros_singular.end());
    ComplexProfile raw = ComplexProfile::analytic(
        [chi, delta, sign, removable](double x, int order) {
          for (double z : removable) {
            if (std::abs(x - z) < 1e-3) {
              // l'Hopital: both chi and i chi' + delta vanish at z.
              const int n = std::min(order + 3, kJetCapacity - 1);
              const Jet<cplx> cz = detail::jet_with_fd(chi, z, n);
              const Jet<cplx> num = kI * cz.differentiated() + delta;
              const Jet<cplx> q = detail::divide_by_offset(num) / detail::divide_by_offset(cz.truncated(num.order));
              const Jet<cplx> wz = (sign * 0.5) * cz.truncated(q.order) - 0.5 * q;
              return detail::translate(wz, x - z, order);
            }
          }
          return detail::w_from_chi(detail::jet_with_fd(chi, x, order + 1), delta, sign);
        },
        detail::effective_order(chi) - 1);
    raw.with_asymptotes(k, -k).with_decay(chi.decay());
    // Include chi's own poles so the raw profile refuses to evaluate there.
    std::vector<SingularPoint> sing = detail::as_i_poles(own_poles);
    for (double p : patched) sing.push_back({p, 0.0});
    std::sort(sing.begin(), sing.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
    raw.with_singular_points(sing);
    return BaseFunction{regularized(raw, patched), k};
  };

  BaseFunction w1 = make(-1.0, k1, an.poles_minus, an.poles_plus);
  BaseFunction w2 = make(+1.0, k2, an.poles_plus, an.poles_minus);
  return {w1, w2};
}

/// Potential with two SSs at k1, k2 generated from chi; evaluated through w1.
inline Potential potential_from_chi(const ComplexProfile& chi, double k1, double k2) {
  auto [w1, w2] = base_pair_from_chi(chi, k1, k2);
  const detail::ChiAnalysis an = detail::analyze_chi(chi, k1, k2);
  Potential u = potential_from_base(w1, an.tender_points());
  u.provenance = {w1, w2};
  u.prescribed_ss = {{k1, 1}, {k2, 1}};
  return u;
}

/// chi = (k1 - k2) tanh x + i a0 sech(x - a1).
inline ComplexProfile tanh_sech_chi(double k1, double k2, cplx a0, cplx a1) {
  if (a0 == cplx(0.0)) fail(ErrorCode::ZeroAmplitude, "a0 must be nonzero");
  ComplexProfile p =
      make_analytic_profile([k1, k2, a0, a1](const Jet<cplx>& x) { return (k1 - k2) * tanh(x) + kI * a0 * sech(x - a1); });
  p.with_asymptotes(k2 - k1, k1 - k2).with_decay(DecayClass::exponential());
  return p;
}

/// Self-dual pair at +-k1 from a chi built for k2 = -k1.
inline Potential selfdual_potential_from_chi(const ComplexProfile& chi, double k1) {
  auto [w1, w2] = base_pair_from_chi(chi, k1, -k1);
  const detail::ChiAnalysis an = detail::analyze_chi(chi, k1, -k1);
  ComplexProfile raw = ComplexProfile::analytic(
      [chi, k1](double x, int order) {
        const Jet<cplx> c0 = detail::jet_with_fd(chi, x, order + 2);
        const Jet<cplx> c1 = c0.differentiated();
        const Jet<cplx> c2 = c1.differentiated();
        const Jet<cplx> c = c0.truncated(c2.order);
        const Jet<cplx> d = c1.truncated(c2.order);
        const Jet<cplx> c_sq = c * c;
        return (3.0 * d * d - 2.0 * c * c2 - c_sq * c_sq) / (4.0 * c_sq) + k1 * k1;
      },
      detail::effective_order(chi) - 2);
  raw.with_asymptotes(0.0, 0.0).with_decay(chi.decay());
  std::vector<SingularPoint> sing;
  for (double t : an.tender_points()) sing.push_back({t, 0.0});
  raw.with_singular_points(sing);

  Potential u;
  u.tender_points = an.tender_points();
  u.profile = regularized(raw, u.tender_points);
  u.provenance = {w1, w2};
  u.prescribed_ss = {{k1, 1}, {-k1, 1}};
  return u;
}

/// Closed form of the self-dual potential generated by tanh_sech_chi(k1, -k1, a0, a1).
inline Potential closed_form_two_ss_potential(double k1, cplx a0, cplx a1) {
  if (a0 == cplx(0.0)) fail(ErrorCode::ZeroAmplitude, "a0 must be nonzero");
  ComplexProfile p = make_analytic_profile([k1, a0, a1](const Jet<cplx>& x) {
    const Jet<cplx> y = x - a1;
    const Jet<cplx> tx = tanh(x), sx = sech(x);
    const Jet<cplx> ty = tanh(y), sy = sech(y);
    const Jet<cplx> sx2 = sx * sx, sy2 = sy * sy, tx2 = tx * tx;
    const double kk = k1 * k1;
    const Jet<cplx> chi = 2.0 * k1 * tx + kI * a0 * sy;
    // sech^4 x sinh^2 x = tanh^2 x sech^2 x and sech^4 x sinh^4 x = tanh^4 x.
    const Jet<cplx> t1 = kk * (3.0 * sx2 * sx2 + 4.0 * tx2 * sx2 - 4.0 * kk * tx2 * tx2);
    const Jet<cplx> t2 = (kI * a0 * k1) * sy * (2.0 * tx * sy2 - 3.0 * ty * sx2 - tx * (8.0 * kk * tx2 + 1.0 - 2.0 * sx2));
    const Jet<cplx> t3 = -(a0 * a0 / 4.0) * sy2 * (1.0 + sy2 - 24.0 * kk * tx2);
    const Jet<cplx> t4 = (2.0 * kI * a0 * a0 * a0 * k1) * tx * sy2 * sy;
    const Jet<cplx> t5 = -(a0 * a0 * a0 * a0 / 4.0) * sy2 * sy2;
    return kk + (t1 + t2 + t3 + t4 + t5) / (chi * chi);
  });
  p.with_asymptotes(0.0, 0.0).with_decay(DecayClass::exponential());

  auto [w1, w2] = base_pair_from_chi(tanh_sech_chi(k1, -k1, a0, a1), k1, -k1);
  Potential u;
  u.profile = p;
  u.provenance = {w1, w2};
  u.prescribed_ss = {{k1, 1}, {-k1, 1}};
  return u;
}

/// chi = (k1 - k2) tanh x + i sech(x) / x, with a +i/x pole at the origin.
inline ComplexProfile singular_node_chi(double k1, double k2) {
  if (k1 == k2) fail(ErrorCode::InvalidArgument, "k1 and k2 must differ");
  ComplexProfile p =
      make_analytic_profile([k1, k2](const Jet<cplx>& x) { return (k1 - k2) * tanh(x) + kI * sech(x) / x; });
  p.with_asymptotes(k2 - k1, k1 - k2).with_decay(DecayClass::exponential()).with_singular_points({{0.0, kI}});
  return p;
}

// ---------------------------------------------------------------------------
// Second-order SS from the collision k2 -> k1.

/// Limit base function -k1 tanh x - sech(x)/2 + i k1 sech x.
inline BaseFunction second_order_base(double k1) {
  if (k1 == 0.0) fail(ErrorCode::InvalidArgument, "k1 must be nonzero");
  ComplexProfile p = make_analytic_profile(
      [k1](const Jet<cplx>& x) { return -k1 * tanh(x) - 0.5 * sech(x) + (kI * k1) * sech(x); });
  p.with_asymptotes(k1, -k1).with_decay(DecayClass::exponential());
  return {p, k1};
}

/// (2 (k1 + i/2)^2 (1 + i sinh x) + 1/4) sech^2 x.
inline Potential second_order_potential(double k1) {
  if (k1 == 0.0) fail(ErrorCode::InvalidArgument, "k1 must be nonzero");
  const cplx q = 2.0 * (k1 + 0.5 * kI) * (k1 + 0.5 * kI);
  ComplexProfile p = make_analytic_profile([q](const Jet<cplx>& x) {
    const Jet<cplx> s = sech(x);
    // (1 + i sinh x) sech^2 x = sech^2 x + i tanh x sech x
    return q * (s * s + kI * tanh(x) * s) + 0.25 * s * s;
  });
  p.with_asymptotes(0.0, 0.0).with_decay(DecayClass::exponential());
  Potential u;
  u.profile = p;
  u.provenance = {second_order_base(k1)};
  u.prescribed_ss = {{k1, 2}};
  return u;
}

using ChiFamily = std::function<ComplexProfile(double k2)>;

/// chi = (k1 - k2)(tanh x + i sech x): vanishes identically at k2 = k1.
inline ChiFamily colliding_tanh_sech_family(double k1) {
  return [k1](double k2) {
    const double d = k1 - k2;
    ComplexProfile p = make_analytic_profile([d](const Jet<cplx>& x) { return d * (tanh(x) + kI * sech(x)); });
    p.with_asymptotes(-d, d).with_decay(DecayClass::exponential());
    return p;
  };
}

/// Numerical collision limit: -(i d2chi/dk2dx - 2 k2) / (2 dchi/dk2) at k2 = k1 + eps.
inline BaseFunction collision_limit_base(const ChiFamily& family, double k1, double eps) {
  if (eps == 0.0) fail(ErrorCode::InvalidArgument, "eps must be nonzero");
  {
    const ComplexProfile at = family(k1);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = -10.0 + 0.1 * i;
      if (at.distance_to_singularity(x) < 1e-3) continue;
      worst = std::max({worst, std::abs(at(x)), std::abs(derivative(at, x, 1))});
    }
    if (worst > 1e-9 * (1.0 + std::abs(k1)))
      fail(ErrorCode::NoCollision, "chi and chi' do not vanish as k2 -> k1 (max " + std::to_string(worst) + ")");
  }
  const double k2 = k1 + eps;
  const double h = 1e-5 * std::max(1.0, std::abs(k1));
  const ComplexProfile up = family(k2 + h), dn = family(k2 - h);
  ComplexProfile p = ComplexProfile::analytic(
      [up, dn, h, k2](double x, int order) {
        const Jet<cplx> a = detail::jet_with_fd(up, x, order + 1);
        const Jet<cplx> b = detail::jet_with_fd(dn, x, order + 1);
        const Jet<cplx> dk = (a - b) / (2.0 * h);  // d chi / d k2
        const Jet<cplx> dkx = dk.differentiated();
        const Jet<cplx> dkv = dk.truncated(dkx.order);
        return -(kI * dkx - 2.0 * k2) / (2.0 * dkv);
      },
      std::min(detail::effective_order(up), detail::effective_order(dn)) - 1);
  p.with_asymptotes(k2, -k2).with_decay(up.decay());
  return {p, k2};
}

// ---------------------------------------------------------------------------
// Pseudo-Hermitian constructions: real-valued w1.

/// rho = 1/(x (x^2 + 1)) - (k2 - k1) tanh(a x), subject to
/// (k1 - k2)(k1 + k2 - 3a) + 3 = 0.
inline ComplexProfile odd_singular_rho(double a, double k1, double k2) {
  if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "a must be positive");
  const double residual = (k1 - k2) * (k1 + k2 - 3.0 * a) + 3.0;
  if (std::abs(residual) > 1e-12)
    fail(ErrorCode::ConstraintViolated, "(k1-k2)(k1+k2-3a)+3 = " + std::to_string(residual));
  ComplexProfile p = make_analytic_profile([a, k1, k2](const Jet<cplx>& x) {
    return 1.0 / (x * (x * x + 1.0)) - (k2 - k1) * tanh(a * x);
  });
  p.with_asymptotes(k2 - k1, k1 - k2).with_decay(DecayClass::algebraic(3.0)).with_singular_points({{0.0, 1.0}});
  return p;
}

inline double odd_singular_rho_constraint(double a, double k1, double k2) {
  return (k1 - k2) * (k1 + k2 - 3.0 * a) + 3.0;
}

/// chi = rho e^{i phi} with sin(phi) = rho' / (k1^2 - k2^2 - rho^2) and
/// cos(phi) >= 0, which makes w1 real-valued.
inline ComplexProfile pseudo_hermitian_chi(const ComplexProfile& rho, double k1, double k2) {
  const double delta = k1 * k1 - k2 * k2;
  const double target = std::abs(k1 - k2);
  if (std::abs(std::abs(rho.asym_minus()) - target) > 1e-9 || std::abs(std::abs(rho.asym_plus()) - target) > 1e-9)
    fail(ErrorCode::AsymptoteMismatch, "|rho| must approach |k1 - k2| at both infinities");

  auto sine = [rho, delta](double x) {
    const Jet<cplx> r = detail::jet_with_fd(rho, x, 1);
    return (r.c[1] / (delta - r.c[0] * r.c[0])).real();
  };

  // Range of sin(phi) on a fine grid.
  const std::vector<double> sing = rho.singular_locations();
  for (double x : RealGrid(-30.0, 30.0, 6001).points_avoiding(sing, 1e-3)) {
    if (std::abs(rho(x).imag()) > 1e-12 * (1.0 + std::abs(rho(x))))
      fail(ErrorCode::InvalidArgument, "rho must be real-valued");
    if (std::abs(sine(x)) > 1.0 + 1e-9)
      fail(ErrorCode::SineOutOfRange, "|sin phi| > 1 at x=" + std::to_string(x));
  }

  // At a pole of rho, cos(phi) must vanish to second order so that chi ~ i/(x-x0).
  std::vector<SingularPoint> poles;
  for (double x0 : sing) {
    for (double side : {-1.0, 1.0}) {
      const double s_near = sine(x0 + side * 1e-3);
      const double c1 = std::sqrt(std::max(0.0, 1.0 - sine(x0 + side * 0.02) * sine(x0 + side * 0.02)));
      const double c2 = std::sqrt(std::max(0.0, 1.0 - sine(x0 + side * 0.01) * sine(x0 + side * 0.01)));
      const double ratio = c2 > 0.0 ? c1 / c2 : HUGE_VAL;
      if (std::abs(1.0 - s_near) > 1e-3 || !(ratio > 3.0))
        fail(ErrorCode::NodeConditionViolated,
             "cos(phi) does not vanish to second order at x=" + std::to_string(x0) +
                 " (ratio " + std::to_string(ratio) + ")");
    }
    poles.push_back({x0, kI});
  }

  ComplexProfile chi = ComplexProfile::analytic(
      [rho, delta](double x, int order) {
        const Jet<double> r = [&] {
          const Jet<cplx> rc = detail::jet_with_fd(rho, x, order + 1);
          Jet<double> out;
          out.order = rc.order;
          for (int k = 0; k <= rc.order; ++k) out.c[static_cast<std::size_t>(k)] = rc.c[static_cast<std::size_t>(k)].real();
          return out;
        }();
        const Jet<double> dr = r.differentiated();
        const Jet<double> rv = r.truncated(dr.order);
        const Jet<double> s = dr / (delta - rv * rv);
        Jet<double> one_minus = 1.0 - s * s;
        one_minus.c[0] = std::max(one_minus.c[0], 0.0);
        const Jet<double> c = sqrt(one_minus);
        return to_complex(rv * c) + kI * to_complex(rv * s);
      },
      detail::effective_order(rho) - 1);
  chi.with_asymptotes(rho.asym_minus(), rho.asym_plus()).with_decay(rho.decay()).with_singular_points(poles);
  return chi;
}

/// Full pseudo-Hermitian construction from odd_singular_rho.
inline Potential pseudo_hermitian_potential(double a, double k1, double k2) {
  const ComplexProfile chi = pseudo_hermitian_chi(odd_singular_rho(a, k1, k2), k1, k2);
  Potential u = potential_from_chi(chi, k1, k2);
  if (k2 == -k1) {
    u.prescribed_ss = {{k1, 2}, {k2, 1}};
  } else {
    u.prescribed_ss = {{k1, 1}, {k2, 1}, {-k2, 1}};
  }
  return u;
}

// ---------------------------------------------------------------------------
// Three SSs from nu = chi_1 / chi_2.

inline ComplexProfile gaussian_nu(double k1, double k2, double k3, cplx z) {
  if (k1 == k2 || k2 == k3 || k1 == k3) fail(ErrorCode::InvalidArgument, "k1, k2, k3 must be pairwise distinct");
  const double nu_inf = (k1 - k2) / (k2 - k3);
  ComplexProfile p = make_analytic_profile(
      [nu_inf, z](const Jet<cplx>& x) { return nu_inf + (kI * x + z) * exp(-(x * x)); });
  p.with_asymptotes(nu_inf, nu_inf).with_decay(DecayClass::exponential());
  return p;
}

namespace detail {
struct NuQuadratic {
  Jet<cplx> a, b, c;  ///< a chi^2 + b chi + c = 0
};

inline NuQuadratic nu_quadratic(const Jet<cplx>& nu, double k1, double k2, double k3) {
  const Jet<cplx> dnu = nu.differentiated();
  const Jet<cplx> n = nu.truncated(dnu.order);
  return {1.0 + n, -kI * dnu, (k2 * k2 - k3 * k3) * (n * n) + (k2 * k2 - k1 * k1) * n};
}

inline std::array<cplx, 2> quadratic_roots(cplx a, cplx b, cplx c) {
  const cplx sq = std::sqrt(b * b - 4.0 * a * c);
  return {(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)};
}

struct BranchTable {
  double x_lo, step;
  std::vector<cplx> values;
  cplx left, right;

  cplx reference(double x) const {
    if (x <= x_lo) return left;
    const double xhi = x_lo + step * static_cast<double>(values.size() - 1);
    if (x >= xhi) return right;
    const auto i = static_cast<std::size_t>(std::lround((x - x_lo) / step));
    return values[std::min(i, values.size() - 1)];
  }
};
}  // namespace detail

/// Relative back-substitution residual of chi in the nu quadratic.
inline double nu_quadratic_residual(const ComplexProfile& chi, const ComplexProfile& nu, double k1, double k2,
                                    double k3, const std::vector<double>& xs) {
  double worst = 0.0;
  for (double x : xs) {
    const auto q = detail::nu_quadratic(detail::jet_with_fd(nu, x, 1), k1, k2, k3);
    const cplx c = chi(x);
    const cplx r = q.a.c[0] * c * c + q.b.c[0] * c + q.c.c[0];
    const double scale = std::abs(q.a.c[0]) * std::norm(c) + std::abs(q.b.c[0] * c) + std::abs(q.c.c[0]);
    worst = std::max(worst, std::abs(r) / std::max(scale, 1e-300));
  }
  return worst;
}

/// Solves (1 + nu) chi^2 - i nu' chi + (k2^2 - k3^2) nu^2 + (k2^2 - k1^2) nu = 0
/// for chi, continuing the root that starts at k2 - k1 on the left.
inline ComplexProfile chi_from_nu(const ComplexProfile& nu, double k1, double k2, double k3) {
  if (k1 == k2 || k2 == k3 || k1 == k3) fail(ErrorCode::InvalidArgument, "k1, k2, k3 must be pairwise distinct");
  constexpr double kSpan = 20.0, kStep = 2e-3;
  const double scale = 1.0 + std::abs(k1 - k2);
  auto table = std::make_shared<detail::BranchTable>();
  table->x_lo = -kSpan;
  table->step = kStep;
  table->left = k2 - k1;
  table->right = k1 - k2;

  const int n = static_cast<int>(std::round(2.0 * kSpan / kStep)) + 1;
  table->values.reserve(static_cast<std::size_t>(n));
  cplx prev = table->left;
  for (int i = 0; i < n; ++i) {
    const double x = -kSpan + i * kStep;
    const auto q = detail::nu_quadratic(detail::jet_with_fd(nu, x, 1), k1, k2, k3);
    if (std::abs(q.a.c[0]) < 1e-12)
      fail(ErrorCode::DegenerateLeadingCoefficient, "1 + nu vanishes near x=" + std::to_string(x));
    const auto r = detail::quadratic_roots(q.a.c[0], q.b.c[0], q.c.c[0]);
    const bool first = std::abs(r[0] - prev) <= std::abs(r[1] - prev);
    const cplx chosen = first ? r[0] : r[1];
    const double gap = std::abs(r[0] - r[1]);
    const double jump = std::abs(chosen - prev);
    if (gap < 1e-6 * scale || (i > 0 && gap < 10.0 * jump) || (i > 0 && jump > 0.05 * scale))
      fail(ErrorCode::BranchAmbiguity, "roots of the chi quadratic cannot be told apart near x=" + std::to_string(x));
    table->values.push_back(chosen);
    prev = chosen;
  }
  if (std::abs(prev - table->right) > 1e-6 * scale)
    fail(ErrorCode::BranchAmbiguity, "continued root does not reach k1 - k2 at +inf");

  ComplexProfile chi = ComplexProfile::analytic(
      [nu, k1, k2, k3, table](double x, int order) {
        const auto q = detail::nu_quadratic(detail::jet_with_fd(nu, x, order + 1), k1, k2, k3);
        const Jet<cplx> disc = q.b * q.b - 4.0 * q.a * q.c;
        const Jet<cplx> sq = sqrt(disc);
        const Jet<cplx> plus = (-q.b + sq) / (2.0 * q.a);
        const Jet<cplx> minus = (-q.b - sq) / (2.0 * q.a);
        const cplx ref = table->reference(x);
        return std::abs(plus.c[0] - ref) <= std::abs(minus.c[0] - ref) ? plus : minus;
      },
      detail::effective_order(nu) - 1);
  chi.with_asymptotes(k2 - k1, k1 - k2).with_decay(nu.decay());

  const double resid = nu_quadratic_residual(chi, nu, k1, k2, k3, RealGrid(-kSpan, kSpan, 4001).points());
  if (resid > 1e-9) fail(ErrorCode::BranchAmbiguity, "back-substitution residual " + std::to_string(resid));
  return chi;
}

/// w1, w2 from chi1 = chi_from_nu(...), and w3 = w2 + chi1 / nu.
inline std::array<BaseFunction, 3> three_ss_bases(const ComplexProfile& nu, double k1, double k2, double k3) {
  const ComplexProfile chi1 = chi_from_nu(nu, k1, k2, k3);
  for (double x : RealGrid(-30.0, 30.0, 6001).points())
    if (std::abs(nu(x)) < 1e-8) fail(ErrorCode::BadSingularity, "nu vanishes near x=" + std::to_string(x));

  auto [w1, w2] = base_pair_from_chi(chi1, k1, k2);
  const ComplexProfile w2p = w2.profile;
  ComplexProfile w3p = ComplexProfile::analytic(
      [w2p, chi1, nu](double x, int order) {
        const Jet<cplx> chi2 = detail::jet_with_fd(chi1, x, order) / detail::jet_with_fd(nu, x, order);
        return w2p.taylor(x, order) + chi2;
      },
      std::min({w2p.analytic_order(), chi1.analytic_order(), nu.analytic_order()}));
  w3p.with_asymptotes(k3, -k3).with_decay(nu.decay()).with_singular_points(w2p.singular_points());
  BaseFunction w3{w3p, k3};

  double worst = 0.0, scale = 0.0;
  for (double x : RealGrid(-10.0, 10.0, 401).points_avoiding(w2p.singular_locations(), 1e-3)) {
    const cplx u1 = detail::u_from_w(w1.profile.taylor(x, 1), k1).c[0];
    const cplx u3 = detail::u_from_w(w3.profile.taylor(x, 1), k3).c[0];
    worst = std::max(worst, std::abs(u1 - u3));
    scale = std::max(scale, std::abs(u1));
  }
  if (worst > 1e-7 * std::max(scale, 1.0))
    fail(ErrorCode::InconsistentPotential, "U from w1 and w3 differ by " + std::to_string(worst));
  return {w1, w2, w3};
}

inline Potential three_ss_potential(const ComplexProfile& nu, double k1, double k2, double k3) {
  const auto bases = three_ss_bases(nu, k1, k2, k3);
  Potential u = potential_from_base(bases[0]);
  u.provenance = {bases[0], bases[1], bases[2]};
  u.prescribed_ss = {{k1, 1}, {k2, 1}, {k3, 1}};
  return u;
}

// ---------------------------------------------------------------------------
// SS solutions psi_0 = rho exp(-i \int_{x0}^x w).

class WaveFunction {
 public:
  WaveFunction(BaseFunction w, double x0, cplx rho, double boundary = 30.0) : w_(std::move(w)), x0_(x0), rho_(rho) {
    if (rho == cplx(0.0)) fail(ErrorCode::InvalidArgument, "rho must be nonzero");
    for (const auto& s : w_.profile.singular_points()) {
      if (std::abs(s.coefficient - kI) > 1e-9)
        fail(ErrorCode::NonCancellation, "SS-solution nodes require i/(x-x0) poles of w");
      nodes_.push_back(s.x);
    }
    if (w_.profile.distance_to_singularity(x0) < 1e-3) fail(ErrorCode::InvalidArgument, "reference point sits on a node");
    build_pieces();
    boundary_ = std::max(boundary, nodes_.empty() ? 0.0 : std::max(std::abs(nodes_.front()), std::abs(nodes_.back())) + 5.0);
    rho_plus_ = (*this)(boundary_) * std::exp(cplx(0.0, -w_.k * boundary_));
    rho_minus_ = (*this)(-boundary_) * std::exp(cplx(0.0, -w_.k * boundary_));
  }

  const BaseFunction& base() const { return w_; }
  double k() const { return w_.k; }
  bool is_lasing() const { return w_.k > 0.0; }
  double x0() const { return x0_; }
  cplx rho() const { return rho_; }
  cplx rho_minus() const { return rho_minus_; }
  cplx rho_plus() const { return rho_plus_; }
  double boundary() const { return boundary_; }
  const std::vector<double>& node_points() const { return nodes_; }

  cplx operator()(double x) const {
    const std::size_t i = piece_of(x);
    if (i == npos) return {0.0, 0.0};
    const Piece& p = pieces_[i];
    return p.amplitude * std::exp(-kI * integrate_phase(w_.profile, p.anchor, x, 1e-13));
  }

  /// psi on sorted points, accumulating phase between neighbours.
  std::vector<cplx> sample(const std::vector<double>& xs) const {
    std::vector<cplx> out(xs.size());
    std::size_t last_piece = npos;
    double last_x = 0.0;
    cplx last_psi{};
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double x = xs[j];
      const std::size_t i = piece_of(x);
      if (i == npos) {
        out[j] = 0.0;
        last_piece = npos;
        continue;
      }
      if (i == last_piece) {
        last_psi *= std::exp(-kI * integrate_phase(w_.profile, last_x, x, 1e-13));
      } else {
        last_psi = (*this)(x);
      }
      out[j] = last_psi;
      last_piece = i;
      last_x = x;
    }
    return out;
  }

  cplx first_derivative(double x) const { return -kI * w_.profile(x) * (*this)(x); }
  /// psi'' = (-i w' - w^2) psi.
  cplx second_derivative(double x) const {
    const Jet<cplx> wj = detail::jet_with_fd(w_.profile, x, 1);
    return (-kI * wj.c[1] - wj.c[0] * wj.c[0]) * (*this)(x);
  }

  /// Rescales so that sqrt(|rho_-| |rho_+|) = 1.
  void normalize_asymptotic() {
    const double g = std::sqrt(std::abs(rho_minus_) * std::abs(rho_plus_));
    if (!(g > 0.0)) fail(ErrorCode::NonFinite, "vanishing asymptotic amplitude");
    for (auto& p : pieces_) p.amplitude /= g;
    rho_ /= g;
    rho_minus_ /= g;
    rho_plus_ /= g;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Piece {
    double lo, hi, anchor;
    cplx amplitude;
  };

  std::size_t piece_of(double x) const {
    for (double s : nodes_)
      if (std::abs(x - s) < kSingularRefusalRadius) return npos;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      if (x > pieces_[i].lo && x < pieces_[i].hi) return i;
    return npos;
  }

  cplx psi_in(const Piece& p, double x) const {
    return p.amplitude * std::exp(-kI * integrate_phase(w_.profile, p.anchor, x, 1e-13));
  }

  /// exp(-i \int_{s-d}^{s+d} (w - i/(x-s)))
  cplx crossing_factor(double s, double d) const {
    const auto f = [&](double x, bool imag) {
      const cplx v = w_.profile(x) - kI / (x - s);
      return imag ? v.imag() : v.real();
    };
    using Gauss = boost::math::quadrature::gauss<double, 20>;
    const double re = Gauss::integrate([&](double x) { return f(x, false); }, s - d, s + d);
    const double im = Gauss::integrate([&](double x) { return f(x, true); }, s - d, s + d);
    return std::exp(-kI * cplx(re, im));
  }

  void build_pieces() {
    const double inf = HUGE_VAL;
    std::vector<double> edges = {-inf};
    edges.insert(edges.end(), nodes_.begin(), nodes_.end());
    edges.push_back(inf);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double lo = edges[i], hi = edges[i + 1];
      double anchor;
      if (x0_ > lo && x0_ < hi)
        anchor = x0_;
      else if (std::isinf(lo))
        anchor = hi - 1.0;
      else if (std::isinf(hi))
        anchor = lo + 1.0;
      else
        anchor = 0.5 * (lo + hi);
      pieces_.push_back({lo, hi, anchor, cplx(0.0)});
    }
    std::size_t home = 0;
    while (!(x0_ > pieces_[home].lo && x0_ < pieces_[home].hi)) ++home;
    pieces_[home].amplitude = rho_;

    auto half_width = [&](std::size_t node) {
      double gap = HUGE_VAL;
      if (node > 0) gap = std::min(gap, nodes_[node] - nodes_[node - 1]);
      if (node + 1 < nodes_.size()) gap = std::min(gap, nodes_[node + 1] - nodes_[node]);
      return std::min(1e-2, 0.25 * gap);
    };
    // Node j separates piece j (left) and piece j+1 (right).
    for (std::size_t j = home; j < nodes_.size(); ++j) {
      const double s = nodes_[j], d = half_width(j);
      const cplx left = psi_in(pieces_[j], s - d);
      const cplx right = -left * crossing_factor(s, d);
      Piece& p = pieces_[j + 1];
      p.amplitude = right / std::exp(-kI * integrate_phase(w_.profile, p.anchor, s + d, 1e-13));
    }
    for (std::size_t j = home; j-- > 0;) {
      const double s = nodes_[j], d = half_width(j);
      const cplx right = psi_in(pieces_[j + 1], s + d);
      const cplx left = -right / crossing_factor(s, d);
      Piece& p = pieces_[j];
      p.amplitude = left / std::exp(-kI * integrate_phase(w_.profile, p.anchor, s - d, 1e-13));
    }
  }

  BaseFunction w_;
  double x0_;
  cplx rho_;
  std::vector<double> nodes_;
  std::vector<Piece> pieces_;
  double boundary_ = 30.0;
  cplx rho_minus_{}, rho_plus_{};
};

inline WaveFunction ss_solution(const BaseFunction& w, double x0, cplx rho) { return WaveFunction(w, x0, rho); }

}  // namespace ssd
