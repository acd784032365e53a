#pragma once
/**
 * @file numerics.hpp
 * @brief Differentiation, quadrature, adaptive ODE integration and 1-D
 *        minimization over complex-valued profiles.
 */
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include "ssd/error.hpp"
#include "ssd/profile.hpp"

namespace ssd {

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Finite-difference steps. The second derivative uses a wider step: with
/// the first-derivative step its 5-point stencil is dominated by rounding.
inline double fd_step_first(double x) { return std::max(1e-6, 1e-6 * std::abs(x)); }
inline double fd_step_second(double x) { return std::max(1e-3, 1e-3 * std::abs(x)); }

namespace detail {
inline cplx checked_eval(const ComplexProfile& p, double x) {
  const cplx v = p(x);
  if (!is_finite(v)) fail(ErrorCode::NonFinite, "profile is not finite at x=" + std::to_string(x));
  return v;
}
}  // namespace detail

/// First or second derivative: analytic when the profile provides it,
/// otherwise a central finite difference.
inline cplx derivative(const ComplexProfile& p, double x, int order) {
  if (order != 1 && order != 2) fail(ErrorCode::InvalidArgument, "derivative order must be 1 or 2");
  if (p.analytic_order() >= order) {
    const cplx v = p.taylor(x, order).derivative(order);
    if (!is_finite(v)) fail(ErrorCode::NonFinite, "analytic derivative is not finite");
    return v;
  }
  const double h = order == 1 ? fd_step_first(x) : fd_step_second(x);
  const double reach = order == 1 ? h : 2.0 * h;
  if (p.distance_to_singularity(x) <= reach + kSingularRefusalRadius)
    fail(ErrorCode::SingularPoint, "finite-difference stencil touches a declared singularity");
  using detail::checked_eval;
  if (order == 1) return (checked_eval(p, x + h) - checked_eval(p, x - h)) / (2.0 * h);
  return (-checked_eval(p, x + 2 * h) + 16.0 * checked_eval(p, x + h) - 30.0 * checked_eval(p, x) +
          16.0 * checked_eval(p, x - h) - checked_eval(p, x - 2 * h)) /
         (12.0 * h * h);
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature.

namespace detail {
template <class F>
cplx simpson_recurse(const F& f, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const cplx flm = f(lm);
  const cplx frm = f(rm);
  const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const cplx delta = left + right - whole;
  // The width floor stops bisection on rounding noise and tiny jumps.
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol || b - a < 1e-6) return left + right + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson integration of a complex integrand over [a, b].
template <class F>
cplx adaptive_simpson(const F& f, double a, double b, double tol, double max_panel = 0.5) {
  if (a == b) return {0.0, 0.0};
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_panel);
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  const double width = (b - a) / panels;
  cplx total{0.0, 0.0};
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    const double hi = i == panels - 1 ? b : lo + width;
    const cplx flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
    const cplx whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, tol * (hi - lo) / (b - a), 48);
  }
  return total;
}

/// \int_{x0}^{x} w(xi) dxi for a singularity-free path.
inline cplx integrate_phase(const ComplexProfile& w, double x0, double x, double tol = 1e-12) {
  const double lo = std::min(x0, x), hi = std::max(x0, x);
  for (const auto& s : w.singular_points())
    if (s.x > lo && s.x < hi)
      fail(ErrorCode::SingularOnPath, "declared singularity at " + std::to_string(s.x) + " lies on the path");
  return adaptive_simpson([&w](double t) { return detail::checked_eval(w, t); }, x0, x, tol);
}

// ---------------------------------------------------------------------------
// Adaptive Runge-Kutta integration (Fehlberg 7(8) pair via Boost.Odeint).

struct RkOptions {
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 1e-2;
};

/// Integrates y' = rhs(x, y) from x0 to x1 for a fixed-size complex state.
template <std::size_t N, class Rhs>
std::array<cplx, N> rk_integrate(const Rhs& rhs, const std::array<cplx, N>& y0, double x0, double x1,
                                 double tol = 1e-10, RkOptions opts = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2 * N>;
  if (x0 == x1) return y0;

  State y{};
  for (std::size_t i = 0; i < N; ++i) {
    y[2 * i] = y0[i].real();
    y[2 * i + 1] = y0[i].imag();
  }
  auto system = [&rhs](const State& s, State& dsdx, double x) {
    std::array<cplx, N> z;
    for (std::size_t i = 0; i < N; ++i) z[i] = cplx(s[2 * i], s[2 * i + 1]);
    const std::array<cplx, N> dz = rhs(x, z);
    for (std::size_t i = 0; i < N; ++i) {
      if (!is_finite(dz[i])) fail(ErrorCode::NonFinite, "ODE right-hand side not finite at x=" + std::to_string(x));
      dsdx[2 * i] = dz[i].real();
      dsdx[2 * i + 1] = dz[i].imag();
    }
  };

  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double dt0 = dir * std::min(opts.initial_step, std::abs(x1 - x0));
  try {
    if (std::isfinite(opts.max_step)) {
      auto stepper =
          odeint::make_controlled(tol, tol, opts.max_step, odeint::runge_kutta_fehlberg78<State>());
      odeint::integrate_adaptive(stepper, system, y, x0, x1, dt0);
    } else {
      auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
      odeint::integrate_adaptive(stepper, system, y, x0, x1, dt0);
    }
  } catch (const odeint::odeint_error& e) {
    fail(ErrorCode::StepUnderflow, std::string("step controller failed: ") + e.what());
  }

  std::array<cplx, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = cplx(y[2 * i], y[2 * i + 1]);
  return out;
}

/// Dynamic-size variant.
inline std::vector<cplx> rk_integrate(const std::function<std::vector<cplx>(double, const std::vector<cplx>&)>& rhs,
                                      const std::vector<cplx>& y0, double x0, double x1, double tol = 1e-10,
                                      RkOptions opts = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  const std::size_t n = y0.size();
  if (x0 == x1) return y0;
  State y(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y[2 * i] = y0[i].real();
    y[2 * i + 1] = y0[i].imag();
  }
  auto system = [&rhs, n](const State& s, State& dsdx, double x) {
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = cplx(s[2 * i], s[2 * i + 1]);
    const std::vector<cplx> dz = rhs(x, z);
    if (dz.size() != n) fail(ErrorCode::InvalidArgument, "ODE right-hand side changed state size");
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_finite(dz[i])) fail(ErrorCode::NonFinite, "ODE right-hand side not finite at x=" + std::to_string(x));
      dsdx[2 * i] = dz[i].real();
      dsdx[2 * i + 1] = dz[i].imag();
    }
  };
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double dt0 = dir * std::min(opts.initial_step, std::abs(x1 - x0));
  try {
    if (std::isfinite(opts.max_step)) {
      auto stepper = odeint::make_controlled(tol, tol, opts.max_step, odeint::runge_kutta_fehlberg78<State>());
      odeint::integrate_adaptive(stepper, system, y, x0, x1, dt0);
    } else {
      auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
      odeint::integrate_adaptive(stepper, system, y, x0, x1, dt0);
    }
  } catch (const odeint::odeint_error& e) {
    fail(ErrorCode::StepUnderflow, std::string("step controller failed: ") + e.what());
  }
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cplx(y[2 * i], y[2 * i + 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Real minimizer of |f|^2 (Brent: golden section + parabolic steps).

/// Location k* in the bracket minimizing |f(k)|. The caller decides whether
/// |f(k*)| is small enough to count as a zero.
template <class F>
double find_real_root(const F& f, std::pair<double, double> bracket, double tol = 1e-10) {
  auto [a, b] = bracket;
  if (!(a < b)) fail(ErrorCode::InvalidArgument, "bracket must satisfy a < b");
  auto sq = [&f](double k) { return std::norm(f(k)); };
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::brent_find_minima(sq, a, b, std::numeric_limits<double>::digits / 2, iters);
  double k = r.first;
  double fk = r.second;

  // Gauss-Newton polish on f itself; converges fast for simple zeros,
  // harmless (rejected) elsewhere.
  for (int it = 0; it < 6; ++it) {
    const double h = std::max(1e-7, 1e-7 * std::abs(k));
    const cplx d = (f(k + h) - f(k - h)) / (2.0 * h);
    const double dn = std::norm(d);
    if (dn == 0.0) break;
    const double step = -std::real(std::conj(d) * f(k)) / dn;
    const double kn = std::clamp(k + step, a, b);
    const double fn = sq(kn);
    if (!(fn < fk)) break;
    k = kn;
    fk = fn;
    if (std::abs(step) < 1e-3 * tol) break;
  }

  const double edge = std::max(tol, 1e-9 * (b - a));
  if ((k - a < edge && fk >= 0.999999 * sq(a)) || (b - k < edge && fk >= 0.999999 * sq(b)))
    fail(ErrorCode::NoMinimum, "|f| is monotone on the bracket");
  return k;
}

}  // namespace ssd
