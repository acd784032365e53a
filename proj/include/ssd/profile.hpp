#pragma once
/**
 * @file profile.hpp
 * @brief Complex-valued functions of one real variable with metadata.
 *
 * A ComplexProfile wraps an evaluation routine together with what the
 * construction algorithms need to know about it: analytic derivative
 * availability, asymptotic values at both infinities, declared poles of
 * the form c/(x - x0), and the decay class of the tails.
 */
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssd/error.hpp"
#include "ssd/jet.hpp"

namespace ssd {

/// Evaluation within this distance of a declared singular point is refused.
inline constexpr double kSingularRefusalRadius = 1e-7;

struct SingularPoint {
  double x = 0.0;
  cplx coefficient{0.0, 0.0};  ///< leading behavior coefficient/(x - x0)
};

struct DecayClass {
  enum class Kind { exponential, algebraic };
  Kind kind = Kind::exponential;
  double power = 0.0;  ///< p in |f - f_inf| ~ |x|^-p (algebraic only)

  static DecayClass exponential() { return {}; }
  static DecayClass algebraic(double p) { return {Kind::algebraic, p}; }
  bool is_algebraic() const { return kind == Kind::algebraic; }

  /// Expected |f(2X) - f_inf| / |f(X) - f_inf| for large X.
  double doubling_ratio(double X) const {
    return is_algebraic() ? std::pow(2.0, -power) : std::exp(-X);
  }
};

struct RealGrid {
  double x_min = -10.0;
  double x_max = 10.0;
  int n = 2001;

  RealGrid() = default;
  RealGrid(double lo, double hi, int count) : x_min(lo), x_max(hi), n(count) {
    if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "RealGrid requires x_min < x_max");
    if (count < 2) fail(ErrorCode::InvalidArgument, "RealGrid requires n >= 2");
  }

  double step() const { return (x_max - x_min) / (n - 1); }
  double operator[](int i) const { return i == n - 1 ? x_max : x_min + i * step(); }

  std::vector<double> points() const {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = (*this)[i];
    return xs;
  }

  /// Grid points farther than `radius` from every point in `avoid`.
  std::vector<double> points_avoiding(const std::vector<double>& avoid, double radius) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (double x : points()) {
      bool keep = true;
      for (double a : avoid)
        if (std::abs(x - a) <= radius) keep = false;
      if (keep) out.push_back(x);
    }
    return out;
  }
};

class ComplexProfile {
 public:
  using TaylorFn = std::function<Jet<cplx>(double x, int order)>;
  using ValueFn = std::function<cplx(double x)>;

  ComplexProfile() : ComplexProfile(constant(cplx(0.0))) {}

  /// Profile whose Taylor coefficients are known analytically up to `max_order`.
  static ComplexProfile analytic(TaylorFn taylor, int max_order) {
    ComplexProfile p(PrivateTag{});
    p.taylor_ = std::move(taylor);
    p.analytic_order_ = std::min(max_order, kJetCapacity - 1);
    return p;
  }

  /// Profile from a plain evaluation with optional analytic d1/d2.
  static ComplexProfile from_function(ValueFn eval, ValueFn d1 = nullptr, ValueFn d2 = nullptr) {
    const int ord = d1 ? (d2 ? 2 : 1) : 0;
    auto fn = [eval = std::move(eval), d1 = std::move(d1), d2 = std::move(d2)](double x, int order) {
      Jet<cplx> j(eval(x), 0);
      if (order >= 1 && d1) {
        j.order = 1;
        j.c[1] = d1(x);
      }
      if (order >= 2 && d2) {
        j.order = 2;
        j.c[2] = 0.5 * d2(x);
      }
      return j;
    };
    ComplexProfile p = analytic(std::move(fn), ord);
    return p;
  }

  static ComplexProfile constant(cplx value) {
    ComplexProfile p = analytic([value](double, int order) { return Jet<cplx>::constant(value, order); },
                                kJetCapacity - 1);
    p.asym_minus_ = p.asym_plus_ = value;
    return p;
  }

  // -- metadata (builder style) -------------------------------------------
  ComplexProfile& with_asymptotes(cplx minus, cplx plus) {
    asym_minus_ = minus;
    asym_plus_ = plus;
    return *this;
  }
  ComplexProfile& with_decay(DecayClass d) {
    decay_ = d;
    return *this;
  }
  ComplexProfile& with_singular_points(std::vector<SingularPoint> pts) {
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (!(pts[i - 1].x < pts[i].x))
        fail(ErrorCode::InvalidArgument, "singular points must be strictly increasing");
    singular_ = std::move(pts);
    return *this;
  }

  cplx asym_minus() const { return asym_minus_; }
  cplx asym_plus() const { return asym_plus_; }
  const DecayClass& decay() const { return decay_; }
  const std::vector<SingularPoint>& singular_points() const { return singular_; }
  int analytic_order() const { return analytic_order_; }
  bool has_d1() const { return analytic_order_ >= 1; }
  bool has_d2() const { return analytic_order_ >= 2; }

  std::vector<double> singular_locations() const {
    std::vector<double> xs;
    for (const auto& s : singular_) xs.push_back(s.x);
    return xs;
  }

  /// Distance to the nearest declared singular point (infinity if none).
  double distance_to_singularity(double x) const {
    double d = HUGE_VAL;
    for (const auto& s : singular_) d = std::min(d, std::abs(x - s.x));
    return d;
  }

  // -- evaluation -------------------------------------------------------------
  cplx operator()(double x) const { return taylor(x, 0).c[0]; }
  cplx eval(double x) const { return (*this)(x); }

  /// Taylor coefficients up to min(order, analytic_order()).
  Jet<cplx> taylor(double x, int order) const {
    guard(x);
    return taylor_(x, std::min(order, analytic_order_));
  }

  /// Analytic first derivative; requires has_d1().
  cplx d1(double x) const {
    if (!has_d1()) fail(ErrorCode::InvalidArgument, "profile has no analytic first derivative");
    return taylor(x, 1).derivative(1);
  }
  /// Analytic second derivative; requires has_d2().
  cplx d2(double x) const {
    if (!has_d2()) fail(ErrorCode::InvalidArgument, "profile has no analytic second derivative");
    return taylor(x, 2).derivative(2);
  }

  /// Evaluation without the singular-point guard (for limit computations).
  Jet<cplx> taylor_unguarded(double x, int order) const { return taylor_(x, std::min(order, analytic_order_)); }

 private:
  struct PrivateTag {};
  explicit ComplexProfile(PrivateTag) {}

  void guard(double x) const {
    for (const auto& s : singular_)
      if (std::abs(x - s.x) < kSingularRefusalRadius)
        fail(ErrorCode::SingularPoint, "evaluation at x=" + std::to_string(x) +
                                           " too close to declared singularity at " + std::to_string(s.x));
  }

  TaylorFn taylor_;
  int analytic_order_ = 0;
  cplx asym_minus_{0.0, 0.0};
  cplx asym_plus_{0.0, 0.0};
  DecayClass decay_{};
  std::vector<SingularPoint> singular_;
};

/// Wraps a generic callable f(Jet<cplx>) -> Jet<cplx> into an analytic profile.
template <class F>
ComplexProfile make_analytic_profile(F f, int max_order = kJetCapacity - 1) {
  return ComplexProfile::analytic(
      [f = std::move(f)](double x, int order) { return f(Jet<cplx>::variable(cplx(x), order)); }, max_order);
}

}  // namespace ssd
