#pragma once
/**
 * @file patch.hpp
 * @brief Chebyshev patches that replace a profile inside a small window.
 *
 * Functions such as U = -w^2 - i w' + k^2 stay finite where w has an
 * i/(x - x0) pole, but evaluating them through the pole-carrying formula
 * loses all accuracy close to x0. A patch interpolates the function from
 * nodes placed symmetrically outside the window, so inside the window it
 * is evaluated from well-conditioned samples only.
 */
#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "ssd/profile.hpp"

namespace ssd {

inline constexpr double kPatchRadius = 0.08;

class ChebyshevPatch {
 public:
  static constexpr int kNodesPerSide = 8;
  static constexpr double kNodeSpacing = 0.25;  // in units of the inner radius

  ChebyshevPatch(const ComplexProfile& raw, double center, double radius)
      : center_(center), inner_(radius), outer_(radius * (1.0 + kNodeSpacing * (kNodesPerSide - 1))) {
    constexpr int n = 2 * kNodesPerSide;
    Eigen::MatrixXcd A(n, n);
    Eigen::VectorXcd b(n);
    int row = 0;
    for (int side : {-1, 1}) {
      for (int j = 0; j < kNodesPerSide; ++j) {
        const double x = center + side * radius * (1.0 + kNodeSpacing * j);
        const double t = (x - center) / outer_;
        double tkm1 = 1.0, tk = t;
        A(row, 0) = 1.0;
        for (int m = 1; m < n; ++m) {
          A(row, m) = tk;
          const double next = 2.0 * t * tk - tkm1;
          tkm1 = tk;
          tk = next;
        }
        b(row) = raw(x);
        ++row;
      }
    }
    Eigen::VectorXcd sol = A.partialPivLu().solve(b);
    coeffs_.assign(sol.data(), sol.data() + n);
  }

  double center() const { return center_; }
  double inner_radius() const { return inner_; }
  bool covers(double x) const { return std::abs(x - center_) < inner_; }

  /// Clenshaw summation on a jet argument.
  Jet<cplx> eval(double x, int order) const {
    Jet<cplx> t = Jet<cplx>::variable(cplx((x - center_) / outer_), order);
    if (order >= 1) t.c[1] = cplx(1.0 / outer_);
    const int n = static_cast<int>(coeffs_.size());
    Jet<cplx> b1 = Jet<cplx>::constant(0.0, order);
    Jet<cplx> b2 = b1;
    for (int m = n - 1; m >= 1; --m) {
      Jet<cplx> b0 = 2.0 * t * b1 - b2 + coeffs_[static_cast<std::size_t>(m)];
      b2 = b1;
      b1 = b0;
    }
    return t * b1 - b2 + coeffs_[0];
  }

 private:
  double center_;
  double inner_;
  double outer_;
  std::vector<cplx> coeffs_;
};

/// Profile equal to `raw` except inside windows of `radius` around `points`,
/// where Chebyshev patches are used. Declared singular points at the patched
/// locations are dropped (the patched function is regular there).
inline ComplexProfile regularized(const ComplexProfile& raw, const std::vector<double>& points,
                                  double radius = kPatchRadius) {
  if (points.empty()) return raw;
  std::vector<ChebyshevPatch> patches;
  patches.reserve(points.size());
  for (double p : points) patches.emplace_back(raw, p, radius);

  std::vector<SingularPoint> kept;
  for (const auto& s : raw.singular_points()) {
    bool patched = false;
    for (double p : points)
      if (std::abs(p - s.x) < 1e-12) patched = true;
    if (!patched) kept.push_back(s);
  }

  ComplexProfile out = ComplexProfile::analytic(
      [raw, patches](double x, int order) {
        for (const auto& patch : patches)
          if (patch.covers(x)) return patch.eval(x, order);
        return raw.taylor(x, order);
      },
      raw.analytic_order());
  out.with_asymptotes(raw.asym_minus(), raw.asym_plus()).with_decay(raw.decay()).with_singular_points(kept);
  return out;
}

}  // namespace ssd
