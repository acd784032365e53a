#pragma once
/**
 * @file scatter.hpp
 * @brief Transfer matrix, scattering coefficients and detection of spectral
 *        singularities (real zeros of M22).
 *
 * Jost solutions are matched at x = +-L to their asymptotic expansions
 * e^{+-ikx + S(x)}, where S carries the first three orders of the 1/(2ik)
 * expansion of the tail beyond L. This removes the leading truncation error,
 * which matters for slowly (algebraically) decaying potentials.
 */
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ssd/construct.hpp"
#include "ssd/error.hpp"
#include "ssd/numerics.hpp"

namespace ssd {

struct TransferMatrix {
  double k = 0.0;
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  cplx det() const { return m11 * m22 - m12 * m21; }
};

struct ScatteringCoefficients {
  double k = 0.0;
  cplx T, RL, RR;
};

enum class SsCharacter { lasing, cpa };

inline const char* character_name(SsCharacter c) { return c == SsCharacter::lasing ? "lasing" : "cpa"; }

struct SpectralSingularity {
  double k0 = 0.0;
  int order = 1;
  SsCharacter character = SsCharacter::lasing;
  double residual = 0.0;
};

struct TruncationSpec {
  double L = 20.0;
  double tail_bound = 0.0;  ///< max |U| sampled on [L, 4L] and [-4L, -L]
  double tail_fraction = 0.1;

  void require_admissible(double k) const {
    if (tail_bound > tail_fraction * k * k)
      fail(ErrorCode::TailTooFat, "max|U| beyond L=" + std::to_string(L) + " is " + std::to_string(tail_bound) +
                                      ", above " + std::to_string(tail_fraction) + " k^2 at k=" + std::to_string(k));
  }
};

inline double default_truncation_length(const Potential& u) { return u.profile.decay().is_algebraic() ? 200.0 : 20.0; }

inline TruncationSpec make_truncation(const Potential& u, double L = 0.0, double tail_fraction = 0.1) {
  TruncationSpec t;
  t.L = L > 0.0 ? L : default_truncation_length(u);
  t.tail_fraction = tail_fraction;
  for (int i = 0; i <= 300; ++i) {
    const double x = t.L * (1.0 + i / 100.0);
    t.tail_bound = std::max({t.tail_bound, std::abs(u(x)), std::abs(u(-x))});
  }
  return t;
}

inline ScatteringCoefficients scattering_coefficients(const TransferMatrix& m) {
  if (m.m22 == cplx(0.0)) fail(ErrorCode::ExactZero, "m22 vanishes exactly at k=" + std::to_string(m.k));
  return {m.k, 1.0 / m.m22, -m.m21 / m.m22, m.m12 / m.m22};
}

/// Transfer-matrix engine for one potential and truncation; caches the
/// k-independent tail integrals.
class JostSolver {
 public:
  JostSolver(Potential u, TruncationSpec trunc, double tol = 1e-10) : u_(std::move(u)), trunc_(trunc), tol_(tol) {
    if (!(trunc_.L > 0.0)) fail(ErrorCode::InvalidArgument, "L must be positive");
    const double L = trunc_.L;
    u_minus_ = u_(-L);
    u_plus_ = u_(L);
    tail(+1.0, i1_plus_, i2_plus_);
    tail(-1.0, i1_minus_, i2_minus_);
  }

  const Potential& potential() const { return u_; }
  const TruncationSpec& truncation() const { return trunc_; }

  TransferMatrix operator()(double k) const {
    if (k == 0.0) fail(ErrorCode::InvalidArgument, "k = 0 is excluded");
    trunc_.require_admissible(k);
    const double L = trunc_.L;

    // Left Jost data at -L.
    const auto left1 = jost_left(k, -L);   // ~ e^{ikx}
    const auto left2 = jost_left(-k, -L);  // ~ e^{-ikx}
    const auto ab1 = to_ab(k, -L, left1);
    const auto ab2 = to_ab(k, -L, left2);

    const ComplexProfile& up = u_.profile;
    const double kk = k;
    auto rhs = [&up, kk](double x, const std::array<cplx, 4>& y) {
      const cplx g = up(x) / (2.0 * kI * kk);
      const cplx e = std::exp(cplx(0.0, 2.0 * kk * x));
      const cplx ei = 1.0 / e;
      return std::array<cplx, 4>{g * (y[0] + y[1] * ei), -g * (y[0] * e + y[1]), g * (y[2] + y[3] * ei),
                                 -g * (y[2] * e + y[3])};
    };
    RkOptions opts;
    opts.max_step = 0.5;
    const auto y = rk_integrate<4>(rhs, {ab1[0], ab1[1], ab2[0], ab2[1]}, -L, L, tol_, opts);

    // Decompose at +L on the right Jost pair.
    const auto r1 = jost_right(k, L);
    const auto r2 = jost_right(-k, L);
    const cplx det = r1[0] * r2[1] - r2[0] * r1[1];
    auto decompose = [&](cplx a, cplx b) {
      const auto psi = from_ab(k, L, a, b);
      const cplx c1 = (psi[0] * r2[1] - r2[0] * psi[1]) / det;
      const cplx c2 = (r1[0] * psi[1] - psi[0] * r1[1]) / det;
      return std::array<cplx, 2>{c1, c2};
    };
    const auto col1 = decompose(y[0], y[1]);
    const auto col2 = decompose(y[2], y[3]);
    return {k, col1[0], col2[0], col1[1], col2[1]};
  }

 private:
  /// I1 = \int U, I2 = \int U^2 over the tail beyond +-L.
  void tail(double side, cplx& i1, cplx& i2) const {
    const double L = trunc_.L;
    const double umax = std::log(1000.0);
    auto f1 = [&](double s) {
      const double x = L * std::exp(s);
      return u_(side * x) * x;
    };
    auto f2 = [&](double s) {
      const double x = L * std::exp(s);
      const cplx v = u_(side * x);
      return v * v * x;
    };
    i1 = adaptive_simpson(f1, 0.0, umax, 1e-11, 0.25);
    i2 = adaptive_simpson(f2, 0.0, umax, 1e-11, 0.25);
    const DecayClass& d = u_.profile.decay();
    if (d.is_algebraic() && d.power > 1.0) {
      const double X = 1000.0 * L;
      const cplx v = u_(side * X);
      i1 += v * X / (d.power - 1.0);
      i2 += v * v * X / (2.0 * d.power - 1.0);
    }
  }

  /// (psi, psi') of the Jost solution ~ e^{ikx} at -inf, evaluated at x = -L.
  std::array<cplx, 2> jost_left(double k, double x) const {
    const cplx q = 2.0 * kI * k;
    const cplx s = i1_minus_ / q - u_minus_ / (q * q) - i2_minus_ / (q * q * q);
    const cplx sigma = u_minus_ / q - derivative_at(x) / (q * q) - u_minus_ * u_minus_ / (q * q * q);
    const cplx psi = std::exp(cplx(0.0, k * x) + s);
    return {psi, (kI * k + sigma) * psi};
  }

  /// (psi, psi') of the Jost solution ~ e^{ikx} at +inf, evaluated at x = +L.
  std::array<cplx, 2> jost_right(double k, double x) const {
    const cplx q = 2.0 * kI * k;
    const cplx s = -(i1_plus_ / q + u_plus_ / (q * q) - i2_plus_ / (q * q * q));
    const cplx sigma = u_plus_ / q - derivative_at(x) / (q * q) - u_plus_ * u_plus_ / (q * q * q);
    const cplx psi = std::exp(cplx(0.0, k * x) + s);
    return {psi, (kI * k + sigma) * psi};
  }

  cplx derivative_at(double x) const {
    const Jet<cplx> j = u_.profile.taylor(x, 1);
    return j.order >= 1 ? j.c[1] : derivative(u_.profile, x, 1);
  }

  /// psi = a e^{ikx} + b e^{-ikx}, psi' = ik (a e^{ikx} - b e^{-ikx}).
  static std::array<cplx, 2> to_ab(double k, double x, const std::array<cplx, 2>& psi) {
    const cplx e = std::exp(cplx(0.0, k * x));
    const cplx d = psi[1] / (kI * k);
    return {0.5 * (psi[0] + d) / e, 0.5 * (psi[0] - d) * e};
  }
  static std::array<cplx, 2> from_ab(double k, double x, cplx a, cplx b) {
    const cplx e = std::exp(cplx(0.0, k * x));
    return {a * e + b / e, kI * k * (a * e - b / e)};
  }

  Potential u_;
  TruncationSpec trunc_;
  double tol_;
  cplx u_minus_, u_plus_;
  cplx i1_plus_, i2_plus_, i1_minus_, i2_minus_;
};

inline TransferMatrix transfer_matrix(const Potential& u, double k, const TruncationSpec& trunc, double tol = 1e-10) {
  return JostSolver(u, trunc, tol)(k);
}

struct SpectrumSample {
  double k = 0.0;
  ScatteringCoefficients coefficients;
  cplx m22;
};

/// Uniform k grid; a sample landing on k = 0 is skipped.
inline std::vector<SpectrumSample> scan_spectrum(const JostSolver& solver, double k_min, double k_max, int n) {
  if (!(k_min < k_max) || n < 2) fail(ErrorCode::InvalidArgument, "scan requires k_min < k_max and n >= 2");
  std::vector<SpectrumSample> out;
  out.reserve(static_cast<std::size_t>(n));
  const double step = (k_max - k_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double k = i == n - 1 ? k_max : k_min + i * step;
    if (std::abs(k) < 1e-9 * step) continue;
    const TransferMatrix m = solver(k);
    out.push_back({k, scattering_coefficients(m), m.m22});
  }
  return out;
}

inline std::vector<SpectrumSample> scan_spectrum(const Potential& u, double k_min, double k_max, int n,
                                                 const TruncationSpec& trunc) {
  return scan_spectrum(JostSolver(u, trunc), k_min, k_max, n);
}

namespace detail {
inline double median_abs_m22(const std::vector<SpectrumSample>& scan) {
  std::vector<double> v;
  for (const auto& s : scan) v.push_back(std::abs(s.m22));
  if (v.empty()) return 1.0;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}
}  // namespace detail

struct OrderFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  int order = 0;
};

/// Log-log slope of |m22(k)| against |k - k0| over offsets in [1e-4, 1e-2].
inline OrderFit fit_ss_order(const JostSolver& solver, double k0) {
  std::vector<double> lx, ly;
  constexpr int kPerSide = 9;
  for (int side : {-1, 1}) {
    for (int i = 0; i < kPerSide; ++i) {
      const double off = std::pow(10.0, -4.0 + 2.0 * i / (kPerSide - 1));
      const double m = std::abs(solver(k0 + side * off).m22);
      lx.push_back(std::log(off));
      ly.push_back(std::log(std::max(m, 1e-300)));
    }
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  OrderFit fit;
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - my - fit.slope * (lx[i] - mx);
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / (n - 2.0) / sxx);
  fit.order = static_cast<int>(std::lround(fit.slope));
  return fit;
}

inline int ss_order(const JostSolver& solver, double k0) {
  const OrderFit fit = fit_ss_order(solver, k0);
  if (fit.order < 1 || std::abs(fit.slope - fit.order) > 0.25 || fit.stderr_slope >= 0.1)
    fail(ErrorCode::AmbiguousOrder, "log-log slope " + std::to_string(fit.slope) + " (stderr " +
                                        std::to_string(fit.stderr_slope) + ") at k0=" + std::to_string(k0));
  return fit.order;
}

inline int ss_order(const Potential& u, double k0, const TruncationSpec& trunc) {
  return ss_order(JostSolver(u, trunc, 1e-12), k0);
}

struct LocateOptions {
  int n = 401;
  double threshold = 0.0;  ///< <= 0: 1e-4 times the median |m22| of the scan
  bool estimate_order = true;
};

/// Refined real zeros of m22 among the local minima of |m22| on a scan.
inline std::vector<SpectralSingularity> locate_singularities(const JostSolver& solver, double k_min, double k_max,
                                                             LocateOptions opt = {}) {
  const auto scan = scan_spectrum(solver, k_min, k_max, opt.n);
  const double threshold = opt.threshold > 0.0 ? opt.threshold : 1e-4 * detail::median_abs_m22(scan);
  const double step = (k_max - k_min) / (opt.n - 1);

  std::vector<SpectralSingularity> found;
  for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
    const double a = std::abs(scan[i - 1].m22), b = std::abs(scan[i].m22), c = std::abs(scan[i + 1].m22);
    if (!(b <= a && b <= c)) continue;
    double k0;
    try {
      k0 = find_real_root([&solver](double k) { return solver(k).m22; }, {scan[i - 1].k, scan[i + 1].k}, 1e-12);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoMinimum) continue;
      throw;
    }
    const double residual = std::abs(solver(k0).m22);
    if (residual > threshold) continue;
    bool duplicate = false;
    for (const auto& f : found)
      if (std::abs(f.k0 - k0) < step) duplicate = true;
    if (duplicate) continue;
    SpectralSingularity ss;
    ss.k0 = k0;
    ss.residual = residual;
    ss.character = k0 > 0.0 ? SsCharacter::lasing : SsCharacter::cpa;
    found.push_back(ss);
  }
  if (opt.estimate_order) {
    const JostSolver fine(solver.potential(), solver.truncation(), 1e-12);
    for (auto& ss : found) ss.order = ss_order(fine, ss.k0);
  }
  return found;
}

inline std::vector<SpectralSingularity> locate_singularities(const Potential& u, double k_min, double k_max,
                                                             const TruncationSpec& trunc, double threshold = 0.0) {
  LocateOptions opt;
  opt.threshold = threshold;
  return locate_singularities(JostSolver(u, trunc), k_min, k_max, opt);
}

/// |M11(k) - conj(M22(k)) (k + k1)/(k - k1)| / (1 + |M11(k)|).
inline double pseudo_hermitian_residual(const JostSolver& solver, double k, double k1) {
  if (std::abs(k - k1) < 1e-12 || std::abs(k + k1) < 1e-12)
    fail(ErrorCode::PoleAtK1, "k coincides with +-k1");
  const TransferMatrix m = solver(k);
  return std::abs(m.m11 - std::conj(m.m22) * (k + k1) / (k - k1)) / (1.0 + std::abs(m.m11));
}

inline double pseudo_hermitian_residual(const Potential& u, double k, double k1, const TruncationSpec& trunc) {
  return pseudo_hermitian_residual(JostSolver(u, trunc), k, k1);
}

}  // namespace ssd
