#pragma once
/**
 * @file verify.hpp
 * @brief Executable consistency checks for constructed potentials.
 */
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssd/construct.hpp"
#include "ssd/scatter.hpp"

namespace ssd {

inline constexpr double kExclusionRadius = 1e-3;

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string domain;
  bool informational = false;

  bool pass() const { return residual <= tolerance; }
};

struct VerificationReport {
  std::string subject;
  std::vector<Check> checks;

  void add(std::string name, double residual, double tolerance, std::string domain, bool informational = false) {
    checks.push_back({std::move(name), residual, tolerance, std::move(domain), informational});
  }

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.pass(); });
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["subject"] = subject;
    j["passed"] = all_passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      j["checks"].push_back({{"name", c.name},
                             {"residual", c.residual},
                             {"tolerance", c.tolerance},
                             {"domain", c.domain},
                             {"pass", c.pass()},
                             {"informational", c.informational}});
    }
    return j;
  }
};

inline std::string describe(const RealGrid& g) {
  return "[" + std::to_string(g.x_min) + ", " + std::to_string(g.x_max) + "] n=" + std::to_string(g.n);
}

namespace detail {
inline std::vector<double> all_singular_locations(const std::vector<BaseFunction>& bases) {
  std::vector<double> xs;
  for (const auto& b : bases)
    for (double x : b.profile.singular_locations()) xs.push_back(x);
  return xs;
}

inline cplx u_of(const BaseFunction& w, double x) { return u_from_w(jet_with_fd(w.profile, x, 1), w.k).c[0]; }
}  // namespace detail

/// max |U_i - U_j| / (1 + max |U|) over the grid and all base pairs.
inline double cross_base_consistency(const std::vector<BaseFunction>& bases, const RealGrid& grid) {
  if (bases.size() < 2) fail(ErrorCode::InvalidArgument, "need at least two base functions");
  double worst = 0.0, scale = 0.0;
  for (double x : grid.points_avoiding(detail::all_singular_locations(bases), kExclusionRadius)) {
    std::vector<cplx> us;
    for (const auto& b : bases) us.push_back(detail::u_of(b, x));
    for (std::size_t i = 0; i < us.size(); ++i) {
      scale = std::max(scale, std::abs(us[i]));
      for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, std::abs(us[i] - us[j]));
    }
  }
  return worst / (1.0 + scale);
}

/// max |U(x) - conj U(-x)| / (1 + max |U|).
inline double pt_symmetry_residual(const Potential& u, const RealGrid& grid) {
  double worst = 0.0, scale = 0.0;
  for (double x : grid.points()) {
    const cplx a = u(x), b = u(-x);
    worst = std::max(worst, std::abs(a - std::conj(b)));
    scale = std::max(scale, std::abs(a));
  }
  return worst / (1.0 + scale);
}

/// max |Im w| / (1 + max |Re w|).
inline double imaginary_part_bound(const BaseFunction& w, const RealGrid& grid) {
  double im = 0.0, re = 0.0;
  for (double x : grid.points_avoiding(w.profile.singular_locations(), kExclusionRadius)) {
    const cplx v = w(x);
    im = std::max(im, std::abs(v.imag()));
    re = std::max(re, std::abs(v.real()));
  }
  return im / (1.0 + re);
}

struct SsSolutionResidual {
  double analytic = 0.0;  ///< with psi'' = (-i w' - w^2) psi
  double fd = 0.0;        ///< discrepancy between analytic and extrapolated 5-point psi''
};

/// Residual of -psi'' + U psi - k^2 psi for the SS solution generated by w,
/// relative to max |psi| on the grid.
inline SsSolutionResidual ss_solution_residuals(const Potential& u, const BaseFunction& w, const RealGrid& grid) {
  std::vector<double> avoid = w.profile.singular_locations();
  const std::vector<double> xs = grid.points_avoiding(avoid, kExclusionRadius);
  const WaveFunction psi(w, xs.empty() ? 0.0 : xs[xs.size() / 2], 1.0);
  const std::vector<cplx> vals = psi.sample(xs);
  double peak = 0.0;
  for (const auto& v : vals) peak = std::max(peak, std::abs(v));

  SsSolutionResidual r;
  const double h = 2.5e-3;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const Jet<cplx> wj = detail::jet_with_fd(w.profile, x, 1);
    const cplx d2 = (-kI * wj.c[1] - wj.c[0] * wj.c[0]) * vals[i];
    r.analytic = std::max(r.analytic, std::abs(-d2 + (u(x) - w.k * w.k) * vals[i]));

    if (w.profile.distance_to_singularity(x) > 2.0 * h + kExclusionRadius) {
      auto at = [&](double dx) { return vals[i] * std::exp(-kI * integrate_phase(w.profile, x, x + dx, 1e-14)); };
      auto stencil = [&](double s) {
        return (-at(2 * s) + 16.0 * at(s) - 30.0 * vals[i] + 16.0 * at(-s) - at(-2 * s)) / (12.0 * s * s);
      };
      const cplx fd2 = (16.0 * stencil(0.5 * h) - stencil(h)) / 15.0;
      r.fd = std::max(r.fd, std::abs(fd2 - d2));
    }
  }
  r.analytic /= peak;
  r.fd /= peak;
  return r;
}

inline double ss_solution_residual(const Potential& u, const BaseFunction& w, const RealGrid& grid) {
  return ss_solution_residuals(u, w, grid).analytic;
}

/// (|w(-X) - k|, |w(X) + k|).
inline std::pair<double, double> asymptote_check(const BaseFunction& w, double X) {
  return {std::abs(w(-X) - w.k), std::abs(w(X) + w.k)};
}

/// Second-order finite-difference propagation on a uniform n-point grid over
/// [-L, L], matched to discrete plane waves e^{+-iqx}, cos(qh) = 1 - k^2 h^2 / 2.
inline TransferMatrix fd_transfer_oracle(const Potential& u, double k, const TruncationSpec& trunc, int n) {
  if (k == 0.0) fail(ErrorCode::InvalidArgument, "k = 0 is excluded");
  if (n < 3) fail(ErrorCode::InvalidArgument, "need at least three grid points");
  trunc.require_admissible(k);
  const double L = trunc.L;
  const double h = 2.0 * L / (n - 1);
  const double c = 1.0 - 0.5 * k * k * h * h;
  if (std::abs(c) >= 1.0) fail(ErrorCode::InvalidArgument, "grid too coarse for k");
  const double q = std::copysign(std::acos(c) / h, k);

  auto wave = [q](double x, double sign) { return std::exp(cplx(0.0, sign * q * x)); };
  const double x0 = -L, x1 = -L + h;
  cplx p0[2] = {wave(x0, 1.0), wave(x0, -1.0)};
  cplx p1[2] = {wave(x1, 1.0), wave(x1, -1.0)};
  for (int j = 1; j < n - 1; ++j) {
    const double x = -L + j * h;
    const cplx f = 2.0 + h * h * (u(x) - k * k);
    for (int col = 0; col < 2; ++col) {
      const cplx next = f * p1[col] - p0[col];
      p0[col] = p1[col];
      p1[col] = next;
    }
  }
  // Decompose (psi_{n-2}, psi_{n-1}) on the discrete waves at the right edge.
  const double xa = L - h, xb = L;
  const cplx a1 = wave(xa, 1.0), a2 = wave(xa, -1.0), b1 = wave(xb, 1.0), b2 = wave(xb, -1.0);
  const cplx det = a1 * b2 - a2 * b1;
  TransferMatrix m;
  m.k = k;
  for (int col = 0; col < 2; ++col) {
    const cplx c1 = (p0[col] * b2 - a2 * p1[col]) / det;
    const cplx c2 = (a1 * p1[col] - p0[col] * b1) / det;
    if (col == 0) {
      m.m11 = c1;
      m.m21 = c2;
    } else {
      m.m12 = c1;
      m.m22 = c2;
    }
  }
  return m;
}

inline double max_entry_difference(const TransferMatrix& a, const TransferMatrix& b) {
  return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21), std::abs(a.m22 - b.m22)});
}

inline double max_entry(const TransferMatrix& m) {
  return std::max({std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
}

/// max_entry_difference / max(1, largest entry of b).
inline double relative_entry_difference(const TransferMatrix& a, const TransferMatrix& b) {
  return max_entry_difference(a, b) / std::max(1.0, max_entry(b));
}

/// |det M - 1| measured against the size of the products it cancels.
inline double scaled_det_residual(const TransferMatrix& m) {
  return std::abs(m.det() - 1.0) / (1.0 + std::abs(m.m11 * m.m22) + std::abs(m.m12 * m.m21));
}

}  // namespace ssd
