#pragma once
/**
 * @file commands.hpp
 * @brief The build / scan / find-ss / verify jobs behind the command-line tool.
 */
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssd/io.hpp"
#include "ssd/jobs.hpp"
#include "ssd/verify.hpp"

namespace ssd {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitConstruction = 3, kExitTruncation = 4, kExitMismatch = 5, kExitVerify = 6 };

struct CommandOptions {
  std::string out_dir = ".";
  bool svg = false;
  std::ostream* log = &std::cerr;
};

// ---------------------------------------------------------------------------
// SS recovery.

struct SsReport {
  std::string subject;
  std::vector<PrescribedSS> prescribed;
  std::vector<SpectralSingularity> recovered;
  double tolerance = 1e-3;
  bool matched = false;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["subject"] = subject;
    j["tolerance"] = tolerance;
    j["matched"] = matched;
    j["prescribed"] = nlohmann::json::array();
    for (const auto& p : prescribed) j["prescribed"].push_back({{"k", p.k}, {"order", p.order}});
    j["recovered"] = nlohmann::json::array();
    for (const auto& s : recovered)
      j["recovered"].push_back(
          {{"k0", s.k0}, {"order", s.order}, {"character", character_name(s.character)}, {"residual", s.residual}});
    return j;
  }
};

/// True when every prescribed SS inside [k_min, k_max] is found once with its
/// order and nothing else is found.
inline bool ss_sets_match(const std::vector<PrescribedSS>& prescribed, const std::vector<SpectralSingularity>& found,
                          double k_min, double k_max, double tol) {
  std::vector<bool> used(found.size(), false);
  for (const auto& p : prescribed) {
    if (p.k < k_min || p.k > k_max) continue;
    bool hit = false;
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (used[i] || std::abs(found[i].k0 - p.k) > tol || found[i].order != p.order) continue;
      used[i] = hit = true;
      break;
    }
    if (!hit) return false;
  }
  return std::all_of(used.begin(), used.end(), [](bool u) { return u; });
}

inline SsReport find_ss_report(const JobConfig& job, const Potential& u) {
  const TruncationSpec trunc = job_truncation(job, u);
  const JostSolver solver(u, trunc);
  LocateOptions opt;
  opt.threshold = job.threshold;
  SsReport r;
  r.subject = job.name;
  r.prescribed = u.prescribed_ss;
  std::sort(r.prescribed.begin(), r.prescribed.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  r.tolerance = job.ss_tolerance;
  r.recovered = locate_singularities(solver, job.scan.k_min, job.scan.k_max, opt);
  r.matched = ss_sets_match(r.prescribed, r.recovered, job.scan.k_min, job.scan.k_max, r.tolerance);
  return r;
}

// ---------------------------------------------------------------------------
// Transfer-matrix identities over a k set.

struct IdentityResiduals {
  double det = 0.0;         ///< max |det M - 1|
  double det_scaled = 0.0;  ///< max scaled_det_residual
  double reflect = 0.0;     ///< max |M11(k) - M22(-k)| / (1 + |M11(k)|)
  double worst_det_k = 0.0;
};

inline IdentityResiduals identity_residuals(const JostSolver& solver, const std::vector<double>& ks) {
  IdentityResiduals r;
  for (double k : ks) {
    const TransferMatrix m = solver(k), mm = solver(-k);
    if (std::abs(m.det() - 1.0) > r.det) r.det = std::abs(m.det() - 1.0), r.worst_det_k = k;
    r.det_scaled = std::max(r.det_scaled, scaled_det_residual(m));
    r.reflect = std::max(r.reflect, std::abs(m.m11 - mm.m22) / (1.0 + std::abs(m.m11)));
  }
  return r;
}

inline std::vector<double> scan_wavenumbers(const ScanConfig& s, int stride = 1) {
  std::vector<double> ks;
  const double step = (s.k_max - s.k_min) / (s.n - 1);
  for (int i = 0; i < s.n; i += stride) {
    const double k = i == s.n - 1 ? s.k_max : s.k_min + i * step;
    if (std::abs(k) > 1e-9 * step) ks.push_back(k);
  }
  return ks;
}

/// Wavenumber in [lo, hi] farthest from every prescribed SS (and from 0).
inline double off_resonance_k(const Potential& u, double lo, double hi) {
  double best = lo, best_gap = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double k = lo + (hi - lo) * i / 200.0;
    double gap = std::abs(k);
    for (const auto& p : u.prescribed_ss) gap = std::min(gap, std::abs(k - p.k));
    if (gap > best_gap) best_gap = gap, best = k;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Verification suite.

namespace detail {
inline double anti_pt_residual(const ComplexProfile& chi, const RealGrid& grid) {
  double worst = 0.0;
  for (double x : grid.points_avoiding(chi.singular_locations(), kExclusionRadius))
    worst = std::max(worst, std::abs(chi(x) + std::conj(chi(-x))));
  return worst;
}

inline bool prescribed_self_dual(const Potential& u) {
  for (const auto& p : u.prescribed_ss) {
    bool mirrored = false;
    for (const auto& q : u.prescribed_ss) mirrored = mirrored || q.k == -p.k;
    if (!mirrored) return false;
  }
  return !u.prescribed_ss.empty();
}

inline double route_disagreement(const Potential& a, const Potential& b, const RealGrid& grid) {
  std::vector<double> avoid = a.tender_points;
  avoid.insert(avoid.end(), b.tender_points.begin(), b.tender_points.end());
  double worst = 0.0, scale = 0.0;
  for (double x : grid.points_avoiding(avoid, kExclusionRadius)) {
    worst = std::max(worst, std::abs(a(x) - b(x)));
    scale = std::max(scale, std::abs(a(x)));
  }
  return worst / (1.0 + scale);
}

/// |psi| at a node of the asymptotically normalized SS solution, from the
/// means of psi at s -+ d and s -+ 2d extrapolated to d = 0.
inline double node_amplitude(const BaseFunction& w, double node) {
  double x0 = node + 1.0;
  while (w.profile.distance_to_singularity(x0) < 0.5) x0 += 0.5;
  WaveFunction psi(w, x0, 1.0);
  psi.normalize_asymptotic();
  constexpr double d = 2e-3;
  const cplx m1 = 0.5 * (psi(node - d) + psi(node + d));
  const cplx m2 = 0.5 * (psi(node - 2 * d) + psi(node + 2 * d));
  return std::abs((4.0 * m1 - m2) / 3.0);
}
}  // namespace detail

inline VerificationReport verification_report(const JobConfig& job, const BuiltJob& b) {
  const Potential& u = b.potential;
  const RealGrid& grid = job.grid;
  const std::string gdom = describe(grid);
  VerificationReport rep;
  rep.subject = job.name;

  if (u.provenance.size() >= 2)
    rep.add("cross_base_consistency", cross_base_consistency(u.provenance, grid), job.tolerance("cross_base", 1e-7), gdom);
  if (b.alternate)
    rep.add("route_agreement", detail::route_disagreement(u, *b.alternate, grid), job.tolerance("route", 1e-10), gdom);

  {
    const bool expect_pt = b.chi && detail::prescribed_self_dual(u) && detail::anti_pt_residual(*b.chi, grid) <= 1e-12;
    rep.add("pt_symmetry", pt_symmetry_residual(u, grid), job.tolerance("pt", 1e-10), gdom, !expect_pt);
  }

  for (std::size_t j = 0; j < u.provenance.size(); ++j) {
    const BaseFunction& w = u.provenance[j];
    const std::string tag = "w" + std::to_string(j + 1);
    const SsSolutionResidual r = ss_solution_residuals(u, w, grid);
    rep.add("ss_solution_" + tag, r.analytic, job.tolerance("ss_solution", 1e-8), gdom);
    rep.add("ss_solution_fd_" + tag, r.fd, job.tolerance("ss_solution_fd", 1e-4), gdom);

    for (double s : w.profile.singular_locations())
      rep.add("node_" + tag + "@" + io::fmt(s), detail::node_amplitude(w, s), job.tolerance("node", 1e-8),
              "x=" + io::fmt(s));

    const bool alg = w.profile.decay().is_algebraic();
    const double X = alg ? 100.0 : 20.0;
    const auto [lhs, rhs] = asymptote_check(w, X);
    rep.add("asymptotes_" + tag, std::max(lhs, rhs), job.tolerance("asymptote", alg ? 1e-4 : 1e-6),
            "X=" + io::fmt(X));
    if (alg) {
      const double p = w.profile.decay().power;
      rep.add("tail_decay_" + tag, p > 2.0 ? 0.0 : 1.0, 0.0, "|x|^-" + io::fmt(p) + ", faster than |x|^-2 required");
    }
  }

  const TruncationSpec trunc = job_truncation(job, u);
  const JostSolver solver(u, trunc);
  const std::string sdom = "k in [" + io::fmt(job.scan.k_min) + ", " + io::fmt(job.scan.k_max) + "]";
  {
    const IdentityResiduals id = identity_residuals(solver, scan_wavenumbers(job.scan, 10));
    rep.add("det_M_scaled", id.det_scaled, job.tolerance("det", 1e-6), sdom);
    rep.add("det_M_absolute", id.det, job.tolerance("det", 1e-6), "worst at k=" + io::fmt(id.worst_det_k), true);
    rep.add("M11_M22_reflection", id.reflect, job.tolerance("m11_m22", 1e-5), sdom);
  }

  if (b.pseudo_hermitian) {
    const BaseFunction& w1 = u.provenance.front();
    const double k1 = w1.k;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      double k = job.scan.k_min + (job.scan.k_max - job.scan.k_min) * (i + 0.37) / 10.0;
      if (std::abs(std::abs(k) - std::abs(k1)) < 1e-2) k += 2e-2;
      worst = std::max(worst, pseudo_hermitian_residual(solver, k, k1));
    }
    rep.add("pseudo_hermitian_identity", worst, job.tolerance("pseudo_hermitian", 1e-4), sdom + ", 10 samples");
    rep.add("im_w1", imaginary_part_bound(w1, grid), job.tolerance("im_w1", 1e-9), gdom);
  }

  if (b.nu) {
    const auto& t = std::get<construction::ThreeSs>(job.construction);
    const ComplexProfile chi = chi_from_nu(*b.nu, t.k1, t.k2, t.k3);
    rep.add("nu_back_substitution", nu_quadratic_residual(chi, *b.nu, t.k1, t.k2, t.k3, grid.points()),
            job.tolerance("nu", 1e-9), gdom);
  }

  if (!u.profile.decay().is_algebraic()) {
    const double k = off_resonance_k(u, std::max(job.scan.k_min, 0.3), std::max(job.scan.k_max, 0.6));
    const TransferMatrix m = solver(k);
    const TransferMatrix fd = fd_transfer_oracle(u, k, trunc, 200001);
    rep.add("fd_transfer_oracle", relative_entry_difference(fd, m), job.tolerance("fd_oracle", 1e-4), "k=" + io::fmt(k));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// File output.

namespace detail {
inline std::string out_path(const CommandOptions& opt, const std::string& file) {
  std::filesystem::create_directories(opt.out_dir);
  return (std::filesystem::path(opt.out_dir) / file).string();
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}
}  // namespace detail

inline io::Table potential_table(const Potential& u, const RealGrid& grid) {
  io::Table t{"potential", {"x", "re_U", "im_U"}, {}};
  for (double x : grid.points()) {
    const cplx v = u(x);
    t.rows.push_back({x, v.real(), v.imag()});
  }
  return t;
}

inline io::Table base_table(const BaseFunction& w, const RealGrid& grid) {
  io::Table t{"base k=" + io::fmt(w.k), {"x", "re_w", "im_w"}, {}};
  for (double x : grid.points_avoiding(w.profile.singular_locations(), kExclusionRadius)) {
    const cplx v = w(x);
    t.rows.push_back({x, v.real(), v.imag()});
  }
  return t;
}

inline io::Table spectrum_table(const std::vector<SpectrumSample>& scan) {
  io::Table t{"spectrum", {"k", "abs_T", "abs_RL", "abs_RR", "re_m22", "im_m22"}, {}};
  for (const auto& s : scan)
    t.rows.push_back({s.k, std::abs(s.coefficients.T), std::abs(s.coefficients.RL), std::abs(s.coefficients.RR),
                      s.m22.real(), s.m22.imag()});
  return t;
}

// ---------------------------------------------------------------------------
// Commands. Each returns a process exit code.

template <class Body>
int run_guarded(const CommandOptions& opt, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    *opt.log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    *opt.log << e.name() << ": " << e.what() << "\n";
    return e.code() == ErrorCode::TailTooFat ? kExitTruncation : kExitConstruction;
  }
}

inline int cmd_build(const JobConfig& job, const CommandOptions& opt = {}) {
  return run_guarded(opt, [&] {
    validate(job);
    const BuiltJob b = build_job(job);
    potential_table(b.potential, job.grid).write_csv(detail::out_path(opt, "potential.csv"));
    for (std::size_t j = 0; j < b.potential.provenance.size(); ++j)
      base_table(b.potential.provenance[j], job.grid)
          .write_csv(detail::out_path(opt, "base_w" + std::to_string(j + 1) + ".csv"));
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_scan(const JobConfig& job, const CommandOptions& opt = {}) {
  return run_guarded(opt, [&] {
    validate(job);
    const BuiltJob b = build_job(job);
    const TruncationSpec trunc = job_truncation(job, b.potential);
    const auto scan = scan_spectrum(JostSolver(b.potential, trunc), job.scan.k_min, job.scan.k_max, job.scan.n);
    spectrum_table(scan).write_csv(detail::out_path(opt, "spectrum.csv"));
    if (opt.svg) {
      std::vector<double> ks, t, rl, rr;
      for (const auto& s : scan) {
        ks.push_back(s.k);
        t.push_back(std::abs(s.coefficients.T));
        rl.push_back(std::abs(s.coefficients.RL));
        rr.push_back(std::abs(s.coefficients.RR));
      }
      io::write_svg_plot(detail::out_path(opt, "spectrum.svg"), job.name + ": scattering moduli (log10)", "k", ks,
                         {{"|T|", t, "black"}, {"|R^L|", rl, "crimson"}, {"|R^R|", rr, "steelblue"}}, true);
    }
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_find_ss(const JobConfig& job, const CommandOptions& opt = {}) {
  return run_guarded(opt, [&] {
    validate(job);
    const BuiltJob b = build_job(job);
    const SsReport r = find_ss_report(job, b.potential);
    detail::write_json(detail::out_path(opt, "ss_report.json"), r.to_json());
    if (!r.matched) {
      *opt.log << "prescribed SS set not recovered\n";
      return static_cast<int>(kExitMismatch);
    }
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_verify(const JobConfig& job, const CommandOptions& opt = {}) {
  return run_guarded(opt, [&] {
    validate(job);
    const BuiltJob b = build_job(job);
    const VerificationReport rep = verification_report(job, b);
    detail::write_json(detail::out_path(opt, "verification.json"), rep.to_json());
    for (const auto& c : rep.checks)
      if (!c.pass())
        *opt.log << (c.informational ? "note: " : "FAILED: ") << c.name << " residual " << c.residual << " > "
                 << c.tolerance << "\n";
    return static_cast<int>(rep.all_passed() ? kExitOk : kExitVerify);
  });
}

}  // namespace ssd
