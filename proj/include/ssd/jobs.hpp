#pragma once
/**
 * @file jobs.hpp
 * @brief Declarative job configuration (JSON) and the built-in presets.
 */
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ssd/construct.hpp"
#include "ssd/scatter.hpp"

namespace ssd {

/// Invalid job configuration; reported before any numerics run.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace construction {
struct Free {};
struct TwoSs {
  double k1, k2;
  cplx a0, a1;
};
struct SelfDual {
  double k1;
  cplx a0, a1;
};
struct ClosedForm {
  double k1;
  cplx a0, a1;
};
struct SingularNode {
  double k1, k2;
};
struct SecondOrder {
  double k1;
};
struct PseudoHermitian {
  double a, k1, k2;
};
struct ThreeSs {
  double k1, k2, k3;
  cplx z;
};
}  // namespace construction

using Construction =
    std::variant<construction::Free, construction::TwoSs, construction::SelfDual, construction::ClosedForm,
                 construction::SingularNode, construction::SecondOrder, construction::PseudoHermitian,
                 construction::ThreeSs>;

struct ScanConfig {
  double k_min = -4.0;
  double k_max = 4.0;
  int n = 801;
};

struct JobConfig {
  std::string name = "custom";
  Construction construction = construction::Free{};
  ScanConfig scan;
  double L = 0.0;          ///< 0: default for the decay class
  double threshold = 0.0;  ///< 0: relative default
  double ss_tolerance = 1e-3;
  RealGrid grid{-10.0, 10.0, 2001};
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

inline std::string construction_type(const Construction& c) {
  static const char* names[] = {"free",         "two_ss",       "self_dual",        "closed_form",
                                "singular_node", "second_order", "pseudo_hermitian", "three_ss"};
  return names[c.index()];
}

// ---------------------------------------------------------------------------
// Validation.

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}
inline void require_k(double k, const char* name) {
  require(std::isfinite(k) && k != 0.0, std::string(name) + " must be a nonzero real");
}
inline void require_distinct(std::vector<double> ks) {
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) require(ks[i] != ks[j], "wavenumbers must be pairwise distinct");
}
}  // namespace detail

inline void validate(const JobConfig& job) {
  using namespace construction;
  using detail::require;
  using detail::require_k;
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TwoSs>) {
          require_k(c.k1, "k1");
          require_k(c.k2, "k2");
          detail::require_distinct({c.k1, c.k2});
          require(c.a0 != cplx(0.0), "a0 must be nonzero");
        } else if constexpr (std::is_same_v<T, SelfDual> || std::is_same_v<T, ClosedForm>) {
          require_k(c.k1, "k1");
          require(c.a0 != cplx(0.0), "a0 must be nonzero");
        } else if constexpr (std::is_same_v<T, SingularNode>) {
          require_k(c.k1, "k1");
          require_k(c.k2, "k2");
          detail::require_distinct({c.k1, c.k2});
        } else if constexpr (std::is_same_v<T, SecondOrder>) {
          require_k(c.k1, "k1");
        } else if constexpr (std::is_same_v<T, PseudoHermitian>) {
          require(c.a > 0.0, "a must be positive");
          require_k(c.k1, "k1");
          require_k(c.k2, "k2");
          detail::require_distinct({c.k1, c.k2});
          const double r = odd_singular_rho_constraint(c.a, c.k1, c.k2);
          require(std::abs(r) <= 1e-12, "(k1-k2)(k1+k2-3a)+3 must vanish, got " + std::to_string(r));
        } else if constexpr (std::is_same_v<T, ThreeSs>) {
          require_k(c.k1, "k1");
          require_k(c.k2, "k2");
          require_k(c.k3, "k3");
          detail::require_distinct({c.k1, c.k2, c.k3});
        }
      },
      job.construction);
  require(job.scan.k_min < job.scan.k_max, "scan.k_min must be below scan.k_max");
  require(job.scan.n >= 2, "scan.n must be at least 2");
  require(job.L >= 0.0, "truncation.L must be nonnegative");
  require(job.threshold >= 0.0, "threshold must be nonnegative");
  require(job.grid.x_min < job.grid.x_max && job.grid.n >= 2, "grid must satisfy x_min < x_max and n >= 2");
}

// ---------------------------------------------------------------------------
// JSON.

namespace detail {
inline cplx parse_complex(const nlohmann::json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(key + " must be a number or [re, im]");
}

inline double num(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing field '" + key + "'");
  if (!j[key].is_number()) throw ConfigError("field '" + key + "' must be a number");
  return j[key].get<double>();
}
inline cplx cnum(const nlohmann::json& j, const std::string& key, cplx fallback) {
  return j.contains(key) ? parse_complex(j[key], key) : fallback;
}
inline nlohmann::json complex_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return nlohmann::json::array({z.real(), z.imag()});
}
}  // namespace detail

inline Construction parse_construction(const nlohmann::json& j) {
  using namespace construction;
  using detail::cnum;
  using detail::num;
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ConfigError("construction must be an object with a string 'type'");
  const std::string t = j["type"];
  if (t == "free") return Free{};
  if (t == "two_ss") return TwoSs{num(j, "k1"), num(j, "k2"), cnum(j, "a0", 1.0), cnum(j, "a1", 0.0)};
  if (t == "self_dual") return SelfDual{num(j, "k1"), cnum(j, "a0", 1.0), cnum(j, "a1", 0.0)};
  if (t == "closed_form") return ClosedForm{num(j, "k1"), cnum(j, "a0", 1.0), cnum(j, "a1", 0.0)};
  if (t == "singular_node") return SingularNode{num(j, "k1"), num(j, "k2")};
  if (t == "second_order") return SecondOrder{num(j, "k1")};
  if (t == "pseudo_hermitian") return PseudoHermitian{num(j, "a"), num(j, "k1"), num(j, "k2")};
  if (t == "three_ss") return ThreeSs{num(j, "k1"), num(j, "k2"), num(j, "k3"), cnum(j, "z", 0.0)};
  throw ConfigError("unknown construction type '" + t + "'");
}

inline nlohmann::json construction_json(const Construction& c) {
  using namespace construction;
  using detail::complex_json;
  nlohmann::json j;
  j["type"] = construction_type(c);
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TwoSs>) {
          j["k1"] = v.k1, j["k2"] = v.k2, j["a0"] = complex_json(v.a0), j["a1"] = complex_json(v.a1);
        } else if constexpr (std::is_same_v<T, SelfDual> || std::is_same_v<T, ClosedForm>) {
          j["k1"] = v.k1, j["a0"] = complex_json(v.a0), j["a1"] = complex_json(v.a1);
        } else if constexpr (std::is_same_v<T, SingularNode>) {
          j["k1"] = v.k1, j["k2"] = v.k2;
        } else if constexpr (std::is_same_v<T, SecondOrder>) {
          j["k1"] = v.k1;
        } else if constexpr (std::is_same_v<T, PseudoHermitian>) {
          j["a"] = v.a, j["k1"] = v.k1, j["k2"] = v.k2;
        } else if constexpr (std::is_same_v<T, ThreeSs>) {
          j["k1"] = v.k1, j["k2"] = v.k2, j["k3"] = v.k3, j["z"] = complex_json(v.z);
        }
      },
      c);
  return j;
}

inline JobConfig parse_job(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  JobConfig job;
  if (j.contains("name")) job.name = j["name"].get<std::string>();
  if (!j.contains("construction")) throw ConfigError("missing 'construction'");
  job.construction = parse_construction(j["construction"]);
  if (j.contains("scan")) {
    const auto& s = j["scan"];
    job.scan.k_min = detail::num(s, "k_min");
    job.scan.k_max = detail::num(s, "k_max");
    job.scan.n = static_cast<int>(detail::num(s, "n"));
  }
  if (j.contains("truncation") && j["truncation"].contains("L")) job.L = detail::num(j["truncation"], "L");
  if (j.contains("threshold")) job.threshold = detail::num(j, "threshold");
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    const double lo = detail::num(g, "x_min"), hi = detail::num(g, "x_max");
    const int n = static_cast<int>(detail::num(g, "n"));
    if (!(lo < hi) || n < 2) throw ConfigError("grid must satisfy x_min < x_max and n >= 2");
    job.grid = RealGrid(lo, hi, n);
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number()) throw ConfigError("tolerance '" + k + "' must be a number");
      job.tolerances[k] = v.get<double>();
    }
    job.ss_tolerance = job.tolerance("ss_location", job.ss_tolerance);
  }
  validate(job);
  return job;
}

inline JobConfig load_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_job(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
}

inline nlohmann::json job_json(const JobConfig& job) {
  nlohmann::json j;
  j["name"] = job.name;
  j["construction"] = construction_json(job.construction);
  j["scan"] = {{"k_min", job.scan.k_min}, {"k_max", job.scan.k_max}, {"n", job.scan.n}};
  j["truncation"] = {{"L", job.L}};
  j["threshold"] = job.threshold;
  j["grid"] = {{"x_min", job.grid.x_min}, {"x_max", job.grid.x_max}, {"n", job.grid.n}};
  return j;
}

// ---------------------------------------------------------------------------
// Presets.

inline std::vector<std::string> preset_names() {
  return {"fig1a", "fig1d", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "free"};
}

inline JobConfig preset(const std::string& name) {
  using namespace construction;
  JobConfig job;
  job.name = name;
  if (name == "fig1a") {
    job.construction = SelfDual{2.5, 2.0, 0.0};
  } else if (name == "fig1d") {
    job.construction = SelfDual{2.5, {2.0, 1.0}, {1.0, -1.0}};
  } else if (name == "fig2") {
    job.construction = TwoSs{2.5, 3.0, 1.0, 0.0};
  } else if (name == "fig3") {
    job.construction = SingularNode{0.5, 3.0};
  } else if (name == "fig4") {
    job.construction = SecondOrder{1.0};
    job.scan = {-3.0, 3.0, 601};
  } else if (name == "fig5") {
    job.construction = PseudoHermitian{1.0, 0.5, -0.5};
    job.scan = {-1.5, 1.5, 601};
    job.L = 200.0;
  } else if (name == "fig6") {
    job.construction = PseudoHermitian{1.0, 2.5, -0.5};
    job.scan = {-3.5, 3.5, 701};
    job.L = 200.0;
  } else if (name == "fig7") {
    job.construction = ThreeSs{1.0, 2.0, 3.0, {-0.5, -0.1}};
    job.scan = {0.5, 3.5, 601};
  } else if (name == "free") {
    job.construction = Free{};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  validate(job);
  return job;
}

// ---------------------------------------------------------------------------
// Building.

struct BuiltJob {
  Potential potential;
  std::optional<ComplexProfile> chi;  ///< chi_1 for two-SS constructions
  std::optional<ComplexProfile> nu;   ///< nu_1 for three-SS constructions
  std::optional<Potential> alternate; ///< independent route to the same U (closed form)
  bool pseudo_hermitian = false;
};

inline BuiltJob build_job(const JobConfig& job) {
  using namespace construction;
  BuiltJob b;
  std::visit(
      [&b](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Free>) {
          b.potential.profile = ComplexProfile::constant(0.0);
        } else if constexpr (std::is_same_v<T, TwoSs>) {
          b.chi = tanh_sech_chi(c.k1, c.k2, c.a0, c.a1);
          b.potential = potential_from_chi(*b.chi, c.k1, c.k2);
        } else if constexpr (std::is_same_v<T, SelfDual>) {
          b.chi = tanh_sech_chi(c.k1, -c.k1, c.a0, c.a1);
          b.potential = selfdual_potential_from_chi(*b.chi, c.k1);
          b.alternate = closed_form_two_ss_potential(c.k1, c.a0, c.a1);
        } else if constexpr (std::is_same_v<T, ClosedForm>) {
          b.chi = tanh_sech_chi(c.k1, -c.k1, c.a0, c.a1);
          b.potential = closed_form_two_ss_potential(c.k1, c.a0, c.a1);
          b.alternate = selfdual_potential_from_chi(*b.chi, c.k1);
        } else if constexpr (std::is_same_v<T, SingularNode>) {
          b.chi = singular_node_chi(c.k1, c.k2);
          b.potential = potential_from_chi(*b.chi, c.k1, c.k2);
        } else if constexpr (std::is_same_v<T, SecondOrder>) {
          b.potential = second_order_potential(c.k1);
          Potential via_base = potential_from_base(second_order_base(c.k1));
          via_base.prescribed_ss = {{c.k1, 2}};
          b.alternate = via_base;
        } else if constexpr (std::is_same_v<T, PseudoHermitian>) {
          b.chi = pseudo_hermitian_chi(odd_singular_rho(c.a, c.k1, c.k2), c.k1, c.k2);
          b.potential = pseudo_hermitian_potential(c.a, c.k1, c.k2);
          b.pseudo_hermitian = true;
        } else if constexpr (std::is_same_v<T, ThreeSs>) {
          b.nu = gaussian_nu(c.k1, c.k2, c.k3, c.z);
          b.potential = three_ss_potential(*b.nu, c.k1, c.k2, c.k3);
        }
      },
      job.construction);
  return b;
}

inline TruncationSpec job_truncation(const JobConfig& job, const Potential& u) { return make_truncation(u, job.L); }

}  // namespace ssd
