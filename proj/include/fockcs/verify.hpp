#pragma once

// Numerical checks of the coherent-state axioms (action identity, temporal
// stability, eigenstate property, resolution of identity through the moment
// problem) plus the operator and duality identities, collected into reports.
//
// Residual conventions: relative where the reference is nonzero, absolute
// otherwise; each entry records which. Skipped entries never count as passed,
// and the overall verdict is the conjunction of the entries that ran.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fockcs/numerics.hpp"
#include "fockcs/operators.hpp"
#include "fockcs/spectra.hpp"
#include "fockcs/states.hpp"
#include "fockcs/weights.hpp"

namespace fockcs {

using json = nlohmann::ordered_json;

enum class EntryStatus { pass, fail, skipped, truncation_limited, aborted };

inline std::string to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::pass: return "pass";
    case EntryStatus::fail: return "fail";
    case EntryStatus::skipped: return "skipped";
    case EntryStatus::truncation_limited: return "truncation-limited";
    case EntryStatus::aborted: return "aborted";
  }
  return "unknown";
}

struct CriteriaEntry {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  EntryStatus status = EntryStatus::fail;
  bool relative = true;
  json details = json::object();

  bool skipped() const { return status == EntryStatus::skipped; }
};

struct CriteriaReport {
  std::string model;
  std::string family;
  std::vector<CriteriaEntry> entries;
  bool aborted = false;
  json config = json::object();

  /// Conjunction over the entries that ran; false when nothing ran or the
  /// suite aborted.
  bool pass() const {
    if (aborted) return false;
    bool any = false;
    for (const auto& e : entries) {
      if (e.skipped()) continue;
      any = true;
      if (!e.pass) return false;
    }
    return any;
  }

  const CriteriaEntry* find(const std::string& name) const {
    for (const auto& e : entries) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
};

/// Non-finite residuals are serialized as strings so the report stays valid JSON.
inline json residual_json(double r) {
  if (std::isfinite(r)) return r;
  if (std::isnan(r)) return "nan";
  return r > 0 ? "inf" : "-inf";
}

inline json to_json(const CriteriaEntry& e) {
  json j;
  j["name"] = e.name;
  j["residual"] = residual_json(e.residual);
  j["tolerance"] = e.tolerance;
  j["pass"] = e.pass;
  j["status"] = to_string(e.status);
  j["measure"] = e.relative ? "relative" : "absolute";
  j["details"] = e.details;
  return j;
}

inline json to_json(const CriteriaReport& r) {
  json j;
  j["model"] = r.model;
  j["family"] = r.family;
  j["entries"] = json::array();
  for (const auto& e : r.entries) j["entries"].push_back(to_json(e));
  j["pass"] = r.pass();
  j["aborted"] = r.aborted;
  j["config"] = r.config;
  return j;
}

struct SuiteConfig {
  int radial_points = 8;
  int angular_points = 4;
  double radial_lo = 0.1;
  double radial_hi = 0.9;
  /// Stand-in radius for grids when the series converges on the whole plane.
  double radius_cap = 3.0;
  std::vector<double> alphas{0.0, 0.7, 2.3};
  std::vector<double> times{0.0, 0.5, 3.1};
  /// Identities mediated by series summation.
  double series_tol = 1e-9;
  /// Closed forms built from Bessel series.
  double bessel_tol = 1e-8;
  /// Matrix-exponential mediated checks (1 - fidelity).
  double expm_tol = 1e-6;
  /// Elementwise operator and phase identities.
  double exact_tol = 1e-12;
  double temporal_tol = 1e-12;
  double eigen_floor = 1e-10;
  double quadrature_tol = 1e-10;
  double derived_quadrature_tol = 1e-8;
  double overlap_tol = 1e-8;
  double self_dual_tol = 1e-13;
  double interpolation_tol = 1e-10;
  int operator_cutoff = 60;
  int moment_max = 15;
  int duality_max = 60;
  double displacement_z = 0.3;
  double displacement_alpha = 0.5;
  int displacement_cutoff = 60;
  double generalized_J = 0.4;
  double generalized_theta = 1.2;
  TruncationConfig truncation;
};

inline json to_json(const SuiteConfig& c) {
  json j;
  j["radial_points"] = c.radial_points;
  j["angular_points"] = c.angular_points;
  j["radial_lo"] = c.radial_lo;
  j["radial_hi"] = c.radial_hi;
  j["radius_cap"] = c.radius_cap;
  j["alphas"] = c.alphas;
  j["times"] = c.times;
  j["series_tol"] = c.series_tol;
  j["bessel_tol"] = c.bessel_tol;
  j["expm_tol"] = c.expm_tol;
  j["exact_tol"] = c.exact_tol;
  j["temporal_tol"] = c.temporal_tol;
  j["eigen_floor"] = c.eigen_floor;
  j["quadrature_tol"] = c.quadrature_tol;
  j["derived_quadrature_tol"] = c.derived_quadrature_tol;
  j["overlap_tol"] = c.overlap_tol;
  j["self_dual_tol"] = c.self_dual_tol;
  j["interpolation_tol"] = c.interpolation_tol;
  j["operator_cutoff"] = c.operator_cutoff;
  j["moment_max"] = c.moment_max;
  j["duality_max"] = c.duality_max;
  j["displacement_z"] = c.displacement_z;
  j["displacement_alpha"] = c.displacement_alpha;
  j["displacement_cutoff"] = c.displacement_cutoff;
  j["generalized_J"] = c.generalized_J;
  j["generalized_theta"] = c.generalized_theta;
  j["tail_tol"] = c.truncation.tail_tol;
  j["max_cutoff"] = c.truncation.max_cutoff;
  return j;
}

/// Reads a (possibly partial) config object; absent keys keep their defaults.
inline SuiteConfig suite_config_from_json(const json& j) {
  SuiteConfig c;
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("radial_points", c.radial_points);
  get("angular_points", c.angular_points);
  get("radial_lo", c.radial_lo);
  get("radial_hi", c.radial_hi);
  get("radius_cap", c.radius_cap);
  get("alphas", c.alphas);
  get("times", c.times);
  get("series_tol", c.series_tol);
  get("bessel_tol", c.bessel_tol);
  get("expm_tol", c.expm_tol);
  get("exact_tol", c.exact_tol);
  get("temporal_tol", c.temporal_tol);
  get("eigen_floor", c.eigen_floor);
  get("quadrature_tol", c.quadrature_tol);
  get("derived_quadrature_tol", c.derived_quadrature_tol);
  get("overlap_tol", c.overlap_tol);
  get("self_dual_tol", c.self_dual_tol);
  get("interpolation_tol", c.interpolation_tol);
  get("operator_cutoff", c.operator_cutoff);
  get("moment_max", c.moment_max);
  get("duality_max", c.duality_max);
  get("displacement_z", c.displacement_z);
  get("displacement_alpha", c.displacement_alpha);
  get("displacement_cutoff", c.displacement_cutoff);
  get("generalized_J", c.generalized_J);
  get("generalized_theta", c.generalized_theta);
  get("tail_tol", c.truncation.tail_tol);
  get("max_cutoff", c.truncation.max_cutoff);
  if (c.radial_points < 1 || c.angular_points < 1) {
    throw std::invalid_argument("suite config: grid sizes must be positive");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Grids

/// Radius used for grids: the analytic radius when finite, else the numerical
/// estimate, capped for entire series and finite-dimensional models.
inline double grid_radius(const SpectrumModel& model, bool dual, const SuiteConfig& cfg) {
  std::optional<double> r = analytic_radius(model, dual);
  if (!r) r = estimate_radius(model, dual, cfg.truncation.max_cutoff, cfg.truncation.radius_window);
  return std::min(*r, cfg.radius_cap);
}

/// radial_points moduli evenly spaced over [radial_lo, radial_hi] * R times
/// angular_points phases at 2 pi (k + 1/8) / angular_points.
inline std::vector<cplx> z_grid(double radius, const SuiteConfig& cfg) {
  std::vector<cplx> g;
  for (int i = 0; i < cfg.radial_points; ++i) {
    const double f = cfg.radial_points == 1
                         ? cfg.radial_lo
                         : cfg.radial_lo + (cfg.radial_hi - cfg.radial_lo) * i / (cfg.radial_points - 1);
    for (int k = 0; k < cfg.angular_points; ++k) {
      const double th = 2.0 * std::numbers::pi * (k + 0.125) / cfg.angular_points;
      g.push_back(std::polar(f * radius, th));
    }
  }
  return g;
}

inline json z_json(cplx z) { return json::array({z.real(), z.imag()}); }

namespace detail {

inline CriteriaEntry make_entry(std::string name, double residual, double tol, bool relative,
                                json details = json::object()) {
  CriteriaEntry e;
  e.name = std::move(name);
  e.residual = residual;
  e.tolerance = tol;
  e.relative = relative;
  e.pass = std::isfinite(residual) && residual <= tol;
  e.status = e.pass ? EntryStatus::pass : EntryStatus::fail;
  e.details = std::move(details);
  return e;
}

inline CriteriaEntry skipped_entry(std::string name, std::string reason) {
  CriteriaEntry e;
  e.name = std::move(name);
  e.status = EntryStatus::skipped;
  e.pass = false;
  e.details["reason"] = std::move(reason);
  return e;
}

inline CriteriaEntry error_entry(std::string name, double tol, const std::exception& ex,
                                 json details = json::object()) {
  CriteriaEntry e = make_entry(std::move(name), std::numeric_limits<double>::infinity(), tol, true,
                               std::move(details));
  e.details["error"] = ex.what();
  return e;
}

inline FockVector family_state(const SpectrumModel& model, bool dual, cplx z, double alpha,
                               const TruncationConfig& cfg) {
  return dual ? dgkcs(model, z, alpha, cfg) : gkcs(model, z, alpha, cfg);
}

inline double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

// |exp(d_log + i d_phase) - 1| for one component of two log-form vectors.
inline double log_component_error(double dlog, double dphase) {
  return std::abs(std::exp(cplx{dlog, wrap_angle(dphase)}) - cplx{1.0, 0.0});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Individual checks

/// max over the grid and alphas of |<H> - omega |z|^2| / (omega |z|^2), using
/// the family's own Hamiltonian.
inline CriteriaEntry check_action_identity(const SpectrumModel& model, bool dual,
                                           const std::vector<cplx>& grid,
                                           const std::vector<double>& alphas,
                                           double tol = 1e-9, const TruncationConfig& tc = {}) {
  double worst = 0.0;
  json at;
  int checked = 0;
  for (double alpha : alphas) {
    for (cplx z : grid) {
      const double x = std::norm(z);
      if (x == 0.0) continue;
      const FockVector s = detail::family_state(model, dual, z, alpha, tc);
      const double h = energy_expectation(model, s, dual);
      const double target = model.omega() * x;
      const double r = std::abs(h - target) / target;
      ++checked;
      if (!(r <= worst)) {
        worst = r;
        at = {{"z", z_json(z)}, {"alpha", alpha}, {"expectation", h}, {"target", target},
              {"cutoff", s.cutoff}};
      }
    }
  }
  json d{{"points", checked}, {"worst", at}};
  return detail::make_entry("action_identity", worst, tol, true, d);
}

/// max over the grid, alphas and times of ||S(omega t)|z,alpha> - |z,alpha+omega t>||.
inline CriteriaEntry check_temporal_stability(const SpectrumModel& model, bool dual,
                                              const std::vector<cplx>& grid,
                                              const std::vector<double>& alphas,
                                              const std::vector<double>& times,
                                              double tol = 1e-12,
                                              const TruncationConfig& tc = {}) {
  double worst = 0.0;
  json at;
  for (double alpha : alphas) {
    for (cplx z : grid) {
      const FockVector s = detail::family_state(model, dual, z, alpha, tc);
      for (double t : times) {
        const double shift = model.omega() * t;
        const FockVector target = detail::family_state(model, dual, z, alpha + shift, tc);
        const int N = std::max(s.cutoff, 1);
        const TruncatedOperator S = evolution(model, shift, N, dual);
        const CVector moved = S.entries.topLeftCorner(s.cutoff + 1, s.cutoff + 1) * s.amplitudes;
        const double r = (moved - padded(target, s.cutoff).amplitudes.head(s.cutoff + 1)).norm();
        if (!(r <= worst)) {
          worst = r;
          at = {{"z", z_json(z)}, {"alpha", alpha}, {"t", t}};
        }
      }
    }
  }
  return detail::make_entry("temporal_stability", worst, tol, false, {{"worst", at}});
}

/// exp(-iHt') |J,theta,t> = |J,theta,t+t'> over the time grid.
inline CriteriaEntry check_generalized_stability(const SpectrumModel& model, bool dual, double J,
                                                 double theta, const std::vector<double>& times,
                                                 double tol = 1e-12,
                                                 const TruncationConfig& tc = {}) {
  double worst = 0.0;
  json at;
  for (double t : times) {
    const FockVector s = generalized_gkcs(model, J, theta, t, dual, tc);
    for (double tp : times) {
      const FockVector target = generalized_gkcs(model, J, theta, t + tp, dual, tc);
      const TruncatedOperator U = evolution(model, model.omega() * tp, std::max(s.cutoff, 1), dual);
      const CVector moved = U.entries.topLeftCorner(s.cutoff + 1, s.cutoff + 1) * s.amplitudes;
      const double r = (moved - target.amplitudes).norm();
      if (!(r <= worst)) {
        worst = r;
        at = {{"t", t}, {"t_prime", tp}};
      }
    }
  }
  return detail::make_entry("generalized_temporal_stability", worst, tol, false,
                            {{"J", J}, {"theta", theta}, {"worst", at}});
}

/// ||A s - z s|| on rows 0..N-1 with the boundary row N reported separately.
/// Tolerance is max(floor, 10 * tail bound) of the worst state.
inline CriteriaEntry check_eigenstate(const SpectrumModel& model, bool dual,
                                      const std::vector<cplx>& grid,
                                      const std::vector<double>& alphas, double floor = 1e-10,
                                      const TruncationConfig& tc = {}) {
  double worst = 0.0, worst_boundary = 0.0, worst_tol = floor;
  bool ok = true;
  json at;
  for (double alpha : alphas) {
    for (cplx z : grid) {
      const FockVector s = detail::family_state(model, dual, z, alpha, tc);
      if (s.cutoff < 1) continue;
      const TruncatedOperator A = ladder(model, alpha, s.cutoff, dual ? Ladder::dualA : Ladder::A);
      const CVector diff = A.entries * s.amplitudes - z * s.amplitudes;
      const double interior = diff.head(s.cutoff).norm();
      const double boundary = std::abs(diff(s.cutoff));
      const double tol = std::max(floor, 10.0 * s.tail_bound);
      if (interior > tol) ok = false;
      worst_boundary = std::max(worst_boundary, boundary);
      if (!(interior <= worst)) {
        worst = interior;
        worst_tol = tol;
        at = {{"z", z_json(z)}, {"alpha", alpha}, {"cutoff", s.cutoff}, {"tail_bound", s.tail_bound}};
      }
    }
  }
  CriteriaEntry e = detail::make_entry("eigenstate", worst, worst_tol, false,
                                       {{"boundary_residual", worst_boundary}, {"worst", at}});
  e.pass = ok && std::isfinite(worst);
  e.status = e.pass ? EntryStatus::pass : EntryStatus::fail;
  return e;
}

/// ||(A~)^2 s - z^2 s|| for the even and odd dual superpositions, rows 0..N-2.
inline CriteriaEntry check_superposition_eigenstate(const SpectrumModel& model,
                                                    const std::vector<cplx>& grid, double alpha,
                                                    double tol = 1e-10,
                                                    const TruncationConfig& tc = {}) {
  double worst = 0.0, boundary = 0.0;
  json at;
  for (cplx z : grid) {
    for (int parity : {1, -1}) {
      const FockVector s = even_odd(model, z, alpha, parity, tc);
      if (s.cutoff < 2) continue;
      const CMatrix A = ladder(model, alpha, s.cutoff, Ladder::dualA).entries;
      const CVector diff = A * (A * s.amplitudes) - z * z * s.amplitudes;
      const double r = diff.head(s.cutoff - 1).norm();
      boundary = std::max(boundary, diff.tail(2).norm());
      if (!(r <= worst)) {
        worst = r;
        at = {{"z", z_json(z)}, {"parity", parity}};
      }
    }
  }
  return detail::make_entry("superposition_eigenstate", worst, tol, false,
                            {{"alpha", alpha}, {"boundary_residual", boundary}, {"worst", at}});
}

/// Moment problem: max over n of |int x^n sigma(x) dx - m(n)| / m(n). The
/// hydrogen dual moments have no elementary weight and are checked against
/// 2 n! [(n+1)!]^2 / (n+2)! instead.
inline CriteriaEntry check_resolution_identity(const SpectrumModel& model, bool dual, int n_max,
                                               double tol = 1e-10, double derived_tol = 1e-8) {
  const std::string name = "resolution_identity";
  const std::string scope = "moment problem at fixed alpha; the alpha average is exact by construction";
  if (model.finite()) n_max = std::min(n_max, model.max_index());
  const MomentTable t = moment_table(model, n_max);
  if (model.kind() == SpectrumKind::hydrogen && dual) {
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const double identity = std::log(2.0) + log_factorial(n) + 2.0 * log_factorial(n + 1) -
                              log_factorial(n + 2);
      worst = std::max(worst, std::abs(std::expm1(identity - t.log_mu[static_cast<std::size_t>(n)])));
    }
    return detail::make_entry(name, worst, tol, true,
                              {{"method", "algebraic moment identity 2 n! [(n+1)!]^2 / (n+2)!"},
                               {"n_max", n_max}, {"scope", scope}});
  }
  const WeightFunction w = moment_weight(model, dual);
  if (!w.available()) return detail::skipped_entry(name, "no closed-form weight: " + w.note);
  const double use_tol = w.kind == WeightKind::derived_closed_form ? derived_tol : tol;
  double worst = 0.0;
  int worst_n = 0, depth = 0;
  bool converged = true;
  NumericsConfig nc;
  nc.quadrature_target = std::min(nc.quadrature_target, use_tol);
  for (int n = 0; n <= n_max; ++n) {
    auto f = [&w, n](double x) { return std::pow(x, n) * w(x); };
    const IntegrationResult q = integrate_adaptive(f, 0.0, w.support_radius, nc);
    converged = converged && q.converged;
    depth = std::max(depth, q.max_depth);
    const double ref = std::exp(t.log_moments(dual)[static_cast<std::size_t>(n)]);
    const double r = std::abs(q.value - ref) / ref;
    if (!(r <= worst)) {
      worst = r;
      worst_n = n;
    }
  }
  CriteriaEntry e = detail::make_entry(
      name, worst, use_tol, true,
      {{"weight", w.formula}, {"weight_kind", to_string(w.kind)}, {"n_max", n_max},
       {"worst_n", worst_n}, {"refinement_depth", depth}, {"converged", converged},
       {"scope", scope}});
  if (!converged) {
    e.pass = false;
    e.status = EntryStatus::fail;
  }
  return e;
}

/// Pairs of labels used for overlap checks: five fixed fractions of R.
inline std::vector<std::pair<cplx, cplx>> overlap_pairs(double radius) {
  const double r = radius;
  return {{std::polar(0.2 * r, 0.3), std::polar(0.5 * r, -0.7)},
          {std::polar(0.4 * r, 1.1), std::polar(0.4 * r, 2.0)},
          {std::polar(0.6 * r, -2.5), std::polar(0.3 * r, 0.9)},
          {std::polar(0.8 * r, 0.0), std::polar(0.7 * r, 0.5)},
          {std::polar(0.85 * r, 2.9), std::polar(0.15 * r, -1.4)}};
}

/// Series versus closed forms for N(x) over the grid moduli and for the
/// overlap over five (z, z') pairs.
inline CriteriaEntry check_closed_forms(const SpectrumModel& model, bool dual,
                                        const std::vector<cplx>& grid, double radius,
                                        const SuiteConfig& cfg = {}) {
  const std::string name = "closed_forms";
  if (!closed_form_series(model, cplx{0.1, 0.0}, dual)) {
    return detail::skipped_entry(name, "no closed form registered");
  }
  const bool bessel = (model.kind() == SpectrumKind::hydrogen && dual) ||
                      ((model.kind() == SpectrumKind::su11_gp) == dual &&
                       (model.kind() == SpectrumKind::su11_gp || model.kind() == SpectrumKind::su11_bg));
  const double norm_tol = bessel ? cfg.bessel_tol : cfg.series_tol;
  double worst_norm = 0.0, worst_overlap = 0.0;
  for (cplx z : grid) {
    const double x = std::norm(z);
    const double series = normalization(model, x, dual, cfg.truncation);
    const double closed = *closed_form_normalization(model, x, dual);
    worst_norm = std::max(worst_norm, std::abs(series - closed) / std::abs(closed));
  }
  const double alpha = cfg.alphas.empty() ? 0.0 : cfg.alphas.back();
  for (const auto& [z, zp] : overlap_pairs(radius)) {
    const cplx direct = overlap_states(model, z, zp, alpha, dual, cfg.truncation);
    const cplx closed = *closed_form_overlap(model, z, zp, dual);
    worst_overlap = std::max(worst_overlap, std::abs(direct - closed) / std::abs(closed));
  }
  const double residual = std::max(worst_norm / norm_tol, worst_overlap / cfg.overlap_tol);
  CriteriaEntry e = detail::make_entry(
      name, residual, 1.0, true,
      {{"normalization_residual", worst_norm}, {"normalization_tol", norm_tol},
       {"overlap_residual", worst_overlap}, {"overlap_tol", cfg.overlap_tol},
       {"overlap_pairs", 5}, {"measure_note", "residual is the larger tolerance ratio"}});
  return e;
}

/// Operator identities at cutoff N (finite models: N = max index), interior
/// indices only: A^dag A = diag(l), [A, A^dag] = diag(l_{n+1} - l_n),
/// [A, B^dag] = I, S(alpha) a S(alpha)^dag = A(alpha), [A, n] = A.
inline CriteriaEntry check_operator_algebra(const SpectrumModel& model, bool dual, int N,
                                            const std::vector<double>& alphas,
                                            double tol = 1e-12) {
  if (model.finite()) N = std::min(N, model.max_index());
  const Ladder lo = dual ? Ladder::dualA : Ladder::A;
  const Ladder hi = dual ? Ladder::dualA_dag : Ladder::A_dag;
  const Conjugate bd = dual ? Conjugate::dualB_dag : Conjugate::B_dag;
  double worst = 0.0, boundary = 0.0;
  json parts = json::object();
  auto record = [&](const std::string& key, const OperatorResidual& r) {
    const double prev = parts.contains(key) ? parts[key].get<double>() : 0.0;
    parts[key] = std::max(prev, r.interior);
    worst = std::max(worst, r.interior);
    boundary = std::max(boundary, r.boundary);
  };
  const CMatrix H = hamiltonian(model, N, dual).entries / model.omega();
  CMatrix gaps = CMatrix::Zero(N + 1, N + 1);
  for (int n = 0; n < N; ++n) gaps(n, n) = level(model, n + 1, dual) - level(model, n, dual);
  const CMatrix check = check_a(model, N, false, dual).entries;
  const CMatrix num = number_operator(N).entries;
  for (double alpha : alphas) {
    const TruncatedOperator A = ladder(model, alpha, N, lo);
    const TruncatedOperator Ad = ladder(model, alpha, N, hi);
    const TruncatedOperator Bd = conjugate_b(model, alpha, N, bd);
    const CMatrix S = evolution(model, alpha, N, dual).entries;
    record("factorization", operator_residual(Ad.entries * A.entries, H));
    record("ladder_commutator", operator_residual(commutator(A, Ad).entries, gaps));
    record("weyl_heisenberg", operator_residual(commutator(A, Bd).entries, CMatrix::Identity(N + 1, N + 1)));
    record("conjugation", operator_residual(S * check * S.adjoint(), A.entries));
    record("number_commutator", operator_residual(A.entries * num - num * A.entries, A.entries));
    // Adjoint consistency is exact by construction; recorded for completeness.
    record("adjoint", operator_residual(Ad.entries, A.entries.adjoint()));
  }
  return detail::make_entry("operator_algebra", worst, tol, true,
                            {{"cutoff", N}, {"parts", parts}, {"boundary_residual", boundary}});
}

/// 1 - |<z|D|0>| / ||D|0>|| against the family's coherent state.
inline double displacement_infidelity(const SpectrumModel& model, bool dual, cplx z, double alpha,
                                      int N, const TruncationConfig& tc = {}) {
  const TruncatedOperator D =
      displacement(model, z, alpha, N, dual ? Displacement::dualD : Displacement::D);
  CVector v = D.entries.col(0);
  v /= v.norm();
  FockVector s = detail::family_state(model, dual, z, alpha, tc);
  if (s.cutoff > N) throw ConvergenceError("displacement check: state cutoff exceeds N");
  s = padded(s, N);
  return 1.0 - std::abs(s.amplitudes.dot(v));
}

/// Vacuum orbit of the displacement operator versus the coherent state. A
/// failure is re-run once at 2N; a >= 10x improvement marks it truncation-limited.
inline CriteriaEntry check_displacement(const SpectrumModel& model, bool dual, double modulus,
                                        double alpha, int N, double tol = 1e-6,
                                        const TruncationConfig& tc = {}) {
  const std::string name = "displacement";
  if (model.finite()) {
    return detail::skipped_entry(name, "finite-dimensional model: margin cutoff unavailable");
  }
  const std::vector<cplx> zs{std::polar(modulus, 0.4), std::polar(0.5 * modulus, -1.3)};
  double worst = 0.0;
  json at;
  try {
    for (cplx z : zs) {
      const double r = displacement_infidelity(model, dual, z, alpha, N, tc);
      if (!(r <= worst)) {
        worst = r;
        at = z_json(z);
      }
    }
  } catch (const std::exception& ex) {
    return detail::error_entry(name, tol, ex, {{"cutoff", N}});
  }
  CriteriaEntry e = detail::make_entry(name, worst, tol, true,
                                       {{"cutoff", N}, {"alpha", alpha}, {"worst_z", at},
                                        {"measure_note", "1 - fidelity"}});
  if (!e.pass) {
    try {
      double wider = 0.0;
      for (cplx z : zs) wider = std::max(wider, displacement_infidelity(model, dual, z, alpha, 2 * N, tc));
      e.details["residual_at_2N"] = wider;
      if (wider * 10.0 <= worst) e.status = EntryStatus::truncation_limited;
    } catch (const std::exception& ex) {
      e.details["residual_at_2N_error"] = ex.what();
    }
  }
  return e;
}

/// max elementwise |gk amplitude - dual amplitude| over the grid and alphas.
inline double self_duality_residual(const SpectrumModel& model, const std::vector<cplx>& grid,
                                    const std::vector<double>& alphas,
                                    const TruncationConfig& tc = {}) {
  double worst = 0.0;
  for (double alpha : alphas) {
    for (cplx z : grid) {
      FockVector a, b;
      try {
        a = gkcs(model, z, alpha, tc);
        b = dgkcs(model, z, alpha, tc);
      } catch (const std::domain_error&) {
        // Outside one family's radius: not comparable as normalized states.
        return std::numeric_limits<double>::infinity();
      }
      const int N = std::max(a.cutoff, b.cutoff);
      worst = std::max(worst, (padded(a, N).amplitudes - padded(b, N).amplitudes).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

/// Self-duality holds only for the harmonic spectrum; for any other model the
/// entry passes when the residual correctly exposes the difference.
inline CriteriaEntry check_self_duality(const SpectrumModel& model, const std::vector<cplx>& grid,
                                        const std::vector<double>& alphas, double tol = 1e-13,
                                        const TruncationConfig& tc = {}) {
  const bool expected = model.kind() == SpectrumKind::harmonic;
  bool usable = false;
  for (cplx z : grid) usable = usable || z != cplx{};
  if (!usable) {
    return detail::skipped_entry("self_duality", "the two families share no admissible label z != 0");
  }
  const double r = self_duality_residual(model, grid, alphas, tc);
  CriteriaEntry e = detail::make_entry("self_duality", r, tol, false,
                                       {{"expected", expected ? "self-dual" : "not self-dual"}});
  e.pass = expected ? r <= tol : !(r <= tol);
  e.status = e.pass ? EntryStatus::pass : EntryStatus::fail;
  return e;
}

/// The dual of SU(1,1) family `model` against the opposite family with the
/// same kappa: amplitudes must coincide.
inline CriteriaEntry check_cross_duality(const SpectrumModel& model,
                                         const std::vector<cplx>& grid,
                                         const std::vector<double>& alphas, double tol = 1e-12,
                                         const TruncationConfig& tc = {}) {
  const std::string name = "cross_duality";
  if (model.kind() != SpectrumKind::su11_gp && model.kind() != SpectrumKind::su11_bg) {
    return detail::skipped_entry(name, "only defined for the SU(1,1) pair");
  }
  const double kappa = model.param("kappa");
  const SpectrumModel partner = model.kind() == SpectrumKind::su11_gp
                                    ? SpectrumModel::su11_bg(kappa, model.omega())
                                    : SpectrumModel::su11_gp(kappa, model.omega());
  double worst = 0.0;
  for (double alpha : alphas) {
    for (cplx z : grid) {
      const FockVector a = dgkcs(model, z, alpha, tc);
      const FockVector b = gkcs(partner, z, alpha, tc);
      const int N = std::max(a.cutoff, b.cutoff);
      worst = std::max(worst, (padded(a, N).amplitudes - padded(b, N).amplitudes).cwiseAbs().maxCoeff());
    }
  }
  return detail::make_entry(name, worst, tol, false, {{"partner", partner.descriptor()}});
}

/// rho(n) mu(n) = (n!)^2 in the log domain, n = 0..n_max.
inline CriteriaEntry check_moment_duality(const SpectrumModel& model, int n_max,
                                          double tol = 1e-12) {
  if (model.finite()) n_max = std::min(n_max, model.max_index());
  const MomentTable t = moment_table(model, n_max);
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    worst = std::max(worst, std::abs(std::expm1(t.log_rho[i] + t.log_mu[i] - 2.0 * log_factorial(n))));
  }
  return detail::make_entry("moment_duality", worst, tol, true, {{"n_max", n_max}});
}

/// T maps unnormalized gk amplitudes (alpha = 0) to dual ones, and
/// exp(-i(H~ - H)t) T eta_{J,theta,t} = eta~_{J,theta,t} at each grid time.
inline CriteriaEntry check_interpolation(const SpectrumModel& model, double J, double theta,
                                         const std::vector<double>& times, int N,
                                         double map_tol = 1e-12, double rule_tol = 1e-10) {
  if (model.finite()) N = std::min(N, model.max_index());
  const TruncatedOperator T = interpolator(model, N);
  const LogAmplitudes gk0 = apply_log(T, unnormalized_generalized(model, J, theta, 0.0, false, N));
  const LogAmplitudes dual0 = unnormalized_generalized(model, J, theta, 0.0, true, N);
  double map_res = 0.0;
  for (std::size_t n = 0; n < gk0.size(); ++n) {
    map_res = std::max(map_res, detail::log_component_error(gk0.log_modulus[n] - dual0.log_modulus[n],
                                                            gk0.phase[n] - dual0.phase[n]));
  }
  double rule_res = 0.0;
  for (double t : times) {
    LogAmplitudes mapped = apply_log(T, unnormalized_generalized(model, J, theta, t, false, N));
    const LogAmplitudes target = unnormalized_generalized(model, J, theta, t, true, N);
    for (std::size_t n = 0; n < mapped.size(); ++n) {
      const double shift = -model.omega() * (dual_eigenvalue(model, static_cast<int>(n)) -
                                             eigenvalue(model, static_cast<int>(n))) * t;
      rule_res = std::max(rule_res,
                          detail::log_component_error(mapped.log_modulus[n] - target.log_modulus[n],
                                                      mapped.phase[n] + shift - target.phase[n]));
    }
  }
  const double residual = std::max(map_res / map_tol, rule_res / rule_tol);
  return detail::make_entry("interpolation", residual, 1.0, true,
                            {{"cutoff", N}, {"map_residual", map_res}, {"map_tol", map_tol},
                             {"rule_residual", rule_res}, {"rule_tol", rule_tol},
                             {"J", J}, {"theta", theta},
                             {"measure_note", "residual is the larger tolerance ratio"}});
}

/// Distribution predicted for the real (+) / imaginary (-) cat state:
/// r^{2n} (1 +- cos 2 n theta) / mu(n), normalized to unit sum.
inline std::vector<double> cat_distribution_formula(const SpectrumModel& model, cplx z, int N,
                                                    CatKind kind) {
  const MomentTable t = moment_table(model, N);
  const double lr = std::log(std::abs(z));
  const double th = std::arg(z);
  const double sign = kind == CatKind::real ? 1.0 : -1.0;
  std::vector<double> p(static_cast<std::size_t>(N) + 1);
  double sum = 0.0;
  for (int n = 0; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double base = n == 0 ? std::exp(-t.log_mu[i]) : std::exp(2.0 * n * lr - t.log_mu[i]);
    p[i] = base * (1.0 + sign * std::cos(2.0 * n * th));
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

/// Even/odd parity structure, cat distributions and the theta = 0 real cat.
inline CriteriaEntry check_superpositions(const SpectrumModel& model,
                                          const std::vector<cplx>& grid, double alpha,
                                          double tol = 1e-12, const TruncationConfig& tc = {}) {
  double parity_leak = 0.0, cat_res = 0.0, cat0 = 0.0;
  for (cplx z : grid) {
    const FockVector even = even_odd(model, z, alpha, 1, tc);
    const FockVector odd = even_odd(model, z, alpha, -1, tc);
    for (int n = 0; n <= even.cutoff; ++n) {
      if (n % 2 == 1) parity_leak = std::max(parity_leak, std::abs(even.amplitudes(n)));
    }
    for (int n = 0; n <= odd.cutoff; ++n) {
      if (n % 2 == 0) parity_leak = std::max(parity_leak, std::abs(odd.amplitudes(n)));
    }
    for (CatKind k : {CatKind::real, CatKind::imaginary}) {
      const FockVector c = cat(model, z, alpha, k, tc);
      const auto p = photon_distribution(c);
      const auto f = cat_distribution_formula(model, z, c.cutoff, k);
      for (std::size_t n = 0; n < p.size(); ++n) cat_res = std::max(cat_res, std::abs(p[n] - f[n]));
    }
    const cplx zr{std::abs(z), 0.0};
    const FockVector c0 = cat(model, zr, alpha, CatKind::real, tc);
    const FockVector d0 = dgkcs(model, zr, alpha, tc);
    cat0 = std::max(cat0, (c0.amplitudes - d0.amplitudes).cwiseAbs().maxCoeff());
  }
  CriteriaEntry e = detail::make_entry(
      "superpositions", std::max(cat_res, cat0), tol, false,
      {{"parity_leak", parity_leak}, {"cat_distribution_residual", cat_res},
       {"real_cat_theta0_residual", cat0}, {"alpha", alpha}});
  if (parity_leak != 0.0) {
    e.pass = false;
    e.status = EntryStatus::fail;
  }
  return e;
}

/// Estimated radius against the analytic one: within 2% when finite; for
/// entire series the estimate must keep growing with the cutoff.
inline CriteriaEntry check_radius_consistency(const SpectrumModel& model, bool dual,
                                              int cutoff = 5000, int window = 16) {
  const std::string name = "radius_consistency";
  if (model.finite()) return detail::skipped_entry(name, "finite-dimensional model");
  const auto analytic = analytic_radius(model, dual);
  if (!analytic) return detail::skipped_entry(name, "no analytic radius");
  const double est = estimate_radius(model, dual, cutoff, window);
  if (std::isinf(*analytic)) {
    const double half = estimate_radius(model, dual, cutoff / 2, window);
    const bool grows = est > half && est > 10.0;
    CriteriaEntry e = detail::make_entry(name, 0.0, 0.0, false,
                                         {{"analytic", "inf"}, {"estimate", est},
                                          {"estimate_half_cutoff", half}});
    e.residual = grows ? 0.0 : 1.0;
    e.pass = grows;
    e.status = grows ? EntryStatus::pass : EntryStatus::fail;
    return e;
  }
  if (*analytic == 0.0) {
    return detail::make_entry(name, est, 1e-3, false, {{"analytic", 0.0}, {"estimate", est}});
  }
  return detail::make_entry(name, std::abs(est - *analytic) / *analytic, 0.02, true,
                            {{"analytic", *analytic}, {"estimate", est}});
}

/// Ordering checks gating a suite: positivity plus the family's own chain.
inline CriteriaEntry check_spectrum(const SpectrumModel& model, bool dual, int cutoff) {
  if (model.finite()) cutoff = std::min(cutoff, model.max_index());
  const SpectrumValidation v = validate_spectrum(model, std::max(cutoff, 2));
  const bool ok = v.positive && (dual ? v.eps_increasing : v.e_increasing);
  CriteriaEntry e = detail::make_entry("validate_spectrum", ok ? 0.0 : 1.0, 0.0, false,
                                       {{"cutoff", v.cutoff},
                                        {"positive", v.positive},
                                        {"e_increasing", v.e_increasing},
                                        {"eps_increasing", v.eps_increasing},
                                        {"ratio_bound", v.ratio_bound},
                                        {"f_ratio_bound", v.f_ratio_bound},
                                        {"violations", v.violations}});
  return e;
}

// ---------------------------------------------------------------------------
// Suite

/// Runs every applicable check for (model, family) in a fixed order. A failed
/// spectrum validation aborts the suite with the partial report.
inline CriteriaReport run_suite(const SpectrumModel& model, Family family,
                                const SuiteConfig& cfg = {}) {
  const bool dual = is_dual(family);
  CriteriaReport rep;
  rep.model = model.descriptor();
  rep.family = to_string(family);
  rep.config = to_json(cfg);
  const TruncationConfig& tc = cfg.truncation;

  const int validate_cutoff = model.finite() ? model.max_index() : cfg.operator_cutoff;
  rep.entries.push_back(check_spectrum(model, dual, validate_cutoff));
  if (!rep.entries.back().pass) {
    rep.aborted = true;
    rep.entries.back().details["aborted"] = "suite stopped after spectrum validation";
    return rep;
  }

  const double radius = grid_radius(model, dual, cfg);
  const std::vector<cplx> grid = z_grid(radius, cfg);
  rep.config["grid_radius"] = radius;

  // Each check is isolated: an exception becomes a failing entry.
  auto guarded = [&rep](const std::string& name, double tol, auto&& fn) {
    try {
      rep.entries.push_back(fn());
    } catch (const std::exception& ex) {
      rep.entries.push_back(detail::error_entry(name, tol, ex));
    }
  };

  guarded("radius_consistency", 0.02, [&] {
    return check_radius_consistency(model, dual, tc.max_cutoff, tc.radius_window);
  });
  guarded("action_identity", cfg.series_tol, [&] {
    return check_action_identity(model, dual, grid, cfg.alphas, cfg.series_tol, tc);
  });
  guarded("temporal_stability", cfg.temporal_tol, [&] {
    return check_temporal_stability(model, dual, grid, cfg.alphas, cfg.times, cfg.temporal_tol, tc);
  });
  guarded("generalized_temporal_stability", cfg.temporal_tol, [&] {
    const double J = std::min(cfg.generalized_J, 0.25 * radius * radius);
    return check_generalized_stability(model, dual, J, cfg.generalized_theta, cfg.times,
                                       cfg.temporal_tol, tc);
  });
  guarded("eigenstate", cfg.eigen_floor, [&] {
    return check_eigenstate(model, dual, grid, cfg.alphas, cfg.eigen_floor, tc);
  });
  guarded("resolution_identity", cfg.quadrature_tol, [&] {
    return check_resolution_identity(model, dual, cfg.moment_max, cfg.quadrature_tol,
                                     cfg.derived_quadrature_tol);
  });
  guarded("closed_forms", 1.0, [&] { return check_closed_forms(model, dual, grid, radius, cfg); });
  guarded("operator_algebra", cfg.exact_tol, [&] {
    return check_operator_algebra(model, dual, cfg.operator_cutoff, cfg.alphas, cfg.exact_tol);
  });
  guarded("displacement", cfg.expm_tol, [&] {
    return check_displacement(model, dual, std::min(cfg.displacement_z, 0.5 * radius),
                              cfg.displacement_alpha, cfg.displacement_cutoff, cfg.expm_tol, tc);
  });
  guarded("self_duality", cfg.self_dual_tol, [&] {
    // Common grid inside both families' radii.
    const double r = std::min(grid_radius(model, false, cfg), grid_radius(model, true, cfg));
    return check_self_duality(model, z_grid(r, cfg), cfg.alphas, cfg.self_dual_tol, tc);
  });
  guarded("cross_duality", cfg.exact_tol, [&] {
    return check_cross_duality(model, z_grid(grid_radius(model, true, cfg), cfg), cfg.alphas,
                               cfg.exact_tol, tc);
  });
  guarded("moment_duality", cfg.exact_tol,
          [&] { return check_moment_duality(model, cfg.duality_max, cfg.exact_tol); });
  guarded("interpolation", 1.0, [&] {
    const double r = std::min(grid_radius(model, false, cfg), grid_radius(model, true, cfg));
    const double J = std::min(cfg.generalized_J, 0.25 * r * r);
    return check_interpolation(model, J, cfg.generalized_theta, cfg.times, cfg.operator_cutoff,
                               cfg.exact_tol, cfg.interpolation_tol);
  });
  if (dual) {
    const double alpha = cfg.alphas.empty() ? 0.0 : cfg.alphas.back();
    guarded("superpositions", cfg.exact_tol,
            [&] { return check_superpositions(model, grid, alpha, cfg.exact_tol, tc); });
    guarded("superposition_eigenstate", cfg.eigen_floor, [&] {
      return check_superposition_eigenstate(model, grid, alpha, cfg.eigen_floor, tc);
    });
  } else {
    rep.entries.push_back(detail::skipped_entry("superpositions", "defined for the dual family"));
    rep.entries.push_back(
        detail::skipped_entry("superposition_eigenstate", "defined for the dual family"));
  }
  return rep;
}

}  // namespace fockcs
