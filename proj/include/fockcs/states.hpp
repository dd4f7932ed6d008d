#pragma once

// Coherent-state families as normalized vectors on a truncated Fock basis
// |0>..|N>, together with normalization series, closed forms, overlaps and
// photon-number distributions.
//
// Amplitudes are assembled in the log domain, ln|c_n| = (n ln|z|^2 - ln m(n))/2
// with m = rho for the GK family and m = mu for the dual family, and only then
// exponentiated. The cutoff N grows until the geometric bound on the discarded
// relative mass drops below the truncation tolerance.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockcs/numerics.hpp"
#include "fockcs/spectra.hpp"

namespace fockcs {

enum class Family {
  gk,
  dual_gk,
  even_dual,
  odd_dual,
  cat_real,
  cat_imag,
  generalized_gk,
  generalized_dual
};

inline std::string to_string(Family f) {
  switch (f) {
    case Family::gk: return "gk";
    case Family::dual_gk: return "dual";
    case Family::even_dual: return "even";
    case Family::odd_dual: return "odd";
    case Family::cat_real: return "cat-real";
    case Family::cat_imag: return "cat-imag";
    case Family::generalized_gk: return "generalized-gk";
    case Family::generalized_dual: return "generalized-dual";
  }
  return "unknown";
}

inline Family parse_family(const std::string& s) {
  if (s == "gk") return Family::gk;
  if (s == "dual" || s == "dual_gk") return Family::dual_gk;
  if (s == "even") return Family::even_dual;
  if (s == "odd") return Family::odd_dual;
  if (s == "cat-real") return Family::cat_real;
  if (s == "cat-imag") return Family::cat_imag;
  if (s == "generalized-gk") return Family::generalized_gk;
  if (s == "generalized-dual") return Family::generalized_dual;
  throw std::invalid_argument("unknown family '" + s + "'");
}

/// True when the family is built from mu(n) and eps_n.
inline bool is_dual(Family f) { return f != Family::gk && f != Family::generalized_gk; }

struct StateLabel {
  cplx z{0.0, 0.0};
  double J = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  Family family = Family::gk;
  std::string model;
  std::optional<double> time;
};

inline StateLabel make_label(cplx z, double alpha, Family family, const SpectrumModel& model) {
  return {z, std::norm(z), std::arg(z), alpha, family, model.descriptor(), std::nullopt};
}

struct TruncationConfig {
  double tail_tol = 1e-14;
  int max_cutoff = 5000;
  int min_cutoff = 0;
  /// Requests with |z| >= (1 - radius_margin) * R_estimate are rejected.
  double radius_margin = 0.02;
  int radius_window = 16;
};

struct FockVector {
  CVector amplitudes;
  int cutoff = 0;
  StateLabel label;
  /// N(|z|^2) (or the family's analogue) of the truncated series.
  double norm_constant = 1.0;
  /// Upper estimate of the discarded probability mass; 0 for finite models.
  double tail_bound = 0.0;

  cplx operator[](int n) const { return amplitudes(n); }
};

/// Log-domain representation of an unnormalized vector.
struct LogAmplitudes {
  std::vector<double> log_modulus;
  std::vector<double> phase;

  std::size_t size() const { return log_modulus.size(); }
  cplx value(std::size_t n) const { return std::polar(std::exp(log_modulus[n]), phase[n]); }
};

namespace detail {

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// ln(x^n / m(n)) for n = 0..N together with the levels, the log of the
/// partial sum and the relative tail bound.
struct SeriesTerms {
  std::vector<double> log_terms;
  std::vector<double> levels;
  double log_sum = 0.0;
  double tail_bound = 0.0;
  int cutoff() const { return static_cast<int>(log_terms.size()) - 1; }
};

inline void check_radius(const SpectrumModel& model, bool dual, double modulus,
                         const TruncationConfig& cfg) {
  if (modulus == 0.0 || model.finite()) return;
  const std::optional<double> analytic = analytic_radius(model, dual);
  if (analytic && std::isinf(*analytic)) return;
  const double r =
      analytic ? *analytic : estimate_radius(model, dual, cfg.max_cutoff, cfg.radius_window);
  if (!(modulus < (1.0 - cfg.radius_margin) * r)) {
    throw std::domain_error("|z| = " + std::to_string(modulus) +
                            " is at or beyond the convergence radius (" +
                            (analytic ? "analytic " : "estimate ") +
                            std::to_string(r) + ") of " + model.descriptor() +
                            (dual ? " [dual]" : " [gk]"));
  }
}

inline SeriesTerms series_terms(const SpectrumModel& model, bool dual, double x,
                                const TruncationConfig& cfg) {
  if (x < 0.0) throw std::domain_error("series_terms: |z|^2 must be non-negative");
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  SeriesTerms s;
  s.log_terms.push_back(0.0);
  s.levels.push_back(0.0);
  s.log_sum = 0.0;
  const int top = model.max_index();
  const double lx = x > 0.0 ? std::log(x) : ninf;
  for (int n = 1;; ++n) {
    const int last = n - 1;
    if (last >= cfg.min_cutoff) {
      if (last == top) {
        s.tail_bound = 0.0;
        return s;
      }
      if (x == 0.0) {
        s.tail_bound = 0.0;
        return s;
      }
      // Geometric bound: t_{last+1} / (1 - r) with r the ratio one step later.
      if (last + 2 <= top) {
        const double l1 = level(model, last + 1, dual);
        const double l2 = level(model, last + 2, dual);
        const double r = x / l2;
        if (r < 1.0 && l1 > 0.0) {
          const double log_next = s.log_terms.back() + lx - std::log(l1);
          const double rel = std::exp(log_next - s.log_sum) / (1.0 - r);
          if (rel <= cfg.tail_tol) {
            s.tail_bound = rel;
            return s;
          }
        }
      }
    }
    if (n > cfg.max_cutoff) {
      throw ConvergenceError("truncation tolerance " + std::to_string(cfg.tail_tol) +
                             " unreachable below the cutoff cap " +
                             std::to_string(cfg.max_cutoff) + " for " + model.descriptor());
    }
    const double lvl = level(model, n, dual);
    if (!(lvl > 0.0)) {
      throw std::domain_error("non-positive level at n=" + std::to_string(n) + " in " +
                              model.descriptor());
    }
    const double lt = x == 0.0 ? ninf : s.log_terms.back() + lx - std::log(lvl);
    s.log_terms.push_back(lt);
    s.levels.push_back(lvl);
    s.log_sum = log_add(s.log_sum, lt);
  }
}

inline FockVector assemble(const SeriesTerms& s, cplx z, double alpha, StateLabel label) {
  const int N = s.cutoff();
  FockVector v;
  v.cutoff = N;
  v.amplitudes.resize(N + 1);
  const double theta = std::arg(z);
  for (int n = 0; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const double mod = std::exp(0.5 * (s.log_terms[i] - s.log_sum));
    v.amplitudes(n) = std::polar(mod, n * theta) * unit_phase(-alpha, s.levels[i]);
  }
  v.norm_constant = std::exp(s.log_sum);
  v.tail_bound = s.tail_bound;
  v.label = std::move(label);
  return v;
}

inline FockVector coherent(const SpectrumModel& model, bool dual, cplx z, double alpha,
                           Family family, const TruncationConfig& cfg) {
  check_radius(model, dual, std::abs(z), cfg);
  const SeriesTerms s = series_terms(model, dual, std::norm(z), cfg);
  return assemble(s, z, alpha, make_label(z, alpha, family, model));
}

}  // namespace detail

/// |z, alpha> with c_n proportional to z^n exp(-i alpha e_n) / sqrt(rho(n)).
inline FockVector gkcs(const SpectrumModel& model, cplx z, double alpha,
                       const TruncationConfig& cfg = {}) {
  return detail::coherent(model, false, z, alpha, Family::gk, cfg);
}

/// Dual family: c_n proportional to z^n exp(-i alpha eps_n) / sqrt(mu(n)).
inline FockVector dgkcs(const SpectrumModel& model, cplx z, double alpha,
                        const TruncationConfig& cfg = {}) {
  return detail::coherent(model, true, z, alpha, Family::dual_gk, cfg);
}

/// Series value of sum_n x^n / rho(n) (or / mu(n) when dual).
inline double normalization(const SpectrumModel& model, double x, bool dual,
                            const TruncationConfig& cfg = {}) {
  detail::check_radius(model, dual, std::sqrt(std::max(x, 0.0)), cfg);
  return std::exp(detail::series_terms(model, dual, x, cfg).log_sum);
}

/// Analytic continuation sum_n w^n / m(n) for complex w where the catalog has
/// a closed form; empty otherwise.
inline std::optional<cplx> closed_form_series(const SpectrumModel& model, cplx w, bool dual) {
  const cplx one{1.0, 0.0};
  switch (model.kind()) {
    case SpectrumKind::harmonic: return std::exp(w);
    case SpectrumKind::poschl_teller:
      if (dual) return std::pow(one - w, -1.0 - model.param("nu"));
      break;
    case SpectrumKind::infinite_well:
      if (dual) return std::pow(one - w, -3.0);
      break;
    case SpectrumKind::morse:
      if (dual) {
        const double M = model.param("M");
        return std::pow(one + w / (M + 2.0), static_cast<int>(M));
      }
      break;
    case SpectrumKind::hydrogen:
      if (dual) {
        if (w == cplx{}) return one;
        const cplx s = std::sqrt(w);
        return (2.0 * bessel_i(1, 2.0 * s) + s * bessel_i(2, 2.0 * s)) / (2.0 * s);
      }
      if (w == cplx{}) return one;
      // 2 sum w^n (n+1)/(n+2) = 2/(1-w) + 2 (ln(1-w) + w) / w^2
      return 2.0 / (one - w) + 2.0 * (std::log(one - w) + w) / (w * w);
    case SpectrumKind::su11_gp:
    case SpectrumKind::su11_bg: {
      const double kappa = model.param("kappa");
      const bool beta_side = (model.kind() == SpectrumKind::su11_gp) != dual;
      if (beta_side) return std::pow(one - w, -2.0 * kappa);
      // sum w^n Gamma(2k) / (n! Gamma(n+2k)) = Gamma(2k) w^{-(2k-1)/2} I_{2k-1}(2 sqrt w)
      const int order = static_cast<int>(std::lround(2.0 * kappa - 1.0));
      if (w == cplx{}) return one;
      const cplx s = std::sqrt(w);
      return std::exp(std::lgamma(2.0 * kappa)) * bessel_i(order, 2.0 * s) / std::pow(s, order);
    }
    default: break;
  }
  return std::nullopt;
}

inline std::optional<double> closed_form_normalization(const SpectrumModel& model, double x,
                                                       bool dual) {
  auto v = closed_form_series(model, cplx{x, 0.0}, dual);
  if (!v) return std::nullopt;
  return v->real();
}

/// Closed-form overlap <z, alpha | z', alpha> at equal alpha.
inline std::optional<cplx> closed_form_overlap(const SpectrumModel& model, cplx z, cplx zp,
                                               bool dual) {
  auto cross = closed_form_series(model, std::conj(z) * zp, dual);
  auto na = closed_form_normalization(model, std::norm(z), dual);
  auto nb = closed_form_normalization(model, std::norm(zp), dual);
  if (!cross || !na || !nb) return std::nullopt;
  return *cross / std::sqrt(*na * *nb);
}

/// <a|b> = sum conj(a_n) b_n; the shorter vector is zero-padded.
inline cplx overlap(const FockVector& a, const FockVector& b) {
  if (a.label.model != b.label.model) {
    throw std::invalid_argument("overlap: model mismatch (" + a.label.model + " vs " +
                                b.label.model + ")");
  }
  const Eigen::Index n = std::min(a.amplitudes.size(), b.amplitudes.size());
  return a.amplitudes.head(n).dot(b.amplitudes.head(n));
}

inline std::vector<double> photon_distribution(const FockVector& s) {
  std::vector<double> p(static_cast<std::size_t>(s.cutoff) + 1);
  for (int n = 0; n <= s.cutoff; ++n) p[static_cast<std::size_t>(n)] = std::norm(s.amplitudes(n));
  return p;
}

/// <z, alpha | z', alpha> with both states built on a common cutoff, so the
/// discarded tails of the two series do not enter the product.
inline cplx overlap_states(const SpectrumModel& model, cplx z, cplx zp, double alpha, bool dual,
                           const TruncationConfig& cfg = {}) {
  auto build = [&](cplx w, const TruncationConfig& c) {
    return dual ? dgkcs(model, w, alpha, c) : gkcs(model, w, alpha, c);
  };
  FockVector a = build(z, cfg);
  FockVector b = build(zp, cfg);
  if (a.cutoff != b.cutoff) {
    TruncationConfig common = cfg;
    common.min_cutoff = std::max(a.cutoff, b.cutoff);
    if (!model.finite() || common.min_cutoff <= model.max_index()) {
      a = build(z, common);
      b = build(zp, common);
    }
  }
  return overlap(a, b);
}

/// Returns a copy of s padded with zeros up to cutoff N (never truncates).
inline FockVector padded(const FockVector& s, int N) {
  if (N <= s.cutoff) return s;
  FockVector out = s;
  out.amplitudes = CVector::Zero(N + 1);
  out.amplitudes.head(s.cutoff + 1) = s.amplitudes;
  out.cutoff = N;
  return out;
}

namespace detail {

// Normalizes a superposition of two equally-normalized dual states. The tail
// of |a +- b|^2 is at most 4x the base tail, relative to the base norm, so the
// base is rebuilt with a tighter tolerance until the superposition meets cfg.
template <class Combine>
FockVector dual_superposition(const SpectrumModel& model, cplx z, double alpha, Family family,
                              const TruncationConfig& cfg, Combine combine,
                              const char* degenerate_msg) {
  TruncationConfig base_cfg = cfg;
  for (int attempt = 0; attempt < 6; ++attempt) {
    FockVector base = dgkcs(model, z, alpha, base_cfg);
    CVector sum = combine(base);
    const double norm2 = sum.squaredNorm();
    if (!(norm2 > 1e-24)) throw std::domain_error(degenerate_msg);
    const double tail = 4.0 * base.tail_bound / norm2;
    if (tail <= cfg.tail_tol || model.finite() || attempt == 5) {
      FockVector out;
      out.cutoff = base.cutoff;
      out.amplitudes = sum / std::sqrt(norm2);
      out.norm_constant = base.norm_constant * norm2;
      out.tail_bound = tail;
      out.label = make_label(z, alpha, family, model);
      return out;
    }
    base_cfg.tail_tol = std::max(cfg.tail_tol * norm2 / 8.0, 1e-300);
  }
  throw ConvergenceError("superposition: tail tolerance unreachable");
}

}  // namespace detail

/// Even (+) / odd (-) superpositions |z~, alpha> +- |-z~, alpha>.
inline FockVector even_odd(const SpectrumModel& model, cplx z, double alpha, int parity,
                           const TruncationConfig& cfg = {}) {
  if (parity != 1 && parity != -1) throw std::invalid_argument("even_odd: parity must be +1 or -1");
  if (parity < 0 && z == cplx{}) throw std::domain_error("even_odd: odd state at z = 0 vanishes");
  const Family fam = parity > 0 ? Family::even_dual : Family::odd_dual;
  return detail::dual_superposition(
      model, z, alpha, fam, cfg,
      [parity](const FockVector& base) {
        // Amplitudes of |-z> are (-1)^n those of |z>.
        CVector sum = CVector::Zero(base.amplitudes.size());
        for (Eigen::Index n = 0; n < sum.size(); ++n) {
          const bool keep = (n % 2 == 0) == (parity > 0);
          if (keep) sum(n) = 2.0 * base.amplitudes(n);
        }
        return sum;
      },
      "even_odd: zero-norm superposition");
}

enum class CatKind { real, imaginary };

/// Real (+) / imaginary (-) cat states |z~, alpha> +- |z*~, alpha>. The
/// imaginary cat carries a factor -i so its amplitudes read
/// r^n sin(n theta) exp(-i alpha eps_n) / sqrt(mu(n)) up to normalization.
inline FockVector cat(const SpectrumModel& model, cplx z, double alpha, CatKind kind,
                      const TruncationConfig& cfg = {}) {
  const Family fam = kind == CatKind::real ? Family::cat_real : Family::cat_imag;
  return detail::dual_superposition(
      model, z, alpha, fam, cfg,
      [&](const FockVector& base) {
        // |z*> differs from |z> only in the phase n theta -> -n theta.
        const double theta = std::arg(z);
        CVector mirror(base.amplitudes.size());
        for (Eigen::Index n = 0; n < mirror.size(); ++n) {
          mirror(n) = base.amplitudes(n) * std::polar(1.0, -2.0 * static_cast<double>(n) * theta);
        }
        if (kind == CatKind::real) return CVector(base.amplitudes + mirror);
        return CVector(cplx{0.0, -1.0} * (base.amplitudes - mirror));
      },
      "cat: imaginary cat state vanishes for theta = 0 mod pi");
}

/// Temporally stable nonlinear coherent state for a deformation f(n) > 0:
/// e_n = n f(n)^2 (or eps_n = n / f(n)^2 for the dual flag).
inline FockVector temporally_stable_nonlinear(std::function<double(int)> f, cplx z, double alpha,
                                              bool dual, const TruncationConfig& cfg = {}) {
  const SpectrumModel model = SpectrumModel::from_nonlinearity(std::move(f));
  return dual ? dgkcs(model, z, alpha, cfg) : gkcs(model, z, alpha, cfg);
}

inline FockVector temporally_stable_nonlinear(const SpectrumModel& model, cplx z, double alpha,
                                              bool dual, const TruncationConfig& cfg = {}) {
  return dual ? dgkcs(model, z, alpha, cfg) : gkcs(model, z, alpha, cfg);
}

/// |J, theta, t> = exp(-iHt) |J, theta>: amplitudes proportional to
/// J^{n/2} e^{i n theta} e^{-i omega e_n t} / sqrt([e_n]!).
inline FockVector generalized_gkcs(const SpectrumModel& model, double J, double theta, double t,
                                   bool dual = false, const TruncationConfig& cfg = {}) {
  if (J < 0.0) throw std::domain_error("generalized_gkcs: J must be non-negative");
  const cplx z = std::polar(std::sqrt(J), theta);
  const double alpha = model.omega() * t;
  FockVector v = dual ? dgkcs(model, z, alpha, cfg) : gkcs(model, z, alpha, cfg);
  v.label.family = dual ? Family::generalized_dual : Family::generalized_gk;
  v.label.J = J;
  v.label.theta = theta;
  v.label.time = t;
  return v;
}

/// Unnormalized eta_{J,theta,t} on |0>..|N> in log form.
inline LogAmplitudes unnormalized_generalized(const SpectrumModel& model, double J, double theta,
                                              double t, bool dual, int N) {
  const MomentTable table = moment_table(model, N);
  LogAmplitudes out;
  out.log_modulus.resize(static_cast<std::size_t>(N) + 1);
  out.phase.resize(static_cast<std::size_t>(N) + 1);
  const double lj = J > 0.0 ? std::log(J) : -std::numeric_limits<double>::infinity();
  for (int n = 0; n <= N; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.log_modulus[i] = (n == 0 ? 0.0 : 0.5 * n * lj) - 0.5 * table.log_moments(dual)[i];
    out.phase[i] = n * theta - model.omega() * table.levels(dual)[i] * t;
  }
  return out;
}

/// omega * sum_n level_n |c_n|^2 for the family's own Hamiltonian.
inline double energy_expectation(const SpectrumModel& model, const FockVector& s, bool dual) {
  double acc = 0.0;
  for (int n = 0; n <= s.cutoff; ++n) acc += level(model, n, dual) * std::norm(s.amplitudes(n));
  return model.omega() * acc;
}

}  // namespace fockcs
