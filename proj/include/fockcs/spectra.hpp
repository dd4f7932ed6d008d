#pragma once

// Catalog of physical spectra e_n, their duals eps_n = n^2 / e_n, and the
// factorial moments rho(n) = e_1...e_n and mu(n) = eps_1...eps_n.
//
// Every catalog Hamiltonian is pre-shifted so that e_0 = 0. The SU(1,1) entries
// use the [e_n]! convention, rho_GP(n) = n! Gamma(2k) / Gamma(n + 2k); this
// differs from the textbook coefficient [n!/Gamma(n+2k)]^{1/2} only by a
// z-independent constant that normalization absorbs.

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockcs/numerics.hpp"

namespace fockcs {

enum class SpectrumKind {
  harmonic,
  poschl_teller,
  infinite_well,
  morse,
  hydrogen,
  penson_solomon,
  su11_gp,
  su11_bg,
  custom
};

inline std::string to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::harmonic: return "harmonic";
    case SpectrumKind::poschl_teller: return "poschl_teller";
    case SpectrumKind::infinite_well: return "infinite_well";
    case SpectrumKind::morse: return "morse";
    case SpectrumKind::hydrogen: return "hydrogen";
    case SpectrumKind::penson_solomon: return "penson_solomon";
    case SpectrumKind::su11_gp: return "su11_gp";
    case SpectrumKind::su11_bg: return "su11_bg";
    case SpectrumKind::custom: return "custom";
  }
  return "unknown";
}

/// A named, non-degenerate eigenvalue sequence e_n with its parameters.
/// Immutable after construction; parameter constraints are enforced by the
/// factories.
class SpectrumModel {
 public:
  static SpectrumModel harmonic(double omega = 1.0) {
    return SpectrumModel(SpectrumKind::harmonic, {}, omega);
  }

  static SpectrumModel poschl_teller(double nu, double omega = 1.0) {
    if (!(nu > 2.0)) throw std::invalid_argument("poschl_teller: requires nu > 2");
    return SpectrumModel(SpectrumKind::poschl_teller, {{"nu", nu}}, omega);
  }

  static SpectrumModel infinite_well(double omega = 1.0) {
    return SpectrumModel(SpectrumKind::infinite_well, {}, omega);
  }

  static SpectrumModel morse(int M, double omega = 1.0) {
    if (M < 1) throw std::invalid_argument("morse: requires integer M >= 1");
    SpectrumModel m(SpectrumKind::morse, {{"M", static_cast<double>(M)}}, omega);
    m.dimension_ = M + 1;
    return m;
  }

  static SpectrumModel hydrogen(double omega = 1.0) {
    return SpectrumModel(SpectrumKind::hydrogen, {}, omega);
  }

  static SpectrumModel penson_solomon(double q, double omega = 1.0) {
    if (!(q > 0.0)) throw std::invalid_argument("penson_solomon: requires q > 0");
    return SpectrumModel(SpectrumKind::penson_solomon, {{"q", q}}, omega);
  }

  static SpectrumModel su11_gp(double kappa, double omega = 1.0) {
    check_kappa(kappa);
    return SpectrumModel(SpectrumKind::su11_gp, {{"kappa", kappa}}, omega);
  }

  static SpectrumModel su11_bg(double kappa, double omega = 1.0) {
    check_kappa(kappa);
    return SpectrumModel(SpectrumKind::su11_bg, {{"kappa", kappa}}, omega);
  }

  /// User-supplied table e_0..e_{L-1}; the model is finite-dimensional with L levels.
  static SpectrumModel from_table(std::vector<double> e, double omega = 1.0,
                                  std::string label = "custom") {
    if (e.size() < 2) throw std::invalid_argument("custom spectrum: need at least two levels");
    for (double v : e) {
      if (!std::isfinite(v)) throw std::invalid_argument("custom spectrum: non-finite level");
    }
    if (e.front() != 0.0) throw std::invalid_argument("custom spectrum: e_0 must be 0");
    SpectrumModel m(SpectrumKind::custom, {}, omega);
    m.dimension_ = static_cast<int>(e.size());
    m.table_ = std::make_shared<const std::vector<double>>(std::move(e));
    m.label_ = std::move(label);
    return m;
  }

  /// Spectrum e_n = n f(n)^2 of a nonlinear oscillator with deformation f(n) > 0.
  static SpectrumModel from_nonlinearity(std::function<double(int)> f,
                                         std::string label = "nonlinear", double omega = 1.0) {
    SpectrumModel m(SpectrumKind::custom, {}, omega);
    m.nonlinearity_ = std::make_shared<const std::function<double(int)>>(std::move(f));
    m.label_ = std::move(label);
    return m;
  }

  SpectrumKind kind() const { return kind_; }
  std::string name() const { return kind_ == SpectrumKind::custom ? label_ : to_string(kind_); }
  double omega() const { return omega_; }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) throw std::out_of_range("spectrum has no parameter '" + key + "'");
    return it->second;
  }

  /// Number of levels for finite-dimensional models.
  std::optional<int> dimension() const { return dimension_; }
  bool finite() const { return dimension_.has_value(); }
  /// Largest admissible level index.
  int max_index() const {
    return dimension_ ? *dimension_ - 1 : std::numeric_limits<int>::max() - 1;
  }
  bool is_table() const { return static_cast<bool>(table_); }
  const std::vector<double>* table() const { return table_.get(); }

  /// Canonical `name[:key=value,...]` descriptor. Parameters print in
  /// round-trip precision so two models compare equal iff descriptors do.
  std::string descriptor() const {
    // Shortest representation that round-trips.
    auto fmt = [](double v) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      return std::string(buf, res.ptr);
    };
    std::string out = name();
    bool first = true;
    for (const auto& [k, v] : params_) {
      out += (first ? ':' : ',') + k + '=' + fmt(v);
      first = false;
    }
    if (omega_ != 1.0) out += std::string(first ? ":" : ",") + "omega=" + fmt(omega_);
    return out;
  }

  /// e_n with no range check beyond n >= 0; callers go through eigenvalue().
  double raw_eigenvalue(int n) const {
    const double x = static_cast<double>(n);
    switch (kind_) {
      case SpectrumKind::harmonic: return x;
      case SpectrumKind::poschl_teller: return x * (x + params_.at("nu"));
      case SpectrumKind::infinite_well: return x * (x + 2.0);
      case SpectrumKind::morse: {
        const double M = params_.at("M");
        return x * (M + 1.0 - x) / (M + 2.0);
      }
      case SpectrumKind::hydrogen: return x * (x + 2.0) / ((x + 1.0) * (x + 1.0));
      case SpectrumKind::penson_solomon:
        return x * std::exp(2.0 * (1.0 - x) * std::log(params_.at("q")));
      case SpectrumKind::su11_gp: return x / (x + 2.0 * params_.at("kappa") - 1.0);
      case SpectrumKind::su11_bg: return x * (x + 2.0 * params_.at("kappa") - 1.0);
      case SpectrumKind::custom:
        if (table_) return (*table_)[static_cast<std::size_t>(n)];
        if (n == 0) return 0.0;
        {
          const double f = (*nonlinearity_)(n);
          return x * f * f;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

 private:
  SpectrumModel(SpectrumKind kind, std::map<std::string, double> params, double omega)
      : kind_(kind), params_(std::move(params)), omega_(omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("spectrum: omega must be positive");
  }

  static void check_kappa(double kappa) {
    const double twice = 2.0 * kappa;
    if (!(kappa >= 1.0) || std::abs(twice - std::round(twice)) > 1e-12) {
      throw std::invalid_argument("su11: requires kappa in {1, 3/2, 2, 5/2, ...}");
    }
  }

  SpectrumKind kind_;
  std::map<std::string, double> params_;
  double omega_ = 1.0;
  std::optional<int> dimension_;
  std::shared_ptr<const std::vector<double>> table_;
  std::shared_ptr<const std::function<double(int)>> nonlinearity_;
  std::string label_ = "custom";
};

inline void check_index(const SpectrumModel& model, int n) {
  if (n < 0 || n > model.max_index()) {
    throw std::out_of_range("level index " + std::to_string(n) + " outside range of " +
                            model.descriptor());
  }
}

inline double eigenvalue(const SpectrumModel& model, int n) {
  check_index(model, n);
  return model.raw_eigenvalue(n);
}

/// eps_n = n^2 / e_n, with eps_0 = 0.
inline double dual_eigenvalue(const SpectrumModel& model, int n) {
  check_index(model, n);
  if (n == 0) return 0.0;
  if (model.kind() == SpectrumKind::penson_solomon) {
    return n * std::exp(2.0 * (n - 1.0) * std::log(model.param("q")));
  }
  const double e = model.raw_eigenvalue(n);
  if (!(e > 0.0)) {
    throw std::domain_error("dual_eigenvalue: e_" + std::to_string(n) + " is not positive");
  }
  return static_cast<double>(n) * static_cast<double>(n) / e;
}

/// Per-level eigenvalue of the requested member of the dual pair.
inline double level(const SpectrumModel& model, int n, bool dual) {
  return dual ? dual_eigenvalue(model, n) : eigenvalue(model, n);
}

/// ln of the level; Penson-Solomon levels are formed in the log domain so
/// that deep indices neither underflow nor overflow.
inline double log_level(const SpectrumModel& model, int n, bool dual) {
  if (model.kind() == SpectrumKind::penson_solomon && n > 0) {
    check_index(model, n);
    const double lq = 2.0 * (n - 1.0) * std::log(model.param("q"));
    return std::log(static_cast<double>(n)) + (dual ? lq : -lq);
  }
  return std::log(level(model, n, dual));
}

/// Factorial moments up to a cutoff, stored in the log domain.
struct MomentTable {
  SpectrumModel model;
  int cutoff = 0;
  std::vector<double> e;
  std::vector<double> eps;
  std::vector<double> log_rho;
  std::vector<double> log_mu;

  double rho(int n) const { return std::exp(log_rho.at(static_cast<std::size_t>(n))); }
  double mu(int n) const { return std::exp(log_mu.at(static_cast<std::size_t>(n))); }
  const std::vector<double>& log_moments(bool dual) const { return dual ? log_mu : log_rho; }
  const std::vector<double>& levels(bool dual) const { return dual ? eps : e; }
};

inline MomentTable moment_table(const SpectrumModel& model, int cutoff) {
  if (cutoff < 0) throw std::out_of_range("moment_table: negative cutoff");
  check_index(model, cutoff);
  MomentTable t{model, cutoff, {}, {}, {}, {}};
  const auto size = static_cast<std::size_t>(cutoff) + 1;
  t.e.resize(size);
  t.eps.resize(size);
  t.log_rho.resize(size);
  t.log_mu.resize(size);
  t.e[0] = model.raw_eigenvalue(0);
  t.eps[0] = 0.0;
  t.log_rho[0] = 0.0;
  t.log_mu[0] = 0.0;
  for (std::size_t n = 1; n < size; ++n) {
    const int k = static_cast<int>(n);
    t.e[n] = eigenvalue(model, k);
    t.eps[n] = dual_eigenvalue(model, k);
    t.log_rho[n] = t.log_rho[n - 1] + log_level(model, k, false);
    t.log_mu[n] = t.log_mu[n - 1] + log_level(model, k, true);
  }
  return t;
}

/// f(alpha, n) = exp(i alpha (e_n - e_{n-1})) sqrt(e_n / n), the deformation
/// that turns a into the ladder operator of the coherent family at fixed alpha.
inline cplx nonlinearity(const SpectrumModel& model, int n, double alpha, bool dual = false) {
  if (n < 1) throw std::domain_error("nonlinearity: defined for n >= 1 only");
  const double en = level(model, n, dual);
  const double em = level(model, n - 1, dual);
  if (!(en > 0.0)) throw std::domain_error("nonlinearity: non-positive level");
  return std::polar(std::sqrt(en / n), alpha * (en - em));
}

inline cplx dual_nonlinearity(const SpectrumModel& model, int n, double alpha) {
  return nonlinearity(model, n, alpha, true);
}

/// Outcome of the ordering checks on a spectrum. Failures are entries, not
/// exceptions.
struct SpectrumValidation {
  int cutoff = 0;
  bool positive = true;          // e_n > 0 for n >= 1
  bool e_increasing = true;      // 0 = e_0 < e_1 < ...
  bool eps_increasing = true;    // 0 = eps_0 < eps_1 < ...
  bool ratio_bound = true;       // 1 > e_n/e_{n+1} > n^2/(n+1)^2, n >= 1
  bool f_ratio_bound = true;     // sqrt((n+1)/n) > |f(n)/f(n+1)| > sqrt(n/(n+1))
  std::vector<std::string> violations;

  bool ok() const { return positive && e_increasing && eps_increasing && ratio_bound && f_ratio_bound; }
};

inline SpectrumValidation validate_spectrum(const SpectrumModel& model, int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("validate_spectrum: cutoff must be >= 2");
  check_index(model, cutoff);
  SpectrumValidation v;
  v.cutoff = cutoff;
  auto note = [&v](const std::string& what, int n) {
    if (v.violations.size() < 32) v.violations.push_back(what + " at n=" + std::to_string(n));
  };
  std::vector<double> e(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) e[static_cast<std::size_t>(n)] = model.raw_eigenvalue(n);
  if (e[0] != 0.0) {
    v.e_increasing = false;
    note("e_0 != 0", 0);
  }
  for (int n = 1; n <= cutoff; ++n) {
    if (!(e[static_cast<std::size_t>(n)] > 0.0)) {
      v.positive = false;
      note("e_n <= 0", n);
    }
  }
  if (!v.positive) {
    v.eps_increasing = v.ratio_bound = v.f_ratio_bound = false;
    for (int n = 1; n <= cutoff; ++n) {
      if (!(e[static_cast<std::size_t>(n)] > e[static_cast<std::size_t>(n) - 1])) {
        v.e_increasing = false;
      }
    }
    return v;
  }
  std::vector<double> eps(e.size(), 0.0);
  for (int n = 1; n <= cutoff; ++n) {
    eps[static_cast<std::size_t>(n)] = static_cast<double>(n) * n / e[static_cast<std::size_t>(n)];
  }
  for (int n = 0; n < cutoff; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (!(e[i + 1] > e[i])) {
      v.e_increasing = false;
      note("e not increasing", n + 1);
    }
    if (!(eps[i + 1] > eps[i])) {
      v.eps_increasing = false;
      note("eps not increasing", n + 1);
    }
    if (n >= 1) {
      const double ratio = e[i] / e[i + 1];
      const double lower = static_cast<double>(n) * n / ((n + 1.0) * (n + 1.0));
      if (!(ratio < 1.0 && ratio > lower)) {
        v.ratio_bound = false;
        note("e_n/e_{n+1} bound violated", n);
      }
      // |f(n)|^2 = e_n / n
      const double fn = std::sqrt(e[i] / n);
      const double fn1 = std::sqrt(e[i + 1] / (n + 1.0));
      const double fr = fn / fn1;
      if (!(fr < std::sqrt((n + 1.0) / n) && fr > std::sqrt(n / (n + 1.0)))) {
        v.f_ratio_bound = false;
        note("|f(n)/f(n+1)| bound violated", n);
      }
    }
  }
  return v;
}

/// Analytic radius of convergence in |z| where a closed form is known:
/// +inf for entire series, empty for custom spectra. Finite-dimensional models
/// return +inf (every z is admissible).
inline std::optional<double> analytic_radius(const SpectrumModel& model, bool dual) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (model.kind()) {
    case SpectrumKind::harmonic: return inf;
    case SpectrumKind::poschl_teller:
    case SpectrumKind::infinite_well:
    case SpectrumKind::su11_bg: return dual ? 1.0 : inf;
    case SpectrumKind::morse: return inf;
    case SpectrumKind::hydrogen:
    case SpectrumKind::su11_gp: return dual ? inf : 1.0;
    case SpectrumKind::penson_solomon: {
      const double q = model.param("q");
      if (q == 1.0) return inf;
      return (q < 1.0) != dual ? inf : 0.0;
    }
    case SpectrumKind::custom: return model.finite() ? std::optional<double>(inf) : std::nullopt;
  }
  return std::nullopt;
}

/// Numerical estimate of the |z| radius of convergence: exp of the mean of the
/// last `window` increments of ln(moment)/2 up to `cutoff` (capped by the
/// model's dimension). Finite-dimensional models return +inf.
inline double estimate_radius(const SpectrumModel& model, bool dual, int cutoff = 5000,
                              int window = 16) {
  if (model.finite()) return std::numeric_limits<double>::infinity();
  const int top = std::max(cutoff, window + 1);
  double acc = 0.0;
  for (int n = top - window + 1; n <= top; ++n) acc += log_level(model, n, dual);
  return std::exp(0.5 * acc / window);
}

/// Catalog row for listings.
struct CatalogEntry {
  std::string name;
  std::string parameters;
  std::string constraint;
  std::string e_formula;
  std::string eps_formula;
  std::string radius;
  std::string dual_radius;
};

inline std::vector<CatalogEntry> catalog() {
  return {
      {"harmonic", "-", "-", "n", "n", "inf", "inf"},
      {"poschl_teller", "nu", "nu > 2", "n(n+nu)", "n/(n+nu)", "inf", "1"},
      {"infinite_well", "-", "-", "n(n+2)", "n/(n+2)", "inf", "1"},
      {"morse", "M", "integer M >= 1; n = 0..M", "n(M+1-n)/(M+2)", "n(M+2)/(M+1-n)",
       "finite-dim", "finite-dim"},
      {"hydrogen", "-", "-", "1 - 1/(n+1)^2", "n(n+1)^2/(n+2)", "1", "inf"},
      {"penson_solomon", "q", "q > 0", "n q^(2(1-n))", "n q^(2(n-1))", "inf if q<1, 0 if q>1",
       "0 if q<1, inf if q>1"},
      {"su11_gp", "kappa", "kappa in {1, 3/2, 2, ...}", "n/(n+2kappa-1)", "n(n+2kappa-1)", "1",
       "inf"},
      {"su11_bg", "kappa", "kappa in {1, 3/2, 2, ...}", "n(n+2kappa-1)", "n/(n+2kappa-1)", "inf",
       "1"},
  };
}

namespace detail {

inline double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("model spec: parameter '" + key + "' is not a number: " + text);
  }
  if (used != text.size()) {
    throw std::invalid_argument("model spec: parameter '" + key + "' is not a number: " + text);
  }
  return v;
}

}  // namespace detail

/// Splits `name[:key=value[,key=value]...]` into a name and a parameter map.
inline std::pair<std::string, std::map<std::string, std::string>> split_model_spec(
    const std::string& spec) {
  const auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("model spec: expected key=value, got '" + item + "'");
      }
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return {name, kv};
}

/// Builds a catalog model from its descriptor, e.g. `poschl_teller:nu=3` or
/// `morse:M=4`. Custom spectra need a table and are resolved by the io layer.
inline SpectrumModel parse_model_spec(const std::string& spec) {
  auto [name, kv] = split_model_spec(spec);
  double omega = 1.0;
  if (auto it = kv.find("omega"); it != kv.end()) {
    omega = detail::parse_number("omega", it->second);
    kv.erase(it);
  }
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("model spec: " + name + " requires " + key);
    const double v = detail::parse_number(key, it->second);
    kv.erase(it);
    return v;
  };
  auto finish = [&](SpectrumModel m) {
    if (!kv.empty()) {
      throw std::invalid_argument("model spec: unknown parameter '" + kv.begin()->first +
                                  "' for " + name);
    }
    return m;
  };
  if (name == "harmonic") return finish(SpectrumModel::harmonic(omega));
  if (name == "poschl_teller") return finish(SpectrumModel::poschl_teller(take("nu"), omega));
  if (name == "infinite_well") return finish(SpectrumModel::infinite_well(omega));
  if (name == "morse") {
    const double M = take("M");
    if (M != std::floor(M)) throw std::invalid_argument("morse: requires integer M >= 1");
    return finish(SpectrumModel::morse(static_cast<int>(M), omega));
  }
  if (name == "hydrogen") return finish(SpectrumModel::hydrogen(omega));
  if (name == "penson_solomon") return finish(SpectrumModel::penson_solomon(take("q"), omega));
  if (name == "su11_gp") return finish(SpectrumModel::su11_gp(take("kappa"), omega));
  if (name == "su11_bg") return finish(SpectrumModel::su11_bg(take("kappa"), omega));
  if (name == "custom") throw std::invalid_argument("model spec: custom spectra need a table file");
  throw std::invalid_argument("model spec: unknown spectrum '" + name + "'");
}

}  // namespace fockcs
