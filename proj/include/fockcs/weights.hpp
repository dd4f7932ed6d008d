#pragma once

// Moment-problem densities: weights sigma(x) >= 0 whose moments
// int x^n sigma(x) dx reproduce rho(n) (or mu(n) for the dual family).

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "fockcs/numerics.hpp"
#include "fockcs/spectra.hpp"

namespace fockcs {

enum class WeightKind { closed_form, derived_closed_form, unavailable };

inline std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::closed_form: return "closed_form";
    case WeightKind::derived_closed_form: return "derived_closed_form";
    case WeightKind::unavailable: return "unavailable";
  }
  return "unknown";
}

struct WeightFunction {
  WeightKind kind = WeightKind::unavailable;
  std::function<double(double)> density;
  /// Upper end of the support in x = |z|^2; +inf for half-line weights.
  double support_radius = 0.0;
  std::string formula;
  std::string note;

  bool available() const { return kind != WeightKind::unavailable; }
  double operator()(double x) const { return density(x); }
};

/// Weight for the (model, family) pair, or an `unavailable` record carrying
/// the reason.
inline WeightFunction moment_weight(const SpectrumModel& model, bool dual) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  WeightFunction w;
  switch (model.kind()) {
    case SpectrumKind::harmonic:
      w = {WeightKind::closed_form, [](double x) { return std::exp(-x); }, inf, "exp(-x)", ""};
      return w;
    case SpectrumKind::poschl_teller:
      if (dual) {
        const double nu = model.param("nu");
        w = {WeightKind::closed_form,
             [nu](double x) { return nu * std::pow(1.0 - x, nu - 1.0); }, 1.0,
             "nu (1-x)^(nu-1)", ""};
        return w;
      }
      break;
    case SpectrumKind::infinite_well:
      if (dual) {
        w = {WeightKind::closed_form, [](double x) { return 2.0 * (1.0 - x); }, 1.0, "2(1-x)", ""};
        return w;
      }
      break;
    case SpectrumKind::morse:
      if (dual) {
        // mu(n) = (M+2)^n n! (M-n)! / M! is the Mellin transform of a Beta
        // prime kernel in x/(M+2); moments exist for n <= M.
        const double M = model.param("M");
        w = {WeightKind::derived_closed_form,
             [M](double x) {
               return (M + 1.0) / (M + 2.0) * std::pow(1.0 + x / (M + 2.0), -(M + 2.0));
             },
             inf, "((M+1)/(M+2)) (1 + x/(M+2))^-(M+2)", "moments finite for n <= M"};
        return w;
      }
      break;
    case SpectrumKind::su11_gp:
    case SpectrumKind::su11_bg:
      // rho_GP(n) = mu_BG(n) = n! Gamma(2k) / Gamma(n+2k): Beta kernel on [0,1].
      if ((model.kind() == SpectrumKind::su11_gp) != dual) {
        const double c = 2.0 * model.param("kappa") - 1.0;
        w = {WeightKind::derived_closed_form,
             [c](double x) { return c * std::pow(1.0 - x, c - 1.0); }, 1.0,
             "(2k-1) (1-x)^(2k-2)", ""};
        return w;
      }
      break;
    case SpectrumKind::hydrogen:
      if (dual) {
        w.note = "no elementary weight; moments checked through 2 n! [(n+1)!]^2 / (n+2)!";
        return w;
      }
      break;
    default: break;
  }
  w.note = "no closed-form weight registered";
  return w;
}

}  // namespace fockcs
