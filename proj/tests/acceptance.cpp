// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--xfail 3,7]
//
// Exit status is 0 when the set of failing criteria equals the --xfail set.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fockcs/fockcs.hpp"

using namespace fockcs;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

const std::vector<double> kAlphas{0.0, 0.7, 2.3};

std::vector<SpectrumModel> example_models() {
  return {SpectrumModel::harmonic(), SpectrumModel::poschl_teller(3.0),
          SpectrumModel::infinite_well(), SpectrumModel::morse(4), SpectrumModel::hydrogen()};
}

std::vector<cplx> grid_for(const SpectrumModel& m, bool dual) {
  return z_grid(grid_radius(m, dual, SuiteConfig{}), SuiteConfig{});
}

// Criterion 1. Oracles are the closed forms written out here, independent of
// the library's registry.
Outcome normalizations() {
  Outcome o;
  const std::vector<double> fr{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  auto sweep = [&](const SpectrumModel& m, double radius, auto&& oracle, double tol) {
    double worst = 0.0;
    for (double f : fr) {
      const double x = f * radius * radius;
      const double series = normalization(m, x, true);
      worst = std::max(worst, std::abs(series - oracle(x)) / oracle(x));
    }
    note(o, worst <= tol, m.descriptor() + " " + sci(worst));
  };
  for (double nu : {2.5, 3.0, 5.0}) {
    sweep(SpectrumModel::poschl_teller(nu), 1.0, [nu](double x) { return std::pow(1 - x, -1 - nu); }, 1e-9);
  }
  sweep(SpectrumModel::infinite_well(), 1.0, [](double x) { return std::pow(1 - x, -3.0); }, 1e-9);
  for (int M : {3, 4, 8}) {
    sweep(SpectrumModel::morse(M), 3.0, [M](double x) { return std::pow(1 + x / (M + 2.0), M); }, 1e-9);
  }
  // (2 I_1(2s) + s I_2(2s)) / (2s), s = sqrt(x), via std::cyl_bessel_i.
  sweep(SpectrumModel::hydrogen(), 3.0, [](double x) {
    const double s = std::sqrt(x);
    return (2.0 * std::cyl_bessel_i(1.0, 2.0 * s) + s * std::cyl_bessel_i(2.0, 2.0 * s)) / (2.0 * s);
  }, 1e-8);
  return o;
}

// Criterion 2: integrate the library weights against moments written out here.
Outcome moment_problem() {
  Outcome o;
  auto run = [&](const SpectrumModel& m, int nmax, auto&& mu, double tol) {
    const WeightFunction w = moment_weight(m, true);
    if (!w.available()) {
      note(o, false, m.descriptor() + " has no weight");
      return;
    }
    NumericsConfig nc;
    nc.quadrature_target = std::min(nc.quadrature_target, tol);
    double worst = 0.0;
    for (int n = 0; n <= nmax; ++n) {
      const IntegrationResult q = integrate_adaptive(
          [&w, n](double x) { return std::pow(x, n) * w(x); }, 0.0, w.support_radius, nc);
      note(o, q.converged, m.descriptor() + " quadrature did not converge at n=" + std::to_string(n));
      worst = std::max(worst, std::abs(q.value - mu(n)) / mu(n));
    }
    note(o, worst <= tol, m.descriptor() + " " + sci(worst));
  };
  for (double nu : {2.5, 3.0, 5.0}) {
    run(SpectrumModel::poschl_teller(nu), 15, [nu](int n) {
      return std::exp(std::lgamma(n + 1.0) + std::lgamma(nu + 1.0) - std::lgamma(n + nu + 1.0));
    }, 1e-10);
  }
  run(SpectrumModel::infinite_well(), 15, [](int n) { return 2.0 / ((n + 1.0) * (n + 2.0)); }, 1e-10);
  for (int M : {3, 4, 8}) {
    run(SpectrumModel::morse(M), M, [M](int n) {
      return std::exp(n * std::log(M + 2.0) + std::lgamma(n + 1.0) + std::lgamma(M - n + 1.0) -
                      std::lgamma(M + 1.0));
    }, 1e-8);
  }
  return o;
}

Outcome per_model(const std::function<CriteriaEntry(const SpectrumModel&, bool)>& check) {
  Outcome o;
  for (const auto& m : example_models()) {
    for (bool dual : {false, true}) {
      const CriteriaEntry e = check(m, dual);
      note(o, e.pass, m.descriptor() + (dual ? " dual " : " gk ") + sci(e.residual));
    }
  }
  return o;
}

// Criterion 3.
Outcome action_identity() {
  return per_model([](const SpectrumModel& m, bool dual) {
    return check_action_identity(m, dual, grid_for(m, dual), kAlphas, 1e-9);
  });
}

// Criterion 4.
Outcome temporal_stability() {
  Outcome o = per_model([](const SpectrumModel& m, bool dual) {
    return check_temporal_stability(m, dual, grid_for(m, dual), kAlphas, {0.5, 3.1}, 1e-12);
  });
  for (bool dual : {false, true}) {
    const CriteriaEntry g =
        check_generalized_stability(SpectrumModel::infinite_well(), dual, 0.4, 1.2, {0.5, 3.1}, 1e-12);
    note(o, g.pass, std::string("generalized infinite_well") + (dual ? " dual " : " gk ") + sci(g.residual));
  }
  return o;
}

// Criterion 5.
Outcome eigenstate() {
  return per_model([](const SpectrumModel& m, bool dual) {
    return check_eigenstate(m, dual, grid_for(m, dual), kAlphas, 1e-10);
  });
}

// Criterion 6.
Outcome operator_algebra() {
  return per_model([](const SpectrumModel& m, bool dual) {
    return check_operator_algebra(m, dual, 60, kAlphas, 1e-12);
  });
}

// Criterion 7.
Outcome displacement_orbit() {
  Outcome o;
  for (const auto& m : {SpectrumModel::harmonic(), SpectrumModel::poschl_teller(3.0),
                        SpectrumModel::infinite_well()}) {
    for (bool dual : {false, true}) {
      double worst = 0.0;
      for (double r : {0.1, 0.2, 0.3}) {
        for (double th : {0.0, 1.9, -2.6}) {
          worst = std::max(worst, displacement_infidelity(m, dual, std::polar(r, th), 0.5, 60));
        }
      }
      note(o, worst <= 1e-6, m.descriptor() + (dual ? " dual " : " gk ") + sci(worst));
    }
  }
  return o;
}

// Criterion 8.
Outcome duality() {
  Outcome o;
  const auto h = SpectrumModel::harmonic();
  const double sd = self_duality_residual(h, grid_for(h, false), kAlphas);
  note(o, sd <= 1e-13, "harmonic self-duality " + sci(sd));
  for (const char* spec : {"harmonic", "poschl_teller:nu=3", "infinite_well", "morse:M=4", "hydrogen",
                           "penson_solomon:q=0.9", "su11_gp:kappa=1", "su11_bg:kappa=1.5"}) {
    const SpectrumModel m = parse_model_spec(spec);
    const int top = m.finite() ? m.max_index() : 60;
    const MomentTable t = moment_table(m, top);
    double worst = 0.0;
    for (int n = 0; n <= top; ++n) {
      const double lf = std::lgamma(n + 1.0);
      worst = std::max(worst, std::abs(std::expm1(t.log_rho[n] + t.log_mu[n] - 2.0 * lf)));
    }
    note(o, worst <= 1e-12, m.descriptor() + " moment product " + sci(worst));
  }
  for (double kappa : {1.0, 1.5}) {
    for (const auto& m : {SpectrumModel::su11_gp(kappa), SpectrumModel::su11_bg(kappa)}) {
      const CriteriaEntry e = check_cross_duality(m, grid_for(m, true), kAlphas, 1e-12);
      note(o, e.pass, m.descriptor() + " cross-duality " + sci(e.residual));
    }
  }
  return o;
}

// Criterion 9.
Outcome interpolation() {
  Outcome o;
  const CriteriaEntry e =
      check_interpolation(SpectrumModel::infinite_well(), 0.4, 1.2, {0.0, 0.5, 3.1}, 60, 1e-12, 1e-10);
  note(o, e.pass, "map " + sci(e.details["map_residual"].get<double>()) + " rule " +
                      sci(e.details["rule_residual"].get<double>()));
  return o;
}

// Criterion 10.
Outcome superpositions() {
  Outcome o;
  for (const auto& m : {SpectrumModel::harmonic(), SpectrumModel::poschl_teller(3.0),
                        SpectrumModel::infinite_well(), SpectrumModel::morse(4),
                        SpectrumModel::hydrogen()}) {
    const auto grid = grid_for(m, true);
    for (double alpha : kAlphas) {
      const CriteriaEntry s = check_superpositions(m, grid, alpha, 1e-12);
      const double leak = s.details["parity_leak"].get<double>();
      const double cat0 = s.details["real_cat_theta0_residual"].get<double>();
      note(o, leak == 0.0, m.descriptor() + " parity leak " + sci(leak));
      note(o, s.details["cat_distribution_residual"].get<double>() <= 1e-12,
           m.descriptor() + " cat distribution " + sci(s.residual));
      note(o, cat0 <= 1e-13, m.descriptor() + " real cat at theta=0 " + sci(cat0));
      const CriteriaEntry a2 = check_superposition_eigenstate(m, grid, alpha, 1e-10);
      note(o, a2.pass, m.descriptor() + " squared-ladder eigenvalue " + sci(a2.residual));
    }
  }
  return o;
}

// Criterion 11. Oracles written out here; the hydrogen form is expanded in
// its power series in w = conj(z) z'.
Outcome overlaps() {
  Outcome o;
  auto run = [&](const SpectrumModel& m, double radius, auto&& series) {
    double worst = 0.0;
    for (const auto& [z, zp] : overlap_pairs(radius)) {
      const cplx direct = overlap_states(m, z, zp, 0.7, true);
      const cplx expect = series(std::conj(z) * zp) /
                          std::sqrt(series(cplx{std::norm(z), 0.0}).real() *
                                    series(cplx{std::norm(zp), 0.0}).real());
      worst = std::max(worst, std::abs(direct - expect) / std::abs(expect));
    }
    note(o, worst <= 1e-8, m.descriptor() + " " + sci(worst));
  };
  const cplx one{1.0, 0.0};
  run(SpectrumModel::infinite_well(), 1.0, [one](cplx w) { return std::pow(one - w, -3.0); });
  for (double nu : {2.5, 3.0, 5.0}) {
    run(SpectrumModel::poschl_teller(nu), 1.0, [one, nu](cplx w) { return std::pow(one - w, -1.0 - nu); });
  }
  for (int M : {3, 4, 8}) {
    run(SpectrumModel::morse(M), 3.0, [one, M](cplx w) { return std::pow(one + w / (M + 2.0), M); });
  }
  // sum_k w^k / (k! (k+1)!) + (1/2) sum_k w^{k+1} / (k! (k+2)!)
  run(SpectrumModel::hydrogen(), 3.0, [](cplx w) {
    cplx sum{}, p{1.0, 0.0};
    for (int k = 0; k < 80; ++k) {
      const double lf = std::lgamma(k + 1.0);
      sum += p * (std::exp(-lf - std::lgamma(k + 2.0)) + 0.5 * std::exp(-lf - std::lgamma(k + 3.0)) * w);
      p *= w;
    }
    return sum;
  });
  return o;
}

// Criterion 12.
Outcome negative_control() {
  Outcome o;
  const std::string table = std::string(FOCKCS_SAMPLES_DIR) + "/nonmonotone_spectrum.json";
  const SpectrumModel m = load_custom_spectrum(table);
  note(o, !validate_spectrum(m, m.max_index()).ok(), "validate_spectrum accepted the table");
  for (Family f : {Family::gk, Family::dual_gk}) {
    const CriteriaReport r = run_suite(m, f);
    note(o, r.aborted && !r.pass(), "suite did not abort for " + to_string(f));
  }
  const std::string cmd = std::string("\"") + FOCKCS_CLI + "\" verify suite --model custom:file=" +
                          table + " --family gk --out /dev/null > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  note(o, status != 0, "CLI exited 0");
  return o;
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> xfail;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--xfail" && i + 1 < argc) {
      xfail = parse_list(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--xfail n,m,...]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form normalizations", normalizations},
      {"moment-problem quadrature", moment_problem},
      {"action identity", action_identity},
      {"temporal stability", temporal_stability},
      {"eigenstate property", eigenstate},
      {"operator algebra", operator_algebra},
      {"displacement orbit", displacement_orbit},
      {"duality structure", duality},
      {"interpolation operator", interpolation},
      {"superpositions", superpositions},
      {"overlap closed forms", overlaps},
      {"negative control", negative_control}};

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    if (!o.pass) failed.insert(id);
    std::cout << "criterion " << id << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL");
    if (!o.pass) std::cout << (xfail.count(id) ? " [expected]" : "") << " -- " << o.detail;
    std::cout << '\n';
  }
  std::cout << failed.size() << " of " << criteria.size() << " criteria failed\n";
  if (failed != xfail) {
    std::cout << "failing set differs from the expected-failure list\n";
    return 1;
  }
  return 0;
}
