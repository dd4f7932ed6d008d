// Command-line frontend: spectrum inspection, state evaluation, operator
// dumps, plot-ready sweeps and criteria suites.
//
// Every data file embeds the RunConfig that produced it; `--replay <file>`
// re-executes that config.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fockcs/fockcs.hpp"

namespace {

using namespace fockcs;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("expected a complex number as re,im; got '" + s + "'");
  }
}

std::pair<int, int> parse_index_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("expected an index range a..b; got '" + s + "'");
  }
}

/// `lo:hi:count` (inclusive, evenly spaced) or a comma-separated list.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  try {
    if (s.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(s);
      for (std::string item; std::getline(ss, item, ':');) parts.push_back(std::stod(item));
      if (parts.size() != 3 || parts[2] < 1) throw UsageError("bad grid '" + s + "'");
      const int count = static_cast<int>(parts[2]);
      for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (count - 1));
      }
      return out;
    }
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stod(item));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("bad grid '" + s + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output

void emit(const RunConfig& cfg, Table table) {
  const json config = to_json(cfg);
  std::string text;
  if (cfg.format == "json") {
    text = table_json(table, config).dump(2) + "\n";
  } else if (cfg.format == "csv") {
    table.comments.insert(table.comments.begin(), "config: " + config.dump());
    std::ostringstream os;
    write_csv(os, table);
    text = os.str();
  } else {
    throw UsageError("unknown format '" + cfg.format + "' (csv|json)");
  }
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    write_text(output_path(cfg.output), text);
  }
}

TruncationConfig truncation(const RunConfig& cfg) {
  TruncationConfig tc;
  tc.tail_tol = cfg.tail_tol;
  return tc;
}

double first_or(const std::vector<double>& v, double fallback) {
  return v.empty() ? fallback : v.front();
}

FockVector build_state(const SpectrumModel& model, Family fam, cplx z, double alpha,
                       const std::vector<double>& times, const TruncationConfig& tc) {
  switch (fam) {
    case Family::gk: return gkcs(model, z, alpha, tc);
    case Family::dual_gk: return dgkcs(model, z, alpha, tc);
    case Family::even_dual: return even_odd(model, z, alpha, 1, tc);
    case Family::odd_dual: return even_odd(model, z, alpha, -1, tc);
    case Family::cat_real: return cat(model, z, alpha, CatKind::real, tc);
    case Family::cat_imag: return cat(model, z, alpha, CatKind::imaginary, tc);
    case Family::generalized_gk:
    case Family::generalized_dual:
      return generalized_gkcs(model, std::norm(z), std::arg(z), first_or(times, 0.0),
                              fam == Family::generalized_dual, tc);
  }
  throw UsageError("unsupported family");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_spectra_list(const std::string& model_spec, const std::string& range) {
  if (model_spec.empty()) {
    std::printf("%-16s %-8s %-26s %-16s %-16s %-22s %s\n", "model", "params", "constraint", "e_n",
                "eps_n", "R (gk)", "R (dual)");
    for (const auto& c : catalog()) {
      std::printf("%-16s %-8s %-26s %-16s %-16s %-22s %s\n", c.name.c_str(), c.parameters.c_str(),
                  c.constraint.c_str(), c.e_formula.c_str(), c.eps_formula.c_str(),
                  c.radius.c_str(), c.dual_radius.c_str());
    }
    return 0;
  }
  const SpectrumModel m = resolve_model(model_spec);
  auto [lo, hi] = parse_index_range(range.empty() ? "0..10" : range);
  if (m.finite()) hi = std::min(hi, m.max_index());
  if (lo < 0 || hi < lo) throw UsageError("empty index range");
  const MomentTable t = moment_table(m, hi);
  std::cout << "# " << m.descriptor() << "\n";
  std::cout << "n,e_n,eps_n,ln_rho,ln_mu\n";
  for (int n = lo; n <= hi; ++n) {
    const auto i = static_cast<std::size_t>(n);
    std::cout << n << "," << format_double(t.e[i]) << "," << format_double(t.eps[i]) << ","
              << format_double(t.log_rho[i]) << "," << format_double(t.log_mu[i]) << "\n";
  }
  return 0;
}

int cmd_spectra_validate(const std::string& model_spec, int cutoff) {
  const SpectrumModel m = resolve_model(model_spec);
  if (m.finite()) cutoff = std::min(cutoff, m.max_index());
  const SpectrumValidation v = validate_spectrum(m, cutoff);
  json j{{"model", m.descriptor()},          {"cutoff", v.cutoff},
         {"positive", v.positive},           {"e_increasing", v.e_increasing},
         {"eps_increasing", v.eps_increasing}, {"ratio_bound", v.ratio_bound},
         {"f_ratio_bound", v.f_ratio_bound}, {"violations", v.violations},
         {"ok", v.ok()}};
  std::cout << j.dump(2) << "\n";
  return v.ok() ? 0 : 1;
}

int run_state_eval(const RunConfig& cfg) {
  const SpectrumModel m = resolve_model(cfg.model);
  const Family fam = parse_family(cfg.family);
  if (cfg.z.empty()) throw UsageError("state eval needs --z");
  const FockVector s = build_state(m, fam, cfg.z.front(), first_or(cfg.alphas, 0.0), cfg.times,
                                   truncation(cfg));
  Table t;
  t.comments.push_back("state " + to_string(fam) + " of " + m.descriptor() + ", cutoff " +
                       std::to_string(s.cutoff) + ", tail bound " + format_double(s.tail_bound) +
                       ", norm constant " + format_double(s.norm_constant));
  t.comments.push_back("columns: n, Re c_n, Im c_n, |c_n|^2");
  t.columns = {"n", "re", "im", "prob"};
  for (int n = 0; n <= s.cutoff; ++n) {
    const cplx c = s.amplitudes(n);
    t.add_row({static_cast<double>(n), c.real(), c.imag(), std::norm(c)});
  }
  emit(cfg, std::move(t));
  return 0;
}

TruncatedOperator build_operator(const SpectrumModel& m, const RunConfig& cfg) {
  const std::string op = cfg.extra.value("op", std::string("A"));
  const int N = cfg.extra.value("N", 10);
  const bool dual = cfg.extra.value("dual", false);
  const double alpha = first_or(cfg.alphas, 0.0);
  const cplx z = cfg.z.empty() ? cplx{} : cfg.z.front();
  if (op == "A") return ladder(m, alpha, N, dual ? Ladder::dualA : Ladder::A);
  if (op == "Adag") return ladder(m, alpha, N, dual ? Ladder::dualA_dag : Ladder::A_dag);
  if (op == "B") return conjugate_b(m, alpha, N, dual ? Conjugate::dualB : Conjugate::B);
  if (op == "Bdag") return conjugate_b(m, alpha, N, dual ? Conjugate::dualB_dag : Conjugate::B_dag);
  if (op == "S") return evolution(m, alpha, N, dual);
  if (op == "T") return interpolator(m, N);
  if (op == "H") return hamiltonian(m, N, dual);
  if (op == "D") return displacement(m, z, alpha, N, dual ? Displacement::dualD : Displacement::D);
  if (op == "V") return displacement(m, z, alpha, N, dual ? Displacement::dualV : Displacement::V);
  if (op == "check_a") return check_a(m, N, false, dual);
  throw UsageError("unknown operator '" + op + "' (A|Adag|B|Bdag|S|T|H|D|V|check_a)");
}

int run_op_dump(const RunConfig& cfg) {
  const SpectrumModel m = resolve_model(cfg.model);
  const TruncatedOperator op = build_operator(m, cfg);
  Table t;
  t.comments.push_back("operator " + op.tag + " of " + m.descriptor() + " on |0>..|" +
                       std::to_string(op.cutoff) + ">");
  t.comments.push_back("columns: row, col, Re, Im (dense, row-major; row/col are Fock levels)");
  if (op.log_diagonal) t.comments.push_back("log_diagonal available: diagonal entries may overflow");
  t.columns = {"row", "col", "re", "im"};
  for (Eigen::Index r = 0; r < op.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.entries.cols(); ++c) {
      const cplx v = op.entries(r, c);
      t.add_row({static_cast<double>(r), static_cast<double>(c), v.real(), v.imag()});
    }
  }
  emit(cfg, std::move(t));
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  const SpectrumModel m = resolve_model(cfg.model);
  const Family fam = parse_family(cfg.family);
  const bool dual = is_dual(fam);
  const std::string quantity = cfg.extra.value("quantity", std::string("energy"));
  const TruncationConfig tc = truncation(cfg);
  const double alpha = first_or(cfg.alphas, 0.0);
  Table t;
  t.comments.push_back("sweep " + quantity + " for " + to_string(fam) + " of " + m.descriptor());
  std::size_t skipped = 0;
  auto out_of_radius = [&](cplx z, const std::exception& ex) {
    ++skipped;
    t.comments.push_back("skipped z=" + format_double(z.real()) + "," + format_double(z.imag()) +
                         ": " + ex.what());
  };
  if (quantity == "energy") {
    t.comments.push_back("columns: |z|, |z|^2, <H> in the family's Hamiltonian, <H>/(omega |z|^2)");
    t.columns = {"r", "x", "energy", "ratio"};
    for (cplx z : cfg.z) {
      try {
        const FockVector s = build_state(m, fam, z, alpha, cfg.times, tc);
        const double h = energy_expectation(m, s, dual);
        const double x = std::norm(z);
        t.add_row({std::abs(z), x, h, x > 0 ? h / (m.omega() * x) : 1.0});
      } catch (const std::domain_error& ex) {
        out_of_radius(z, ex);
      }
    }
  } else if (quantity == "distribution") {
    t.comments.push_back("columns: z index, |z|, arg z, n, P(n)");
    t.columns = {"k", "r", "theta", "n", "p"};
    for (std::size_t k = 0; k < cfg.z.size(); ++k) {
      const cplx z = cfg.z[k];
      try {
        const FockVector s = build_state(m, fam, z, alpha, cfg.times, tc);
        const auto p = photon_distribution(s);
        for (std::size_t n = 0; n < p.size(); ++n) {
          t.add_row({static_cast<double>(k), std::abs(z), std::arg(z), static_cast<double>(n), p[n]});
        }
      } catch (const std::domain_error& ex) {
        out_of_radius(z, ex);
      }
    }
  } else if (quantity == "cat") {
    const CatKind kind = fam == Family::cat_imag ? CatKind::imaginary : CatKind::real;
    t.comments.push_back(
        "columns: theta, n, P(n) of the state, r^2n (1 +- cos 2n theta)/mu(n) normalized to unit sum");
    t.columns = {"theta", "n", "p_state", "p_formula"};
    for (cplx z : cfg.z) {
      try {
        const FockVector s = cat(m, z, alpha, kind, tc);
        const auto p = photon_distribution(s);
        const auto f = cat_distribution_formula(m, z, s.cutoff, kind);
        for (std::size_t n = 0; n < p.size(); ++n) {
          t.add_row({std::arg(z), static_cast<double>(n), p[n], f[n]});
        }
      } catch (const std::domain_error& ex) {
        out_of_radius(z, ex);
      }
    }
  } else if (quantity == "overlap") {
    if (!cfg.extra.contains("z_ref")) throw UsageError("overlap sweep needs --zref");
    const cplx zr{cfg.extra["z_ref"].at(0).get<double>(), cfg.extra["z_ref"].at(1).get<double>()};
    t.comments.push_back("columns: Re z', Im z', Re <z|z'>, Im <z|z'>, |<z|z'>|^2, closed-form |<z|z'>|^2 (nan if none)");
    t.columns = {"re", "im", "overlap_re", "overlap_im", "overlap_abs2", "closed_abs2"};
    for (cplx z : cfg.z) {
      try {
        const cplx o = overlap_states(m, zr, z, alpha, dual, tc);
        const auto c = closed_form_overlap(m, zr, z, dual);
        t.add_row({z.real(), z.imag(), o.real(), o.imag(), std::norm(o),
                   c ? std::norm(*c) : std::numeric_limits<double>::quiet_NaN()});
      } catch (const std::domain_error& ex) {
        out_of_radius(z, ex);
      }
    }
  } else if (quantity == "normalization") {
    t.comments.push_back("columns: x = |z|^2, series N(x), closed form N(x) (nan if none)");
    t.columns = {"x", "series", "closed"};
    for (cplx z : cfg.z) {
      const double x = std::norm(z);
      try {
        const double series = normalization(m, x, dual, tc);
        const auto c = closed_form_normalization(m, x, dual);
        t.add_row({x, series, c ? *c : std::numeric_limits<double>::quiet_NaN()});
      } catch (const std::domain_error& ex) {
        out_of_radius(z, ex);
      }
    }
  } else {
    throw UsageError("unknown sweep quantity '" + quantity +
                     "' (energy|distribution|cat|overlap|normalization)");
  }
  if (skipped) std::cerr << "sweep: skipped " << skipped << " grid point(s) outside the radius\n";
  emit(cfg, std::move(t));
  return 0;
}

int run_verify(const RunConfig& cfg) {
  const SpectrumModel m = resolve_model(cfg.model);
  const Family fam = parse_family(cfg.family);
  const SuiteConfig sc = suite_config_from_json(cfg.extra.value("suite", json::object()));
  const CriteriaReport rep = run_suite(m, fam, sc);
  json j = to_json(rep);
  j["run_config"] = to_json(cfg);
  const std::string text = j.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    write_text(output_path(cfg.output), text);
  }
  for (const auto& e : rep.entries) {
    if (!e.skipped() && !e.pass) {
      std::cerr << "verify: " << e.name << " " << to_string(e.status) << " (residual "
                << format_double(e.residual) << ", tolerance " << format_double(e.tolerance)
                << ")\n";
    }
  }
  std::cerr << "verify: " << rep.model << " [" << rep.family << "] "
            << (rep.pass() ? "PASS" : "FAIL") << "\n";
  return rep.pass() ? 0 : 1;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "state eval") return run_state_eval(cfg);
  if (cfg.command == "op dump") return run_op_dump(cfg);
  if (cfg.command == "sweep") return run_sweep(cfg);
  if (cfg.command == "verify suite") return run_verify(cfg);
  throw UsageError("cannot replay command '" + cfg.command + "'");
}

/// Embedded config of a previous output; a fresh --out redirects the rerun.
RunConfig replayed(const std::string& file, const std::string& out) {
  RunConfig c = embedded_run_config(file);
  if (!out.empty()) c.output = out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent states on truncated Fock spaces: spectra, states, operators, checks"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string z_text, zref_text, r_grid, theta_grid, alpha_text = "0", times_text, replay,
                                                      range, config_file;
  int cutoff = 60;
  std::string quantity = "energy";
  std::string op_name = "A";
  int op_N = 10;
  bool op_dual = false;

  auto add_common = [&](CLI::App* c, bool needs_model) {
    auto* opt = c->add_option("--model", cfg.model, "model spec name[:key=value,...]");
    if (needs_model) opt->required();
    c->add_option("--family", cfg.family, "gk|dual|even|odd|cat-real|cat-imag|generalized-gk|generalized-dual");
    c->add_option("--alpha", alpha_text, "alpha value or grid");
    c->add_option("--tail-tol", cfg.tail_tol, "relative truncation tolerance");
    c->add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", cfg.output, "output path (bare names go to $FOCKCS_OUTPUT_DIR)");
    c->add_option("--seed", cfg.seed, "recorded in the output; unused by the math");
  };

  auto* spectra = app.add_subcommand("spectra", "spectrum catalog and validation");
  spectra->require_subcommand(1);
  auto* list = spectra->add_subcommand("list", "list catalog models or tabulate one model");
  list->add_option("--model", cfg.model, "model spec name[:key=value,...]");
  list->add_option("--n", range, "index range a..b");
  auto* validate = spectra->add_subcommand("validate", "check ordering conditions of a spectrum");
  validate->add_option("--model", cfg.model, "model spec")->required();
  validate->add_option("--cutoff", cutoff, "largest index checked");

  auto* state = app.add_subcommand("state", "coherent-state evaluation");
  state->require_subcommand(1);
  auto* eval = state->add_subcommand("eval", "amplitudes of one state");
  add_common(eval, true);
  eval->add_option("--z", z_text, "label z as re,im")->required();
  eval->add_option("--t", times_text, "time for generalized families");

  auto* opc = app.add_subcommand("op", "operator matrices");
  opc->require_subcommand(1);
  auto* dump = opc->add_subcommand("dump", "dense matrix as (row, col, re, im)");
  add_common(dump, true);
  dump->add_option("--op", op_name, "A|Adag|B|Bdag|S|T|H|D|V|check_a");
  dump->add_option("--N", op_N, "cutoff N (basis |0>..|N>)");
  dump->add_option("--z", z_text, "z for D and V as re,im");
  dump->add_flag("--dual", op_dual, "dual-family variant");

  auto* sweep = app.add_subcommand("sweep", "plot-ready tables over a z grid");
  add_common(sweep, false);
  sweep->add_option("--quantity", quantity, "energy|distribution|cat|overlap|normalization");
  sweep->add_option("--r", r_grid, "|z| grid lo:hi:count or list");
  sweep->add_option("--theta", theta_grid, "arg z grid lo:hi:count or list");
  sweep->add_option("--z", z_text, "single z as re,im (instead of --r/--theta)");
  sweep->add_option("--zref", zref_text, "reference z for overlap sweeps");
  sweep->add_option("--t", times_text, "time for generalized families");
  sweep->add_option("--replay", replay, "re-run the config embedded in an output file");

  auto* verify = app.add_subcommand("verify", "criteria suites");
  verify->require_subcommand(1);
  auto* suite = verify->add_subcommand("suite", "run all applicable checks");
  add_common(suite, false);
  suite->add_option("--config", config_file, "suite configuration JSON");
  suite->add_option("--replay", replay, "re-run the config embedded in a report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (list->parsed()) return cmd_spectra_list(cfg.model, range);
    if (validate->parsed()) return cmd_spectra_validate(cfg.model, cutoff);

    cfg.alphas = parse_grid(alpha_text);
    if (!times_text.empty()) cfg.times = parse_grid(times_text);
    if (!z_text.empty()) cfg.z = {parse_complex(z_text)};

    if (eval->parsed()) {
      cfg.command = "state eval";
      return dispatch(cfg);
    }
    if (dump->parsed()) {
      cfg.command = "op dump";
      cfg.extra = {{"op", op_name}, {"N", op_N}, {"dual", op_dual}};
      return dispatch(cfg);
    }
    if (sweep->parsed()) {
      if (!replay.empty()) return dispatch(replayed(replay, cfg.output));
      if (cfg.model.empty()) throw UsageError("sweep needs --model");
      cfg.command = "sweep";
      cfg.extra = {{"quantity", quantity}};
      if (!zref_text.empty()) {
        const cplx zr = parse_complex(zref_text);
        cfg.extra["z_ref"] = json::array({zr.real(), zr.imag()});
      }
      if (cfg.z.empty()) {
        const auto rs = parse_grid(r_grid.empty() ? "0.1:0.9:9" : r_grid);
        const auto ths = parse_grid(theta_grid.empty() ? "0" : theta_grid);
        for (double r : rs) {
          for (double th : ths) cfg.z.push_back(std::polar(r, th));
        }
      }
      return dispatch(cfg);
    }
    if (suite->parsed()) {
      if (!replay.empty()) return dispatch(replayed(replay, cfg.output));
      if (cfg.model.empty()) throw UsageError("verify suite needs --model");
      cfg.command = "verify suite";
      json sc = json::object();
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw UsageError("cannot open config " + config_file);
        sc = json::parse(in);
      }
      cfg.extra = {{"suite", sc}};
      return dispatch(cfg);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
