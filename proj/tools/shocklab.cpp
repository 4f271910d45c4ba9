// shocklab command line: one subcommand per pipeline, configured by a flat
// config file and/or --section-key flags.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shocklab/config.hpp"
#include "shocklab/report.hpp"

using namespace shocklab;

namespace {

enum Exit { ok = 0, config_failure = 1, numerical_failure = 2, verdict_failure = 3 };

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;  // "section.key" -> text
  std::vector<std::string> bumps;
};

// Registers --section-key for every config key.
void add_config_flags(CLI::App* sub, ConfigFlags& f) {
  sub->add_option("--config", f.config_path, "configuration file")->check(CLI::ExistingFile);
  for (const auto& [section, keys] : detail::config_schema()) {
    for (const auto& key : keys) {
      if (key == "bump") continue;
      const std::string full = section.empty() ? key : section + "." + key;
      std::string flag = "--" + (section.empty() ? key : section + "-" + key);
      for (char& c : flag) c = c == '_' ? '-' : c;
      sub->add_option(flag, f.values[full], "config key " + full);
    }
  }
  sub->add_option("--perturbation-bump", f.bumps, "bump: 'field shape center width amplitude' (repeatable)");
}

RunConfig load_config(const ConfigFlags& f) {
  std::string text = f.config_path.empty() ? std::string() : read_text(f.config_path);
  text += "\n";
  // Flags append sections after the file; a key given in both is reported
  // as a duplicate, so drop the file's occurrence first.
  std::map<std::string, std::string> overrides;
  for (const auto& [k, v] : f.values) {
    if (!v.empty()) overrides[k] = v;
  }
  if (!overrides.empty()) {
    std::string filtered, section;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      const std::string line = text.substr(pos, nl - pos);
      pos = nl + 1;
      std::string body(detail::trim(std::string_view(line).substr(0, line.find('#'))));
      if (!body.empty() && body.front() == '[' && body.back() == ']') {
        section = std::string(detail::trim(std::string_view(body).substr(1, body.size() - 2)));
      } else if (const auto eq = body.find('='); eq != std::string::npos) {
        const std::string key(detail::trim(std::string_view(body).substr(0, eq)));
        if (overrides.contains(section.empty() ? key : section + "." + key)) continue;
      }
      filtered += line + "\n";
    }
    text = filtered;
  }
  // Top-level keys must precede any section header.
  std::string head, tail;
  for (const auto& [k, v] : overrides) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) {
      head += k + " = " + v + "\n";
    } else {
      tail += "[" + k.substr(0, dot) + "]\n" + k.substr(dot + 1) + " = " + v + "\n";
    }
  }
  for (const auto& b : f.bumps) tail += "[perturbation]\nbump = " + b + "\n";
  RunConfig c = parse_config(head + text + tail);
  if (const char* env = std::getenv("SHOCKLAB_OUTPUT"); env && *env) c.directory = env;
  return c;
}

void print_error(const Error& e, const std::string& dir) {
  Json rec{{"error", {{"kind", to_string(e.kind())}, {"code", e.code()}, {"message", e.what()}}}};
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    Json v = Json::array();
    for (const auto& x : ce->violations()) v.push_back(Json{{"key", x.key}, {"message", x.message}});
    rec["error"]["violations"] = v;
  }
  std::cerr << rec.dump() << "\n";
  if (!dir.empty()) {
    try {
      ensure_directory(dir);
      write_json(artifact_path(dir, "error.json"), rec);
    } catch (const Error&) {
    }
  }
}

int exit_for(const Error& e) {
  return e.kind() == ErrorKind::config || e.kind() == ErrorKind::domain ? config_failure : numerical_failure;
}

ShockProfile profile_for(const RunConfig& c) {
  return build_profile(c.end_states(), GasModel(c.alpha), c.half_length(), c.N);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous shock stability laboratory"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    ConfigFlags flags;
  };
  std::map<std::string, Sub> subs;
  const std::vector<std::pair<std::string, std::string>> names{
      {"endstates", "Rankine-Hugoniot end states"},
      {"profile", "viscous shock profile"},
      {"simulate", "Navier-Stokes run from the perturbed profile"},
      {"contract", "run with the co-integrated shift and the contraction verdict"},
      {"sweep", "vanishing viscosity sweep over nu_list"},
      {"poincare", "randomized search on the nonlinear Poincare functional"},
      {"inequalities", "global and local Phi inequality suites"},
      {"ledger", "estimate ledger of a contraction run"},
      {"report", "summary of a run directory"}};
  for (const auto& [n, d] : names) {
    auto& s = subs[n];
    s.app = app.add_subcommand(n, d);
    if (n != "report") add_config_flags(s.app, s.flags);
  }

  double p_delta = 0.01, p_C1 = 4.0;
  std::size_t p_samples = 10000, p_bisect_samples = 1000;
  bool p_bisect = false;
  subs["poincare"].app->add_option("--delta", p_delta, "delta");
  subs["poincare"].app->add_option("--C1", p_C1, "L2 ball radius squared");
  subs["poincare"].app->add_option("--samples", p_samples, "random samples");
  subs["poincare"].app->add_flag("--bisect", p_bisect, "also bisect for the largest admissible delta");
  subs["poincare"].app->add_option("--bisect-samples", p_bisect_samples, "samples per bisection step");

  std::size_t i_samples = 100000, i_local = 200000;
  std::vector<double> i_deltas{0.01, 0.02, 0.05, 0.1, 0.2};
  subs["inequalities"].app->add_option("--samples", i_samples, "samples for the global suite");
  subs["inequalities"].app->add_option("--local-samples", i_local, "samples per delta for the local suite");
  subs["inequalities"].app->add_option("--deltas", i_deltas, "delta grid for the local suite")->delimiter(',');

  std::string report_dir;
  subs["report"].app->add_option("--dir", report_dir, "run directory (default: SHOCKLAB_OUTPUT or out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return config_failure;
  }

  std::string dir;
  try {
    if (subs["report"].app->parsed()) {
      if (report_dir.empty()) {
        const char* env = std::getenv("SHOCKLAB_OUTPUT");
        report_dir = env && *env ? env : "out";
      }
      std::cout << emit_report(report_dir);
      return ok;
    }
    std::string which;
    for (auto& [n, s] : subs) {
      if (s.app->parsed()) which = n;
    }
    const RunConfig cfg = load_config(subs[which].flags);
    dir = cfg.directory;
    ensure_directory(dir);
    int code = ok;

    if (which == "endstates") {
      const Json j = to_json(cfg.end_states());
      write_json(artifact_path(dir, "endstates.json"), j);
      std::cout << j.dump(2) << "\n";
    } else if (which == "profile") {
      const ShockProfile P = profile_for(cfg);
      write_csv(artifact_path(dir, "profile.csv"), profile_table(P));
      write_json(artifact_path(dir, "endstates.json"), to_json(P.end_states));
      std::cout << "profile: " << P.size() << " nodes on [" << P.grid.left() << ", " << P.grid.right() << "]\n";
    } else if (which == "simulate") {
      const Trajectory tr = simulate(cfg.simulation());
      write_csv(artifact_path(dir, "monitors.csv"), monitor_table(tr.monitors));
      write_csv(artifact_path(dir, "final_state.csv"), state_table(tr.snapshots.back()));
      std::cout << "simulate: " << tr.monitors.size() << " steps to t = " << tr.snapshots.back().t << "\n";
    } else if (which == "contract" || which == "ledger") {
      const ContractionConfig cc = cfg.contraction();
      const ShockProfile P = profile_for(cfg);
      const ContractionResult r = run_contraction(P, perturbed_profile(P, cfg.perturbation), cc);
      if (which == "contract") {
        write_contraction_artifacts(dir, P, r, cc);
        std::cout << "wre monotone: " << (r.verdict.wre_monotone ? "PASS" : "FAIL") << "\n"
                  << "verdict: " << (r.verdict.pass ? "PASS" : "FAIL") << "\n";
        if (!r.verdict.pass) code = verdict_failure;
      } else {
        const auto rows = estimate_ledger(r.reports, {P.end_states.eps, cc.lambda, cc.delta3});
        write_csv(artifact_path(dir, "ledger.csv"), ledger_table(rows));
        std::cout << to_csv(ledger_table(rows));
      }
    } else if (which == "sweep") {
      const SweepReport rep = run_sweep(cfg.sweep());
      write_sweep_artifacts(dir, rep);
      const Json j = read_json(artifact_path(dir, "sweep.json"));
      std::cout << "sweep: drift C(T) = " << format_number(rep.drift_C) << ", gaps decreasing: "
                << (rep.gaps_decreasing ? "yes" : "no") << "\n";
      if (!j.value("pass", false)) code = verdict_failure;
    } else if (which == "poincare") {
      const auto r = poincare_search(p_delta, p_C1, p_samples, cfg.seed);
      const double dmax =
          p_bisect ? poincare_delta_max(p_C1, p_bisect_samples, cfg.seed) : std::numeric_limits<double>::quiet_NaN();
      write_poincare_artifacts(dir, r, p_delta, p_C1, cfg.seed, dmax);
      std::cout << "max R = " << format_number(r.max_R) << "\n";
    } else if (which == "inequalities") {
      const auto g = check_phi_bounds(cfg.v_minus, i_samples, cfg.seed);
      const auto l = check_local_expansions(cfg.v_minus, i_deltas, i_local, cfg.seed);
      write_inequality_artifacts(dir, g, l, cfg.seed);
      std::cout << "c1 = " << format_number(g.c1) << ", c2 = " << format_number(g.c2)
                << ", ordering violations = " << g.sim_violations << "\n";
    }
    emit_report(dir);
    return code;
  } catch (const Error& e) {
    print_error(e, dir);
    return exit_for(e);
  } catch (const std::exception& e) {
    print_error(Error(ErrorKind::numerical, "internal", e.what()), dir);
    return numerical_failure;
  }
}
