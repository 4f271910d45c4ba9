#pragma once

// Run artifacts (CSV plot data plus small JSON records) and the markdown
// summary assembled from whatever a run directory contains.

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "shocklab/config.hpp"
#include "shocklab/csv.hpp"
#include "shocklab/inequality_lab.hpp"
#include "shocklab/limits.hpp"
#include "shocklab/shift.hpp"

namespace shocklab {

using Json = nlohmann::ordered_json;

inline std::string artifact_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("mkdir", "cannot create " + dir + ": " + ec.message());
}

inline void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }
inline Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    throw io_error("json", path + ": " + e.what());
  }
}

// NaN and infinities become null.
inline Json json_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json to_json(const EndStates& s) {
  return Json{{"v_minus", s.v_minus}, {"u_minus", s.u_minus}, {"v_plus", s.v_plus}, {"u_plus", s.u_plus},
              {"sigma", s.sigma},     {"eps", s.eps},         {"family", static_cast<int>(s.family)},
              {"rh_residual", rh_residual(s)}};
}

inline CsvTable profile_table(const ShockProfile& P) {
  const Vec x = P.grid.nodes();
  return make_table({"x", "v", "u", "h", "dv"}, {&x, &P.v_tilde, &P.u_tilde, &P.h_tilde, &P.dv_tilde});
}

inline CsvTable state_table(const FieldState& s) {
  const Vec x = s.grid.nodes();
  return make_table({"x", "v", "h"}, {&x, &s.v, &s.h});
}

inline CsvTable monitor_table(const std::vector<MonitorRecord>& m) {
  CsvTable t;
  t.header = {"t", "min_v", "max_v", "entropy_residual", "mass_defect", "boundary_leak"};
  for (const auto& r : m) t.add_row({r.t, r.min_v, r.max_v, r.entropy_residual, r.mass_defect, r.boundary_leak});
  return t;
}

inline CsvTable ledger_table(const std::vector<LedgerRow>& rows) {
  CsvTable t;
  t.header = {"id", "ratio", "samples", "zero_rhs"};
  for (const auto& r : rows) {
    t.add_row({r.id, format_number(r.ratio), std::to_string(r.samples), std::to_string(r.zero_rhs)});
  }
  return t;
}

/// trace.csv, ledger.csv, verdict.json, profile.csv and final_state.csv.
inline void write_contraction_artifacts(const std::string& dir, const ShockProfile& P, const ContractionResult& r,
                                        const ContractionConfig& cfg) {
  ensure_directory(dir);
  const auto& tr = r.trace;
  Vec sigma_t(tr.size());
  for (std::size_t n = 0; n < tr.size(); ++n) sigma_t[n] = P.end_states.sigma * tr.times[n];
  write_csv(artifact_path(dir, "trace.csv"),
            make_table({"t", "X", "X_dot", "sigma_t", "wre", "Y", "J_bad", "J_para", "J_good", "contem0",
                        "identity_residual", "f_bound", "gv_accum", "d_accum", "main_value", "main_scale"},
                       {&tr.times, &tr.X, &tr.X_dot, &sigma_t, &tr.wre, &tr.Y, &tr.J_bad, &tr.J_para, &tr.J_good,
                        &tr.contem0, &tr.identity_residual, &tr.f_bound, &tr.gv_accum, &tr.d_accum,
                        &tr.main_value, &tr.main_scale}));
  const LedgerInputs in{P.end_states.eps, cfg.lambda, cfg.delta3};
  write_csv(artifact_path(dir, "ledger.csv"), ledger_table(estimate_ledger(r.reports, in)));
  write_csv(artifact_path(dir, "profile.csv"), profile_table(P));
  write_csv(artifact_path(dir, "final_state.csv"), state_table(r.final_state));
  const auto& v = r.verdict;
  Json j{{"end_states", to_json(P.end_states)},
         {"lambda", cfg.lambda},
         {"delta3", cfg.delta3},
         {"delta0", cfg.delta0},
         {"T", cfg.sim.T},
         {"N", P.size()},
         {"L", P.grid.half_length()},
         {"steps", r.steps},
         {"pass", v.pass},
         {"wre_monotone", v.wre_monotone},
         {"contem0_ok", v.contem0_ok},
         {"first_violation", v.first_violation ? Json(*v.first_violation) : Json(nullptr)},
         {"slack", v.slack},
         {"max_identity_residual", v.max_identity_residual},
         {"max_wre_increase_rate", v.max_wre_increase_rate},
         {"max_contem0", json_number(v.max_contem0)},
         {"f_ratio", v.f_ratio},
         {"max_main_ratio", json_number(v.max_main_ratio)},
         {"main_samples", v.main_samples},
         {"wre_initial", tr.size() ? tr.wre.front() : 0.0},
         {"wre_final", tr.size() ? tr.wre.back() : 0.0},
         {"X_final", r.final_X}};
  write_json(artifact_path(dir, "verdict.json"), j);
}

/// sweep.json, sweep_members.csv and one sweep_X_<k>.csv per member.
inline void write_sweep_artifacts(const std::string& dir, const SweepReport& rep) {
  ensure_directory(dir);
  CsvTable m;
  m.header = {"nu", "N", "E_nu", "ini_gap", "max_abs_X", "drift_ratio", "T1", "T2", "T3", "contraction_pass",
              "failed"};
  Json members = Json::array();
  for (std::size_t k = 0; k < rep.members.size(); ++k) {
    const auto& s = rep.members[k];
    m.add_row({format_number(s.nu), std::to_string(s.N), format_number(s.E_nu), format_number(s.ini_gap),
               format_number(s.max_abs_X), format_number(s.drift_ratio), format_number(s.T1), format_number(s.T2),
               format_number(s.T3), s.contraction_pass ? "1" : "0", s.failed ? "1" : "0"});
    write_csv(artifact_path(dir, "sweep_X_" + std::to_string(k) + ".csv"), make_table({"t", "X"}, {&s.t, &s.X}));
    members.push_back(Json{{"nu", s.nu}, {"failed", s.failed}, {"failure", s.failure}});
  }
  write_csv(artifact_path(dir, "sweep_members.csv"), m);
  Json gaps = Json::array();
  for (double g : rep.l1_gaps) gaps.push_back(json_number(g));
  // Identical members (zero data) have no gaps to decrease.
  bool all_zero = true;
  for (double g : rep.l1_gaps) all_zero = all_zero && g == 0.0;
  bool all_ok = rep.gaps_decreasing || all_zero;
  for (const auto& s : rep.members) all_ok = all_ok && !s.failed;
  write_json(artifact_path(dir, "sweep.json"), Json{{"E0", rep.E0},
                                                    {"l1_gaps", gaps},
                                                    {"gaps_decreasing", rep.gaps_decreasing},
                                                    {"drift_C", json_number(rep.drift_C)},
                                                    {"triple_C", json_number(rep.triple_C)},
                                                    {"pass", all_ok},
                                                    {"members", members}});
}

inline void write_poincare_artifacts(const std::string& dir, const PoincareSearchResult& r, double delta, double C1,
                                     std::uint64_t seed, double delta_max) {
  ensure_directory(dir);
  write_csv(artifact_path(dir, "poincare_argmax.csv"), make_table({"y", "W"}, {&r.y, &r.argmax_W}));
  write_json(artifact_path(dir, "poincare.json"), Json{{"delta", delta},
                                                       {"C1", C1},
                                                       {"seed", seed},
                                                       {"samples", r.samples},
                                                       {"max_R", r.max_R},
                                                       {"max_R_sampling", r.max_R_sampling},
                                                       {"pass", r.max_R <= 1e-9},
                                                       {"delta_max", json_number(delta_max)}});
}

inline void write_inequality_artifacts(const std::string& dir, const PhiBoundsReport& g,
                                       const LocalExpansionReport& l, std::uint64_t seed) {
  ensure_directory(dir);
  CsvTable t;
  t.header = {"delta", "samples", "est1_upper_violations", "est1_upper_violations_v_ge_w", "est1_lower_violations",
              "corrected_upper_violations", "est1_upper_worst", "C_p_est1", "C_v_quad", "C_p_quad"};
  for (const auto& r : l.rows) {
    t.add_row({format_number(r.delta), std::to_string(r.samples), std::to_string(r.est1_upper_violations),
               std::to_string(r.est1_upper_violations_v_ge_w), std::to_string(r.est1_lower_violations),
               std::to_string(r.corrected_upper_violations), format_number(r.est1_upper_worst),
               format_number(r.C_p_est1), format_number(r.C_v_quad), format_number(r.C_p_quad)});
  }
  write_csv(artifact_path(dir, "local_expansions.csv"), t);
  std::size_t upper = 0;
  for (const auto& r : l.rows) upper += r.est1_upper_violations;
  write_json(artifact_path(dir, "phi_bounds.json"),
             Json{{"seed", seed},
                  {"c1", g.c1},
                  {"c1_low", g.c1_low},
                  {"c1_high", g.c1_high},
                  {"c2", g.c2},
                  {"c3", g.c3},
                  {"c3_delta_star", g.c3_delta_star},
                  {"sim_samples", g.sim_samples},
                  {"sim_violations", g.sim_violations},
                  {"est1_upper_violations", upper},
                  {"est1_upper_delta_max", l.est1_upper_delta_max},
                  {"est1_lower_delta_max", l.est1_lower_delta_max},
                  {"corrected_upper_delta_max", l.corrected_upper_delta_max},
                  {"pass", g.sim_violations == 0 && upper == 0}});
}

// ---------------------------------------------------------------------------
// Summary

namespace detail {

struct ArtifactGroup {
  const char* title;
  std::vector<const char*> files;
};

inline const std::vector<ArtifactGroup>& artifact_groups() {
  static const std::vector<ArtifactGroup> groups{
      {"End states", {"endstates.json"}},
      {"Profile", {"profile.csv"}},
      {"Simulation", {"monitors.csv"}},
      {"Contraction", {"verdict.json", "trace.csv", "ledger.csv", "profile.csv", "final_state.csv"}},
      {"Sweep", {"sweep.json", "sweep_members.csv"}},
      {"Poincare search", {"poincare.json", "poincare_argmax.csv"}},
      {"Phi inequalities", {"phi_bounds.json", "local_expansions.csv"}},
  };
  return groups;
}

inline const char* pass_fail(bool b) { return b ? "PASS" : "FAIL"; }

inline std::string fmt(const Json& j) {
  if (j.is_null()) return "n/a";
  if (j.is_number_float()) return format_number(j.get<double>());
  return j.dump();
}

}  // namespace detail

/// Writes summary.md into `dir` from the artifacts present and returns its
/// text.  Missing files of a partially present group are listed as gaps.
inline std::string emit_report(const std::string& dir) {
  namespace fs = std::filesystem;
  auto has = [&](const char* f) { return fs::exists(fs::path(dir) / f); };
  std::ostringstream os;
  os << "# shocklab run summary\n\n";
  std::vector<std::string> gaps;
  bool any = false;

  if (has("endstates.json")) {
    any = true;
    const Json j = read_json(artifact_path(dir, "endstates.json"));
    os << "## End states\n\n";
    for (const auto& [k, v] : j.items()) os << "- " << k << ": " << detail::fmt(v) << "\n";
    os << "\n";
  }
  if (has("verdict.json")) {
    any = true;
    const Json j = read_json(artifact_path(dir, "verdict.json"));
    os << "## Contraction\n\n";
    os << "- wre monotone: " << detail::pass_fail(j.value("wre_monotone", false)) << "\n";
    os << "- dissipation identity sign: " << detail::pass_fail(j.value("contem0_ok", false)) << "\n";
    os << "- verdict: " << detail::pass_fail(j.value("pass", false)) << "\n";
    for (const char* k : {"wre_initial", "wre_final", "X_final", "slack", "max_identity_residual", "f_ratio",
                          "max_main_ratio", "first_violation"}) {
      os << "- " << k << ": " << detail::fmt(j.value(k, Json(nullptr))) << "\n";
    }
    os << "\nPlot data: trace.csv (wre vs t; X and sigma_t vs t), profile.csv, ledger.csv\n\n";
  }
  if (has("ledger.csv")) {
    any = true;
    const CsvTable t = read_csv(artifact_path(dir, "ledger.csv"));
    os << "## Estimate ledger\n\n| id | ratio | samples |\n|---|---|---|\n";
    for (const auto& r : t.rows) os << "| " << r.at(0) << " | " << r.at(1) << " | " << r.at(2) << " |\n";
    os << "\n";
  }
  if (has("sweep.json")) {
    any = true;
    const Json j = read_json(artifact_path(dir, "sweep.json"));
    os << "## Inviscid sweep\n\n";
    os << "- E0: " << detail::fmt(j.value("E0", Json(nullptr))) << "\n";
    os << "- L1 gaps decreasing: " << detail::pass_fail(j.value("gaps_decreasing", false)) << "\n";
    os << "- drift constant C(T): " << detail::fmt(j.value("drift_C", Json(nullptr))) << "\n";
    os << "- triple constant: " << detail::fmt(j.value("triple_C", Json(nullptr))) << "\n";
    if (has("sweep_members.csv")) {
      const CsvTable t = read_csv(artifact_path(dir, "sweep_members.csv"));
      os << "\n| nu | drift ratio | max abs X | failed |\n|---|---|---|---|\n";
      for (const auto& r : t.rows) {
        os << "| " << r.at(t.column("nu")) << " | " << r.at(t.column("drift_ratio")) << " | "
           << r.at(t.column("max_abs_X")) << " | " << r.at(t.column("failed")) << " |\n";
      }
    }
    os << "\nPlot data: sweep_X_<k>.csv (X_nu vs t)\n\n";
  }
  if (has("poincare.json")) {
    any = true;
    const Json j = read_json(artifact_path(dir, "poincare.json"));
    os << "## Nonlinear Poincare search\n\n";
    for (const char* k : {"delta", "C1", "samples", "max_R", "delta_max"}) {
      os << "- " << k << ": " << detail::fmt(j.value(k, Json(nullptr))) << "\n";
    }
    os << "- max R <= 1e-9: " << detail::pass_fail(j.value("pass", false)) << "\n\n";
  }
  if (has("phi_bounds.json")) {
    any = true;
    const Json j = read_json(artifact_path(dir, "phi_bounds.json"));
    os << "## Phi inequalities\n\n";
    for (const char* k : {"c1", "c1_low", "c1_high", "c2", "c3", "sim_violations", "est1_upper_violations",
                          "corrected_upper_delta_max"}) {
      os << "- " << k << ": " << detail::fmt(j.value(k, Json(nullptr))) << "\n";
    }
    os << "- zero violations: " << detail::pass_fail(j.value("pass", false)) << "\n\n";
  }
  if (has("monitors.csv")) {
    any = true;
    const CsvTable t = read_csv(artifact_path(dir, "monitors.csv"));
    os << "## Simulation\n\n- monitor records: " << t.rows.size() << "\n\n";
  }
  if (has("profile.csv") && !has("verdict.json")) {
    any = true;
    os << "## Profile\n\nPlot data: profile.csv\n\n";
  }

  for (const auto& g : detail::artifact_groups()) {
    bool present = false;
    for (const char* f : g.files) present = present || has(f);
    if (!present) continue;
    for (const char* f : g.files) {
      if (!has(f)) gaps.push_back(std::string(g.title) + ": missing " + f);
    }
  }
  if (!any) gaps.emplace_back("no run artifacts found");
  os << "## Gaps\n\n";
  if (gaps.empty()) os << "none\n";
  for (const auto& g : gaps) os << "- " << g << "\n";

  const std::string text = os.str();
  if (fs::is_directory(dir)) write_text(artifact_path(dir, "summary.md"), text);
  return text;
}

}  // namespace shocklab
