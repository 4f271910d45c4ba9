#pragma once

// Flat sectioned key = value run configuration.
//
//   seed = 1
//   [shock]
//   eps = 0.1
//   [perturbation]
//   bump = v gaussian 0 20 0.2     # field shape center width amplitude
//
// Blank lines and text after '#' are ignored.  `bump` may repeat; every
// other key may appear once.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shocklab/error.hpp"
#include "shocklab/limits.hpp"
#include "shocklab/shift.hpp"

namespace shocklab {

struct ConfigViolation {
  std::string key;  // "section.key", or "line N" for syntax errors
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigViolation> v)
      : Error(ErrorKind::config, "config", summarize(v)), violations_(std::move(v)) {}
  const std::vector<ConfigViolation>& violations() const noexcept { return violations_; }

 private:
  static std::string summarize(const std::vector<ConfigViolation>& v) {
    std::ostringstream os;
    os << v.size() << " configuration error" << (v.size() == 1 ? "" : "s");
    for (const auto& e : v) os << "\n  " << e.key << ": " << e.message;
    return os.str();
  }
  std::vector<ConfigViolation> violations_;
};

struct RunConfig {
  // model
  double alpha = 0.0;
  // shock
  double v_minus = 1.0, u_minus = 0.0, eps = 0.01;
  int family = 2;
  // weight
  double lambda = 0.1;
  // numerics; L is the half-length, 0 means 40/eps
  double L = 0.0;
  std::size_t N = 4096;
  double cfl = 0.4, positivity_floor = 1e-6, snapshot_cadence = 0.0;
  // functionals
  double delta3 = 0.1, delta0 = 0.05;
  PerturbationSpec perturbation;
  // time
  double T = 10.0;
  // sweep
  std::vector<double> nu_list{1.0, 0.5, 0.25, 0.125};
  // output
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "md"};
  std::uint64_t seed = 1;

  double half_length() const { return L > 0.0 ? L : 40.0 / eps; }
  Family shock_family() const { return family == 1 ? Family::one : Family::two; }
  EndStates end_states() const { return solve_rankine_hugoniot(v_minus, u_minus, eps, shock_family()); }

  SolverOptions solver() const {
    SolverOptions s;
    s.cfl = cfl;
    s.positivity_floor = positivity_floor;
    return s;
  }

  SimulationConfig simulation() const {
    SimulationConfig s;
    s.end_states = end_states();
    s.model = GasModel(alpha);
    s.L = half_length();
    s.N = N;
    s.T = T;
    s.snapshot_cadence = snapshot_cadence;
    s.solver = solver();
    s.perturbation = perturbation;
    return s;
  }

  ContractionConfig contraction() const {
    ContractionConfig c;
    c.sim = simulation();
    c.lambda = lambda;
    c.delta3 = delta3;
    c.delta0 = delta0;
    return c;
  }

  /// The nu = 1 member uses the numerics grid; finer members keep its spacing.
  SweepConfig sweep() const {
    SweepConfig c;
    c.end_states = end_states();
    c.model = GasModel(alpha);
    c.nu_list = nu_list;
    c.perturbation = perturbation;
    c.T = T;
    c.L1 = half_length();
    c.dx = 2.0 * c.L1 / static_cast<double>(N - 1);
    c.lambda = lambda;
    c.delta3 = delta3;
    c.delta0 = delta0;
    c.solver = solver();
    return c;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_words(std::string_view s, char sep = 0) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto t = trim(cur);
    if (!t.empty()) out.emplace_back(t);
    cur.clear();
  };
  for (char c : s) {
    if (sep ? c == sep : (c == ' ' || c == '\t')) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

inline bool parse_number(std::string_view s, double& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(out);
}

template <class Int>
bool parse_integer(std::string_view s, Int& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

inline const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema{
      {"", {"seed"}},
      {"model", {"alpha"}},
      {"shock", {"v_minus", "u_minus", "eps", "family"}},
      {"weight", {"lambda"}},
      {"numerics", {"L", "N", "cfl", "positivity_floor", "snapshot_cadence"}},
      {"functionals", {"delta3", "delta0"}},
      {"perturbation", {"bump"}},
      {"time", {"T"}},
      {"sweep", {"nu_list"}},
      {"output", {"directory", "formats"}},
  };
  return schema;
}

inline bool parse_bump(const std::string& text, Bump& b, std::string& why) {
  const auto w = split_words(text);
  if (w.size() != 5) {
    why = "expected 'field shape center width amplitude'";
    return false;
  }
  if (w[0] == "v") {
    b.field = BumpField::v;
  } else if (w[0] == "h" || w[0] == "u") {
    b.field = BumpField::h;
  } else {
    why = "bump field must be v or h";
    return false;
  }
  if (w[1] == "gaussian") {
    b.shape = BumpShape::gaussian;
  } else if (w[1] == "sine_packet") {
    b.shape = BumpShape::sine_packet;
  } else {
    why = "bump shape must be gaussian or sine_packet";
    return false;
  }
  if (!parse_number(w[2], b.center) || !parse_number(w[3], b.width) || !parse_number(w[4], b.amplitude)) {
    why = "bump center, width and amplitude must be numbers";
    return false;
  }
  return true;
}

}  // namespace detail

/// Parses and validates; throws ConfigError listing every violation found.
inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::vector<ConfigViolation> bad;
  std::set<std::string> seen;
  std::string section;
  bool L_given = false;
  const auto& schema = detail::config_schema();

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        bad.push_back({where, "unterminated section header"});
        continue;
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (!schema.contains(section) || section.empty()) bad.push_back({where, "unknown section '" + section + "'"});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      bad.push_back({where, "expected key = value"});
      continue;
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto sec = schema.find(section);
    if (sec == schema.end()) continue;  // already reported
    if (!sec->second.contains(key)) {
      bad.push_back({full, "unknown key '" + full + "'"});
      continue;
    }
    if (key != "bump" && !seen.insert(full).second) {
      bad.push_back({full, "duplicate key"});
      continue;
    }

    auto number = [&](double& dst) {
      if (!detail::parse_number(value, dst)) bad.push_back({full, "not a finite number: '" + value + "'"});
    };
    if (full == "seed") {
      if (!detail::parse_integer(value, c.seed)) bad.push_back({full, "seed must be a nonnegative integer"});
    } else if (full == "model.alpha") {
      number(c.alpha);
    } else if (full == "shock.v_minus") {
      number(c.v_minus);
    } else if (full == "shock.u_minus") {
      number(c.u_minus);
    } else if (full == "shock.eps") {
      number(c.eps);
    } else if (full == "shock.family") {
      if (!detail::parse_integer(value, c.family)) bad.push_back({full, "family must be 1 or 2"});
    } else if (full == "weight.lambda") {
      number(c.lambda);
    } else if (full == "numerics.L") {
      number(c.L);
      L_given = true;
    } else if (full == "numerics.N") {
      if (!detail::parse_integer(value, c.N)) bad.push_back({full, "N must be a positive integer"});
    } else if (full == "numerics.cfl") {
      number(c.cfl);
    } else if (full == "numerics.positivity_floor") {
      number(c.positivity_floor);
    } else if (full == "numerics.snapshot_cadence") {
      number(c.snapshot_cadence);
    } else if (full == "functionals.delta3") {
      number(c.delta3);
    } else if (full == "functionals.delta0") {
      number(c.delta0);
    } else if (full == "perturbation.bump") {
      Bump b;
      std::string why;
      if (detail::parse_bump(value, b, why)) {
        c.perturbation.bumps.push_back(b);
      } else {
        bad.push_back({full, why});
      }
    } else if (full == "time.T") {
      number(c.T);
    } else if (full == "sweep.nu_list") {
      c.nu_list.clear();
      for (const auto& w : detail::split_words(value, ',')) {
        double x = 0.0;
        if (!detail::parse_number(w, x)) {
          bad.push_back({full, "not a finite number: '" + w + "'"});
          break;
        }
        c.nu_list.push_back(x);
      }
    } else if (full == "output.directory") {
      c.directory = value;
    } else if (full == "output.formats") {
      c.formats = detail::split_words(value, ',');
    }
  }

  // Cross-field constraints.
  auto check = [&](bool ok, const char* key, const std::string& msg) {
    if (!ok) bad.push_back({key, msg});
  };
  check(c.alpha >= 0.0 && c.alpha <= 1.0, "model.alpha", "alpha must lie in [0,1]");
  check(c.v_minus > 0.0, "shock.v_minus", "v_minus must be positive");
  check(c.eps > 0.0, "shock.eps", "eps must be positive");
  if (c.v_minus > 0.0 && c.eps >= 1.0 / c.v_minus) {
    bad.push_back({"shock.eps", "amplitude exceeds p(v_minus): need eps < 1/v_minus"});
  }
  check(c.family == 1 || c.family == 2, "shock.family", "family must be 1 or 2");
  check(c.lambda > 0.0 && c.lambda < 1.0, "weight.lambda", "lambda must lie in (0,1)");
  check(!L_given || c.L > 0.0, "numerics.L", "L must be positive");
  if (c.eps > 0.0 && (!L_given || c.L > 0.0)) {
    check(c.eps * c.half_length() >= 20.0, "numerics.L", "domain too short: need eps*L >= 20");
  }
  check(c.N >= 16, "numerics.N", "N must be at least 16");
  check(c.cfl > 0.0 && c.cfl <= 1.0, "numerics.cfl", "cfl must lie in (0,1]");
  check(c.positivity_floor > 0.0, "numerics.positivity_floor", "positivity_floor must be positive");
  check(c.snapshot_cadence >= 0.0, "numerics.snapshot_cadence", "snapshot_cadence must be nonnegative");
  check(c.delta3 > 0.0, "functionals.delta3", "delta3 must be positive");
  check(c.delta0 > 0.0 && c.delta0 < 1.0, "functionals.delta0", "delta0 must lie in (0,1)");
  check(c.T >= 0.0, "time.T", "T must be nonnegative");
  bool nu_ok = !c.nu_list.empty() && c.nu_list.front() == 1.0;
  for (std::size_t k = 1; k < c.nu_list.size(); ++k) nu_ok = nu_ok && c.nu_list[k] > 0.0 && c.nu_list[k] < c.nu_list[k - 1];
  check(nu_ok, "sweep.nu_list", "nu_list must start at 1 and decrease strictly");
  check(!c.directory.empty(), "output.directory", "directory must not be empty");
  for (const auto& f : c.formats) check(f == "csv" || f == "md", "output.formats", "unknown format '" + f + "'");
  if (c.eps > 0.0 && c.half_length() > 0.0) {
    try {
      c.perturbation.validate(c.half_length());
    } catch (const Error& e) {
      bad.push_back({"perturbation.bump", e.what()});
    }
  }
  if (bad.empty()) {
    try {
      (void)c.end_states();
    } catch (const Error& e) {
      bad.push_back({"shock", e.what()});
    }
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return c;
}

}  // namespace shocklab
