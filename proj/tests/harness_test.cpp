#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "shocklab/config.hpp"
#include "shocklab/csv.hpp"
#include "shocklab/report.hpp"

using namespace shocklab;

namespace {

std::vector<std::string> violation_keys(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    std::vector<std::string> keys;
    for (const auto& v : e.violations()) keys.push_back(v.key);
    return keys;
  }
  return {};
}

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("shocklab_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

}  // namespace

TEST(Config, DefaultsFilled) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.alpha, 0.0);
  EXPECT_EQ(c.lambda, 0.1);
  EXPECT_EQ(c.eps, 0.01);
  EXPECT_EQ(c.cfl, 0.4);
  EXPECT_EQ(c.delta3, 0.1);
  EXPECT_EQ(c.delta0, 0.05);
  EXPECT_EQ(c.family, 2);
  EXPECT_EQ(c.half_length(), 4000.0);
  EXPECT_EQ(c.N, 4096u);
  EXPECT_EQ(c.seed, 1u);
}

TEST(Config, ParsesSectionsAndBumps) {
  const RunConfig c = parse_config(R"(seed = 42   # master seed
[shock]
eps = 0.1
v_minus = 2
[numerics]
L = 400
N = 1024
[perturbation]
bump = v gaussian 0 20 0.2
bump = h sine_packet -10 5 0.05
[sweep]
nu_list = 1, 0.5
)");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.eps, 0.1);
  EXPECT_EQ(c.v_minus, 2.0);
  ASSERT_EQ(c.perturbation.bumps.size(), 2u);
  EXPECT_EQ(c.perturbation.bumps[1].field, BumpField::h);
  EXPECT_EQ(c.perturbation.bumps[1].shape, BumpShape::sine_packet);
  EXPECT_EQ(c.perturbation.bumps[1].center, -10.0);
  EXPECT_EQ(c.nu_list, (std::vector<double>{1.0, 0.5}));
  const SweepConfig s = c.sweep();
  EXPECT_EQ(s.L1, 400.0);
  EXPECT_NEAR(s.dx, 800.0 / 1023.0, 1e-15);
}

TEST(Config, AmplitudeExceedsPressure) {
  try {
    parse_config("[shock]\neps = 2\nv_minus = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_NE(e.violations()[0].message.find("amplitude exceeds p(v_minus)"), std::string::npos);
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
}

TEST(Config, ReportsEveryViolation) {
  const auto keys = violation_keys(R"([weight]
lambda = 1.5
[shocks]
eps = 0.1
[numerics]
cfl = -1
bogus = 3
N = many
[functionals]
delta0 = 0.05
delta0 = 0.06
)");
  const std::vector<std::string> expected{"line 3", "numerics.bogus", "numerics.N", "functionals.delta0",
                                          "weight.lambda", "numerics.cfl"};
  EXPECT_EQ(keys, expected);
}

TEST(Config, CrossFieldConstraints) {
  EXPECT_EQ(violation_keys("[shock]\neps = 0.1\n[numerics]\nL = 100\n"), std::vector<std::string>{"numerics.L"});
  EXPECT_EQ(violation_keys("[sweep]\nnu_list = 0.5, 0.25\n"), std::vector<std::string>{"sweep.nu_list"});
  EXPECT_EQ(violation_keys("[shock]\neps = 0.1\n[numerics]\nL = 400\n[perturbation]\nbump = v gaussian 195 3 0.1\n"),
            std::vector<std::string>{"perturbation.bump"});
  EXPECT_EQ(violation_keys("[perturbation]\nbump = w gaussian 0 1 1\n"), std::vector<std::string>{"perturbation.bump"});
  EXPECT_EQ(violation_keys("[output]\nformats = csv, hdf5\n"), std::vector<std::string>{"output.formats"});
  EXPECT_EQ(violation_keys("garbage\n"), std::vector<std::string>{"line 1"});
}

TEST(Csv, RoundTrip) {
  CsvTable t;
  t.header = {"id", "x"};
  t.add_row({"a", format_number(0.1)});
  t.add_row({"b", format_number(std::nan(""))});
  t.add_row({"c", format_number(-1e-300)});
  t.add_row({"d", format_number(-std::numeric_limits<double>::infinity())});
  const std::string text = to_csv(t);
  EXPECT_EQ(text, "id,x\na,0.1\nb,nan\nc,-1e-300\nd,-inf\n");
  const CsvTable back = parse_csv(text);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  const auto x = back.numbers("x");
  EXPECT_EQ(x[0], 0.1);
  EXPECT_TRUE(std::isnan(x[1]));
  EXPECT_EQ(x[2], -1e-300);
  EXPECT_THROW(back.column("y"), Error);
}

TEST(Csv, ExactDoublesSurvive) {
  const Vec a{1.0 / 3.0, std::sqrt(2.0), 6.02214076e23, -0.0};
  const CsvTable back = parse_csv(to_csv(make_table({"a"}, {&a})));
  const Vec b = back.numbers("a");
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_THROW(parse_csv(""), Error);
  EXPECT_THROW(to_csv(CsvTable{{"a,b"}, {}}), Error);
}

TEST(Report, EmptyDirectoryListsGaps) {
  const std::string d = temp_dir("empty");
  const std::string s = emit_report(d);
  EXPECT_NE(s.find("no run artifacts found"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(d) / "summary.md"));
}

TEST(Report, ContractionSummaryAndRoundTrip) {
  RunConfig c = parse_config("[shock]\neps = 0.1\n[numerics]\nL = 400\nN = 512\n[time]\nT = 1\n"
                             "[perturbation]\nbump = v gaussian 0 5 0.05\n");
  const ShockProfile P = build_profile(c.end_states(), GasModel(c.alpha), c.half_length(), c.N);
  const ContractionConfig cc = c.contraction();
  const ContractionResult r = run_contraction(P, perturbed_profile(P, c.perturbation), cc);
  const std::string d = temp_dir("contract");
  write_contraction_artifacts(d, P, r, cc);
  const std::string s = emit_report(d);
  EXPECT_NE(s.find("wre monotone: PASS"), std::string::npos);
  EXPECT_NE(s.find("Gaps\n\nnone"), std::string::npos);
  // Every CSV re-parses and reproduces the trace exactly.
  const CsvTable t = read_csv(artifact_path(d, "trace.csv"));
  EXPECT_EQ(t.numbers("wre"), r.trace.wre);
  EXPECT_EQ(t.numbers("X"), r.trace.X);
  for (const char* f : {"ledger.csv", "profile.csv", "final_state.csv"}) {
    EXPECT_NO_THROW(read_csv(artifact_path(d, f))) << f;
  }
  // Determinism: a second identical run writes identical bytes.
  const std::string d2 = temp_dir("contract2");
  write_contraction_artifacts(d2, P, run_contraction(P, perturbed_profile(P, c.perturbation), cc), cc);
  for (const char* f : {"trace.csv", "ledger.csv", "verdict.json"}) {
    EXPECT_EQ(read_text(artifact_path(d, f)), read_text(artifact_path(d2, f))) << f;
  }
  std::filesystem::remove(std::filesystem::path(d) / "ledger.csv");
  EXPECT_NE(emit_report(d).find("Contraction: missing ledger.csv"), std::string::npos);
}

TEST(Report, SweepSummaryHasDriftRatios) {
  SweepReport rep;
  rep.E0 = 0.5;
  for (double nu : {1.0, 0.5}) {
    SweepMember m;
    m.nu = nu;
    m.t = {0.0, 1.0};
    m.X = {0.0, -nu};
    m.drift_ratio = 0.25 * nu;
    rep.members.push_back(m);
  }
  rep.l1_gaps = {0.25};
  const std::string d = temp_dir("sweep");
  write_sweep_artifacts(d, rep);
  const std::string s = emit_report(d);
  EXPECT_NE(s.find("| 0.5 | 0.125 |"), std::string::npos);
  EXPECT_EQ(read_csv(artifact_path(d, "sweep_X_1.csv")).numbers("X"), (std::vector<double>{0.0, -0.5}));
}
