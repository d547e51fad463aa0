#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "imsparkle/harness.hpp"
#include "imsparkle/signal_io.hpp"

using namespace imsparkle;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kSource = IMSPARKLE_SOURCE_DIR;
const std::string kCli = IMSPARKLE_CLI;

const char* kSmallConfig = R"({
  "center_frequency": 3e9,
  "sweep_time": 300e-6,
  "bandwidth": 10e6,
  "lpf_cutoff": 0.45e6,
  "lpf_stopband": 0.5e6,
  "sampling_rate": 1e6,
  "snr_db": 20,
  "target_sinr0_db": -5,
  "seed": 3,
  "targets": [{"range": 1000}, {"range": 1500, "amplitude_magnitude": 0.5}],
  "interferers": [
    {"slope_multiple": 3, "center_time": 80e-6},
    {"slope_multiple": -2, "center_time": 200e-6, "amplitude_phase": 1.0}
  ],
  "solver": {"rank": 8, "max_iters": 60, "tau": 0.08},
  "rpca": {"max_iters": 15},
  "montecarlo": {"runs": 2, "sinr0_db": [-10, 0]},
  "duration_sweep": {"durations": [0.2, 0.4], "runs": 1}
})";

class Workspace : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("imsparkle_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string read(const std::string& file) {
    std::ifstream in(file);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Runs the CLI; stdout and stderr go to `log`.
  int cli(const std::string& args) {
    const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + path("log.txt") + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    log = read(path("log.txt"));
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::size_t count_rows(const std::string& csv) {
    std::ifstream in(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line != "re,im") ++rows;
    }
    return rows;
  }

  fs::path dir_;
  std::string log;
};

}  // namespace

TEST_F(Workspace, SimulateCanonicalWritesAllSignals) {
  ASSERT_EQ(cli("simulate --config " + kSource + "/configs/canonical.json --output " + path("sim")), 0)
      << log;
  for (const char* name : {"reference.csv", "interference.csv", "noise.csv", "measurement.csv"}) {
    EXPECT_EQ(count_rows(path(std::string("sim/") + name)), 4800u) << name;
  }
  const json resolved = json::parse(read(path("sim/scenario_resolved.json")));
  const json& d = resolved.at("derived");
  EXPECT_EQ(d.at("sample_count"), 4800);
  EXPECT_DOUBLE_EQ(d.at("slope_hz_per_s").get<double>(), 1e11);
  EXPECT_EQ(d.at("beat_frequencies_hz").size(), 3u);
  EXPECT_GE(d.at("contaminated_fraction").get<double>(), 0.33);
  EXPECT_LE(d.at("contaminated_fraction").get<double>(), 0.40);
  EXPECT_NEAR(d.at("sinr0_db").get<double>(), -12.7, 1e-9);
}

TEST_F(Workspace, SimulateRejectsTargetBeyondCutoff) {
  json cfg = json::parse(kSmallConfig);
  cfg["targets"] = json::array({{{"range", 25000}}});
  EXPECT_NE(cli("simulate --config " + write("far.json", cfg.dump()) + " --output " + path("o")), 0);
  EXPECT_NE(log.find("cutoff"), std::string::npos) << log;
}

TEST_F(Workspace, SimulateWithoutTargetsGivesZeroReference) {
  json cfg = json::parse(kSmallConfig);
  cfg["targets"] = json::array();
  cfg["interferers"] = json::array({{{"slope_multiple", 3}, {"center_time", 1e-4}}});
  cfg.erase("target_sinr0_db");
  ASSERT_EQ(cli("simulate --config " + write("cfg.json", cfg.dump()) + " --output " + path("o")), 0)
      << log;
  EXPECT_EQ(read_signal_csv(path("o/reference.csv")).norm(), 0.0);
  EXPECT_GT(read_signal_csv(path("o/measurement.csv")).norm(), 0.0);
}

TEST_F(Workspace, MitigateReportAgreesWithEvaluate) {
  const std::string cfg = write("cfg.json", kSmallConfig);
  ASSERT_EQ(cli("simulate --config " + cfg + " --output " + path("sim")), 0) << log;
  ASSERT_EQ(cli("mitigate --input " + path("sim/measurement.csv") + " --config " + cfg +
                " --reference " + path("sim/reference.csv") + " --output " + path("mit")),
            0)
      << log;
  const json report = json::parse(read(path("mit/report.json")));
  EXPECT_EQ(report.at("method"), "sparkle");
  EXPECT_LE(report.at("iterations").get<int>(), 60);
  for (const char* key : {"scenario_digest", "sinr0_db", "sinr_db", "rho_modulus", "rho_phase",
                          "iterations", "wall_time_s", "converged"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  ASSERT_EQ(cli("evaluate --reference " + path("sim/reference.csv") + " --input " +
                path("mit/recovered.csv") + " --output " + path("eval.json")),
            0)
      << log;
  const json eval = json::parse(read(path("eval.json")));
  EXPECT_NEAR(report.at("sinr_db").get<double>(), eval.at("sinr_db").get<double>(), 1e-9);
  EXPECT_NEAR(report.at("rho_modulus").get<double>(), eval.at("rho_modulus").get<double>(), 1e-12);
  EXPECT_NEAR(report.at("sinr0_db").get<double>(), -5.0, 1e-9);

  const std::string trace = read(path("mit/trace.csv"));
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "iteration,rel_error,beta,mu");
  EXPECT_EQ(count_rows(path("mit/recovered.csv")), 300u);
  EXPECT_EQ(count_rows(path("mit/interference_est.csv")), 300u);
}

TEST_F(Workspace, MitigateWithoutReferenceOmitsScores) {
  const std::string cfg = write("cfg.json", kSmallConfig);
  ASSERT_EQ(cli("simulate --config " + cfg + " --output " + path("sim")), 0) << log;
  ASSERT_EQ(cli("mitigate --method rpca --input " + path("sim/measurement.csv") + " --config " +
                cfg + " --output " + path("mit")),
            0)
      << log;
  const json report = json::parse(read(path("mit/report.json")));
  EXPECT_EQ(report.at("method"), "rpca");
  EXPECT_FALSE(report.contains("sinr_db"));
  EXPECT_FALSE(report.contains("rho_modulus"));
  EXPECT_EQ(count_rows(path("mit/trace.csv")), 1u + report.at("iterations").get<std::size_t>());
}

TEST_F(Workspace, MitigateCanonicalMeasurement) {
  ASSERT_EQ(cli("simulate --config " + kSource + "/configs/canonical_scaled.json --output " +
                path("sim")),
            0);
  ASSERT_EQ(cli("mitigate --input " + path("sim/measurement.csv") + " --config " + kSource +
                "/configs/canonical_scaled.json --output " + path("mit")),
            0)
      << log;
  const json report = json::parse(read(path("mit/report.json")));
  EXPECT_TRUE(report.at("converged").get<bool>());
  EXPECT_LE(report.at("iterations").get<int>(), 500);

  ASSERT_EQ(cli("range-profile --input " + path("mit/recovered.csv") + " --config " + kSource +
                "/configs/canonical_scaled.json --window hann --output " + path("profile.csv")),
            0)
      << log;
  std::ifstream in(path("profile.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "range_m,magnitude_db");
  std::vector<std::pair<double, double>> bins;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    bins.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  // The weak target at 3.5 km shows as a local maximum after mitigation.
  std::size_t best = 0;
  for (std::size_t k = 1; k + 1 < bins.size(); ++k) {
    if (std::abs(bins[k].first - 3500.0) < 30.0 && (best == 0 || bins[k].second > bins[best].second)) {
      best = k;
    }
  }
  ASSERT_GT(best, 0u);
  EXPECT_GT(bins[best].second, bins[best - 1].second);
  EXPECT_GT(bins[best].second, bins[best + 1].second);
}

TEST_F(Workspace, MitigateErrors) {
  EXPECT_NE(cli("mitigate --input " + write("empty.csv", "") + " --output " + path("o")), 0);
  EXPECT_NE(log.find("empty signal"), std::string::npos) << log;
  const std::string input = write("y.csv", "1,0\n0,1\n1,1\n0.5,0.2\n");
  EXPECT_NE(cli("mitigate --method magic --input " + input + " --output " + path("o")), 0);
  EXPECT_NE(cli("mitigate --auto-params --input " + input + " --output " + path("o")), 0);
  EXPECT_NE(log.find("SNR"), std::string::npos) << log;
}

TEST_F(Workspace, AutoParamsResolveFromData) {
  const std::string cfg = write("cfg.json", kSmallConfig);
  ASSERT_EQ(cli("simulate --config " + cfg + " --output " + path("sim")), 0);
  ASSERT_EQ(cli("mitigate --auto-params --snr-db 20 --input " + path("sim/measurement.csv") +
                " --output " + path("mit")),
            0)
      << log;
  const std::string trace = read(path("mit/trace.csv"));
  std::istringstream rows(trace);
  std::string header, first;
  std::getline(rows, header);
  std::getline(rows, first);
  EXPECT_EQ(first.substr(0, 2), "1,");
  const double beta = std::stod(first.substr(first.find(',', 2) + 1));
  EXPECT_NEAR(beta, 0.01, 1e-15);

  harness::MethodSettings settings;
  settings.solver_auto = harness::AutoMultipliers{};
  const CVector y = read_signal_csv(path("sim/measurement.csv"));
  const SolverParams p = harness::resolve_solver_params(settings, y, 20.0);
  EXPECT_NEAR(p.sparsity_weight, 1.0 / std::sqrt(151.0), 1e-15);
  EXPECT_NEAR(p.data_penalty, 0.01, 1e-15);
}

TEST_F(Workspace, EvaluateIdenticalSignals) {
  const std::string ref = write("ref.csv", "re,im\n1,2\n-0.5,0.25\n3,0\n");
  ASSERT_EQ(cli("evaluate --reference " + ref + " --input " + ref + " --output " + path("e.json")), 0);
  const json e = json::parse(read(path("e.json")));
  EXPECT_EQ(e.at("sinr_db"), "+inf");
  EXPECT_NEAR(e.at("rho_modulus").get<double>(), 1.0, 1e-15);
}

TEST_F(Workspace, MontecarloSingleRunTable) {
  const std::string cfg = write("cfg.json", kSmallConfig);
  ASSERT_EQ(cli("montecarlo --config " + cfg + " --runs 1 --output " + path("t.csv")), 0) << log;
  std::istringstream in(read(path("t.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "sinr0_db,method,runs,mean_sinr0_db,mean_sinr_db,mean_abs_rho,mean_rho_modulus,"
            "mean_rho_phase,mean_iterations,converged_runs");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].substr(0, rows[0].find(',', 4)), "-10,sparkle");
  EXPECT_EQ(rows[1].substr(0, rows[1].find(',', 4)), "-10,rpca");
  EXPECT_EQ(rows[2].substr(0, rows[2].find(',', 2)), "0,sparkle");
}

TEST_F(Workspace, MontecarloIsByteIdenticalAcrossInvocationsAndJobCounts) {
  const std::string cfg = write("cfg.json", kSmallConfig);
  ASSERT_EQ(cli("montecarlo --config " + cfg + " --seed 11 --output " + path("a.csv")), 0) << log;
  ASSERT_EQ(cli("montecarlo --config " + cfg + " --seed 11 --output " + path("b.csv")), 0) << log;
  ASSERT_EQ(cli("montecarlo --config " + cfg + " --seed 11 --jobs 3 --output " + path("c.csv")),
            0)
      << log;
  EXPECT_EQ(read(path("a.csv")), read(path("b.csv")));
  EXPECT_EQ(read(path("a.csv")), read(path("c.csv")));
  ASSERT_EQ(cli("montecarlo --config " + cfg + " --seed 12 --output " + path("d.csv")), 0) << log;
  EXPECT_NE(read(path("a.csv")), read(path("d.csv")));
}

TEST_F(Workspace, MontecarloTimingColumnIsOptIn) {
  const std::string cfg = write("cfg.json", kSmallConfig);
  ASSERT_EQ(cli("montecarlo --config " + cfg + " --runs 1 --method sparkle --sinr0-db 0 --timing "
                "--output " + path("t.csv")),
            0)
      << log;
  const std::string text = read(path("t.csv"));
  EXPECT_NE(text.find(",mean_wall_time_s\n"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST_F(Workspace, AddingRunsKeepsEarlierRealizations) {
  const auto cfg = harness::config_from_json_text(kSmallConfig);
  const auto one = harness::montecarlo_table(cfg, 1, {-10.0}, {harness::Method::kSparkle}, 1);
  FmcwScenario first = cfg.scenario;
  first.target_sinr0_db = -10.0;
  const Realization r = simulate(first);
  const auto out = harness::run_method(harness::Method::kSparkle, r.measurement.samples,
                                       cfg.methods, first.snr_db);
  EXPECT_EQ(one[0].mean_sinr_db, sinr_db(r.reference.samples, out.signal, SinrMode::kPost));
}

TEST_F(Workspace, DurationSweepEmptyListAndTable) {
  json cfg = json::parse(kSmallConfig);
  cfg["duration_sweep"]["durations"] = json::array();
  ASSERT_EQ(cli("duration-sweep --config " + write("e.json", cfg.dump()) + " --output " +
                path("e.csv")),
            0)
      << log;
  EXPECT_EQ(read(path("e.csv")),
            "duration,measured_fraction,sinr0_db,method,runs,mean_sinr0_db,mean_sinr_db,"
            "mean_abs_rho,mean_rho_modulus,mean_rho_phase,mean_iterations,converged_runs\n");

  ASSERT_EQ(cli("duration-sweep --config " + write("cfg.json", kSmallConfig) +
                " --method sparkle --output " + path("d.csv")),
            0)
      << log;
  std::istringstream in(read(path("d.csv")));
  std::string line;
  std::getline(in, line);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].substr(0, 4), "0.2,");
  EXPECT_NE(rows[0].find(",-16.5,sparkle,1,"), std::string::npos) << rows[0];
}

TEST(DurationScenario, BurstsCoverRequestedFractionWithoutOverlap) {
  const auto cfg = harness::load_config(kSource + "/configs/montecarlo.json");
  for (double fraction : {0.1, 0.3, 0.5, 0.7}) {
    const FmcwScenario s = harness::scenario_with_duration(cfg.scenario, fraction);
    double total = 0.0;
    double previous_end = 0.0;
    for (std::size_t k = 0; k < s.interferers.size(); ++k) {
      const double d = s.burst_duration(k);
      total += d;
      const double start = s.interferers[k].center_time - d / 2;
      EXPECT_GE(start, previous_end - 1e-15);
      previous_end = start + d;
    }
    EXPECT_LE(previous_end, s.sweep_time + 1e-15);
    EXPECT_NEAR(total / s.sweep_time, fraction, 1e-12);
    const double measured = contaminated_fraction(synth_total_interference(s));
    EXPECT_NEAR(measured, fraction, 0.01) << fraction;
  }
  EXPECT_THROW(harness::scenario_with_duration(cfg.scenario, 0.0), std::invalid_argument);
  EXPECT_THROW(harness::scenario_with_duration(cfg.scenario, 1.0), std::invalid_argument);
}

TEST(HarnessConfig, ParsesSectionsStrictly) {
  const auto cfg = harness::config_from_json_text(kSmallConfig);
  EXPECT_EQ(cfg.methods.solver.rank, 8);
  EXPECT_EQ(cfg.methods.solver.max_iters, 60);
  EXPECT_EQ(cfg.methods.rpca.max_iters, 15);
  EXPECT_EQ(cfg.montecarlo_runs, 2);
  EXPECT_EQ(cfg.sweep_durations, (std::vector<double>{0.2, 0.4}));
  EXPECT_EQ(cfg.sweep_sinr0_db, -16.5);

  json bad = json::parse(kSmallConfig);
  bad["solver"]["gamma"] = 1;
  EXPECT_THROW(harness::config_from_json_text(bad.dump()), std::invalid_argument);
  json auto_cfg = json::parse(kSmallConfig);
  auto_cfg["solver"]["auto"] = {{"l0", 2.0}};
  const auto parsed = harness::config_from_json_text(auto_cfg.dump());
  ASSERT_TRUE(parsed.methods.solver_auto.has_value());
  EXPECT_EQ(parsed.methods.solver_auto->l0, 2.0);
  EXPECT_EQ(parsed.methods.solver_auto->l2, 1.0);
}

TEST(HarnessNames, MethodAndModeParsing) {
  EXPECT_EQ(harness::parse_method("rpca"), harness::Method::kRpca);
  EXPECT_EQ(harness::method_name(harness::Method::kSparkle), "sparkle");
  EXPECT_EQ(harness::parse_unlift_mode("average"), UnliftMode::kAverage);
  EXPECT_THROW(harness::parse_method("salsa"), std::invalid_argument);
  EXPECT_THROW(harness::parse_unlift_mode("mean"), std::invalid_argument);
}
