#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "imsparkle/metrics.hpp"
#include "imsparkle/rpca.hpp"
#include "imsparkle/signal_sim.hpp"
#include "imsparkle/sparkle.hpp"

namespace imsparkle::harness {

enum class Method { kSparkle, kRpca };

Method parse_method(const std::string& name);
std::string method_name(Method method);
UnliftMode parse_unlift_mode(const std::string& name);

// Multipliers for recommended_params(); when present they override the fixed
// tau / beta0 / mu0 of the solver section for every run.
struct AutoMultipliers {
  double l0 = 1.0;
  double l1 = 1.0;
  double l2 = 1.0;
};

struct MethodSettings {
  SolverParams solver;
  std::optional<AutoMultipliers> solver_auto;
  RpcaParams rpca;
};

// A harness config is a scenario file with optional "solver", "rpca",
// "montecarlo" and "duration_sweep" sections.
struct HarnessConfig {
  FmcwScenario scenario;
  MethodSettings methods;
  int montecarlo_runs = 20;
  std::vector<double> montecarlo_sinr0_db = {-20.0, -10.0, 0.0};
  std::vector<double> sweep_durations = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  double sweep_sinr0_db = -16.5;
  int sweep_runs = 20;
};

HarnessConfig load_config(const std::string& path);
HarnessConfig config_from_json_text(const std::string& text);

// Solver-only parameter files for `mitigate` (a "solver"/"rpca" object, or a
// full harness config).
MethodSettings load_method_settings(const std::string& path);

// Outcome of one mitigation run.
struct MethodOutput {
  CVector signal;
  CVector interference;
  int iterations = 0;
  bool converged = false;
  double wall_time_s = 0.0;
  std::vector<IterationRecord> trace;  // rpca rows: beta = 0, mu = its penalty
};

// Resolves automatic parameters against the measurement when requested.
SolverParams resolve_solver_params(const MethodSettings& settings, const CVector& y,
                                   double snr_db);

MethodOutput run_method(Method method, const CVector& y, const MethodSettings& settings,
                        double snr_db);

struct RunReport {
  std::string scenario_digest;
  Method method = Method::kSparkle;
  std::optional<double> sinr0_db;
  std::optional<double> sinr_db;
  std::optional<Complex> rho;
  int iterations = 0;
  double wall_time_s = 0.0;
  bool converged = false;
};

std::string report_to_json_text(const RunReport& report);

// 64-bit FNV-1a of the canonical scenario JSON, as 16 hex digits.
std::string scenario_digest(const FmcwScenario& scenario);

// --- subcommands -----------------------------------------------------------

struct SimulateOutput {
  Realization realization;
};
SimulateOutput cmd_simulate(const std::string& config_path, const std::string& out_dir);

struct MitigateOptions {
  std::string input_csv;
  Method method = Method::kSparkle;
  std::optional<std::string> params_path;
  bool auto_params = false;
  std::optional<double> snr_db;  // with auto_params; falls back to the params file snr_db
  std::optional<UnliftMode> unlift_mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> reference_csv;
  std::string out_dir;
};
RunReport cmd_mitigate(const MitigateOptions& options);

struct Evaluation {
  double sinr_db = 0.0;
  Complex rho;
};
Evaluation evaluate(const CVector& reference, const CVector& recovered);
Evaluation cmd_evaluate(const std::string& reference_csv, const std::string& recovered_csv,
                        const std::string& out_path);
std::string evaluation_to_json_text(const Evaluation& e);

struct RunRecord {
  double sinr0_db = 0.0;
  double sinr_db = 0.0;
  Complex rho;
  int iterations = 0;
  bool converged = false;
  double wall_time_s = 0.0;
  double contaminated_fraction = 0.0;
};

struct TableRow {
  double sinr0_db = 0.0;      // requested level
  double duration = 0.0;      // requested contaminated fraction (sweep only)
  double measured_fraction = 0.0;
  Method method = Method::kSparkle;
  int runs = 0;
  double mean_sinr0_db = 0.0;
  double mean_sinr_db = 0.0;
  double mean_abs_rho = 0.0;
  Complex mean_rho;
  double mean_iterations = 0.0;
  int converged_runs = 0;
  double mean_wall_time_s = 0.0;
};

struct MonteCarloOptions {
  std::string config_path;
  std::optional<int> runs;
  std::optional<std::vector<double>> sinr0_db;
  std::vector<Method> methods = {Method::kSparkle, Method::kRpca};
  std::optional<std::uint64_t> seed;  // overrides the config's base seed
  std::optional<UnliftMode> unlift_mode;
  int jobs = 1;
  bool include_timing = false;
  std::string out_path;
};
std::vector<TableRow> cmd_montecarlo(const MonteCarloOptions& options);

// Runs the sweep in memory (no files). Used by cmd_montecarlo and tests.
std::vector<TableRow> montecarlo_table(const HarnessConfig& config, int runs,
                                       const std::vector<double>& sinr0_db,
                                       const std::vector<Method>& methods, int jobs);

struct DurationSweepOptions {
  std::string config_path;
  std::optional<std::vector<double>> durations;
  std::optional<int> runs;
  std::vector<Method> methods = {Method::kSparkle, Method::kRpca};
  std::optional<std::uint64_t> seed;
  std::optional<UnliftMode> unlift_mode;
  int jobs = 1;
  bool include_timing = false;
  std::string out_path;
};
std::vector<TableRow> cmd_duration_sweep(const DurationSweepOptions& options);

// Rescales the residual interferer slopes and re-spaces their centre times so
// that the bursts cover `fraction` of the sweep without overlapping.
FmcwScenario scenario_with_duration(const FmcwScenario& base, double fraction);

std::vector<TableRow> duration_sweep_table(const HarnessConfig& config,
                                           const std::vector<double>& durations, int runs,
                                           const std::vector<Method>& methods, int jobs);

void write_montecarlo_csv(const std::string& path, const std::vector<TableRow>& rows,
                          bool include_timing);
void write_duration_csv(const std::string& path, const std::vector<TableRow>& rows,
                        bool include_timing);

struct RangeProfileOptions {
  std::string input_csv;
  std::string config_path;
  std::optional<Eigen::Index> nfft;
  Window window = Window::kRectangular;
  std::string out_path;
};
std::vector<RangeBin> cmd_range_profile(const RangeProfileOptions& options);

}  // namespace imsparkle::harness
