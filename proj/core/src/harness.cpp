#include "imsparkle/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "imsparkle/linalg.hpp"
#include "imsparkle/signal_io.hpp"

namespace imsparkle::harness {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": invalid JSON: " + e.what());
  }
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* section) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) {
      throw std::invalid_argument(std::string(section) + ": unknown field '" + item.key() + "'");
    }
  }
}

void parse_solver_section(const json& j, MethodSettings& out) {
  if (!j.is_object()) throw std::invalid_argument("solver: section must be an object");
  check_keys(j,
             {"tau", "beta0", "mu0", "k_beta", "k_mu", "L", "delta", "rank", "rows", "cols",
              "unlift_mode", "init", "max_iters", "seed", "auto"},
             "solver");
  SolverParams& p = out.solver;
  p.sparsity_weight = j.value("tau", p.sparsity_weight);
  p.data_penalty = j.value("beta0", p.data_penalty);
  p.model_penalty = j.value("mu0", p.model_penalty);
  p.data_penalty_growth = j.value("k_beta", p.data_penalty_growth);
  p.model_penalty_growth = j.value("k_mu", p.model_penalty_growth);
  p.growth_interval = j.value("L", p.growth_interval);
  p.tolerance = j.value("delta", p.tolerance);
  p.rank = j.value("rank", p.rank);
  p.max_iters = j.value("max_iters", p.max_iters);
  p.seed = j.value("seed", p.seed);
  if (j.contains("rows") || j.contains("cols")) {
    if (!j.contains("rows") || !j.contains("cols")) {
      throw std::invalid_argument("solver: rows and cols must be given together");
    }
    p.shape = HankelShape(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  }
  if (j.contains("unlift_mode")) p.unlift_mode = parse_unlift_mode(j.at("unlift_mode"));
  if (j.contains("init")) {
    const std::string init = j.at("init");
    if (init == "random") {
      p.init = FactorInit::kRandom;
    } else if (init == "svd") {
      p.init = FactorInit::kTruncatedSvd;
    } else {
      throw std::invalid_argument("solver: init must be \"random\" or \"svd\"");
    }
  }
  if (j.contains("auto")) {
    const json& a = j.at("auto");
    check_keys(a, {"l0", "l1", "l2"}, "solver.auto");
    AutoMultipliers m;
    m.l0 = a.value("l0", m.l0);
    m.l1 = a.value("l1", m.l1);
    m.l2 = a.value("l2", m.l2);
    out.solver_auto = m;
  }
  p.validate();
}

void parse_rpca_section(const json& j, MethodSettings& out) {
  if (!j.is_object()) throw std::invalid_argument("rpca: section must be an object");
  check_keys(j, {"tau", "mu", "delta", "max_iters"}, "rpca");
  RpcaParams& p = out.rpca;
  if (j.contains("tau")) p.sparsity_weight = j.at("tau").get<double>();
  p.penalty = j.value("mu", p.penalty);
  p.tolerance = j.value("delta", p.tolerance);
  p.max_iters = j.value("max_iters", p.max_iters);
  p.validate();
}

// Runs fn(0..count-1) on up to `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1))));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            fn(k);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

RunRecord run_once(const FmcwScenario& scenario, Method method, const MethodSettings& settings) {
  const Realization r = simulate(scenario);
  const MethodOutput out = run_method(method, r.measurement.samples, settings, scenario.snr_db);
  RunRecord rec;
  rec.sinr0_db = r.sinr0_db;
  rec.sinr_db = sinr_db(r.reference.samples, out.signal, SinrMode::kPost);
  rec.rho = out.signal.norm() > 0.0 ? corr_coeff(r.reference.samples, out.signal) : Complex(0.0, 0.0);
  rec.iterations = out.iterations;
  rec.converged = out.converged;
  rec.wall_time_s = out.wall_time_s;
  rec.contaminated_fraction = r.contaminated_fraction;
  return rec;
}

TableRow aggregate(const std::vector<RunRecord>& records, Method method) {
  TableRow row;
  row.method = method;
  row.runs = static_cast<int>(records.size());
  if (records.empty()) return row;
  const double n = static_cast<double>(records.size());
  for (const auto& r : records) {
    row.mean_sinr0_db += r.sinr0_db / n;
    row.mean_sinr_db += r.sinr_db / n;
    row.mean_abs_rho += std::abs(r.rho) / n;
    row.mean_rho += r.rho / n;
    row.mean_iterations += r.iterations / n;
    row.converged_runs += r.converged ? 1 : 0;
    row.mean_wall_time_s += r.wall_time_s / n;
    row.measured_fraction += r.contaminated_fraction / n;
  }
  return row;
}

std::string table_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void validate_durations(const std::vector<double>& durations) {
  for (double d : durations) {
    if (!(d > 0.0 && d < 1.0)) {
      throw std::invalid_argument("duration-sweep: fractions must lie in (0, 1)");
    }
  }
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "sparkle") return Method::kSparkle;
  if (name == "rpca") return Method::kRpca;
  throw std::invalid_argument("unknown method '" + name + "' (expected sparkle or rpca)");
}

std::string method_name(Method method) {
  return method == Method::kSparkle ? "sparkle" : "rpca";
}

UnliftMode parse_unlift_mode(const std::string& name) {
  if (name == "pick") return UnliftMode::kPick;
  if (name == "average") return UnliftMode::kAverage;
  throw std::invalid_argument("unknown unlift mode '" + name + "' (expected pick or average)");
}

HarnessConfig config_from_json_text(const std::string& text) {
  HarnessConfig cfg;
  cfg.scenario = scenario_from_json_text(text);
  const json j = parse_json(text, "config");
  if (j.contains("solver")) parse_solver_section(j.at("solver"), cfg.methods);
  if (j.contains("rpca")) parse_rpca_section(j.at("rpca"), cfg.methods);
  if (j.contains("montecarlo")) {
    const json& mc = j.at("montecarlo");
    check_keys(mc, {"runs", "sinr0_db"}, "montecarlo");
    cfg.montecarlo_runs = mc.value("runs", cfg.montecarlo_runs);
    if (mc.contains("sinr0_db")) cfg.montecarlo_sinr0_db = mc.at("sinr0_db").get<std::vector<double>>();
  }
  if (j.contains("duration_sweep")) {
    const json& ds = j.at("duration_sweep");
    check_keys(ds, {"durations", "sinr0_db", "runs"}, "duration_sweep");
    if (ds.contains("durations")) cfg.sweep_durations = ds.at("durations").get<std::vector<double>>();
    cfg.sweep_sinr0_db = ds.value("sinr0_db", cfg.sweep_sinr0_db);
    cfg.sweep_runs = ds.value("runs", cfg.sweep_runs);
  }
  if (cfg.montecarlo_runs < 1 || cfg.sweep_runs < 1) {
    throw std::invalid_argument("config: run counts must be >= 1");
  }
  return cfg;
}

HarnessConfig load_config(const std::string& path) { return config_from_json_text(read_text(path)); }

MethodSettings load_method_settings(const std::string& path) {
  const json j = parse_json(read_text(path), "params");
  if (!j.is_object()) throw std::invalid_argument("params: top level must be an object");
  MethodSettings settings;
  if (j.contains("solver")) parse_solver_section(j.at("solver"), settings);
  if (j.contains("rpca")) parse_rpca_section(j.at("rpca"), settings);
  return settings;
}

SolverParams resolve_solver_params(const MethodSettings& settings, const CVector& y,
                                   double snr_db) {
  SolverParams p = settings.solver;
  if (!settings.solver_auto) return p;
  const HankelShape shape = p.shape_for(y.size());
  const double norm = spectral_norm(lift(y, shape));
  const auto& m = *settings.solver_auto;
  const SolverParams rec = recommended_params(snr_db, norm, shape.rows(), shape.cols(), m.l0,
                                              m.l1, m.l2);
  p.data_penalty = rec.data_penalty;
  p.sparsity_weight = rec.sparsity_weight;
  p.model_penalty = rec.model_penalty;
  return p;
}

MethodOutput run_method(Method method, const CVector& y, const MethodSettings& settings,
                        double snr_db) {
  MethodOutput out;
  if (method == Method::kSparkle) {
    const SolverResult r = solve(y, resolve_solver_params(settings, y, snr_db));
    out.signal = r.signal;
    out.interference = r.interference;
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.wall_time_s = r.wall_time;
    out.trace = r.trace;
    return out;
  }
  const HankelShape shape = settings.solver.shape_for(y.size());
  const RpcaResult r = rpca_solve(y, shape, settings.rpca);
  out.signal = r.signal;
  out.interference = r.interference;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.wall_time_s = r.wall_time;
  for (std::size_t k = 0; k < r.residual_trace.size(); ++k) {
    out.trace.push_back({static_cast<int>(k + 1), r.residual_trace[k], 0.0, settings.rpca.penalty});
  }
  return out;
}

std::string scenario_digest(const FmcwScenario& scenario) {
  return hex64(fnv1a(scenario_to_json_text(scenario)));
}

std::string report_to_json_text(const RunReport& report) {
  json j;
  j["scenario_digest"] = report.scenario_digest;
  j["method"] = method_name(report.method);
  if (report.sinr0_db) j["sinr0_db"] = *report.sinr0_db;
  if (report.sinr_db) {
    if (std::isinf(*report.sinr_db)) {
      j["sinr_db"] = "+inf";
    } else {
      j["sinr_db"] = *report.sinr_db;
    }
  }
  if (report.rho) {
    j["rho_modulus"] = std::abs(*report.rho);
    j["rho_phase"] = std::arg(*report.rho);
  }
  j["iterations"] = report.iterations;
  j["wall_time_s"] = report.wall_time_s;
  j["converged"] = report.converged;
  return j.dump(2) + "\n";
}

SimulateOutput cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const FmcwScenario scenario = load_scenario(config_path);
  SimulateOutput out{simulate(scenario)};
  const Realization& r = out.realization;

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_signal_csv((dir / "reference.csv").string(), r.reference.samples);
  write_signal_csv((dir / "interference.csv").string(), r.interference.samples);
  write_signal_csv((dir / "noise.csv").string(), r.noise.samples);
  write_signal_csv((dir / "measurement.csv").string(), r.measurement.samples);

  json derived;
  derived["slope_hz_per_s"] = scenario.slope();
  derived["sample_count"] = scenario.sample_count();
  derived["sample_interval_s"] = scenario.sample_interval();
  derived["beat_frequencies_hz"] = scenario.beat_frequencies();
  std::vector<double> bursts;
  for (std::size_t k = 0; k < scenario.interferers.size(); ++k) {
    bursts.push_back(scenario.burst_duration(k));
  }
  derived["burst_durations_s"] = bursts;
  derived["contaminated_fraction"] = r.contaminated_fraction;
  derived["interference_scale"] = r.interference_scale;
  if (std::isfinite(r.sinr0_db)) {
    derived["sinr0_db"] = r.sinr0_db;
  } else {
    derived["sinr0_db"] = r.sinr0_db > 0 ? "+inf" : "-inf";
  }
  json j;
  j["scenario"] = json::parse(scenario_to_json_text(scenario));
  j["derived"] = derived;
  j["scenario_digest"] = scenario_digest(scenario);
  write_text((dir / "scenario_resolved.json").string(), j.dump(2) + "\n");
  return out;
}

RunReport cmd_mitigate(const MitigateOptions& options) {
  const std::string input_text = read_text(options.input_csv);
  std::istringstream input_stream(input_text);
  const CVector y = read_signal_csv(input_stream);

  MethodSettings settings;
  if (options.params_path) settings = load_method_settings(*options.params_path);
  if (options.unlift_mode) settings.solver.unlift_mode = *options.unlift_mode;
  if (options.seed) settings.solver.seed = *options.seed;
  if (options.auto_params && !settings.solver_auto) settings.solver_auto = AutoMultipliers{};
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  if (settings.solver_auto && options.method == Method::kSparkle) {
    std::optional<double> snr = options.snr_db;
    if (!snr && options.params_path) {
      const json j = parse_json(read_text(*options.params_path), "params");
      if (j.contains("snr_db") && j.at("snr_db").is_number()) snr = j.at("snr_db").get<double>();
    }
    if (!snr) throw std::invalid_argument("--auto-params needs an SNR estimate (--snr-db)");
    snr_db = *snr;
  }

  const MethodOutput out = run_method(options.method, y, settings, snr_db);

  fs::create_directories(options.out_dir);
  const fs::path dir(options.out_dir);
  write_signal_csv((dir / "recovered.csv").string(), out.signal);
  write_signal_csv((dir / "interference_est.csv").string(), out.interference);
  {
    std::ostringstream trace;
    trace << "iteration,rel_error,beta,mu\n";
    for (const auto& t : out.trace) {
      trace << t.iteration << ',' << format_double(t.rel_error) << ','
            << format_double(t.data_penalty) << ',' << format_double(t.model_penalty) << '\n';
    }
    write_text((dir / "trace.csv").string(), trace.str());
  }

  RunReport report;
  report.scenario_digest = hex64(fnv1a(input_text));
  report.method = options.method;
  report.iterations = out.iterations;
  report.converged = out.converged;
  report.wall_time_s = out.wall_time_s;
  if (options.reference_csv) {
    const CVector ref = read_signal_csv(*options.reference_csv);
    if (ref.size() != y.size()) throw std::invalid_argument("reference length differs from input");
    report.sinr0_db = sinr_db(ref, y - ref, SinrMode::kPre);
    const Evaluation e = evaluate(ref, out.signal);
    report.sinr_db = e.sinr_db;
    report.rho = e.rho;
  }
  write_text((dir / "report.json").string(), report_to_json_text(report));
  return report;
}

Evaluation evaluate(const CVector& reference, const CVector& recovered) {
  Evaluation e;
  e.sinr_db = sinr_db(reference, recovered, SinrMode::kPost);
  e.rho = corr_coeff(reference, recovered);
  return e;
}

std::string evaluation_to_json_text(const Evaluation& e) {
  json j;
  if (std::isinf(e.sinr_db)) {
    j["sinr_db"] = "+inf";
  } else {
    j["sinr_db"] = e.sinr_db;
  }
  j["rho_modulus"] = std::abs(e.rho);
  j["rho_phase"] = std::arg(e.rho);
  return j.dump(2) + "\n";
}

Evaluation cmd_evaluate(const std::string& reference_csv, const std::string& recovered_csv,
                        const std::string& out_path) {
  const CVector ref = read_signal_csv(reference_csv);
  const CVector rec = read_signal_csv(recovered_csv);
  const Evaluation e = evaluate(ref, rec);
  write_text(out_path, evaluation_to_json_text(e));
  return e;
}

std::vector<TableRow> montecarlo_table(const HarnessConfig& config, int runs,
                                       const std::vector<double>& sinr0_db,
                                       const std::vector<Method>& methods, int jobs) {
  if (runs < 1) throw std::invalid_argument("montecarlo: runs must be >= 1");
  const std::size_t per_level = static_cast<std::size_t>(runs);
  // records[level][method][run]
  std::vector<std::vector<std::vector<RunRecord>>> records(
      sinr0_db.size(), std::vector<std::vector<RunRecord>>(methods.size(),
                                                           std::vector<RunRecord>(per_level)));
  parallel_for(sinr0_db.size() * per_level * methods.size(), jobs, [&](std::size_t task) {
    const std::size_t m = task % methods.size();
    const std::size_t run = (task / methods.size()) % per_level;
    const std::size_t level = task / (methods.size() * per_level);
    FmcwScenario s = config.scenario;
    s.seed = config.scenario.seed + run;
    s.target_sinr0_db = sinr0_db[level];
    records[level][m][run] = run_once(s, methods[m], config.methods);
  });

  std::vector<TableRow> rows;
  for (std::size_t level = 0; level < sinr0_db.size(); ++level) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      TableRow row = aggregate(records[level][m], methods[m]);
      row.sinr0_db = sinr0_db[level];
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TableRow> cmd_montecarlo(const MonteCarloOptions& options) {
  HarnessConfig cfg = load_config(options.config_path);
  if (options.seed) cfg.scenario.seed = *options.seed;
  if (options.unlift_mode) cfg.methods.solver.unlift_mode = *options.unlift_mode;
  const int runs = options.runs.value_or(cfg.montecarlo_runs);
  const auto levels = options.sinr0_db.value_or(cfg.montecarlo_sinr0_db);
  auto rows = montecarlo_table(cfg, runs, levels, options.methods, options.jobs);
  write_montecarlo_csv(options.out_path, rows, options.include_timing);
  return rows;
}

FmcwScenario scenario_with_duration(const FmcwScenario& base, double fraction) {
  base.validate();
  if (base.interferers.empty()) {
    throw std::invalid_argument("duration-sweep: scenario has no interferers");
  }
  validate_durations({fraction});
  double total = 0.0;
  for (std::size_t k = 0; k < base.interferers.size(); ++k) total += base.burst_duration(k);
  const double wanted = fraction * base.sweep_time;
  const double scale = total / wanted;  // residual slopes scale inversely with duration

  FmcwScenario out = base;
  const double gap = (base.sweep_time - wanted) / static_cast<double>(base.interferers.size() + 1);
  double cursor = gap;
  for (std::size_t k = 0; k < out.interferers.size(); ++k) {
    auto& it = out.interferers[k];
    it.slope_multiple = 1.0 + (it.slope_multiple - 1.0) * scale;
    const double duration = out.burst_duration(k);
    it.center_time = cursor + 0.5 * duration;
    cursor += duration + gap;
  }
  out.validate();
  return out;
}

std::vector<TableRow> duration_sweep_table(const HarnessConfig& config,
                                           const std::vector<double>& durations, int runs,
                                           const std::vector<Method>& methods, int jobs) {
  if (runs < 1) throw std::invalid_argument("duration-sweep: runs must be >= 1");
  validate_durations(durations);
  std::vector<FmcwScenario> scenarios;
  for (double d : durations) {
    FmcwScenario s = scenario_with_duration(config.scenario, d);
    s.target_sinr0_db = config.sweep_sinr0_db;
    scenarios.push_back(s);
  }
  const std::size_t per_point = static_cast<std::size_t>(runs);
  std::vector<std::vector<std::vector<RunRecord>>> records(
      durations.size(), std::vector<std::vector<RunRecord>>(methods.size(),
                                                            std::vector<RunRecord>(per_point)));
  parallel_for(durations.size() * per_point * methods.size(), jobs, [&](std::size_t task) {
    const std::size_t m = task % methods.size();
    const std::size_t run = (task / methods.size()) % per_point;
    const std::size_t point = task / (methods.size() * per_point);
    FmcwScenario s = scenarios[point];
    s.seed = config.scenario.seed + run;
    records[point][m][run] = run_once(s, methods[m], config.methods);
  });

  std::vector<TableRow> rows;
  for (std::size_t point = 0; point < durations.size(); ++point) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      TableRow row = aggregate(records[point][m], methods[m]);
      row.duration = durations[point];
      row.sinr0_db = config.sweep_sinr0_db;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TableRow> cmd_duration_sweep(const DurationSweepOptions& options) {
  HarnessConfig cfg = load_config(options.config_path);
  if (options.seed) cfg.scenario.seed = *options.seed;
  if (options.unlift_mode) cfg.methods.solver.unlift_mode = *options.unlift_mode;
  const auto durations = options.durations.value_or(cfg.sweep_durations);
  const int runs = options.runs.value_or(cfg.sweep_runs);
  auto rows = duration_sweep_table(cfg, durations, runs, options.methods, options.jobs);
  write_duration_csv(options.out_path, rows, options.include_timing);
  return rows;
}

void write_montecarlo_csv(const std::string& path, const std::vector<TableRow>& rows,
                          bool include_timing) {
  std::ostringstream out;
  out << "sinr0_db,method,runs,mean_sinr0_db,mean_sinr_db,mean_abs_rho,mean_rho_modulus,"
         "mean_rho_phase,mean_iterations,converged_runs";
  if (include_timing) out << ",mean_wall_time_s";
  out << '\n';
  for (const auto& r : rows) {
    out << table_number(r.sinr0_db) << ',' << method_name(r.method) << ',' << r.runs << ','
        << table_number(r.mean_sinr0_db) << ',' << table_number(r.mean_sinr_db) << ','
        << table_number(r.mean_abs_rho) << ',' << table_number(std::abs(r.mean_rho)) << ','
        << table_number(std::arg(r.mean_rho)) << ',' << table_number(r.mean_iterations) << ','
        << r.converged_runs;
    if (include_timing) out << ',' << table_number(r.mean_wall_time_s);
    out << '\n';
  }
  write_text(path, out.str());
}

void write_duration_csv(const std::string& path, const std::vector<TableRow>& rows,
                        bool include_timing) {
  std::ostringstream out;
  out << "duration,measured_fraction,sinr0_db,method,runs,mean_sinr0_db,mean_sinr_db,"
         "mean_abs_rho,mean_rho_modulus,mean_rho_phase,mean_iterations,converged_runs";
  if (include_timing) out << ",mean_wall_time_s";
  out << '\n';
  for (const auto& r : rows) {
    out << table_number(r.duration) << ',' << table_number(r.measured_fraction) << ','
        << table_number(r.sinr0_db) << ',' << method_name(r.method) << ',' << r.runs << ','
        << table_number(r.mean_sinr0_db) << ',' << table_number(r.mean_sinr_db) << ','
        << table_number(r.mean_abs_rho) << ',' << table_number(std::abs(r.mean_rho)) << ','
        << table_number(std::arg(r.mean_rho)) << ',' << table_number(r.mean_iterations) << ','
        << r.converged_runs;
    if (include_timing) out << ',' << table_number(r.mean_wall_time_s);
    out << '\n';
  }
  write_text(path, out.str());
}

std::vector<RangeBin> cmd_range_profile(const RangeProfileOptions& options) {
  const FmcwScenario scenario = load_scenario(options.config_path);
  const ComplexSignal x(read_signal_csv(options.input_csv), scenario.sampling_rate);
  const Eigen::Index nfft = options.nfft.value_or(default_nfft(x.size()));
  const auto bins = range_profile(x, scenario.slope(), nfft, options.window);
  std::ostringstream out;
  out << "range_m,magnitude_db\n";
  for (const auto& b : bins) out << format_double(b.range_m) << ',' << format_double(b.magnitude_db) << '\n';
  write_text(options.out_path, out.str());
  return bins;
}

}  // namespace imsparkle::harness
