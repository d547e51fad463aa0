#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "imsparkle/harness.hpp"

namespace {

namespace h = imsparkle::harness;

std::vector<h::Method> parse_methods(const std::string& text) {
  if (text == "both") return {h::Method::kSparkle, h::Method::kRpca};
  return {h::parse_method(text)};
}

template <typename T>
std::optional<T> opt_if(const CLI::Option* option, const T& value) {
  if (option->count() == 0) return std::nullopt;
  return value;
}

void print_rows(const std::vector<h::TableRow>& rows, bool sweep) {
  for (const auto& r : rows) {
    if (sweep) std::cout << "duration=" << r.duration << ' ';
    std::cout << "sinr0=" << r.sinr0_db << " dB  " << h::method_name(r.method)
              << "  SINR=" << r.mean_sinr_db << " dB  |rho|=" << r.mean_abs_rho
              << "  iters=" << r.mean_iterations << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference mitigation for FMCW radar beat signals"};
  app.require_subcommand(1);

  std::string config;
  std::string input;
  std::string output;
  std::string method = "sparkle";
  std::string unlift;
  std::uint64_t seed = 0;
  bool auto_params = false;

  auto* sim = app.add_subcommand("simulate", "Synthesize a scenario and write its signals");
  sim->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--output", output, "Output directory")->required();

  std::string reference;
  double snr_db = 0.0;
  auto* mit = app.add_subcommand("mitigate", "Recover the beat signal from a measurement");
  mit->add_option("--input", input, "Measurement CSV")->required()->check(CLI::ExistingFile);
  mit->add_option("--output", output, "Output directory")->required();
  mit->add_option("--method", method, "sparkle or rpca")->check(CLI::IsMember({"sparkle", "rpca"}));
  auto* mit_config = mit->add_option("--config", config, "Parameter JSON")->check(CLI::ExistingFile);
  auto* mit_unlift =
      mit->add_option("--unlift-mode", unlift, "pick or average")->check(CLI::IsMember({"pick", "average"}));
  auto* mit_seed = mit->add_option("--seed", seed, "Factor initialization seed");
  mit->add_flag("--auto-params", auto_params, "Derive tau, beta, mu from the data and SNR");
  auto* mit_snr = mit->add_option("--snr-db", snr_db, "SNR estimate for --auto-params");
  auto* mit_ref = mit->add_option("--reference", reference, "Clean reference CSV for scoring")
                      ->check(CLI::ExistingFile);

  auto* eva = app.add_subcommand("evaluate", "Score a recovered signal against a reference");
  eva->add_option("--reference", reference, "Reference CSV")->required()->check(CLI::ExistingFile);
  eva->add_option("--input", input, "Recovered CSV")->required()->check(CLI::ExistingFile);
  eva->add_option("--output", output, "Metrics JSON")->required();

  int runs = 0;
  std::vector<double> levels;
  std::vector<double> durations;
  int jobs = 1;
  bool timing = false;
  std::string methods = "both";
  auto add_table_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Harness config JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output", output, "Output CSV")->required();
    cmd->add_option("--method", methods, "sparkle, rpca or both")
        ->check(CLI::IsMember({"sparkle", "rpca", "both"}));
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--timing", timing, "Append a mean wall-time column");
  };
  auto* mc = app.add_subcommand("montecarlo", "SINR table over seeds and interference levels");
  add_table_options(mc);
  auto* mc_runs = mc->add_option("--runs", runs, "Runs per level")->check(CLI::PositiveNumber);
  auto* mc_levels = mc->add_option("--sinr0-db", levels, "Input SINR levels")->delimiter(',');
  auto* mc_seed = mc->add_option("--seed", seed, "Base seed");
  auto* mc_unlift =
      mc->add_option("--unlift-mode", unlift, "pick or average")->check(CLI::IsMember({"pick", "average"}));

  auto* ds = app.add_subcommand("duration-sweep", "SINR versus interference duration");
  add_table_options(ds);
  auto* ds_runs = ds->add_option("--runs", runs, "Runs per duration")->check(CLI::PositiveNumber);
  auto* ds_durations =
      ds->add_option("--durations", durations, "Contaminated fractions in (0,1)")->delimiter(',');
  auto* ds_seed = ds->add_option("--seed", seed, "Base seed");
  auto* ds_unlift =
      ds->add_option("--unlift-mode", unlift, "pick or average")->check(CLI::IsMember({"pick", "average"}));

  long nfft = 0;
  std::string window = "rect";
  auto* rp = app.add_subcommand("range-profile", "Windowed FFT range profile of a signal");
  rp->add_option("--input", input, "Signal CSV")->required()->check(CLI::ExistingFile);
  rp->add_option("--config", config, "Scenario JSON (slope, sampling rate)")
      ->required()
      ->check(CLI::ExistingFile);
  rp->add_option("--output", output, "Output CSV")->required();
  auto* rp_nfft = rp->add_option("--nfft", nfft, "FFT length")->check(CLI::PositiveNumber);
  rp->add_option("--window", window, "rect or hann")->check(CLI::IsMember({"rect", "hann"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const auto out = h::cmd_simulate(config, output);
      std::cout << "samples=" << out.realization.measurement.size()
                << " sinr0=" << out.realization.sinr0_db
                << " dB contaminated=" << out.realization.contaminated_fraction << '\n';
    } else if (*mit) {
      h::MitigateOptions o;
      o.input_csv = input;
      o.method = h::parse_method(method);
      o.params_path = opt_if(mit_config, config);
      o.auto_params = auto_params;
      o.snr_db = opt_if(mit_snr, snr_db);
      if (mit_unlift->count()) o.unlift_mode = h::parse_unlift_mode(unlift);
      o.seed = opt_if(mit_seed, seed);
      o.reference_csv = opt_if(mit_ref, reference);
      o.out_dir = output;
      const auto report = h::cmd_mitigate(o);
      std::cout << h::method_name(report.method) << ": iterations=" << report.iterations
                << " converged=" << (report.converged ? "yes" : "no");
      if (report.sinr_db) std::cout << " SINR=" << *report.sinr_db << " dB";
      std::cout << '\n';
    } else if (*eva) {
      const auto e = h::cmd_evaluate(reference, input, output);
      std::cout << "SINR=" << e.sinr_db << " dB |rho|=" << std::abs(e.rho) << '\n';
    } else if (*mc) {
      h::MonteCarloOptions o;
      o.config_path = config;
      o.runs = opt_if(mc_runs, runs);
      o.sinr0_db = opt_if(mc_levels, levels);
      o.methods = parse_methods(methods);
      o.seed = opt_if(mc_seed, seed);
      if (mc_unlift->count()) o.unlift_mode = h::parse_unlift_mode(unlift);
      o.jobs = jobs;
      o.include_timing = timing;
      o.out_path = output;
      print_rows(h::cmd_montecarlo(o), false);
    } else if (*ds) {
      h::DurationSweepOptions o;
      o.config_path = config;
      o.durations = opt_if(ds_durations, durations);
      o.runs = opt_if(ds_runs, runs);
      o.methods = parse_methods(methods);
      o.seed = opt_if(ds_seed, seed);
      if (ds_unlift->count()) o.unlift_mode = h::parse_unlift_mode(unlift);
      o.jobs = jobs;
      o.include_timing = timing;
      o.out_path = output;
      print_rows(h::cmd_duration_sweep(o), true);
    } else if (*rp) {
      h::RangeProfileOptions o;
      o.input_csv = input;
      o.config_path = config;
      if (rp_nfft->count()) o.nfft = nfft;
      o.window = window == "hann" ? imsparkle::Window::kHann : imsparkle::Window::kRectangular;
      o.out_path = output;
      const auto bins = h::cmd_range_profile(o);
      std::cout << "bins=" << bins.size() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
