#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imsparkle/types.hpp"

namespace imsparkle {

enum class SweepDirection { kUp, kDown };

struct TargetSpec {
  double range = 0.0;                // m
  double amplitude_magnitude = 1.0;  // linear
  double amplitude_phase = 0.0;      // rad
};

// An aggressor FMCW radar as seen after dechirp + low-pass filtering: a chirp
// with residual slope (slope_multiple - 1) * K_r whose instantaneous beat
// frequency crosses zero at center_time.
struct InterfererSpec {
  double slope_multiple = 3.0;
  double center_time = 0.0;          // s, measured from the start of the sweep
  double amplitude_magnitude = 1.0;
  double amplitude_phase = 0.0;      // rad, referenced at center_time
};

struct FmcwScenario {
  double center_frequency = 3e9;
  double sweep_time = 400e-6;
  double bandwidth = 40e6;
  double lpf_cutoff = 5.33e6;
  // Edge of the LPF stop band. Between lpf_cutoff and lpf_stopband the
  // interference gate follows a raised-cosine roll-off; above it the output is
  // exactly zero. Unset means an ideal brick-wall filter at lpf_cutoff.
  std::optional<double> lpf_stopband;
  double sampling_rate = 12e6;
  SweepDirection sweep_direction = SweepDirection::kUp;
  std::vector<TargetSpec> targets;
  std::vector<InterfererSpec> interferers;
  double snr_db = 15.0;  // +inf disables thermal noise
  // When set, the summed interference is rescaled so that the composite
  // measurement has this SINR before mitigation.
  std::optional<double> target_sinr0_db;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  // Signed sweep slope K_r in Hz/s (negative for a down-sweep).
  double slope() const;
  Eigen::Index sample_count() const;
  double sample_interval() const { return 1.0 / sampling_rate; }
  double stopband() const { return lpf_stopband.value_or(lpf_cutoff); }

  // Signed beat frequency 2 R K_r / c.
  double beat_frequency(double range) const;
  std::vector<double> beat_frequencies() const;

  // Gated burst length of interferer `which` in seconds (before clipping to
  // the sweep window).
  double burst_duration(std::size_t which) const;
};

ComplexSignal synth_beat_signal(const FmcwScenario& scenario);

ComplexSignal synth_interference(const FmcwScenario& scenario, std::size_t which);

// Sum of all interferers (zero vector when the list is empty).
ComplexSignal synth_total_interference(const FmcwScenario& scenario);

// Circular complex white Gaussian noise rescaled so that
// 10 log10(|x|^2 / |n|^2) equals snr_db exactly.
ComplexSignal add_noise(const ComplexSignal& x, double snr_db, std::uint64_t seed);

// Nonnegative alpha with 20 log10(|x| / |alpha i + n|) = target_sinr0_db.
double scale_interference_to_sinr0(const ComplexSignal& x, const ComplexSignal& i,
                                   const ComplexSignal& n, double target_sinr0_db);

ComplexSignal compose_measurement(const ComplexSignal& x, const ComplexSignal& i,
                                  const ComplexSignal& n);

// Fraction of samples where the signal is nonzero.
double contaminated_fraction(const ComplexSignal& interference);

// Everything one simulation run produces.
struct Realization {
  ComplexSignal reference;     // clean beat signal x
  ComplexSignal interference;  // i, already scaled by interference_scale
  ComplexSignal noise;         // n
  ComplexSignal measurement;   // y = x + i + n
  double interference_scale = 1.0;
  double sinr0_db = 0.0;
  double contaminated_fraction = 0.0;
};

Realization simulate(const FmcwScenario& scenario);

// JSON scenario files (snake_case keys, SI units).
FmcwScenario scenario_from_json_text(const std::string& text);
FmcwScenario load_scenario(const std::string& path);
std::string scenario_to_json_text(const FmcwScenario& scenario);

}  // namespace imsparkle
