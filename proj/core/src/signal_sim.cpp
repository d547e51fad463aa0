#include "imsparkle/signal_sim.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace imsparkle {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument("FmcwScenario: " + message);
}

// Raised-cosine roll-off of the dechirp low-pass filter, evaluated on the
// instantaneous frequency of the residual interference chirp.
double lpf_gate(double frequency, double cutoff, double stopband) {
  const double f = std::abs(frequency);
  if (f <= cutoff) return 1.0;
  if (f >= stopband) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (f - cutoff) / (stopband - cutoff)));
}

}  // namespace

void FmcwScenario::validate() const {
  require(sweep_time > 0.0, "sweep_time must be positive");
  require(bandwidth > 0.0, "bandwidth must be positive");
  require(sampling_rate > 0.0, "sampling_rate must be positive");
  require(lpf_cutoff > 0.0, "lpf_cutoff must be positive");
  require(std::isfinite(center_frequency), "center_frequency must be finite");
  require(stopband() >= lpf_cutoff, "lpf_stopband must not be below lpf_cutoff");
  require(sample_count() >= 2, "sampling_rate * sweep_time must give at least 2 samples");
  require(!std::isnan(snr_db) && snr_db != -std::numeric_limits<double>::infinity(),
          "snr_db must be a number or +inf");
  if (target_sinr0_db) require(std::isfinite(*target_sinr0_db), "target_sinr0_db must be finite");

  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& t = targets[k];
    require(t.range > 0.0, "target range must be positive");
    require(t.amplitude_magnitude >= 0.0, "target amplitude must be nonnegative");
    const double fb = std::abs(beat_frequency(t.range));
    if (!(fb < lpf_cutoff)) {
      std::ostringstream os;
      os << "target " << k << " at " << t.range << " m has beat frequency " << fb
         << " Hz, not below the LPF cutoff " << lpf_cutoff << " Hz";
      require(false, os.str());
    }
  }
  for (const auto& it : interferers) {
    require(it.slope_multiple != 1.0, "interferer slope_multiple must differ from 1");
    require(it.center_time >= 0.0 && it.center_time <= sweep_time,
            "interferer center_time must lie within the sweep");
    require(it.amplitude_magnitude >= 0.0, "interferer amplitude must be nonnegative");
  }
}

double FmcwScenario::slope() const {
  const double k = bandwidth / sweep_time;
  return sweep_direction == SweepDirection::kUp ? k : -k;
}

Eigen::Index FmcwScenario::sample_count() const {
  return static_cast<Eigen::Index>(std::llround(sampling_rate * sweep_time));
}

double FmcwScenario::beat_frequency(double range) const {
  return 2.0 * range * slope() / kSpeedOfLight;
}

std::vector<double> FmcwScenario::beat_frequencies() const {
  std::vector<double> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(beat_frequency(t.range));
  return out;
}

double FmcwScenario::burst_duration(std::size_t which) const {
  if (which >= interferers.size()) throw std::out_of_range("burst_duration: interferer index");
  const double dk = (interferers[which].slope_multiple - 1.0) * slope();
  return 2.0 * stopband() / std::abs(dk);
}

ComplexSignal synth_beat_signal(const FmcwScenario& scenario) {
  scenario.validate();
  const Eigen::Index n = scenario.sample_count();
  const double dt = scenario.sample_interval();
  CVector x = CVector::Zero(n);
  for (const auto& t : scenario.targets) {
    const Complex sigma = std::polar(t.amplitude_magnitude, t.amplitude_phase);
    const double fb = scenario.beat_frequency(t.range);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double phase = -2.0 * std::numbers::pi * fb * static_cast<double>(k) * dt;
      x[k] += sigma * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return {std::move(x), scenario.sampling_rate};
}

ComplexSignal synth_interference(const FmcwScenario& scenario, std::size_t which) {
  scenario.validate();
  if (which >= scenario.interferers.size()) {
    throw std::out_of_range("synth_interference: interferer index out of range");
  }
  const auto& spec = scenario.interferers[which];
  const Eigen::Index n = scenario.sample_count();
  const double dt = scenario.sample_interval();
  const double dk = (spec.slope_multiple - 1.0) * scenario.slope();
  const double cutoff = scenario.lpf_cutoff;
  const double stop = scenario.stopband();

  CVector i = CVector::Zero(n);
  if (spec.amplitude_magnitude == 0.0) return {std::move(i), scenario.sampling_rate};
  for (Eigen::Index k = 0; k < n; ++k) {
    const double tau = static_cast<double>(k) * dt - spec.center_time;
    const double inst_freq = dk * tau;
    const double gate = stop > cutoff ? lpf_gate(inst_freq, cutoff, stop)
                                      : (std::abs(inst_freq) <= cutoff ? 1.0 : 0.0);
    if (gate == 0.0) continue;
    const double phase = std::numbers::pi * dk * tau * tau + spec.amplitude_phase;
    i[k] = spec.amplitude_magnitude * gate * Complex(std::cos(phase), std::sin(phase));
  }
  return {std::move(i), scenario.sampling_rate};
}

ComplexSignal synth_total_interference(const FmcwScenario& scenario) {
  scenario.validate();
  CVector total = CVector::Zero(scenario.sample_count());
  for (std::size_t k = 0; k < scenario.interferers.size(); ++k) {
    total += synth_interference(scenario, k).samples;
  }
  return {std::move(total), scenario.sampling_rate};
}

ComplexSignal add_noise(const ComplexSignal& x, double snr_db, std::uint64_t seed) {
  x.validate();
  const Eigen::Index n = x.size();
  if (snr_db == std::numeric_limits<double>::infinity()) {
    return {CVector::Zero(n), x.sampling_rate};
  }
  if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: snr_db must be finite or +inf");
  const double signal_norm = x.samples.norm();
  if (signal_norm == 0.0) {
    throw std::invalid_argument("add_noise: zero signal with finite SNR");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CVector noise(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    noise[k] = Complex(re, im);
  }
  const double drawn = noise.norm();
  noise *= signal_norm * std::pow(10.0, -snr_db / 20.0) / drawn;
  return {std::move(noise), x.sampling_rate};
}

double scale_interference_to_sinr0(const ComplexSignal& x, const ComplexSignal& i,
                                   const ComplexSignal& n, double target_sinr0_db) {
  if (x.size() != i.size() || x.size() != n.size()) {
    throw std::invalid_argument("scale_interference_to_sinr0: length mismatch");
  }
  // |alpha i + n|^2 = a alpha^2 + b alpha + c_n must equal the corruption budget.
  const double a = i.samples.squaredNorm();
  if (a == 0.0) throw std::invalid_argument("scale_interference_to_sinr0: zero interference");
  const double b = 2.0 * i.samples.dot(n.samples).real();
  const double noise_energy = n.samples.squaredNorm();
  const double budget = x.samples.norm() * std::pow(10.0, -target_sinr0_db / 20.0);
  const double c = noise_energy - budget * budget;
  if (c > 0.0) {
    throw std::invalid_argument(
        "scale_interference_to_sinr0: target SINR0 unreachable, noise alone exceeds it");
  }
  const double disc = b * b - 4.0 * a * c;
  return (-b + std::sqrt(std::max(disc, 0.0))) / (2.0 * a);
}

ComplexSignal compose_measurement(const ComplexSignal& x, const ComplexSignal& i,
                                  const ComplexSignal& n) {
  if (x.size() != i.size() || x.size() != n.size()) {
    throw std::invalid_argument("compose_measurement: length mismatch");
  }
  if (x.sampling_rate != i.sampling_rate || x.sampling_rate != n.sampling_rate) {
    throw std::invalid_argument("compose_measurement: sampling rate mismatch");
  }
  return {x.samples + i.samples + n.samples, x.sampling_rate};
}

double contaminated_fraction(const ComplexSignal& interference) {
  const auto& s = interference.samples;
  if (s.size() == 0) return 0.0;
  Eigen::Index hit = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] != Complex(0.0, 0.0)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(s.size());
}

Realization simulate(const FmcwScenario& scenario) {
  scenario.validate();
  Realization r;
  r.reference = synth_beat_signal(scenario);
  r.interference = synth_total_interference(scenario);
  // Noise is calibrated against the beat signal; with no targets there is
  // nothing to calibrate against and the record stays noise-free.
  r.noise = r.reference.samples.norm() == 0.0
                ? ComplexSignal(CVector::Zero(r.reference.size()), scenario.sampling_rate)
                : add_noise(r.reference, scenario.snr_db, scenario.seed);
  if (scenario.target_sinr0_db) {
    r.interference_scale = scale_interference_to_sinr0(r.reference, r.interference, r.noise,
                                                       *scenario.target_sinr0_db);
    r.interference.samples *= r.interference_scale;
  }
  r.measurement = compose_measurement(r.reference, r.interference, r.noise);
  r.contaminated_fraction = contaminated_fraction(r.interference);
  const double corruption = (r.interference.samples + r.noise.samples).norm();
  r.sinr0_db = corruption == 0.0 ? std::numeric_limits<double>::infinity()
                                 : 20.0 * std::log10(r.reference.samples.norm() / corruption);
  // log10(0) yields -inf for a target-free scenario, which is the intended value.
  return r;
}

}  // namespace imsparkle
