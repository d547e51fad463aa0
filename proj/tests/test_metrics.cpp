#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imsparkle/metrics.hpp"
#include "imsparkle/signal_sim.hpp"
#include "oracles.hpp"

using namespace imsparkle;

namespace {

FmcwScenario table_one() {
  FmcwScenario s;
  s.center_frequency = 3e9;
  s.sweep_time = 400e-6;
  s.bandwidth = 40e6;
  s.lpf_cutoff = 5.33e6;
  s.sampling_rate = 12e6;
  return s;
}

double range_bin_width(const FmcwScenario& s, Eigen::Index nfft) {
  return kSpeedOfLight * (s.sampling_rate / nfft) / (2.0 * std::abs(s.slope()));
}

}  // namespace

TEST(Sinr, Examples) {
  const CVector s = oracle::random_vector(20, 1);
  EXPECT_EQ(sinr_db(s, s, SinrMode::kPost), std::numeric_limits<double>::infinity());

  CVector err = oracle::random_vector(20, 2);
  err *= 0.1 * s.norm() / err.norm();
  EXPECT_NEAR(sinr_db(s, s - err, SinrMode::kPost), 20.0, 1e-12);

  CVector corruption = oracle::random_vector(20, 3);
  corruption *= s.norm() / corruption.norm();
  EXPECT_NEAR(sinr_db(s, corruption, SinrMode::kPre), 0.0, 1e-12);

  EXPECT_THROW(sinr_db(CVector::Zero(20), s, SinrMode::kPost), std::invalid_argument);
  EXPECT_THROW(sinr_db(s, CVector::Zero(3), SinrMode::kPost), std::invalid_argument);
}

TEST(Sinr, PostModeIsNegativeRelativeErrorInDecibels) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CVector s = oracle::random_vector(33, 10 + seed);
    const CVector est = s + (0.01 + 0.1 * seed) * oracle::random_vector(33, 50 + seed);
    double num = 0.0, den = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      num += std::norm(s[k] - est[k]);
      den += std::norm(s[k]);
    }
    const double rel = std::sqrt(num / den);
    EXPECT_NEAR(sinr_db(s, est, SinrMode::kPost), -20.0 * std::log10(rel), 1e-10);
  }
}

TEST(CorrCoeff, Examples) {
  const CVector s = oracle::random_vector(16, 4);
  EXPECT_NEAR(std::abs(corr_coeff(s, s) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(corr_coeff(s, 2.0 * s) - 1.0), 0.0, 1e-15);
  const double phi = 0.9;
  const Complex rotated = corr_coeff(s, std::polar(1.0, phi) * s);
  EXPECT_NEAR(std::abs(rotated - std::polar(1.0, -phi)), 0.0, 1e-14);
  EXPECT_THROW(corr_coeff(s, CVector::Zero(16)), std::invalid_argument);
  EXPECT_THROW(corr_coeff(CVector::Zero(16), s), std::invalid_argument);
}

TEST(CorrCoeff, ModulusNeverExceedsOne) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 17);
    const CVector a = oracle::random_vector(n, seed);
    const CVector b = seed % 3 == 0 ? CVector(std::polar(3.0, 0.2) * a)
                                    : oracle::random_vector(n, 1000 + seed);
    EXPECT_LE(std::abs(corr_coeff(a, b)), 1.0 + 1e-15);
  }
}

TEST(BeatSpectrum, MatchesDirectSum) {
  const CVector x = oracle::random_vector(24, 6);
  const CVector got = beat_spectrum(x, 64);
  EXPECT_LT((got - oracle::dft_plus(x, 64)).norm(), 1e-12 * got.norm());

  CVector windowed = x;
  for (Eigen::Index k = 0; k < 24; ++k) {
    windowed[k] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / 23.0);
  }
  const CVector hann = beat_spectrum(x, 64, Window::kHann);
  EXPECT_LT((hann - oracle::dft_plus(windowed, 64)).norm(), 1e-12 * hann.norm());
  EXPECT_THROW(beat_spectrum(x, 16), std::invalid_argument);
}

TEST(BeatSpectrum, Parseval) {
  for (Eigen::Index nfft : {128, 256, 1000}) {
    const CVector x = oracle::random_vector(100, static_cast<std::uint64_t>(nfft));
    const double time_power = x.squaredNorm();
    const double freq_power = beat_spectrum(x, nfft).squaredNorm();
    EXPECT_NEAR(freq_power / (time_power * nfft), 1.0, 1e-9);
  }
}

TEST(DefaultNfft, NextPowerOfTwo) {
  EXPECT_EQ(default_nfft(1), 4);
  EXPECT_EQ(default_nfft(1200), 8192);
  EXPECT_EQ(default_nfft(4800), 32768);
}

TEST(RangeProfile, SingleTargetPeak) {
  FmcwScenario s = table_one();
  s.targets = {{2000.0, 1.0, 0.0}};
  const ComplexSignal x = synth_beat_signal(s);
  const Eigen::Index nfft = default_nfft(x.size());
  const auto bins = range_profile(x, s.slope(), nfft);
  const auto peak = std::max_element(bins.begin(), bins.end(), [](auto& a, auto& b) {
    return a.magnitude_db < b.magnitude_db;
  });
  EXPECT_LE(std::abs(peak->range_m - 2000.0), range_bin_width(s, nfft));
  for (std::size_t k = 1; k < bins.size(); ++k) {
    EXPECT_GE(bins[k].range_m, 0.0);
    EXPECT_GT(bins[k].range_m, bins[k - 1].range_m);
  }
}

TEST(RangeProfile, DownSweepStillMapsToPositiveRange) {
  FmcwScenario s = table_one();
  s.sweep_direction = SweepDirection::kDown;
  s.targets = {{3500.0, 1.0, 0.0}};
  const ComplexSignal x = synth_beat_signal(s);
  const Eigen::Index nfft = default_nfft(x.size());
  const auto bins = range_profile(x, s.slope(), nfft);
  const auto peak = std::max_element(bins.begin(), bins.end(), [](auto& a, auto& b) {
    return a.magnitude_db < b.magnitude_db;
  });
  EXPECT_LE(std::abs(peak->range_m - 3500.0), range_bin_width(s, nfft));
}

TEST(RangeProfile, ZeroSignalSitsOnTheFloor) {
  const ComplexSignal x(CVector::Zero(64), 12e6);
  for (const auto& b : range_profile(x, 1e11, 256)) EXPECT_EQ(b.magnitude_db, kMagnitudeFloorDb);
  EXPECT_THROW(range_profile(x, 1e11, 32), std::invalid_argument);
  EXPECT_THROW(range_profile(x, 0.0, 256), std::invalid_argument);
}

TEST(RangeProfile, ThreeTargetsGiveThreeLocalMaxima) {
  FmcwScenario s = table_one();
  s.targets = {{2000.0, 1.0, 0.0}, {3500.0, 0.3, 0.0}, {5000.0, 0.8, 0.0}};
  const ComplexSignal x = synth_beat_signal(s);
  const Eigen::Index nfft = default_nfft(x.size());
  const auto bins = range_profile(x, s.slope(), nfft, Window::kHann);
  const double width = range_bin_width(s, nfft);
  for (double r : {2000.0, 3500.0, 5000.0}) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      if (std::abs(bins[k].range_m - r) <= 3 * width &&
          (best == 0 || bins[k].magnitude_db > bins[best].magnitude_db)) {
        best = k;
      }
    }
    ASSERT_GT(best, 0u);
    EXPECT_LE(std::abs(bins[best].range_m - r), width);
    EXPECT_GT(bins[best].magnitude_db, bins[best - 1].magnitude_db);
    EXPECT_GT(bins[best].magnitude_db, bins[best + 1].magnitude_db);
  }
}
