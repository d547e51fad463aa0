#include "imsparkle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace imsparkle {

namespace {
// FFTW planning is not reentrant; execution is.
std::mutex fftw_planner_mutex;
}  // namespace

double sinr_db(const CVector& reference, const CVector& other, SinrMode mode) {
  if (reference.size() != other.size()) throw std::invalid_argument("sinr_db: length mismatch");
  const double signal = reference.norm();
  if (signal == 0.0) throw std::invalid_argument("sinr_db: zero reference");
  const double error = mode == SinrMode::kPre ? other.norm() : (reference - other).norm();
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(signal / error);
}

Complex corr_coeff(const CVector& reference, const CVector& estimate) {
  if (reference.size() != estimate.size()) {
    throw std::invalid_argument("corr_coeff: length mismatch");
  }
  const double a = reference.norm();
  const double b = estimate.norm();
  if (a == 0.0 || b == 0.0) throw std::invalid_argument("corr_coeff: zero vector");
  // Eigen's dot conjugates its left operand: estimate^H reference.
  return estimate.dot(reference) / (a * b);
}

Eigen::Index default_nfft(Eigen::Index length) {
  Eigen::Index n = 1;
  while (n < 4 * length) n <<= 1;
  return n;
}

CVector beat_spectrum(const CVector& x, Eigen::Index nfft, Window window) {
  if (nfft < x.size()) throw std::invalid_argument("beat_spectrum: nfft smaller than signal");
  const Eigen::Index n = x.size();
  CVector buffer = CVector::Zero(nfft);
  for (Eigen::Index k = 0; k < n; ++k) {
    double w = 1.0;
    if (window == Window::kHann && n > 1) {
      w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(n - 1)));
    }
    buffer[k] = w * x[k];
  }
  CVector out(nfft);
  auto* in_ptr = reinterpret_cast<fftw_complex*>(buffer.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(nfft), in_ptr, out_ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<RangeBin> range_profile(const ComplexSignal& x, double slope, Eigen::Index nfft,
                                    Window window) {
  x.validate();
  if (nfft < x.size()) throw std::invalid_argument("range_profile: nfft smaller than signal");
  if (slope == 0.0 || !std::isfinite(slope)) {
    throw std::invalid_argument("range_profile: sweep slope must be finite and nonzero");
  }
  const CVector spectrum = beat_spectrum(x.samples, nfft, window);
  std::vector<RangeBin> out;
  out.reserve(static_cast<std::size_t>(nfft / 2 + 1));
  for (Eigen::Index k = 0; k < nfft; ++k) {
    // Signed bin frequency, negative half mapped to [-fs/2, 0).
    const Eigen::Index signed_k = k <= nfft / 2 ? k : k - nfft;
    const double f = static_cast<double>(signed_k) * x.sampling_rate / static_cast<double>(nfft);
    const double r = kSpeedOfLight * f / (2.0 * slope);
    if (r < 0.0 || (r == 0.0 && signed_k != 0)) continue;
    const double mag = std::abs(spectrum[k]);
    const double db = mag > 0.0 ? std::max(20.0 * std::log10(mag), kMagnitudeFloorDb)
                                : kMagnitudeFloorDb;
    out.push_back({r, db});
  }
  std::sort(out.begin(), out.end(),
            [](const RangeBin& a, const RangeBin& b) { return a.range_m < b.range_m; });
  return out;
}

}  // namespace imsparkle
