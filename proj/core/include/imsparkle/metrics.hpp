#pragma once

#include <vector>

#include "imsparkle/types.hpp"

namespace imsparkle {

enum class SinrMode {
  kPre,   // second argument is the corruption i + n
  kPost,  // second argument is the estimate s_hat
};

// 20 log10(|s| / |corruption|), or with the error s - s_hat in post mode.
// Returns +inf when the denominator vanishes.
double sinr_db(const CVector& reference, const CVector& other, SinrMode mode);

// s_hat^H s / (|s| |s_hat|).
Complex corr_coeff(const CVector& reference, const CVector& estimate);

enum class Window { kRectangular, kHann };

struct RangeBin {
  double range_m = 0.0;
  double magnitude_db = 0.0;
};

inline constexpr double kMagnitudeFloorDb = -300.0;

// Next power of two >= 4 * length.
Eigen::Index default_nfft(Eigen::Index length);

// Zero-padded DFT magnitude of the beat signal on the range axis
// r = c f / (2 K_r), nonnegative ranges only, sorted by range. The transform
// kernel is e^{+j 2 pi f t} so that a target tone exp(-j 2 pi f_b t) lands
// at f = f_b.
std::vector<RangeBin> range_profile(const ComplexSignal& x, double slope, Eigen::Index nfft,
                                    Window window = Window::kRectangular);

// Unnormalized spectrum sum_n x[n] w[n] e^{+j 2 pi k n / nfft}, k = 0..nfft-1.
CVector beat_spectrum(const CVector& x, Eigen::Index nfft, Window window = Window::kRectangular);

}  // namespace imsparkle
