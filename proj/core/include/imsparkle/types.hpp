#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace imsparkle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kSpeedOfLight = 299792458.0;

// A uniformly sampled complex record (beat signal, interference, noise or
// measurement).
struct ComplexSignal {
  CVector samples;
  double sampling_rate = 1.0;

  ComplexSignal() = default;
  ComplexSignal(CVector s, double rate) : samples(std::move(s)), sampling_rate(rate) {
    validate();
  }

  Eigen::Index size() const { return samples.size(); }

  void validate() const {
    if (samples.size() < 1) {
      throw std::invalid_argument("ComplexSignal: empty signal");
    }
    if (!(sampling_rate > 0.0)) {
      throw std::invalid_argument("ComplexSignal: sampling_rate must be positive");
    }
  }
};

}  // namespace imsparkle
