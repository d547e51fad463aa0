#include "imsparkle/sparkle.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "imsparkle/linalg.hpp"

namespace imsparkle {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

// Hermitian positive definite solve of X * G = B for X, i.e. B * G^{-1}.
CMatrix solve_right_hpd(const CMatrix& b, const CMatrix& g) {
  return g.llt().solve(b.adjoint()).adjoint();
}

// Entries of left * right^H - Q / mu on the first column and last row, i.e.
// unlift_pick of that matrix without forming it.
CVector pick_model(const SolverState& s) {
  const Eigen::Index m = s.left.rows();
  const Eigen::Index n = s.right.rows();
  const double inv_mu = 1.0 / s.model_penalty;
  CVector out(m + n - 1);
  out.head(m) = s.left * s.right.row(0).adjoint() - inv_mu * s.model_multiplier.col(0);
  if (n > 1) {
    out.tail(n - 1) = s.right.bottomRows(n - 1).conjugate() * s.left.row(m - 1).transpose() -
                      inv_mu * s.model_multiplier.row(m - 1).tail(n - 1).transpose();
  }
  return out;
}

}  // namespace

void SolverParams::validate() const {
  require(sparsity_weight > 0.0, "SolverParams: sparsity weight (tau) must be positive");
  require(data_penalty > 0.0, "SolverParams: data penalty (beta0) must be positive");
  require(model_penalty > 0.0, "SolverParams: model penalty (mu0) must be positive");
  require(data_penalty_growth >= 1.0, "SolverParams: k_beta must be >= 1");
  require(model_penalty_growth >= 1.0, "SolverParams: k_mu must be >= 1");
  require(growth_interval >= 1, "SolverParams: growth interval L must be >= 1");
  require(tolerance > 0.0, "SolverParams: tolerance (delta) must be positive");
  require(rank >= 1, "SolverParams: rank must be >= 1");
  require(max_iters >= 1, "SolverParams: max_iters must be >= 1");
}

HankelShape SolverParams::shape_for(Eigen::Index length) const {
  if (!shape) return default_shape(length);
  if (shape->length() != length) {
    throw std::invalid_argument("SolverParams: Hankel shape does not match the signal length");
  }
  return *shape;
}

std::vector<double> SolverResult::rel_error_trace() const {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& r : trace) out.push_back(r.rel_error);
  return out;
}

Complex soft_threshold(Complex z, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
  const double mag = std::abs(z);
  if (mag <= lambda) return {0.0, 0.0};
  return z * ((mag - lambda) / mag);
}

CVector soft_threshold(const CVector& z, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
  CVector out(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) out[k] = soft_threshold(z[k], lambda);
  return out;
}

CVector update_signal(const SolverState& s, const CVector& y, UnliftMode mode) {
  const double beta = s.data_penalty;
  const double mu = s.model_penalty;
  const CVector data_term = beta * (y - s.interference) + s.data_multiplier;
  if (mode == UnliftMode::kPick) {
    return (data_term + mu * pick_model(s)) / (mu + beta);
  }
  // Normal equations (beta I + mu H^* H) x = beta a + mu H^*(B); H^* H is
  // diagonal with the anti-diagonal multiplicities.
  const CMatrix model = s.left * s.right.adjoint() - s.model_multiplier / mu;
  const Eigen::VectorXd w = s.shape().multiplicities();
  CVector out = data_term + mu * adjoint(model);
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] /= beta + mu * w[k];
  return out;
}

CVector update_interference(const SolverState& s, const CVector& y, double sparsity_weight) {
  const double beta = s.data_penalty;
  return soft_threshold(y - s.signal + s.data_multiplier / beta, sparsity_weight / beta);
}

CMatrix model_target(const SolverState& s) {
  const HankelShape shape = s.shape();
  CMatrix target = s.model_multiplier / s.model_penalty;
  for (Eigen::Index q = 0; q < shape.cols(); ++q) {
    target.col(q) += s.signal.segment(q, shape.rows());
  }
  return target;
}

CMatrix update_left_factor(const CMatrix& target, const CMatrix& right, double mu) {
  const Eigen::Index r = right.cols();
  CMatrix gram = CMatrix::Identity(r, r);
  gram.noalias() += mu * (right.adjoint() * right);
  CMatrix projected(target.rows(), r);
  projected.noalias() = target * right;
  projected *= mu;
  return solve_right_hpd(projected, gram);
}

CMatrix update_right_factor(const CMatrix& target, const CMatrix& left, double mu) {
  const Eigen::Index r = left.cols();
  CMatrix gram = CMatrix::Identity(r, r);
  gram.noalias() += mu * (left.adjoint() * left);
  CMatrix projected(target.cols(), r);
  projected.noalias() = target.adjoint() * left;
  projected *= mu;
  return solve_right_hpd(projected, gram);
}

CMatrix update_left_factor(const SolverState& s) {
  return update_left_factor(model_target(s), s.right, s.model_penalty);
}

CMatrix update_right_factor(const SolverState& s) {
  return update_right_factor(model_target(s), s.left, s.model_penalty);
}

MultiplierUpdate update_multipliers(const SolverState& s, const CVector& y) {
  MultiplierUpdate out;
  out.data = s.data_multiplier + s.data_penalty * (y - s.signal - s.interference);
  out.model = s.model_multiplier;
  out.model.noalias() -= s.model_penalty * (s.left * s.right.adjoint());
  const Eigen::Index m = out.model.rows();
  for (Eigen::Index q = 0; q < out.model.cols(); ++q) {
    out.model.col(q) += s.model_penalty * s.signal.segment(q, m);
  }
  return out;
}

double augmented_lagrangian(const SolverState& s, const CVector& y, double sparsity_weight) {
  const double beta = s.data_penalty;
  const double mu = s.model_penalty;
  double value = 0.5 * (s.left.squaredNorm() + s.right.squaredNorm());
  value += sparsity_weight * s.interference.cwiseAbs().sum();
  value += 0.5 * beta * (y - s.signal - s.interference + s.data_multiplier / beta).squaredNorm();
  const CMatrix gap = lift(s.signal, s.shape()) - s.left * s.right.adjoint() +
                      s.model_multiplier / mu;
  value += 0.5 * mu * gap.squaredNorm();
  return value;
}

SolverState initial_state(const CVector& y, const SolverParams& params) {
  params.validate();
  const HankelShape shape = params.shape_for(y.size());
  const Eigen::Index m = shape.rows();
  const Eigen::Index n = shape.cols();
  const Eigen::Index r = params.rank;

  SolverState s;
  s.signal = CVector::Zero(y.size());
  s.interference = CVector::Zero(y.size());
  s.data_multiplier = CVector::Zero(y.size());
  s.model_multiplier = CMatrix::Zero(m, n);
  s.data_penalty = params.data_penalty;
  s.model_penalty = params.model_penalty;
  s.iteration = 0;

  if (params.init == FactorInit::kTruncatedSvd) {
    const ThinSvd svd = thin_svd(lift(y, shape));
    s.left = CMatrix::Zero(m, r);
    s.right = CMatrix::Zero(n, r);
    const Eigen::Index keep = std::min<Eigen::Index>(r, svd.s.size());
    for (Eigen::Index k = 0; k < keep; ++k) {
      const double root = std::sqrt(svd.s[k]);
      s.left.col(k) = svd.u.col(k) * root;
      s.right.col(k) = svd.v.col(k) * root;
    }
    return s;
  }

  const double scale = std::sqrt(y.norm() / static_cast<double>(y.size() * r));
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  auto draw = [&](Eigen::Index rows) {
    CMatrix f(rows, r);
    for (Eigen::Index c = 0; c < r; ++c) {
      for (Eigen::Index k = 0; k < rows; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        f(k, c) = scale * Complex(re, im);
      }
    }
    return f;
  };
  s.left = draw(m);
  s.right = draw(n);
  return s;
}

SolverResult solve(const CVector& y, const SolverParams& params) {
  params.validate();
  if (!y.allFinite()) throw std::invalid_argument("solve: non-finite input samples");
  const auto start = std::chrono::steady_clock::now();

  SolverResult result;
  const double y_norm = y.norm();
  if (y_norm == 0.0) {
    result.signal = CVector::Zero(y.size());
    result.interference = CVector::Zero(y.size());
    result.converged = true;
    return result;
  }

  SolverState s = initial_state(y, params);
  const double stop = params.tolerance * y_norm;
  double residual = (y - s.signal - s.interference).norm();

  while (residual > stop && s.iteration < params.max_iters) {
    ++s.iteration;
    if (s.iteration % params.growth_interval == 0) s.data_penalty *= params.data_penalty_growth;

    s.signal = update_signal(s, y, params.unlift_mode);
    s.interference = update_interference(s, y, params.sparsity_weight);
    {
      const CMatrix target = model_target(s);
      s.left = update_left_factor(target, s.right, s.model_penalty);
      s.right = update_right_factor(target, s.left, s.model_penalty);
    }
    MultiplierUpdate dual = update_multipliers(s, y);
    s.data_multiplier = std::move(dual.data);
    s.model_multiplier = std::move(dual.model);

    residual = (y - s.signal - s.interference).norm();
    result.trace.push_back({s.iteration, residual / y_norm, s.data_penalty, s.model_penalty});
    s.model_penalty *= params.model_penalty_growth;
  }

  result.signal = std::move(s.signal);
  result.interference = std::move(s.interference);
  result.iterations = s.iteration;
  result.converged = residual <= stop;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SolverResult solve(const ComplexSignal& y, const SolverParams& params) {
  y.validate();
  return solve(y.samples, params);
}

SolverParams recommended_params(double snr_db, double lifted_spectral_norm, Eigen::Index rows,
                                Eigen::Index cols, double l0, double l1, double l2) {
  if (!(l0 > 0.0) || !(l1 > 0.0) || !(l2 > 0.0)) {
    throw std::invalid_argument("recommended_params: multipliers must be positive");
  }
  if (!(lifted_spectral_norm > 0.0)) {
    throw std::invalid_argument("recommended_params: spectral norm must be positive");
  }
  if (!std::isfinite(snr_db)) throw std::invalid_argument("recommended_params: SNR must be finite");
  if (rows < 1 || cols < 1) throw std::invalid_argument("recommended_params: bad dimensions");
  SolverParams p;
  p.data_penalty = l0 / std::pow(10.0, snr_db / 10.0);
  p.sparsity_weight = l1 / std::sqrt(static_cast<double>(std::max(rows, cols)));
  p.model_penalty = 100.0 * l2 / lifted_spectral_norm;
  p.shape = HankelShape(rows, cols);
  return p;
}

}  // namespace imsparkle
