#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imsparkle/hankel.hpp"
#include "imsparkle/types.hpp"

namespace imsparkle {

// How the signal update maps the m x n model matrix back to a sample vector.
enum class UnliftMode {
  // First column + last row, blended with the data term using unit weights.
  kPick,
  // Exact block minimizer: anti-diagonal averages, weighted by how often each
  // sample appears in the lifted matrix.
  kAverage,
};

enum class FactorInit {
  kRandom,        // seeded complex Gaussian factors
  kTruncatedSvd,  // leading singular pairs of lift(y)
};

struct SolverParams {
  double sparsity_weight = 0.02;     // l1 weight on the interference samples
  double data_penalty = 0.1;         // initial data-consistency penalty
  double model_penalty = 0.02;       // initial Hankel/factor penalty
  double data_penalty_growth = 1.6;  // applied every growth_interval iterations
  double model_penalty_growth = 1.2; // applied every iteration
  int growth_interval = 10;
  double tolerance = 1e-6;           // stop once |y - x - i| <= tolerance |y|
  Eigen::Index rank = 32;            // columns of the left/right factors
  std::optional<HankelShape> shape;  // default_shape(N) when unset
  UnliftMode unlift_mode = UnliftMode::kPick;
  FactorInit init = FactorInit::kRandom;
  int max_iters = 500;
  std::uint64_t seed = 0;

  void validate() const;
  HankelShape shape_for(Eigen::Index length) const;
};

// Iterates of the ADMM loop. The left/right factors satisfy
// lift(signal) ~ left * right^H at convergence.
struct SolverState {
  CVector signal;            // beat-signal estimate x
  CVector interference;      // sparse interference estimate i
  CVector data_multiplier;   // dual variable of y = x + i
  CMatrix left;              // m x rank
  CMatrix right;             // n x rank
  CMatrix model_multiplier;  // m x n dual variable of lift(x) = left * right^H
  double data_penalty = 0.0;
  double model_penalty = 0.0;
  int iteration = 0;

  HankelShape shape() const {
    return HankelShape(model_multiplier.rows(), model_multiplier.cols());
  }
};

struct IterationRecord {
  int iteration = 0;
  double rel_error = 0.0;
  double data_penalty = 0.0;
  double model_penalty = 0.0;
};

struct SolverResult {
  CVector signal;
  CVector interference;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  bool converged = false;
  double wall_time = 0.0;  // seconds

  std::vector<double> rel_error_trace() const;
};

// e^{j arg z} max(|z| - lambda, 0); zero maps to zero.
Complex soft_threshold(Complex z, double lambda);
CVector soft_threshold(const CVector& z, double lambda);

// Block updates of one sweep. Each reads the most recent iterates held in
// `state` and returns the new value of its block without modifying state.
CVector update_signal(const SolverState& state, const CVector& y, UnliftMode mode);
CVector update_interference(const SolverState& state, const CVector& y, double sparsity_weight);
CMatrix update_left_factor(const SolverState& state);
CMatrix update_right_factor(const SolverState& state);

struct MultiplierUpdate {
  CVector data;
  CMatrix model;
};
MultiplierUpdate update_multipliers(const SolverState& state, const CVector& y);

// Factor updates on a precomputed target lift(x) + Q / mu.
CMatrix update_left_factor(const CMatrix& target, const CMatrix& right, double model_penalty);
CMatrix update_right_factor(const CMatrix& target, const CMatrix& left, double model_penalty);
CMatrix model_target(const SolverState& state);

// Scaled-dual augmented Lagrangian evaluated at `state`.
double augmented_lagrangian(const SolverState& state, const CVector& y, double sparsity_weight);

SolverState initial_state(const CVector& y, const SolverParams& params);

SolverResult solve(const ComplexSignal& y, const SolverParams& params);
SolverResult solve(const CVector& y, const SolverParams& params);

// Hyperparameters from data statistics:
//   data penalty  = l0 / 10^(snr/10)
//   sparsity      = l1 / sqrt(max(m, n))
//   model penalty = 100 l2 / |Y|_2
SolverParams recommended_params(double snr_db, double lifted_spectral_norm, Eigen::Index rows,
                                Eigen::Index cols, double l0 = 1.0, double l1 = 1.0,
                                double l2 = 1.0);

}  // namespace imsparkle
