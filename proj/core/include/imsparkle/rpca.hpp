#pragma once

#include <optional>
#include <vector>

#include "imsparkle/hankel.hpp"
#include "imsparkle/types.hpp"

namespace imsparkle {

// Classic RPCA on the lifted measurement: Y = X + T with X low rank and T
// sparse, solved by singular value thresholding inside an ALM loop.
struct RpcaParams {
  std::optional<double> sparsity_weight;  // 1 / sqrt(max(m, n)) when unset
  double penalty = 0.05;
  double tolerance = 1e-6;
  int max_iters = 500;

  void validate() const;
};

struct RpcaResult {
  CVector signal;        // unlift_pick(X)
  CVector interference;  // unlift_pick(T)
  int iterations = 0;
  std::vector<double> residual_trace;  // |Y - X - T|_F / |Y|_F per iteration
  bool converged = false;
  double wall_time = 0.0;
};

// U S_lambda(Sigma) V^H.
CMatrix svt(const CMatrix& m, double lambda);

// Entrywise complex soft threshold.
CMatrix soft_threshold(const CMatrix& m, double lambda);

RpcaResult rpca_solve(const CVector& y, const HankelShape& shape, const RpcaParams& params);
RpcaResult rpca_solve(const ComplexSignal& y, const HankelShape& shape, const RpcaParams& params);

}  // namespace imsparkle
