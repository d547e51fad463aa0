#include "imsparkle/rpca.hpp"

#include <chrono>
#include <cmath>

#include "imsparkle/linalg.hpp"
#include "imsparkle/sparkle.hpp"

namespace imsparkle {

void RpcaParams::validate() const {
  if (sparsity_weight && !(*sparsity_weight > 0.0)) {
    throw std::invalid_argument("RpcaParams: sparsity weight must be positive");
  }
  if (!(penalty > 0.0)) throw std::invalid_argument("RpcaParams: penalty must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("RpcaParams: tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("RpcaParams: max_iters must be >= 1");
}

CMatrix svt(const CMatrix& m, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("svt: negative threshold");
  if (m.size() == 0) return m;
  const ThinSvd svd = thin_svd(m);
  Eigen::Index keep = 0;
  while (keep < svd.s.size() && svd.s[keep] > lambda) ++keep;
  if (keep == 0) return CMatrix::Zero(m.rows(), m.cols());
  const Eigen::VectorXd shrunk = (svd.s.head(keep).array() - lambda).matrix();
  return svd.u.leftCols(keep) * shrunk.cast<Complex>().asDiagonal() *
         svd.v.leftCols(keep).adjoint();
}

CMatrix soft_threshold(const CMatrix& m, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) out(r, c) = soft_threshold(m(r, c), lambda);
  }
  return out;
}

RpcaResult rpca_solve(const CVector& y, const HankelShape& shape, const RpcaParams& params) {
  params.validate();
  if (!y.allFinite()) throw std::invalid_argument("rpca_solve: non-finite input samples");
  const auto start = std::chrono::steady_clock::now();

  const CMatrix lifted = lift(y, shape);
  const double weight = params.sparsity_weight.value_or(
      1.0 / std::sqrt(static_cast<double>(std::max(shape.rows(), shape.cols()))));
  const double mu = params.penalty;
  const double lifted_norm = lifted.norm();

  CMatrix low_rank = CMatrix::Zero(shape.rows(), shape.cols());
  CMatrix sparse = CMatrix::Zero(shape.rows(), shape.cols());
  CMatrix multiplier = CMatrix::Zero(shape.rows(), shape.cols());

  RpcaResult result;
  if (lifted_norm == 0.0) {
    result.signal = CVector::Zero(y.size());
    result.interference = CVector::Zero(y.size());
    result.converged = true;
    return result;
  }

  while (result.iterations < params.max_iters) {
    ++result.iterations;
    low_rank = svt(lifted - sparse + multiplier / mu, 1.0 / mu);
    sparse = soft_threshold(CMatrix(lifted - low_rank + multiplier / mu), weight / mu);
    const CMatrix gap = lifted - low_rank - sparse;
    multiplier += mu * gap;
    const double rel = gap.norm() / lifted_norm;
    result.residual_trace.push_back(rel);
    if (rel <= params.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.signal = unlift_pick(low_rank);
  result.interference = unlift_pick(sparse);
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RpcaResult rpca_solve(const ComplexSignal& y, const HankelShape& shape, const RpcaParams& params) {
  y.validate();
  return rpca_solve(y.samples, shape, params);
}

}  // namespace imsparkle
