#pragma once

#include "imsparkle/types.hpp"

namespace imsparkle {

// Economy SVD, m = U diag(s) V^H with s sorted descending.
struct ThinSvd {
  CMatrix u;
  Eigen::VectorXd s;
  CMatrix v;
};

// Backed by LAPACK zgesdd.
ThinSvd thin_svd(const CMatrix& m);

// Largest singular value via power iteration on M^H M. Deterministic.
double spectral_norm(const CMatrix& m, double rel_tol = 1e-12, int max_iters = 1000);

}  // namespace imsparkle
