#include "imsparkle/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

namespace imsparkle {

ThinSvd thin_svd(const CMatrix& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  ThinSvd out;
  if (k == 0) return out;

  CMatrix a = m;  // zgesdd destroys its input
  out.u.resize(rows, k);
  out.s.resize(k);
  CMatrix vh(k, cols);
  auto lc = [](Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); };
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, lc(a.data()), rows,
                                         out.s.data(), lc(out.u.data()), rows, lc(vh.data()), k);
  if (info != 0) {
    throw std::runtime_error("thin_svd: zgesdd failed with info = " + std::to_string(info));
  }
  out.v = vh.adjoint();
  return out;
}

double spectral_norm(const CMatrix& m, double rel_tol, int max_iters) {
  if (m.size() == 0) return 0.0;
  // Fixed, dense start vector so the result does not depend on any RNG.
  CVector v(m.cols());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    v[k] = Complex(1.0 + 0.1 * std::sin(static_cast<double>(k)),
                   0.1 * std::cos(static_cast<double>(k)));
  }
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const CVector mv = m * v;
    const double next = mv.norm();
    if (next == 0.0) return 0.0;
    v = m.adjoint() * mv;
    v.normalize();
    if (std::abs(next - sigma) <= rel_tol * next) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace imsparkle
